use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{GramForm, HomologyClass, IntMatrix};

/// The node budget of a bounded search ran out before the box was covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct SearchExhausted;

/// Depth-first walk over sign representatives `v ≠ 0` (first nonzero
/// coordinate positive) with `|vᵢ| ≤ bounds[i]` and `vᵀGv = norm`, in
/// ascending lexicographic order.
///
/// The norm is tracked incrementally: fixing coordinate `k` to `x` adds
/// `G_kk·x² + 2x·Σ_{i<k} G_ki·vᵢ`.
struct Walker<'a, F> {
    gram: &'a IntMatrix,
    norm: i128,
    bounds: &'a [i64],
    coords: Vec<i64>,
    // cross[j] = Σ_{i assigned} G_ji · v_i
    cross: Vec<i128>,
    nodes: u64,
    budget: Option<u64>,
    prune: Option<&'a [Option<Schur>]>,
    // Prefixes whose least completion under the pruning form exceeds this are skipped.
    limit: i128,
    visit: F,
}

/// `den · (A − B·D⁻¹·Bᵀ)` for the split of a positive definite Gram into the
/// first `k` coordinates (block `A`) and the rest (block `D`), with
/// `den = det D`. Its value on the fixed prefix is `den` times the least norm
/// of any completion, so a prefix scoring above `den · norm` is dead.
#[derive(Debug, Clone)]
pub(crate) struct Schur {
    scaled: Vec<Vec<i128>>,
    den: i128,
}

impl Schur {
    fn exceeds(&self, prefix: &[i64], norm: i128) -> bool {
        let mut q: i128 = 0;
        for (i, row) in self.scaled.iter().enumerate() {
            if prefix[i] == 0 {
                continue;
            }
            let mut s: i128 = 0;
            for (j, &m) in row.iter().enumerate() {
                s = match m.checked_mul(prefix[j] as i128).and_then(|t| s.checked_add(t)) {
                    Some(v) => v,
                    None => return false,
                };
            }
            q = match s.checked_mul(prefix[i] as i128).and_then(|t| q.checked_add(t)) {
                Some(v) => v,
                None => return false,
            };
        }
        norm.checked_mul(self.den).is_some_and(|limit| q > limit)
    }
}

/// Pruning data for each prefix length `1..n`, where it fits in `i128`.
pub(crate) fn schur_table(gram: &IntMatrix) -> Vec<Option<Schur>> {
    let n = gram.rows();
    let q = |i: usize, j: usize| BigRational::from_integer(BigInt::from(gram[(i, j)]));
    (0..n)
        .map(|k| {
            if k == 0 {
                return None;
            }
            let m = n - k;
            // Solve D·X = Bᵀ by Gauss–Jordan over the rationals.
            let mut aug: Vec<Vec<BigRational>> =
                (0..m).map(|r| (0..m).map(|c| q(k + r, k + c)).chain((0..k).map(|c| q(k + r, c))).collect()).collect();
            let mut det = BigRational::from_integer(BigInt::from(1));
            for col in 0..m {
                let pivot = (col..m).find(|&r| !aug[r][col].is_zero())?;
                if pivot != col {
                    aug.swap(pivot, col);
                    det = -det;
                }
                let p = aug[col][col].clone();
                det *= &p;
                for x in aug[col].iter_mut() {
                    *x /= &p;
                }
                for r in 0..m {
                    if r != col && !aug[r][col].is_zero() {
                        let f = aug[r][col].clone();
                        for c in 0..m + k {
                            let t = &aug[col][c] * &f;
                            aug[r][c] -= t;
                        }
                    }
                }
            }
            let scaled = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| {
                            let bdb: BigRational = (0..m).map(|r| q(i, k + r) * &aug[r][m + j]).sum();
                            ((q(i, j) - bdb) * &det).to_integer().to_i128()
                        })
                        .collect::<Option<Vec<_>>>()
                })
                .collect::<Option<Vec<_>>>()?;
            Some(Schur { scaled, den: det.to_integer().to_i128()? })
        })
        .collect()
}

impl<F: FnMut(&[i64]) -> ControlFlow<()>> Walker<'_, F> {
    fn walk(&mut self, k: usize, partial: i128, leading_zero: bool) -> Result<ControlFlow<()>, SearchExhausted> {
        let n = self.coords.len();
        if let Some(Some(s)) = self.prune.and_then(|p| p.get(k)) {
            if s.exceeds(&self.coords[..k], self.limit) {
                return Ok(ControlFlow::Continue(()));
            }
        }
        if k == n {
            if !leading_zero && partial == self.norm {
                return Ok((self.visit)(&self.coords));
            }
            return Ok(ControlFlow::Continue(()));
        }
        let b = self.bounds[k];
        let lo = if leading_zero { 0 } else { -b };
        for x in lo..=b {
            self.nodes += 1;
            if self.budget.is_some_and(|cap| self.nodes > cap) {
                return Err(SearchExhausted);
            }
            let xi = x as i128;
            let gkk = self.gram[(k, k)] as i128;
            let next = partial + gkk * xi * xi + 2 * xi * self.cross[k];
            self.coords[k] = x;
            if x != 0 {
                for j in k + 1..n {
                    self.cross[j] += self.gram[(j, k)] as i128 * xi;
                }
            }
            let flow = self.walk(k + 1, next, leading_zero && x == 0);
            if x != 0 {
                for j in k + 1..n {
                    self.cross[j] -= self.gram[(j, k)] as i128 * xi;
                }
            }
            self.coords[k] = 0;
            if let ControlFlow::Break(()) = flow? {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

fn walk<F>(
    gram: &IntMatrix,
    norm: i64,
    bounds: &[i64],
    budget: Option<u64>,
    prune: Option<(&[Option<Schur>], i128)>,
    visit: F,
) -> Result<(), SearchExhausted>
where
    F: FnMut(&[i64]) -> ControlFlow<()>,
{
    let n = gram.rows();
    assert_eq!(bounds.len(), n);
    if n == 0 {
        return Ok(());
    }
    let mut w = Walker {
        gram,
        norm: norm as i128,
        bounds,
        coords: vec![0; n],
        cross: vec![0; n],
        nodes: 0,
        budget,
        prune: prune.map(|p| p.0),
        limit: prune.map_or(0, |p| p.1),
        visit,
    };
    w.walk(0, 0, true).map(|_| ())
}

/// All nonzero `v` with coordinates in `[−coord_bound, coord_bound]` and
/// `v·v = norm`, one per antipodal pair (first nonzero coordinate positive),
/// sorted lexicographically.
pub fn enumerate_vectors(form: &GramForm, norm: i64, coord_bound: u32) -> Vec<HomologyClass> {
    let bounds = vec![coord_bound as i64; form.rank()];
    let mut out = Vec::new();
    walk(form.entries(), norm, &bounds, None, None, |v| {
        out.push(HomologyClass::new(v.to_vec(), form.basis().clone()));
        ControlFlow::Continue(())
    })
    .expect("unbudgeted walk cannot exhaust");
    debug_assert!(out.iter().all(|v| form.norm(&v.coords).ok() == Some(norm)));
    out
}

/// First vector (lexicographically) of the given norm accepted by `accept`.
pub(crate) fn find_first<P>(
    gram: &IntMatrix,
    norm: i64,
    bounds: &[i64],
    budget: Option<u64>,
    accept: P,
) -> Result<Option<Vec<i64>>, SearchExhausted>
where
    P: FnMut(&[i64]) -> bool,
{
    first_accepted(gram, norm, bounds, budget, None, accept)
}

/// [`find_first`] for a positive definite `gram`: prefixes whose least
/// completion already exceeds `norm` are skipped. Same result and order.
pub(crate) fn find_first_definite<P>(
    gram: &IntMatrix,
    norm: i64,
    bounds: &[i64],
    budget: Option<u64>,
    accept: P,
) -> Result<Option<Vec<i64>>, SearchExhausted>
where
    P: FnMut(&[i64]) -> bool,
{
    let table = schur_table(gram);
    first_accepted(gram, norm, bounds, budget, Some((&table, norm as i128)), accept)
}

/// [`find_first`] restricted to the ellipsoid `{v : vᵀMv ≤ limit}` of a
/// positive definite `majorant`, whose pruning data is `table`.
pub(crate) fn find_first_in_ellipsoid<P>(
    gram: &IntMatrix,
    norm: i64,
    table: &[Option<Schur>],
    limit: i128,
    bounds: &[i64],
    budget: Option<u64>,
    accept: P,
) -> Result<Option<Vec<i64>>, SearchExhausted>
where
    P: FnMut(&[i64]) -> bool,
{
    first_accepted(gram, norm, bounds, budget, Some((table, limit)), accept)
}

fn first_accepted<P>(
    gram: &IntMatrix,
    norm: i64,
    bounds: &[i64],
    budget: Option<u64>,
    prune: Option<(&[Option<Schur>], i128)>,
    mut accept: P,
) -> Result<Option<Vec<i64>>, SearchExhausted>
where
    P: FnMut(&[i64]) -> bool,
{
    let mut found = None;
    walk(gram, norm, bounds, budget, prune, |v| {
        if accept(v) {
            found = Some(v.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: every vector in the box, normalized by sign.
    fn brute(form: &GramForm, norm: i64, bound: i64) -> Vec<Vec<i64>> {
        let n = form.rank();
        let side = (2 * bound + 1) as usize;
        let mut out = Vec::new();
        for idx in 0..side.pow(n as u32) {
            let mut rest = idx;
            let v: Vec<i64> = (0..n)
                .map(|_| {
                    let d = (rest % side) as i64 - bound;
                    rest /= side;
                    d
                })
                .collect();
            let first = v.iter().find(|&&x| x != 0);
            if first.is_some_and(|&x| x > 0) && form.norm(&v).unwrap() == norm {
                out.push(v);
            }
        }
        out.sort();
        out
    }

    fn coords(list: Vec<HomologyClass>) -> Vec<Vec<i64>> {
        list.into_iter().map(|c| c.coords).collect()
    }

    #[test]
    fn spec_examples() {
        let d = GramForm::diagonal(&[1, -1]).unwrap();
        assert_eq!(coords(enumerate_vectors(&d, 1, 1)), vec![vec![1, 0]]);
        let one = GramForm::diagonal(&[1]).unwrap();
        assert!(enumerate_vectors(&one, 2, 3).is_empty());
        let h = GramForm::hyperbolic();
        assert_eq!(coords(enumerate_vectors(&h, 0, 1)), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn agrees_with_box_oracle() {
        let forms = [
            GramForm::from_rows(vec![vec![2, 1, 0], vec![1, -1, 3], vec![0, 3, 1]]).unwrap(),
            GramForm::from_rows(vec![vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 2]]).unwrap(),
            GramForm::diagonal(&[1, 1, -1]).unwrap(),
        ];
        for f in &forms {
            for norm in -3..=3 {
                assert_eq!(coords(enumerate_vectors(f, norm, 2)), brute(f, norm, 2), "{f:?} norm {norm}");
            }
        }
    }

    #[test]
    fn find_first_is_lexicographic_minimum() {
        let f = GramForm::diagonal(&[1, 1, -1]).unwrap();
        let all = brute(&f, 1, 2);
        let first = find_first(f.entries(), 1, &[2, 2, 2], None, |_| true).unwrap();
        assert_eq!(first.as_ref(), all.first());
    }

    #[test]
    fn definite_pruning_keeps_every_vector() {
        let f = GramForm::from_rows(vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 3]]).unwrap();
        for norm in 1..=6 {
            let mut pruned = Vec::new();
            find_first_definite(f.entries(), norm, &[3; 3], None, |v| {
                pruned.push(v.to_vec());
                false
            })
            .unwrap();
            assert_eq!(pruned, brute(&f, norm, 3), "norm {norm}");
        }
    }

    #[test]
    fn definite_pruning_cuts_nodes() {
        let g = IntMatrix::diagonal(&[1; 6]);
        let (mut plain, mut pruned) = (0, 0);
        find_first(&g, 1, &[3; 6], None, |_| {
            plain += 1;
            false
        })
        .unwrap();
        find_first_definite(&g, 1, &[3; 6], None, |_| {
            pruned += 1;
            false
        })
        .unwrap();
        assert_eq!(plain, pruned);
        assert_eq!(find_first_definite(&g, 1, &[3; 6], Some(2_000), |_| false), Ok(None));
        assert_eq!(find_first(&g, 1, &[3; 6], Some(2_000), |_| false), Err(SearchExhausted));
    }

    #[test]
    fn budget_is_enforced() {
        let f = GramForm::diagonal(&[2, 2, 2, 2]).unwrap();
        assert_eq!(find_first(f.entries(), 1, &[3; 4], Some(50), |_| true), Err(SearchExhausted));
    }
}
