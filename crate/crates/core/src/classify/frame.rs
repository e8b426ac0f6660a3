use num_integer::Integer;

use crate::lattice::{
    find_first, find_first_definite, find_first_in_ellipsoid, kernel_basis, lll_reduce, majorant_matrix, reduce_by_majorant,
    reduce_indefinite, schur_table, GramForm, IntMatrix, LatticeError, SearchExhausted,
};

use super::{ClassifyError, SearchConfig};

/// A sublattice of the input lattice, carried as the columns of `vectors`
/// (original coordinates) together with its Gram matrix.
#[derive(Debug, Clone)]
pub(crate) struct Frame {
    pub vectors: IntMatrix,
    pub gram: IntMatrix,
}

impl Frame {
    pub fn whole(form: &GramForm) -> Self {
        Frame { vectors: IntMatrix::identity(form.rank()), gram: form.entries().clone() }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn form(&self) -> Result<GramForm, LatticeError> {
        GramForm::new(self.gram.clone())
    }

    fn apply(&mut self, t: &IntMatrix) -> Result<(), LatticeError> {
        self.gram = t.congruence(&self.gram)?;
        self.vectors = self.vectors.mul(t)?;
        Ok(())
    }

    /// Majorant reduction, falling back to the greedy pass alone if the
    /// former overflows.
    pub fn reduce_indefinite(&mut self) -> Result<(), LatticeError> {
        let t = match reduce_by_majorant(&self.gram) {
            Ok(t) => t,
            Err(LatticeError::Overflow) => reduce_indefinite(&self.gram)?,
            Err(e) => return Err(e),
        };
        self.apply(&t)
    }

    /// LLL on `sign · gram`, which must be positive definite.
    pub fn reduce_definite(&mut self, sign: i64) -> Result<(), LatticeError> {
        let t = lll_reduce(&self.gram.scale(sign)?)?;
        self.apply(&t)
    }

    /// Reduces with the method suited to the frame's signature.
    pub fn reduce(&mut self) -> Result<(), LatticeError> {
        if self.rank() < 2 {
            return Ok(());
        }
        let inv = self.form()?.invariants();
        match (inv.signature_pos, inv.signature_neg) {
            (_, 0) => self.reduce_definite(1),
            (0, _) => self.reduce_definite(-1),
            _ => self.reduce_indefinite(),
        }
    }

    /// Frame-local coordinates to original coordinates.
    pub fn lift(&self, local: &[i64]) -> Result<Vec<i64>, LatticeError> {
        self.vectors.mul_vec(local)
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> Result<i64, LatticeError> {
        let gb = self.gram.mul_vec(b)?;
        a.iter().zip(&gb).try_fold(0i64, |acc, (&x, &y)| crate::lattice::fma(acc, x, y))
    }

    /// Splits off the span of `taken` (frame-local vectors with unimodular
    /// Gram) and returns their lifts plus the orthogonal complement.
    ///
    /// The complement is the kernel of `x ↦ (vᵢ·x)ᵢ`; because the Gram of
    /// the taken vectors is unimodular, taken ∪ kernel basis is a basis.
    pub fn split(&self, taken: &[Vec<i64>]) -> Result<(Vec<Vec<i64>>, Frame), LatticeError> {
        let s = self.rank();
        let rows: Vec<Vec<i64>> = taken.iter().map(|v| self.gram.mul_vec(v)).collect::<Result<_, _>>()?;
        let constraints = IntMatrix::from_rows(rows)?;
        let lifted = taken.iter().map(|v| self.lift(v)).collect::<Result<Vec<_>, _>>()?;
        if taken.len() == s {
            return Ok((lifted, Frame { vectors: IntMatrix::zeros(self.vectors.rows(), 0), gram: IntMatrix::zeros(0, 0) }));
        }
        let (kernel, _) = kernel_basis(&constraints)?;
        let complement = Frame { vectors: self.vectors.mul(&kernel)?, gram: kernel.congruence(&self.gram)? };
        Ok((lifted, complement))
    }

    /// First vector of norm `norm` accepted by `accept`: basis vectors in
    /// order; for `norm = 0` isotropic vectors of coordinate planes, then of
    /// growing majorant ellipsoids; then lexicographically within the
    /// escalating coordinate box `start, 2·start, …` up to the ceiling.
    pub fn search<P>(&self, norm: i64, config: &SearchConfig, mut accept: P) -> Result<Option<Vec<i64>>, ClassifyError>
    where
        P: FnMut(&[i64]) -> bool,
    {
        for i in 0..self.rank() {
            if self.gram[(i, i)] == norm {
                let mut e = vec![0; self.rank()];
                e[i] = 1;
                if accept(&e) {
                    return Ok(Some(e));
                }
            }
        }
        if norm == 0 {
            if let Some(v) = self.isotropic_in_planes(&mut accept) {
                return Ok(Some(v));
            }
            if let Some(v) = self.isotropic_in_ellipsoids(config, &mut accept) {
                return Ok(Some(v));
            }
        }
        let mut bound = config.start_bound.max(1).min(config.ceiling.max(1));
        loop {
            let bounds = vec![bound as i64; self.rank()];
            match find_first(&self.gram, norm, &bounds, Some(config.node_budget), &mut accept) {
                Ok(Some(v)) => return Ok(Some(v)),
                Ok(None) => {}
                Err(SearchExhausted) => return Ok(None),
            }
            if bound >= config.ceiling {
                return Ok(None);
            }
            bound = (bound * 2).min(config.ceiling);
        }
    }

    /// Primitive isotropic vectors in the planes spanned by two basis vectors
    /// `eᵢ, eⱼ` (`i < j`, in order): `a·s² + 2b·st + c·t² = 0` has a rational
    /// root exactly when `b² − ac` is a square.
    fn isotropic_in_planes<P>(&self, accept: &mut P) -> Option<Vec<i64>>
    where
        P: FnMut(&[i64]) -> bool,
    {
        let n = self.rank();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b, c) = (self.gram[(i, i)] as i128, self.gram[(i, j)] as i128, self.gram[(j, j)] as i128);
                if a == 0 {
                    continue;
                }
                let disc = b * b - a * c;
                if disc < 0 {
                    continue;
                }
                let r = isqrt128(disc);
                if r * r != disc {
                    continue;
                }
                for root in [-b + r, -b - r] {
                    // s/t = root/a
                    let g = root.gcd(&a);
                    let (s, t) = (root / g, a / g);
                    let (Ok(s), Ok(t)) = (i64::try_from(s), i64::try_from(t)) else { continue };
                    let mut v = vec![0; n];
                    v[i] = s;
                    v[j] = t;
                    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    if accept(&v) {
                        return Some(v);
                    }
                }
            }
        }
        None
    }

    /// Isotropic vectors in the ceiling box with `vᵀMv ≤ R` for a positive
    /// definite majorant `M` of the Gram, doubling `R` from the least
    /// diagonal entry of `M`. Each ellipsoid is searched lexicographically.
    fn isotropic_in_ellipsoids<P>(&self, config: &SearchConfig, accept: &mut P) -> Option<Vec<i64>>
    where
        P: FnMut(&[i64]) -> bool,
    {
        let n = self.rank();
        let m = majorant_matrix(&self.gram)?;
        let table = schur_table(&m);
        let c = config.ceiling.max(1) as i128;
        let full = (0..n).flat_map(|i| m.row(i).iter().map(|&x| (x as i128).abs())).sum::<i128>().checked_mul(c * c)?;
        let mut limit = (0..n).map(|i| m[(i, i)] as i128).min()?;
        let bounds = vec![c as i64; n];
        loop {
            match find_first_in_ellipsoid(&self.gram, 0, &table, limit, &bounds, Some(config.node_budget), &mut *accept) {
                Ok(Some(v)) => return Some(v),
                Ok(None) if limit < full => limit = limit.saturating_mul(2).min(full),
                _ => return None,
            }
        }
    }

    /// Exhaustive search in the box `|xᵢ| ≤ ⌊√(norm · (G⁻¹)ᵢᵢ)⌋`, which
    /// contains every vector of that norm when `sign · gram` is positive
    /// definite. `None` is then a proof of absence unless the budget ran out.
    pub fn search_definite<P>(
        &self,
        sign: i64,
        norm: i64,
        budget: u64,
        accept: P,
    ) -> Result<Result<Option<Vec<i64>>, SearchExhausted>, LatticeError>
    where
        P: FnMut(&[i64]) -> bool,
    {
        let g = self.gram.scale(sign)?;
        let inv = g.inverse_unimodular()?;
        let bounds: Vec<i64> = (0..self.rank()).map(|i| isqrt(norm * inv[(i, i)])).collect();
        Ok(find_first_definite(&g, norm, &bounds, Some(budget), accept))
    }

    /// All vectors of `sign · gram`-norm `norm` (both signs), exhaustively.
    pub fn all_definite(&self, sign: i64, norm: i64, budget: u64) -> Result<Result<Vec<Vec<i64>>, SearchExhausted>, LatticeError> {
        let mut out = Vec::new();
        let found = self.search_definite(sign, norm, budget, |v| {
            out.push(v.to_vec());
            false
        })?;
        Ok(found.map(|_| {
            let negs: Vec<Vec<i64>> = out.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
            out.extend(negs);
            out
        }))
    }
}

fn isqrt128(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub(crate) fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Whether `v` is characteristic for `gram`: `v·x ≡ x·x (mod 2)` on a basis.
pub(crate) fn is_characteristic_local(gram: &IntMatrix, v: &[i64]) -> bool {
    (0..gram.rows()).all(|i| {
        let dot: i128 = gram.row(i).iter().zip(v).map(|(&g, &x)| g as i128 * x as i128).sum();
        (dot - gram[(i, i)] as i128).is_even()
    })
}

pub(crate) fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
}
