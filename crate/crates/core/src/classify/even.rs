use crate::lattice::{kernel_basis, BasisChange, BasisId, GramForm, IntMatrix, LatticeError, Parity};
use crate::witness::A8;

use super::frame::{is_primitive, Frame};
use super::{ClassKind, Classification, ClassifyError, SearchConfig, SummandLayout};

/// Node limit for enumerating the roots of a leftover definite block.
const ROOT_BUDGET: u64 = 5_000_000;
/// Candidate checks allowed when matching roots to the E8 pattern.
const MATCH_BUDGET: u64 = 2_000_000;

fn check_even_indefinite(form: &GramForm) -> Result<(), ClassifyError> {
    let inv = form.invariants();
    if !inv.is_unimodular() {
        return Err(ClassifyError::NotUnimodular(inv.determinant));
    }
    if inv.parity != Parity::Even {
        return Err(ClassifyError::NotEven);
    }
    if inv.is_definite() {
        return Err(ClassifyError::Definite);
    }
    Ok(())
}

/// Finds a hyperbolic pair `(e, f)` in an even indefinite unimodular frame.
///
/// `e` is the first primitive isotropic vector found (basis vectors first,
/// then lexicographically in the escalating box). Since `e` is primitive and the form unimodular, `x ↦ e·x`
/// is onto `Z`, so some `f₀` has `e·f₀ = 1`; then `f = f₀ − (f₀·f₀/2)·e`
/// is isotropic.
fn hyperbolic_pair(frame: &Frame, config: &SearchConfig) -> Result<(Vec<i64>, Vec<i64>), ClassifyError> {
    let e = frame
        .search(0, config, is_primitive)?
        .ok_or(ClassifyError::NoIsotropicWithinBound { ceiling: config.ceiling })?;
    let ge = frame.gram.mul_vec(&e)?;
    let (_, v) = kernel_basis(&IntMatrix::from_rows(vec![ge])?)?;
    let mut f0 = v.column(0);
    match frame.pair(&e, &f0)? {
        1 => {}
        -1 => f0.iter_mut().for_each(|x| *x = -*x),
        _ => return Err(LatticeError::Unverified("isotropic vector has no dual".into()).into()),
    }
    let half = frame.pair(&f0, &f0)? / 2;
    let f = f0
        .iter()
        .zip(&e)
        .map(|(&x, &y)| crate::lattice::fma(x, -half, y))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((e, f))
}

/// Splits one hyperbolic plane off `frame`; returns the lifted pair and the
/// (reduced) complement.
fn split_one(frame: &Frame, config: &SearchConfig) -> Result<(Vec<i64>, Vec<i64>, Frame), ClassifyError> {
    let (e, f) = hyperbolic_pair(frame, config)?;
    let (taken, mut rest) = frame.split(&[e, f])?;
    rest.reduce()?;
    let mut it = taken.into_iter();
    Ok((it.next().expect("e"), it.next().expect("f"), rest))
}

/// A basis whose first two vectors `η₁, η₂` form a hyperbolic pair and whose
/// remaining vectors span their orthogonal complement, together with the
/// form induced on that complement.
pub fn split_hyperbolic(form: &GramForm, config: &SearchConfig) -> Result<(BasisChange, GramForm), ClassifyError> {
    check_even_indefinite(form)?;
    let mut frame = Frame::whole(form);
    frame.reduce()?;
    let (e, f, rest) = split_one(&frame, config)?;
    let mut columns = vec![e, f];
    columns.extend((0..rest.rank()).map(|j| rest.vectors.column(j)));
    let target = BasisId::new("hyperbolic-split");
    let change = BasisChange::new(IntMatrix::from_columns(&columns, form.rank()), form.basis().clone(), target.clone())?;
    let image = GramForm::with_basis(change.matrix.congruence(form.entries())?, target)?;
    change.verify(form, &image)?;
    let remaining = GramForm::with_basis(rest.gram, BasisId::new("hyperbolic-complement"))?;
    Ok((change, remaining))
}

/// Decomposes an even indefinite unimodular form as `⊕|a| (±E8) ⊕ b·H` with
/// `a = σ/8` and `b = rank/2 − 4|a|`.
///
/// After `b` hyperbolic splits the leftover is definite with the invariants
/// of `|a|` copies of `±E8`. It is then matched root by root against the
/// E8 Gram pattern; if that fails within budget (possible from rank 16 on,
/// where the leftover may be `D16⁺` rather than `E8 ⊕ E8`) the leftover is
/// kept as found and `e8_explicit` is false.
pub fn recognize_even_indefinite(form: &GramForm, config: &SearchConfig) -> Result<Classification, ClassifyError> {
    check_even_indefinite(form)?;
    let inv = form.invariants();
    let sigma = inv.signature();
    if sigma % 8 != 0 {
        return Err(ClassifyError::InvariantMismatch(format!("signature {sigma} of an even unimodular form is not divisible by 8")));
    }
    let a = sigma / 8;
    let e8_rank = 8 * a.unsigned_abs() as usize;
    let b = (inv.rank - e8_rank) / 2;

    let mut frame = Frame::whole(form);
    frame.reduce()?;
    let mut hyperbolic = Vec::with_capacity(2 * b);
    for _ in 0..b {
        let (e, f, rest) = split_one(&frame, config)?;
        hyperbolic.push(e);
        hyperbolic.push(f);
        frame = rest;
    }

    let left = frame.form()?.invariants();
    let sign = a.signum();
    if left.rank != e8_rank || left.parity != Parity::Even || left.signature() != sigma || !left.is_unimodular() {
        return Err(ClassifyError::InvariantMismatch(format!(
            "leftover after {b} hyperbolic splits has invariants {left:?}, expected {e8_rank} copies of sign {sign} E8"
        )));
    }

    let e8_blocks = if e8_rank == 0 { Some(Vec::new()) } else { e8_decomposition(frame.clone(), sign, a.unsigned_abs() as usize)? };
    let e8_explicit = e8_blocks.is_some();
    let (mut columns, mut expected) = match e8_blocks {
        Some(blocks) => {
            let block = IntMatrix::from_rows(A8.iter().map(|r| r.to_vec()).collect())?.scale(sign)?;
            let expected = (0..blocks.len()).fold(IntMatrix::zeros(0, 0), |acc, _| acc.direct_sum(&block));
            (blocks.concat(), expected)
        }
        None => ((0..frame.rank()).map(|j| frame.vectors.column(j)).collect(), frame.gram.clone()),
    };
    let h = IntMatrix::from_rows(vec![vec![0, 1], vec![1, 0]])?;
    for _ in 0..b {
        expected = expected.direct_sum(&h);
    }
    columns.extend(hyperbolic);

    let mut c = Classification::assemble(
        ClassKind::EvenIndefinite,
        form,
        &columns,
        expected,
        SummandLayout::EvenIndefinite { a, b, e8_explicit },
    )?;
    if !e8_explicit {
        c.notes.push(format!(
            "definite leftover of rank {e8_rank} checked by invariants only; no explicit E8 basis found"
        ));
    }
    Ok(c)
}

/// Splits `count` copies of `sign·E8` off a definite frame, each given by
/// eight roots with Gram `sign·A8`. `None` if a copy could not be matched.
fn e8_decomposition(mut frame: Frame, sign: i64, count: usize) -> Result<Option<Vec<Vec<Vec<i64>>>>, ClassifyError> {
    let mut blocks = Vec::with_capacity(count);
    for _ in 0..count {
        frame.reduce_definite(sign)?;
        let Ok(roots) = frame.all_definite(sign, 2, ROOT_BUDGET)? else { return Ok(None) };
        let Some(local) = match_e8(&frame, sign, &roots)? else { return Ok(None) };
        let (lifted, rest) = frame.split(&local)?;
        blocks.push(lifted);
        frame = rest;
    }
    Ok(Some(blocks))
}

/// Backtracking search for roots `r₁ … r₈` with `sign·(rᵢ·rⱼ) = A8[i][j]`.
fn match_e8(frame: &Frame, sign: i64, roots: &[Vec<i64>]) -> Result<Option<Vec<Vec<i64>>>, LatticeError> {
    let n = roots.len();
    let mut pairing = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let p = sign * frame.pair(&roots[i], &roots[j])?;
            pairing[i][j] = p;
            pairing[j][i] = p;
        }
    }
    fn extend(pairing: &[Vec<i64>], chosen: &mut Vec<usize>, steps: &mut u64) -> bool {
        let k = chosen.len();
        if k == 8 {
            return true;
        }
        for c in 0..pairing.len() {
            *steps += 1;
            if *steps > MATCH_BUDGET {
                return false;
            }
            if chosen.iter().enumerate().all(|(i, &r)| pairing[r][c] == A8[i][k] && r != c) {
                chosen.push(c);
                if extend(pairing, chosen, steps) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(8);
    let mut steps = 0;
    Ok(extend(&pairing, &mut chosen, &mut steps).then(|| chosen.iter().map(|&i| roots[i].clone()).collect()))
}
