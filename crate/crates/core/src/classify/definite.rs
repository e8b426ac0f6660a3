use crate::lattice::{GramForm, IntMatrix};

use super::frame::Frame;
use super::odd::finish_diagonal;
use super::{ClassKind, Classification, ClassifyError, SearchConfig, SummandLayout};

/// Splits norm-`sign` vectors off a definite frame until none is left.
///
/// Each search covers the exact box containing every vector of that norm,
/// so an empty result proves the remaining block has no unit vector. Only
/// running out of node budget is inconclusive.
pub(crate) fn split_definite_units(
    mut frame: Frame,
    sign: i64,
    config: &SearchConfig,
) -> Result<(Vec<Vec<i64>>, Frame), ClassifyError> {
    let mut found = Vec::new();
    while frame.rank() > 0 {
        frame.reduce_definite(sign)?;
        let hit = frame
            .search_definite(sign, 1, config.node_budget, |_| true)?
            .map_err(|_| ClassifyError::NoUnitVectorWithinBound { ceiling: config.ceiling })?;
        let Some(v) = hit else { break };
        let (taken, rest) = frame.split(&[v])?;
        found.extend(taken);
        frame = rest;
    }
    Ok((found, frame))
}

/// Tests a definite unimodular form for congruence to `±I`.
///
/// Failure is not an error: the result has kind `Unrecognized`, a
/// `Partial` layout (unit vectors first, then the unit-free leftover) and a
/// note that no closed oriented 4-manifold has such an intersection form.
pub fn check_definite_diagonal(form: &GramForm, config: &SearchConfig) -> Result<Classification, ClassifyError> {
    let inv = form.invariants();
    if !inv.is_unimodular() {
        return Err(ClassifyError::NotUnimodular(inv.determinant));
    }
    if inv.is_indefinite() {
        return Err(ClassifyError::Indefinite);
    }
    let sign = if inv.signature_neg == 0 { 1 } else { -1 };

    let (units, rest) = split_definite_units(Frame::whole(form), sign, config)?;
    if rest.rank() == 0 {
        let units = units.into_iter().map(|v| (v, sign)).collect();
        return finish_diagonal(ClassKind::DefiniteDiagonal, form, units);
    }

    let unit_entries = vec![sign; units.len()];
    let leftover_rank = rest.rank();
    let expected = IntMatrix::diagonal(&unit_entries).direct_sum(&rest.gram);
    let mut columns = units;
    columns.extend((0..leftover_rank).map(|j| rest.vectors.column(j)));
    let mut c = Classification::assemble(
        ClassKind::Unrecognized,
        form,
        &columns,
        expected,
        SummandLayout::Partial { unit_entries, leftover_rank },
    )?;
    let what = if form.parity() == crate::lattice::Parity::Even { "even" } else { "not congruent to ±I" };
    c.notes.push(format!(
        "definite form is {what} (rank-{leftover_rank} block without vectors of norm {sign}); \
         by Donaldson's theorem it is not the intersection form of a closed oriented 4-manifold"
    ));
    Ok(c)
}
