use crate::lattice::{GramForm, IntMatrix, Parity};

use super::definite::split_definite_units;
use super::frame::{is_characteristic_local, Frame};
use super::{ClassKind, Classification, ClassifyError, SearchConfig, SummandLayout};

/// Congruence of an odd unimodular form to `diag(+1 × b₂⁺, −1 × b₂⁻)`.
///
/// Unit vectors are split off one at a time. On an indefinite frame the
/// unit vector is taken with the majority sign, so the complement stays
/// indefinite (or has rank ≤ 1), and it must not be characteristic: `v` is
/// characteristic exactly when `v^⊥` is even, and an odd indefinite
/// unimodular complement is again diagonalizable. Definite frames are
/// finished by exhaustive unit-vector splitting.
pub fn diagonalize_odd(form: &GramForm, config: &SearchConfig) -> Result<Classification, ClassifyError> {
    let inv = form.invariants();
    if !inv.is_unimodular() {
        return Err(ClassifyError::NotUnimodular(inv.determinant));
    }
    if inv.parity != Parity::Odd {
        return Err(ClassifyError::NotOdd);
    }

    let mut frame = Frame::whole(form);
    frame.reduce()?;
    let mut units: Vec<(Vec<i64>, i64)> = Vec::new();

    while frame.rank() > 0 {
        let fi = frame.form()?.invariants();
        if fi.is_definite() {
            let sign = if fi.signature_neg == 0 { 1 } else { -1 };
            let (found, rest) = split_definite_units(frame, sign, config)?;
            units.extend(found.into_iter().map(|v| (v, sign)));
            if rest.rank() > 0 {
                return Err(ClassifyError::NotDiagonalizable);
            }
            break;
        }
        let sign = if fi.signature_pos >= fi.signature_neg { 1 } else { -1 };
        let needs_odd_complement = frame.rank() > 2;
        let gram = frame.gram.clone();
        let v = frame
            .search(sign, config, |v| !needs_odd_complement || !is_characteristic_local(&gram, v))?
            .ok_or(ClassifyError::NoUnitVectorWithinBound { ceiling: config.ceiling })?;
        let (taken, mut rest) = frame.split(&[v])?;
        rest.reduce()?;
        units.push((taken.into_iter().next().expect("one vector"), sign));
        frame = rest;
    }

    finish_diagonal(ClassKind::OddDiagonal, form, units)
}

/// Orders the unit vectors positive first and verifies the result.
pub(crate) fn finish_diagonal(
    kind: ClassKind,
    form: &GramForm,
    units: Vec<(Vec<i64>, i64)>,
) -> Result<Classification, ClassifyError> {
    let (pos, neg): (Vec<_>, Vec<_>) = units.into_iter().partition(|(_, s)| *s > 0);
    let entries: Vec<i64> = pos.iter().chain(&neg).map(|(_, s)| *s).collect();
    let columns: Vec<Vec<i64>> = pos.into_iter().chain(neg).map(|(v, _)| v).collect();
    Classification::assemble(
        kind,
        form,
        &columns,
        IntMatrix::diagonal(&entries),
        SummandLayout::Diagonal { entries },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{congruent_brute, CongruenceOutcome};

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn already_diagonal_is_identity() {
        let f = GramForm::diagonal(&[1, -1]).unwrap();
        let c = diagonalize_odd(&f, &cfg()).unwrap();
        assert_eq!(c.canonical.entries(), f.entries());
        assert_eq!(c.change.matrix, IntMatrix::identity(2));
    }

    #[test]
    fn definite_rank_two_agrees_with_brute_oracle() {
        let f = GramForm::from_rows(vec![vec![2, 1], vec![1, 1]]).unwrap();
        let c = diagonalize_odd(&f, &cfg()).unwrap();
        assert_eq!(c.layout, SummandLayout::Diagonal { entries: vec![1, 1] });
        let target = GramForm::diagonal(&[1, 1]).unwrap();
        assert!(matches!(congruent_brute(&f, &target, 2), CongruenceOutcome::Congruent { .. }));
    }

    #[test]
    fn conjugated_round_trip() {
        let u = IntMatrix::from_rows(vec![vec![2, 3], vec![1, 2]]).unwrap();
        let f = GramForm::new(u.congruence(&IntMatrix::diagonal(&[1, -1])).unwrap()).unwrap();
        let c = diagonalize_odd(&f, &cfg()).unwrap();
        assert_eq!(c.canonical.entries(), &IntMatrix::diagonal(&[1, -1]));
        c.verify().unwrap();
    }

    #[test]
    fn odd_plus_hyperbolic_avoids_even_complement() {
        // ⟨1⟩ ⊕ H: splitting the obvious ⟨1⟩ would leave H, which is even.
        let f = GramForm::diagonal(&[1]).unwrap().direct_sum(&GramForm::hyperbolic()).unwrap();
        let c = diagonalize_odd(&f, &cfg()).unwrap();
        assert_eq!(c.layout, SummandLayout::Diagonal { entries: vec![1, 1, -1] });
    }

    #[test]
    fn minus_one_plus_e8_is_diagonalizable() {
        let e8 = GramForm::new(crate::witness::e8_constants().0.entries().clone()).unwrap();
        let f = GramForm::diagonal(&[-1]).unwrap().direct_sum(&e8).unwrap();
        let c = diagonalize_odd(&f, &cfg()).unwrap();
        assert_eq!(c.diagonal_entries().unwrap(), &[1, 1, 1, 1, 1, 1, 1, 1, -1]);
    }

    #[test]
    fn rejects_even_and_non_unimodular() {
        assert_eq!(diagonalize_odd(&GramForm::hyperbolic(), &cfg()), Err(ClassifyError::NotOdd));
        assert_eq!(
            diagonalize_odd(&GramForm::diagonal(&[3]).unwrap(), &cfg()),
            Err(ClassifyError::NotUnimodular(3))
        );
    }
}
