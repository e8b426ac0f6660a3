#![allow(dead_code)]

use covermap_core::lattice::{GramForm, IntMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random unimodular matrix with entries bounded by `max_entry`, built
/// from elementary row operations that keep the bound.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, max_entry: i64, steps: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        if rng.gen_bool(0.5) {
            u[(0, 0)] = -1;
        }
        return u;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let mut next = u.clone();
        match rng.gen_range(0..4) {
            0 => {
                for c in 0..n {
                    next[(i, c)] = u[(i, c)] + u[(j, c)];
                }
            }
            1 => {
                for c in 0..n {
                    next[(i, c)] = u[(i, c)] - u[(j, c)];
                }
            }
            2 => {
                for c in 0..n {
                    next[(i, c)] = u[(j, c)];
                    next[(j, c)] = u[(i, c)];
                }
            }
            _ => {
                for c in 0..n {
                    next[(i, c)] = -u[(i, c)];
                }
            }
        }
        if next.max_abs() <= max_entry {
            u = next;
        }
    }
    u
}

/// `Uᵀ·A·U` for a random bounded unimodular `U`.
pub fn conjugate(rng: &mut ChaCha8Rng, form: &GramForm, max_entry: i64) -> GramForm {
    let u = random_unimodular(rng, form.rank(), max_entry, 12 * form.rank());
    GramForm::new(u.congruence(form.entries()).unwrap()).unwrap()
}

pub fn e8() -> GramForm {
    covermap_core::witness::e8_constants().0
}

pub fn h() -> GramForm {
    GramForm::hyperbolic()
}

pub fn sum(forms: &[GramForm]) -> GramForm {
    forms.iter().fold(GramForm::empty(), |acc, f| acc.direct_sum(f).unwrap())
}

pub fn diag(entries: &[i64]) -> GramForm {
    GramForm::diagonal(entries).unwrap()
}
