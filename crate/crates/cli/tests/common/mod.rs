#![allow(dead_code)]

use std::io::Write;
use std::path::PathBuf;

use covermap_core::lattice::{GramForm, IntMatrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const CORPUS: [&str; 8] = ["cp2", "cp2bar", "cp2_cp2bar", "h", "h2", "e8h", "neg_e8_2h", "diag111"];

/// A conjugate of E8 ⊕ H whose classification is inconclusive at
/// enumeration ceilings up to 3.
pub const HARD_E8H: &str = r#"{"gram": [[58, 12, 7, -43, -4, -21, -6, 4, 10, -1], [12, 14, 14, -30, -20, 4, -9, -2, 11, -19], [7, 14, 22, -18, -26, -3, 2, -5, 15, -25], [-43, -30, -18, 66, 38, -2, 12, -6, -19, 25], [-4, -20, -26, 38, 38, -1, 8, 4, -20, 37], [-21, 4, -3, -2, -1, 40, -15, -12, -8, -1], [-6, -9, 2, 12, 8, -15, 6, -2, 2, 1], [4, -2, -5, -6, 4, -12, -2, 24, 5, 2], [10, 11, 15, -19, -20, -8, 2, 5, 14, -18], [-1, -19, -25, 25, 37, -1, 1, 2, -18, 34]]}"#;

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.json"))
}

pub fn temp_json(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

pub fn form_json(form: &GramForm) -> String {
    serde_json::json!({ "gram": form.entries().to_rows() }).to_string()
}

/// Random unimodular matrix with entries bounded by `max_entry`, from
/// elementary row operations that keep the bound.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, max_entry: i64) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..12 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let mut next = u.clone();
        for c in 0..n {
            next[(i, c)] = u[(i, c)] + sign * u[(j, c)];
        }
        if next.max_abs() <= max_entry {
            u = next;
        }
    }
    u
}

pub fn conjugate(rng: &mut ChaCha8Rng, form: &GramForm, max_entry: i64) -> GramForm {
    let u = random_unimodular(rng, form.rank(), max_entry);
    GramForm::new(u.congruence(form.entries()).unwrap()).unwrap()
}
