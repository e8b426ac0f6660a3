//! The ten acceptance criteria, one PASS/FAIL line each.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::conjugate;
use covermap_core::classify::{classify, congruent, ClassKind, SearchConfig, SummandLayout};
use covermap_core::lattice::{congruent_brute, CongruenceOutcome, GramForm, IntMatrix, Parity};
use covermap_core::monodromy::stabilized_two_fold;
use covermap_core::planner::{decide, decide_all, BaseManifold, ManifoldInvariants};
use covermap_core::witness::{self, BUNDLE_TABLE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn diag(entries: &[i64]) -> GramForm {
    GramForm::diagonal(entries).unwrap()
}

fn h() -> GramForm {
    GramForm::hyperbolic()
}

fn sum(forms: &[GramForm]) -> GramForm {
    forms.iter().fold(GramForm::empty(), |acc, f| acc.direct_sum(f).unwrap())
}

fn e8() -> GramForm {
    witness::e8_constants().0
}

fn inv(form: GramForm) -> ManifoldInvariants {
    ManifoldInvariants::from_form(form).unwrap()
}

fn matrix(rows: &[[i64; 8]; 8]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn e8_frame() -> Result<String, String> {
    let start = Instant::now();
    let (a8, g) = (matrix(&witness::A8), matrix(&witness::G));
    let product = g.transpose().mul(&a8).and_then(|m| m.mul(&g)).map_err(|e| e.to_string())?;
    let ok = product == IntMatrix::diagonal(&[2; 8]);
    let elapsed = start.elapsed();
    ensure!(ok, "GᵀA8G = {:?}", product.to_rows());
    ensure!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    Ok(format!("GᵀA8G = 2·I8 in {elapsed:?}"))
}

fn sublattice_grams() -> Result<String, String> {
    let form = e8();
    for k in [4, 6] {
        let s = witness::e8_sublattice(k).map_err(|e| e.to_string())?;
        let v: Vec<Vec<i64>> = s.generators.iter().map(|g| g.coords.clone()).collect();
        let mut products = 0;
        for i in 0..8 {
            for j in i..8 {
                let p = form.pair(&v[i], &v[j]).map_err(|e| e.to_string())?;
                ensure!(p == if i == j { k } else { 0 }, "k={k}: g{i}·g{j} = {p}");
                products += 1;
            }
        }
        ensure!(products == 36, "{products} products");
    }
    for k in [4, 6] {
        let s = witness::h_sublattice(k).map_err(|e| e.to_string())?;
        let gram = h().gram_of(&s.generators.iter().map(|g| g.coords.clone()).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
        ensure!(gram == IntMatrix::diagonal(&[k, -k]), "H sublattice {k}: {:?}", gram.to_rows());
    }
    Ok("E8 ⟨4⟩, ⟨6⟩ Grams 4·I8, 6·I8 (36 products each); H ⟨4⟩, ⟨6⟩ Grams diag(k,−k)".into())
}

fn degree_table() -> Result<String, String> {
    use BaseManifold::*;
    let table = [
        (diag(&[1]), vec![(CP2, 4, 9)]),
        (diag(&[1, -1]), vec![(CP2, 4, 5), (S2xS2, 4, 6), (S2twistedS2, 4, 5)]),
        (h(), vec![(CP2, 4, 6), (S2xS2, 4, 5), (S2twistedS2, 4, 6)]),
    ];
    let mut witnesses = 0;
    for (form, rows) in table {
        let m = inv(form);
        for (base, imm, emb) in rows {
            let r = decide(&m, base).map_err(|e| e.to_string())?;
            ensure!(r.feasible(), "{base} infeasible for {:?}", m.form.entries().to_rows());
            ensure!(
                (r.immersed_degree, r.embedded_degree) == (Some(imm), Some(emb)),
                "{base}: got ({:?}, {:?}), want ({imm}, {emb})",
                r.immersed_degree,
                r.embedded_degree
            );
            for embedded in [false, true] {
                let w = r.witness(embedded).ok_or(format!("{base}: no witness (embedded {embedded})"))?;
                let res = w.witness.max_residual(&m.form).map_err(|e| e.to_string())?;
                ensure!(res == 0, "{base}: residual {res}");
                witnesses += 1;
            }
        }
    }
    Ok(format!("7 degree pairs match, {witnesses} witnesses with residual 0"))
}

fn bundle_table() -> Result<String, String> {
    ensure!(BUNDLE_TABLE.len() == 8, "{} rows", BUNDLE_TABLE.len());
    for row in &BUNDLE_TABLE {
        let gram = match row.parity {
            Parity::Odd => [[1, 0], [0, -1]],
            Parity::Even => [[0, 1], [1, 0]],
        };
        let pair = |a: [i64; 2], b: [i64; 2]| {
            (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| a[i] * gram[i][j] * b[j]).sum::<i64>()
        };
        let got = (pair(row.phi1, row.phi1), pair(row.phi1, row.phi2), pair(row.phi2, row.phi2));
        ensure!(got == (row.n * row.d, row.d, 0), "{row:?}: {got:?}");
        ensure!(row.residuals() == [0, 0, 0], "{row:?}: residuals {:?}", row.residuals());
    }
    Ok("8 rows satisfy φ₁·φ₁ = nd, φ₁·φ₂ = d, φ₂·φ₂ = 0".into())
}

fn classification_round_trip() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = SearchConfig::default();
    let start = Instant::now();
    let mut cases: Vec<GramForm> = Vec::new();
    for rank in 2..=8 {
        for _ in 0..10 {
            let entries: Vec<i64> = (0..rank).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
            cases.push(diag(&entries));
        }
    }
    for _ in 0..10 {
        cases.push(h());
        cases.push(sum(&[h(), h()]));
        cases.push(sum(&[e8(), h()]));
    }
    ensure!(cases.len() == 100, "{} cases", cases.len());
    for base in &cases {
        let form = conjugate(&mut rng, base, 3);
        ensure!(form.entries().max_abs() > 0, "empty form");
        let c = classify(&form, &cfg).map_err(|e| format!("{:?}: {e}", form.entries().to_rows()))?;
        c.verify().map_err(|e| e.to_string())?;
        ensure!(c.change.matrix.congruence(form.entries()).ok().as_ref() == Some(c.canonical.entries()), "change does not verify");
        let i = base.invariants();
        match base.parity() {
            Parity::Odd => {
                let want = if i.is_definite() { ClassKind::DefiniteDiagonal } else { ClassKind::OddDiagonal };
                let entries: Vec<i64> = [1].repeat(i.signature_pos).into_iter().chain([-1].repeat(i.signature_neg)).collect();
                ensure!(c.kind == want, "kind {:?}, want {want:?}", c.kind);
                ensure!(c.layout == SummandLayout::Diagonal { entries }, "layout {:?}", c.layout);
            }
            Parity::Even => {
                let a = i.signature() / 8;
                let b = (i.rank - 8 * a.unsigned_abs() as usize) / 2;
                ensure!(c.kind == ClassKind::EvenIndefinite, "kind {:?}", c.kind);
                ensure!(c.layout == SummandLayout::EvenIndefinite { a, b, e8_explicit: true }, "layout {:?}", c.layout);
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("100 conjugates recovered with verified basis changes in {:.2}s", elapsed.as_secs_f64()))
}

fn oracle_agreement() -> Result<String, String> {
    let g = |rows: Vec<Vec<i64>>| GramForm::from_rows(rows).unwrap();
    let library = [
        diag(&[1]),
        diag(&[-1]),
        diag(&[1, -1]),
        h(),
        g(vec![vec![2, 1], vec![1, 1]]),
        g(vec![vec![1, 2], vec![2, 3]]),
        g(vec![vec![2, 1], vec![1, 0]]),
        diag(&[1, 1, -1]),
        g(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]),
        g(vec![vec![1, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]),
        sum(&[h(), h()]),
        g(vec![vec![2, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, -2]]),
    ];
    let cfg = SearchConfig::default();
    let mut congruent_pairs = 0;
    for a in &library {
        for b in &library {
            let fast = congruent(a, b, &cfg).map_err(|e| e.to_string())?;
            let brute = congruent_brute(a, b, 3);
            ensure!(!matches!(fast, CongruenceOutcome::NotFound), "classifier inconclusive");
            ensure!(!matches!(brute, CongruenceOutcome::NotFound), "oracle inconclusive");
            ensure!(fast.is_congruent() == brute.is_congruent(), "{:?} vs {:?}", a.entries().to_rows(), b.entries().to_rows());
            if let CongruenceOutcome::Congruent { change } = fast {
                ensure!(change.matrix.congruence(a.entries()).ok().as_ref() == Some(b.entries()), "change does not verify");
                congruent_pairs += 1;
            }
        }
    }
    Ok(format!("144 pairs agree with the brute-force oracle ({congruent_pairs} congruent)"))
}

fn monodromy_grid() -> Result<String, String> {
    let mut cells = 0;
    for g in 0..=5usize {
        for d in 2..=7usize {
            let data = stabilized_two_fold(g, d);
            data.verify().map_err(|e| format!("g={g} d={d}: {e}"))?;
            ensure!(data.branch_count() == 2 * (g + d - 1), "g={g} d={d}: {} points", data.branch_count());
            ensure!(data.total_genus() == Ok(g as u64), "g={g} d={d}: genus {:?}", data.total_genus());
            cells += 1;
        }
    }
    Ok(format!("{cells} (g, d) cells verify with 2(g+d−1) points and genus g"))
}

fn four_bases() -> Result<String, String> {
    use BaseManifold::*;
    let four = [CP2, CP2bar, S2xS2, S2twistedS2];
    for form in [diag(&[1, -1]), diag(&[1, 1, -1]), h(), sum(&[e8(), h()]), sum(&[e8().negate().unwrap(), h(), h()])] {
        let reports = decide_all(&inv(form.clone()), 2).map_err(|e| e.to_string())?;
        for base in four {
            ensure!(reports.iter().any(|r| r.base == base && r.feasible()), "{base} infeasible for {:?}", form.entries().to_rows());
        }
    }
    let reports = decide_all(&inv(diag(&[1, 1, 1])), 2).map_err(|e| e.to_string())?;
    let feasible: Vec<_> = reports.iter().filter(|r| four.contains(&r.base) && r.feasible()).map(|r| r.base).collect();
    ensure!(feasible == vec![CP2], "diag(1,1,1) feasible over {feasible:?}");
    Ok("indefinite forms cover all four; diag(1,1,1) covers only CP2".into())
}

fn duality() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..50 {
        let base = match rng.gen_range(0..5) {
            0..=2 => {
                let n = rng.gen_range(1..=6);
                diag(&(0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect::<Vec<_>>())
            }
            3 => sum(&vec![h(); rng.gen_range(1..=3)]),
            _ => sum(&[e8(), h()]),
        };
        let form = conjugate(&mut rng, &base, 3);
        let bar = decide(&inv(form.clone()), BaseManifold::CP2bar).map_err(|e| e.to_string())?;
        let plain = decide(&inv(form.negate().unwrap()), BaseManifold::CP2).map_err(|e| e.to_string())?;
        ensure!(
            (bar.feasible(), bar.immersed_degree, bar.embedded_degree) == (plain.feasible(), plain.immersed_degree, plain.embedded_degree),
            "{:?}: CP2bar {:?} vs CP2 of negation {:?}",
            form.entries().to_rows(),
            (bar.verdict, bar.immersed_degree, bar.embedded_degree),
            (plain.verdict, plain.immersed_degree, plain.embedded_degree)
        );
    }
    Ok("50 forms: CP2bar report of A equals CP2 report of −A".into())
}

fn selfcheck_binary() -> Result<String, String> {
    let runs: Vec<_> = (0..2)
        .map(|_| Command::new(env!("CARGO_BIN_EXE_covermap")).arg("selfcheck").env_remove("COVERMAP_ENUM_CEILING").output())
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for r in &runs {
        ensure!(r.status.success(), "exit {:?}: {}", r.status.code(), String::from_utf8_lossy(&r.stdout));
    }
    ensure!(runs[0].stdout == runs[1].stdout && runs[0].stderr == runs[1].stderr, "outputs differ");
    let text = String::from_utf8_lossy(&runs[0].stdout);
    let last = text.lines().last().unwrap_or_default().to_string();
    ensure!(!text.contains("FAIL"), "{text}");
    Ok(format!("{last}; two runs byte-identical"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("E8 frame", e8_frame),
        ("sublattice Grams", sublattice_grams),
        ("degree table", degree_table),
        ("bundle witness table", bundle_table),
        ("classification round-trip", classification_round_trip),
        ("oracle agreement", oracle_agreement),
        ("monodromy grid", monodromy_grid),
        ("indefinite versus definite bases", four_bases),
        ("duality", duality),
        ("selfcheck", selfcheck_binary),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", n + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
