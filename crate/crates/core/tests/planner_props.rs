mod common;

use common::{conjugate, diag, e8, h, sum};
use covermap_core::classify::{classify, SearchConfig};
use covermap_core::lattice::{GramForm, Parity};
use covermap_core::planner::{decide, decide_all, BaseManifold, ManifoldInvariants, Verdict, Witness};
use covermap_core::witness::{bundle_witnesses, cp2_witness, lambda_sublattice};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_form(rng: &mut ChaCha8Rng) -> GramForm {
    let base = match rng.gen_range(0..6) {
        0..=2 => {
            let n = rng.gen_range(1..=6);
            let entries: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
            diag(&entries)
        }
        3 => sum(&vec![h(); rng.gen_range(1..=3)]),
        4 => sum(&[e8(), h()]),
        _ => sum(&[e8().negate().unwrap(), h(), h()]),
    };
    conjugate(rng, &base, 3)
}

fn inv(form: GramForm) -> ManifoldInvariants {
    ManifoldInvariants::from_form(form).unwrap()
}

#[test]
fn sum_feasibility_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..15 {
        let m = inv(random_form(&mut rng));
        let reports = decide_all(&m, 4).unwrap();
        let feasible = |a: u32, b: u32| {
            let base = BaseManifold::SumCP2 { m: a, n: b }.normalize().unwrap();
            reports.iter().find(|r| r.base == base).unwrap().feasible()
        };
        for a in 0..=4u32 {
            for b in 0..=4 - a {
                if a + b == 0 || !feasible(a, b) {
                    continue;
                }
                for a2 in 0..=a {
                    for b2 in 0..=b {
                        if a2 + b2 > 0 {
                            assert!(feasible(a2, b2), "({a},{b}) feasible but ({a2},{b2}) not");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn orientation_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..30 {
        let a = random_form(&mut rng);
        let bar = decide(&inv(a.clone()), BaseManifold::CP2bar).unwrap();
        let pos = decide(&inv(a.negate().unwrap()), BaseManifold::CP2).unwrap();
        assert_eq!(bar.verdict, pos.verdict);
        assert_eq!((bar.immersed_degree, bar.embedded_degree), (pos.immersed_degree, pos.embedded_degree));
        assert_eq!(bar.witnesses.len(), pos.witnesses.len());
        for (wb, wp) in bar.witnesses.iter().zip(&pos.witnesses) {
            let (Witness::Class(cb), Witness::Class(cp)) = (&wb.witness, &wp.witness) else { panic!("class witnesses expected") };
            assert_eq!(cb.self_intersection, -cp.self_intersection);
            assert_eq!(a.norm(&cb.phi.coords).unwrap(), cb.self_intersection);
        }
    }
}

#[test]
fn reports_are_deterministic_and_witnesses_reverify() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let form = random_form(&mut rng);
        let m = inv(form.clone());
        let first = serde_json::to_string(&decide_all(&m, 3).unwrap()).unwrap();
        let second = serde_json::to_string(&decide_all(&m, 3).unwrap()).unwrap();
        assert_eq!(first, second);
        for r in decide_all(&m, 3).unwrap() {
            if r.verdict == Verdict::Feasible {
                for w in &r.witnesses {
                    w.witness.verify(&form).unwrap();
                    assert_eq!(w.witness.max_residual(&form).unwrap(), 0);
                    assert!([4, 5, 6, 9].contains(&w.degree));
                }
                for d in [r.immersed_degree, r.embedded_degree].into_iter().flatten() {
                    assert!([4, 5, 6, 9].contains(&d));
                }
            }
        }
    }
}

#[test]
fn witnesses_verify_on_conjugated_ambients() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let cfg = SearchConfig::default();
    let mut checked = 0;
    while checked < 50 {
        let form = random_form(&mut rng);
        let i = form.invariants();
        if !i.is_indefinite() {
            continue;
        }
        checked += 1;
        let c = classify(&form, &cfg).unwrap();
        for embedded in [false, true] {
            let (w, d) = cp2_witness(&c, embedded).unwrap();
            w.verify(&form).unwrap();
            assert_eq!(form.norm(&w.phi.coords).unwrap(), d);
            for twisted in [false, true] {
                for p in bundle_witnesses(&c, 1, twisted, embedded).unwrap() {
                    p.verify(&form).unwrap();
                    assert_eq!(p.residuals(&form).unwrap(), [0, 0, 0]);
                }
            }
        }
        let ks: &[i64] = if i.parity == Parity::Odd { &[4, 9] } else { &[4, 6] };
        let (m, n) = (i.signature_pos.min(2), i.signature_neg.min(2));
        for &k in ks {
            let s = lambda_sublattice(&c, m, n, k).unwrap();
            s.verify_against(&form).unwrap();
            assert_eq!(s.generators.len(), m + n);
        }
        if i.parity == Parity::Odd && i.rank >= 2 * (m + n) {
            lambda_sublattice(&c, m, n, 5).unwrap().verify_against(&form).unwrap();
        }
    }
}
