use std::collections::BTreeSet;

use mubkit_core::hadamard::{char_table, dft, float_deviation, tensor_hadamard, verify_hadamard};
use mubkit_core::latin::{complete_mols_prime_power, cyclic_square, macneish_product};
use mubkit_core::mub::{build_mubs, inner_product, tensor_mubs, verify_mubs, MubSet, VerifyMode};
use mubkit_core::net::net_from_mols;
use mubkit_core::plan::{PlanImports, MUB_FLOOR};
use mubkit_core::{plan, MolsSet};
use num_complex::Complex64;
use proptest::prelude::*;

fn mubs_for(q: u64) -> MubSet {
    let net = net_from_mols(&complete_mols_prime_power(q).unwrap());
    build_mubs(&net, &dft(q as usize)).unwrap()
}

/// Dense vectors with `cos`/`sin` evaluated directly, scale included.
fn dense(set: &MubSet) -> Vec<Vec<Vec<Complex64>>> {
    let m = f64::from(set.root_order());
    set.bases()
        .iter()
        .map(|b| {
            b.vectors()
                .iter()
                .map(|v| {
                    let mut out = vec![Complex64::new(0.0, 0.0); set.dim()];
                    let scale = 1.0 / (v.norm_sq() as f64).sqrt();
                    for &(p, e) in v.amps() {
                        let t = std::f64::consts::TAU * f64::from(e) / m;
                        out[p] = Complex64::new(t.cos() * scale, t.sin() * scale);
                    }
                    out
                })
                .collect()
        })
        .collect()
}

/// Failing pairs by brute force over dense vectors.
fn dense_failures(set: &MubSet) -> BTreeSet<(usize, usize, usize, usize)> {
    let vs = dense(set);
    let d = set.dim() as f64;
    let mut out = BTreeSet::new();
    for b in 0..vs.len() {
        for c in b..vs.len() {
            for i in 0..vs[b].len() {
                let start = if b == c { i } else { 0 };
                for j in start..vs[c].len() {
                    let ip: Complex64 = vs[b][i].iter().zip(&vs[c][j]).map(|(x, y)| x * y.conj()).sum();
                    let target = match (b == c, i == j) {
                        (true, true) => 1.0,
                        (true, false) => 0.0,
                        _ => 1.0 / d,
                    };
                    if (ip.norm_sqr() - target).abs() > 1e-6 {
                        out.insert((b, i, c, j));
                    }
                }
            }
        }
    }
    out
}

fn pairs(set: &MubSet, mode: VerifyMode) -> BTreeSet<(usize, usize, usize, usize)> {
    verify_mubs(set, mode)
        .unwrap()
        .failing_pairs()
        .into_iter()
        .collect()
}

#[test]
fn theorem_soundness_prime_powers() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let set = mubs_for(q);
        assert_eq!((set.len(), set.dim()), (q as usize + 1, (q * q) as usize));
        assert!(verify_mubs(&set, VerifyMode::Exact).unwrap().passed(), "q = {q}");
        assert!(verify_mubs(&set, VerifyMode::Float).unwrap().passed(), "q = {q}");
    }
}

#[test]
fn theorem_soundness_composite_orders() {
    // s = 6 and s = 10 have one MOLS from the product construction, s = 12 has two.
    let prod = |a, b, w| {
        let (x, y): (MolsSet, MolsSet) = (
            complete_mols_prime_power(a).unwrap(),
            complete_mols_prime_power(b).unwrap(),
        );
        macneish_product(&x.truncated(w), &y.truncated(w)).unwrap()
    };
    for (mols, hs) in [
        (prod(2, 3, 1), vec![dft(6), char_table(&[2, 3]).unwrap()]),
        (prod(4, 3, 2), vec![char_table(&[2, 2, 3]).unwrap()]),
        (
            MolsSet::new(6, vec![cyclic_square(6)]).unwrap(),
            vec![tensor_hadamard(&dft(2), &dft(3))],
        ),
    ] {
        let net = net_from_mols(&mols);
        for h in hs {
            let set = build_mubs(&net, &h).unwrap();
            assert_eq!(set.len(), mols.len() + 2);
            assert!(
                verify_mubs(&set, VerifyMode::Exact).unwrap().passed(),
                "s = {}",
                mols.order()
            );
        }
    }
}

#[test]
fn every_hadamard_up_to_nine_works() {
    // every character table of order s on the complete net, for composite s ≤ 9
    let tables: [(usize, Vec<Vec<u32>>); 3] = [
        (4, vec![vec![4], vec![2, 2]]),
        (8, vec![vec![8], vec![2, 4], vec![2, 2, 2]]),
        (9, vec![vec![9], vec![3, 3]]),
    ];
    for (s, orders) in tables {
        let net = net_from_mols(&complete_mols_prime_power(s as u64).unwrap());
        for o in orders {
            let set = build_mubs(&net, &char_table(&o).unwrap()).unwrap();
            assert!(
                verify_mubs(&set, VerifyMode::Exact).unwrap().passed(),
                "s = {s}, {o:?}"
            );
        }
    }
}

#[test]
fn cross_block_products_are_single_roots() {
    for q in [2u64, 3, 4, 5] {
        let set = mubs_for(q);
        for b in 0..set.len() {
            for c in b + 1..set.len() {
                for u in set.bases()[b].vectors() {
                    for v in set.bases()[c].vectors() {
                        let s = inner_product(u, v).unwrap();
                        assert!(s.as_single_root().is_some(), "q = {q}");
                        assert_eq!(s.coeffs().iter().map(|c| c.abs()).sum::<i64>(), 1);
                    }
                }
            }
        }
    }
}

#[test]
fn embedded_vectors_have_norm_s() {
    for q in [2u64, 3, 5, 7] {
        let set = mubs_for(q);
        for b in set.bases() {
            for v in b.vectors() {
                assert_eq!(v.norm_sq(), q);
                assert_eq!(inner_product(v, v).unwrap().coeffs()[0], q as i64);
            }
        }
    }
}

#[test]
fn tensor_products_up_to_36() {
    let sets: Vec<MubSet> = [2u64, 3].iter().map(|&q| mubs_for(q)).collect();
    for a in &sets {
        for b in &sets {
            let t = tensor_mubs(a, b).unwrap();
            assert_eq!(t.len(), a.len().min(b.len()));
            assert_eq!(t.dim(), a.dim() * b.dim());
            assert!(verify_mubs(&t, VerifyMode::Exact).unwrap().passed());
        }
    }
    let a = &sets[0];
    let one = tensor_mubs(a, &MubSet::trivial()).unwrap();
    assert_eq!(one.bases(), a.bases());
}

#[test]
fn oracles_agree_on_clean_sets() {
    for q in [2u64, 3, 4] {
        let set = mubs_for(q);
        assert!(dense_failures(&set).is_empty());
        assert!(pairs(&set, VerifyMode::Exact).is_empty());
        assert!(pairs(&set, VerifyMode::Float).is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tampering_is_pinpointed(qi in 0usize..3, basis in 0usize..10, index in 0usize..100, slot in 0usize..10, bump in 1u32..9) {
        let q = [2u64, 3, 4][qi];
        let mut set = mubs_for(q);
        let (b, i) = (basis % set.len(), index % set.dim());
        let m = set.root_order();
        let v = set.vector_mut(b, i);
        let slot = slot % v.amps().len();
        let old = v.amps()[slot].1;
        v.set_exponent(slot, old + 1 + bump % (m - 1));
        let exact = pairs(&set, VerifyMode::Exact);
        prop_assert!(!exact.is_empty());
        prop_assert_eq!(&exact, &pairs(&set, VerifyMode::Float));
        prop_assert_eq!(&exact, &dense_failures(&set));
        // only pairs involving the tampered vector
        prop_assert!(exact.iter().all(|&(b1, i1, b2, i2)| (b1, i1) == (b, i) || (b2, i2) == (b, i)));
    }

    #[test]
    fn random_character_tables(orders in proptest::collection::vec(1u32..=8, 1..4)) {
        let n: u32 = orders.iter().product();
        prop_assume!(n <= 24);
        let h = char_table(&orders).unwrap();
        prop_assert_eq!(h.size(), n as usize);
        prop_assert!(verify_hadamard(&h).passed());
        prop_assert!(float_deviation(&h) < 1e-9);
    }

    #[test]
    fn planner_monotone_and_floored(d in 2u64..5000, s in 2usize..40, extra in 1usize..6) {
        let empty = PlanImports::default();
        let before = plan(d, &empty);
        prop_assert!(before.best_count >= MUB_FLOOR);
        prop_assert!(before.best_count >= before.prime_power_count);
        let mut more = PlanImports::default();
        more.mols.add_cited(s, extra.min(s - 1), "test").unwrap();
        more.add_mubs(d, 3);
        let after = plan(d, &more);
        prop_assert!(after.best_count >= before.best_count);
        prop_assert!(after.best_constructible_count >= before.best_constructible_count);
    }
}

#[test]
fn tensor_hadamards_exhaustive() {
    for a in 1..=6 {
        for b in 1..=6 {
            assert!(verify_hadamard(&tensor_hadamard(&dft(a), &dft(b))).passed());
        }
    }
}
