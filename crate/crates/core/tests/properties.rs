use dkklab::bases::{difference_basis, summing_basis, unit_vector_basis};
use dkklab::dkk::{DkkSpace, Partition};
use dkklab::greedy::{greedy_set, is_greedy_set};
use dkklab::normer::project;
use dkklab::seqspace::{lambda_star, rearrange_nonincreasing, SymSpace, Weight};
use dkklab::Normer;
use proptest::prelude::*;

fn spaces() -> impl Strategy<Value = SymSpace> {
    prop_oneof![
        (1.0f64..6.0).prop_map(SymSpace::lp),
        Just(SymSpace::Sup),
        (-0.9f64..0.0).prop_map(|e| SymSpace::lorentz(1.0, Weight::power(e))),
        ((1.0f64..4.0), (-0.9f64..0.0)).prop_map(|(q, e)| SymSpace::lorentz(q, Weight::power(e))),
    ]
}

fn vector(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, len)
}

fn sizes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..6, 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symmetric_norms_are_lattice_and_rearrangement_invariant(s in spaces(), f in vector(12), keep in prop::collection::vec(any::<bool>(), 12)) {
        let n = s.norm(&f);
        let set: Vec<usize> = (0..12).filter(|&j| keep[j]).collect();
        prop_assert!(s.norm(&project(&f, &set)) <= n * (1.0 + 1e-12));
        prop_assert!((s.norm(&rearrange_nonincreasing(&f)) - n).abs() <= 1e-12 * n.max(1.0));
        let neg: Vec<f64> = f.iter().map(|x| -x).collect();
        prop_assert_eq!(s.norm(&neg), n);
    }

    #[test]
    fn triangle_inequality(s in spaces(), f in vector(10), g in vector(10)) {
        let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        prop_assert!(s.norm(&sum) <= (s.norm(&f) + s.norm(&g)) * (1.0 + 1e-12));
    }

    #[test]
    fn fundamental_functions_multiply_to_m(s in spaces(), m in 1usize..200) {
        let l = s.lambda(m);
        let ls = lambda_star(&s, m).unwrap();
        prop_assert!((l * ls - m as f64).abs() <= 1e-12 * m as f64);
        prop_assert!(s.lambda(m + 1) >= l);
    }

    #[test]
    fn averaging_is_an_idempotent_projection(s in spaces(), sz in sizes(), seed in any::<u64>()) {
        let p = Partition::new(sz).unwrap();
        let dim = p.total();
        let y = DkkSpace::new(unit_vector_basis(SymSpace::lp(2.0)).unwrap(), s, p).unwrap();
        let f = dkklab::sample::heavy_tailed(&mut dkklab::sample::sample_rng(seed, 0), dim);
        let pf = y.avg_projection(&f).unwrap();
        let ppf = y.avg_projection(&pf).unwrap();
        for (a, b) in pf.iter().zip(&ppf) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
        let qf = y.q_projection(&f).unwrap();
        prop_assert!(y.avg_projection(&qf).unwrap().iter().all(|x| x.abs() <= 1e-9 * f.iter().fold(1.0f64, |m, v| m.max(v.abs()))));
    }

    #[test]
    fn gauge_is_a_norm(sz in sizes(), f in vector(25), g in vector(25), c in -5.0f64..5.0) {
        let p = Partition::new(sz).unwrap();
        let dim = p.total();
        let y = DkkSpace::new(summing_basis(), SymSpace::lp(1.5), p).unwrap();
        let (f, g) = (&f[..dim], &g[..dim]);
        let sum: Vec<f64> = f.iter().zip(g).map(|(a, b)| a + b).collect();
        let scaled: Vec<f64> = f.iter().map(|a| c * a).collect();
        prop_assert!(y.norm(&sum) <= (y.norm(f) + y.norm(g)) * (1.0 + 1e-12));
        prop_assert!((y.norm(&scaled) - c.abs() * y.norm(f)).abs() <= 1e-9 * y.norm(f).max(1.0));
    }

    #[test]
    fn greedy_sets_are_greedy(f in vector(15), m in 0usize..15) {
        let set = greedy_set(&f, m);
        prop_assert!(is_greedy_set(&f, &set));
        prop_assert!(set.len() <= m);
    }

    #[test]
    fn conditional_bases_round_trip(coeffs in vector(8)) {
        for b in [summing_basis(), difference_basis()] {
            let m = b.ambient_matrix(8);
            let y = &m * nalgebra::DVector::from_column_slice(&coeffs);
            let back = m.clone().try_inverse().unwrap() * y;
            for (a, b) in coeffs.iter().zip(back.iter()) {
                prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
            }
        }
    }
}
