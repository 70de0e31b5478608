use proptest::prelude::*;

use entangle_core::families::{family_closed_forms, slocc_family, w_class, w_class_linear_entropy, w_two_tangle, FamilyParams, SloccFamily};
use entangle_core::invariants::{invariants3, invariants4, kme_from_invariants3, kme_from_invariants4};
use entangle_core::measures::{
    bipartite_concurrence_pure, cut_negativity, kme_concurrence_pure, negativity, negativity_profile, negativity_trace_norm,
    nme_lower_bound, three_tangle_with_pivot, two_tangle,
};
use entangle_core::partitions::{k_partitions, stirling2};
use entangle_core::qstate::{
    hermitian_eigenvalues, hermiticity_residual, partial_trace, partial_transpose_sites, purity, schmidt_spectrum,
};
use entangle_core::verify::random::{random_mixed, random_schmidt_rank2, random_unitary2, rng_from_seed};
use entangle_core::{PureState, SubsystemSet, C64};

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect::<Vec<_>>())
        .prop_filter("norm bounded away from zero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 0.05)
}

fn pure_state(n_lo: usize, n_hi: usize) -> impl Strategy<Value = PureState> {
    (n_lo..=n_hi).prop_flat_map(|n| amplitudes(n).prop_map(move |a| PureState::new(a, n).unwrap()))
}

/// A pure state with a non-empty proper subset of its sites.
fn state_and_cut(n_lo: usize, n_hi: usize) -> impl Strategy<Value = (PureState, SubsystemSet)> {
    pure_state(n_lo, n_hi).prop_flat_map(|psi| {
        let n = psi.num_sites();
        (Just(psi), 1u64..(1u64 << n) - 1).prop_map(|(psi, mask)| (psi, SubsystemSet::from_mask(mask).unwrap()))
    })
}

fn complex(bound: f64) -> impl Strategy<Value = C64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| C64::new(re, im))
}

fn rotate_every_site(psi: &PureState, seed: u64) -> PureState {
    let mut rng = rng_from_seed(seed);
    let mut out = psi.clone();
    for site in 0..psi.num_sites() {
        out = out.apply_local_unitary(site, &random_unitary2(&mut rng)).unwrap();
    }
    out
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// `S(n, k)` by the explicit alternating sum, independent of the triangle recurrence.
fn stirling_explicit(n: u32, k: u32) -> u64 {
    let binom = |n: u32, r: u32| (0..r).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128);
    let sum: i128 = (0..=k).map(|j| (-1i128).pow(j) * binom(k, j) * ((k - j) as i128).pow(n)).sum();
    let fact: i128 = (1..=k as i128).product();
    (sum / fact) as u64
}

/// Bell numbers from the Bell triangle.
fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 1..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    *row.last().unwrap()
}

#[test]
fn partition_counts_match_stirling_and_bell() {
    for n in 1..=8usize {
        let mut total = 0;
        for k in 1..=n {
            let parts = k_partitions(n, k).unwrap();
            assert_eq!(parts.len() as u64, stirling_explicit(n as u32, k as u32), "n={n} k={k}");
            assert_eq!(parts.len() as u64, stirling2(n, k));
            let distinct: std::collections::BTreeSet<_> = parts.iter().collect();
            assert_eq!(distinct.len(), parts.len());
            for p in &parts {
                assert_eq!(p.num_blocks(), k);
                assert_eq!(&p.canonicalized(), p);
            }
            total += parts.len() as u64;
        }
        assert_eq!(total, bell(n), "n={n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn purity_complement_symmetry((psi, a) in state_and_cut(2, 6)) {
        let b = a.complement(psi.num_sites()).unwrap();
        let rho = psi.density();
        let pa = purity(&partial_trace(&rho, &a).unwrap());
        let pb = purity(&partial_trace(&rho, &b).unwrap());
        prop_assert!(close(pa, pb, 1e-10), "{pa} vs {pb}");
    }

    #[test]
    fn schmidt_spectrum_is_side_independent((psi, a) in state_and_cut(2, 6)) {
        let b = a.complement(psi.num_sites()).unwrap();
        let sa = schmidt_spectrum(&psi, &a).unwrap().coefficients;
        let sb = schmidt_spectrum(&psi, &b).unwrap().coefficients;
        let len = sa.len().max(sb.len());
        for i in 0..len {
            let x = sa.get(i).copied().unwrap_or(0.0);
            let y = sb.get(i).copied().unwrap_or(0.0);
            prop_assert!(close(x, y, 1e-10));
        }
    }

    #[test]
    fn partial_transpose_properties(n in 2usize..=4, rank in 1usize..=3, seed in any::<u64>(), mask_seed in any::<u64>()) {
        let rho = random_mixed(n, rank, seed).unwrap().density;
        let sites = SubsystemSet::from_mask(1 + mask_seed % ((1u64 << n) - 1)).unwrap();
        let pt = partial_transpose_sites(&rho, &sites).unwrap();
        prop_assert!((pt.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(hermiticity_residual(&pt) < 1e-12);
        // Oracle: swap the row and column bits of the transposed sites.
        let bits = sites.indices().iter().fold(0usize, |acc, &s| acc | 1 << (n - 1 - s));
        let swap = |m: &nalgebra::DMatrix<C64>| {
            nalgebra::DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[((i & !bits) | (j & bits), (j & !bits) | (i & bits))])
        };
        prop_assert!((&pt - swap(rho.entries())).norm() < 1e-15);
        prop_assert!((swap(&pt) - rho.entries()).norm() < 1e-15);
    }

    #[test]
    fn eigenvalues_sum_to_trace(n in 1usize..=5, rank in 1usize..=4, seed in any::<u64>()) {
        let rho = random_mixed(n, rank.min(1 << n), seed).unwrap().density;
        let ev = hermitian_eigenvalues(rho.entries()).unwrap();
        prop_assert!((ev.iter().sum::<f64>() - rho.trace()).abs() < 1e-8);
    }

    #[test]
    fn rms_negativity_equals_full_concurrence(psi in pure_state(2, 6)) {
        let n = psi.num_sites();
        let c = kme_concurrence_pure(&psi, n).unwrap().value;
        let rms = negativity_profile(&psi.density()).unwrap().quadratic_mean();
        prop_assert!(close(c, rms, 1e-9), "{c} vs {rms}");
    }

    #[test]
    fn three_qubit_negativity_relations(psi in pure_state(3, 3)) {
        let profile = negativity_profile(&psi.density()).unwrap();
        prop_assert!(close(kme_concurrence_pure(&psi, 2).unwrap().value, profile.min(), 1e-9));
        prop_assert!(close(kme_concurrence_pure(&psi, 3).unwrap().value, profile.quadratic_mean(), 1e-9));
    }

    #[test]
    fn mixture_bound_never_exceeds_ensemble_average(n in 2usize..=4, rank in 1usize..=4, seed in any::<u64>()) {
        let e = random_mixed(n, rank, seed).unwrap();
        let avg: f64 = e.weights.iter().zip(&e.states).map(|(p, s)| p * kme_concurrence_pure(s, n).unwrap().value).sum();
        prop_assert!(nme_lower_bound(&e.density).unwrap() <= avg + 1e-9);
    }

    #[test]
    fn rank_two_negativity_equals_concurrence(n in 2usize..=6, mask_seed in any::<u64>(), seed in any::<u64>()) {
        let mask = 1 + mask_seed % ((1u64 << n) - 2);
        let side = SubsystemSet::from_mask(mask).unwrap();
        let psi = random_schmidt_rank2(n, &side, seed).unwrap();
        let neg = cut_negativity(&psi.density(), &side).unwrap();
        let conc = bipartite_concurrence_pure(&psi, &side).unwrap();
        prop_assert!(close(neg, conc, 1e-9), "{neg} vs {conc}");
    }

    #[test]
    fn measures_are_local_unitary_invariant(psi in pure_state(2, 5), seed in any::<u64>()) {
        let n = psi.num_sites();
        let phi = rotate_every_site(&psi, seed);
        for k in 2..=n {
            let a = kme_concurrence_pure(&psi, k).unwrap().value;
            let b = kme_concurrence_pure(&phi, k).unwrap().value;
            prop_assert!(close(a, b, 1e-8), "k={k}: {a} vs {b}");
        }
        let na = negativity_profile(&psi.density()).unwrap().per_site;
        let nb = negativity_profile(&phi.density()).unwrap().per_site;
        for (x, y) in na.iter().zip(&nb) {
            prop_assert!(close(*x, *y, 1e-8));
        }
        if n == 3 {
            let (a, b) = (invariants3(&psi).unwrap(), invariants3(&phi).unwrap());
            prop_assert!(close(a.i2, b.i2, 1e-8));
            for (x, y) in a.i4.iter().zip(&b.i4) {
                prop_assert!(close(*x, *y, 1e-8));
            }
            prop_assert!(close(three_tangle_with_pivot(&psi, 0).unwrap(), three_tangle_with_pivot(&phi, 0).unwrap(), 1e-8));
        }
        if n == 4 {
            let (a, b) = (invariants4(&psi).unwrap(), invariants4(&phi).unwrap());
            for (x, y) in a.i4.iter().zip(&b.i4) {
                prop_assert!(close(*x, *y, 1e-8));
            }
        }
    }

    #[test]
    fn optimal_partition_is_reproducible(psi in pure_state(3, 5)) {
        for k in 2..psi.num_sites() {
            let a = kme_concurrence_pure(&psi, k).unwrap();
            let b = kme_concurrence_pure(&psi.clone(), k).unwrap();
            prop_assert_eq!(a.optimal_partition, b.optimal_partition);
        }
    }

    #[test]
    fn invariant_formulas_match_direct_values(psi3 in pure_state(3, 3), psi4 in pure_state(4, 4)) {
        let (c2, c3) = kme_from_invariants3(&invariants3(&psi3).unwrap());
        prop_assert!(close(c2, kme_concurrence_pure(&psi3, 2).unwrap().value, 1e-9));
        prop_assert!(close(c3, kme_concurrence_pure(&psi3, 3).unwrap().value, 1e-9));
        let (d2, d3, d4) = kme_from_invariants4(&invariants4(&psi4).unwrap());
        for (k, v) in [(2, d2), (3, d3), (4, d4)] {
            prop_assert!(close(v, kme_concurrence_pure(&psi4, k).unwrap().value, 1e-9), "k={k}");
        }
    }

    #[test]
    fn three_tangle_does_not_depend_on_pivot(psi in pure_state(3, 3)) {
        let t0 = three_tangle_with_pivot(&psi, 0).unwrap();
        for pivot in 1..3 {
            prop_assert!(close(t0, three_tangle_with_pivot(&psi, pivot).unwrap(), 1e-8));
        }
        prop_assert!(t0 > -1e-8 && t0 < 1.0 + 1e-8);
    }

    #[test]
    fn negativity_routes_agree(n in 2usize..=4, rank in 1usize..=4, seed in any::<u64>()) {
        let rho = random_mixed(n, rank, seed).unwrap().density;
        for site in 0..n {
            let a = negativity(&rho, site, 2).unwrap();
            let b = negativity_trace_norm(&rho, site, 2).unwrap();
            prop_assert!(close(a, b, 1e-10));
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&a));
        }
    }

    #[test]
    fn family_closed_forms_match_numerics(id in 1u8..=9, a in complex(1.4), b in complex(1.4), c in complex(1.4), d in complex(1.4)) {
        let params = FamilyParams::new(SloccFamily::from_id(id).unwrap(), a, b, c, d);
        let psi = slocc_family(&params).unwrap();
        let pred = family_closed_forms(&params).unwrap();
        let values = [2, 3, 4].map(|k| kme_concurrence_pure(&psi, k).unwrap().value);
        prop_assert!(close(values[0], pred.c2, 1e-8), "C2 {values:?} {pred:?}");
        prop_assert!(close(values[1], pred.c3, 1e-8), "C3 {values:?} {pred:?}");
        prop_assert!(close(values[2], pred.c4, 1e-8), "C4 {values:?} {pred:?}");
        let negs = negativity_profile(&psi.density()).unwrap();
        for (x, y) in negs.per_site.iter().zip(pred.negativities) {
            prop_assert!(close(*x, y, 1e-8));
        }
        if pred.c2_equals_min_n.asserted() {
            prop_assert!(close(values[0], negs.min(), 1e-8));
        }
    }

    #[test]
    fn w_class_block_formulas(n in 3usize..=7, coeffs in prop::collection::vec(complex(1.0), 7), mask_seed in any::<u64>()) {
        let coeffs: Vec<C64> = coeffs.into_iter().take(n).collect();
        prop_assume!(coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>() > 0.05);
        let psi = w_class(&coeffs).unwrap();
        let rho = psi.density();
        let block = SubsystemSet::from_mask(1 + mask_seed % ((1u64 << n) - 1)).unwrap();
        let direct = 1.0 - purity(&partial_trace(&rho, &block).unwrap());
        prop_assert!(close(w_class_linear_entropy(&coeffs, &block).unwrap(), direct, 1e-10));
        let (i, j) = (block.indices()[0], (block.indices()[0] + 1) % n);
        let (i, j) = (i.min(j), i.max(j));
        let pair = partial_trace(&rho, &SubsystemSet::new(vec![i, j]).unwrap()).unwrap();
        prop_assert!(close(w_two_tangle(&coeffs, i + 1, j + 1).unwrap(), two_tangle(&pair).unwrap(), 1e-8));
    }
}
