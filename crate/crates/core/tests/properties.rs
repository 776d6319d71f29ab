mod common;

use std::cmp::Ordering;
use std::sync::Arc;

use common::{brute_energy, brute_moment, dense, random_coeffs, random_exact_set};
use freqlab_core::diagnostics::{strip_bounds, HyperIndex, Verdict};
use freqlab_core::dirichlet::{bohr_lift, even_norm, p_norm_qmc, DirichletPolynomial, QmcConfig};
use freqlab_core::energy::{additive_energy, SubsetMode, DEFAULT_BUDGET};
use freqlab_core::exactreal::{rat, rat_int};
use freqlab_core::frequency::{
    gen_bourgain, gen_log_integers, gen_qli_formal, Frequency, TailEstimate,
};
use freqlab_core::lambda::{
    interpolate_bound, lambda_lower_ascent, lambda_lower_energy, lambda_upper_nikolskii,
    AscentConfig, Bound, BoundMethod, BoundValue, Exponent, LambdaBoundReport,
};
use freqlab_core::verify::random_polynomial;
use proptest::prelude::*;

fn freq_of(seed: u64, i: u64, max_n: usize) -> Arc<Frequency> {
    let (reg, vals) = random_exact_set(seed, i, max_n);
    Arc::new(Frequency::new(reg, vals, "random").unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_matches_brute_force(seed in any::<u64>(), k in 1u32..=3) {
        let (reg, vals) = random_exact_set(seed, 0, 7);
        let vecs: Vec<_> = vals.iter().map(|v| dense(&reg, v)).collect();
        prop_assert_eq!(additive_energy(&reg, &vals, k, DEFAULT_BUDGET).unwrap(), brute_energy(&vecs, k));
    }

    #[test]
    fn even_norm_matches_brute_force(seed in any::<u64>(), k in 1u32..=3) {
        let f = freq_of(seed, 1, 6);
        let n = f.len();
        let coeffs = random_coeffs(seed, 1, n, 3);
        let d = DirichletPolynomial::new(f.clone(), (0..n).zip(coeffs.iter().cloned()).collect()).unwrap();
        let vecs: Vec<_> = f.values().iter().map(|v| dense(f.registry(), v)).collect();
        prop_assert_eq!(even_norm(&d, k, DEFAULT_BUDGET).unwrap(), brute_moment(&vecs, &coeffs, k));
    }

    #[test]
    fn corona_identity(seed in any::<u64>(), k in 1u32..=3) {
        let f = freq_of(seed, 2, 7);
        let ones = DirichletPolynomial::ones(f.clone(), &(0..f.len()).collect::<Vec<_>>()).unwrap();
        let e = additive_energy(f.registry(), f.values(), k, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(even_norm(&ones, k, DEFAULT_BUDGET).unwrap(), rat_int(e as i64));
    }

    #[test]
    fn qli_energy_closed_form(n in 1u64..=60) {
        let f = gen_qli_formal(&[n], 100).unwrap();
        prop_assert_eq!(additive_energy(f.registry(), f.values(), 2, DEFAULT_BUDGET).unwrap(), (2 * n * n - n) as u128);
    }

    #[test]
    fn seeded_outputs_repeat(seed in any::<u64>(), index in 0u64..1000) {
        let f = Arc::new(gen_log_integers(30).unwrap());
        let a = random_polynomial(&f, seed, index, 6, 3).unwrap();
        let b = random_polynomial(&f, seed, index, 6, 3).unwrap();
        prop_assert_eq!(a.terms(), b.terms());
        let cfg = QmcConfig { points: 1 << 10, ..Default::default() };
        let lift = bohr_lift(&a).unwrap();
        if lift.dim() <= cfg.dimension_cap {
            prop_assert_eq!(p_norm_qmc(&lift, 1.5, &cfg, seed).unwrap(), p_norm_qmc(&lift, 1.5, &cfg, seed).unwrap());
        }
        let g1 = gen_bourgain(&rat(5, 2), 6, seed, 1000).unwrap();
        let g2 = gen_bourgain(&rat(5, 2), 6, seed, 1000).unwrap();
        let coeffs = |f: &Frequency| f.values().iter().map(|v| v.coeffs().to_vec()).collect::<Vec<_>>();
        prop_assert_eq!(coeffs(&g1), coeffs(&g2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lambda_bounds_sandwich(seed in any::<u64>()) {
        let f = freq_of(seed, 3, 8);
        let idx: Vec<usize> = (0..f.len()).collect();
        let (two, four) = (Exponent::int(2), Exponent::int(4));
        let upper = lambda_upper_nikolskii(idx.len(), &two, &four).unwrap();
        let mut energy = lambda_lower_energy(&f, &idx, 2, SubsetMode::Exact, DEFAULT_BUDGET).unwrap();
        energy.upper = Some(upper.clone());
        prop_assert_eq!(energy.is_consistent(), Some(true));
        prop_assert_ne!(energy.lower.value.certified_cmp(&BoundValue::one(), 1024), Some(Ordering::Less));
        let cfg = AscentConfig { restarts: 3, max_iters: 60, seed, ..Default::default() };
        let mut ascent = lambda_lower_ascent(&f, &idx, 4, &cfg).unwrap();
        prop_assert_ne!(ascent.lower.value.certified_cmp(&energy.lower.value, 1024), Some(Ordering::Less));
        ascent.upper = Some(upper);
        prop_assert_eq!(ascent.is_consistent(), Some(true));
    }
}

/// Exponents in quarters: (p2, q2) → (pb, qb) → (pc, qc) inside the transfer domain.
fn transfer_chain() -> impl Strategy<Value = [i64; 6]> {
    (4i64..=8)
        .prop_flat_map(|p2| (Just(p2), p2 + 1..=40))
        .prop_flat_map(|(p2, q2)| (Just(p2), Just(q2), 4..=p2))
        .prop_flat_map(|(p2, q2, pb)| (Just(p2), Just(q2), Just(pb), pb + 1..=q2))
        .prop_flat_map(|(p2, q2, pb, qb)| (Just(p2), Just(q2), Just(pb), Just(qb), 4..=pb))
        .prop_flat_map(|(p2, q2, pb, qb, pc)| (Just([p2, q2, pb, qb, pc]), pc..=qb))
        .prop_map(|(a, qc)| [a[0], a[1], a[2], a[3], a[4], qc])
}

fn quarter(x: i64) -> Exponent {
    Exponent::Finite(rat(x, 4))
}

fn source(n: usize, p: &Exponent, q: &Exponent) -> LambdaBoundReport {
    LambdaBoundReport {
        set: format!("#A={n}"),
        set_size: n,
        p: p.clone(),
        q: q.clone(),
        lower: Bound {
            value: BoundValue::one(),
            method: BoundMethod::Trivial,
            caveats: vec![],
        },
        upper: Some(lambda_upper_nikolskii(n, p, q).unwrap()),
        witness: None,
    }
}

proptest! {
    #[test]
    fn transfer_is_idempotent_and_composes(n in 1usize..64, e in transfer_chain()) {
        let [p2, q2, pb, qb, pc, qc] = e.map(quarter);
        let s = source(n, &p2, &q2);
        let same = interpolate_bound(&s, &p2, &q2).unwrap();
        prop_assert_eq!(&same.upper.as_ref().unwrap().value, &s.upper.as_ref().unwrap().value);
        let mid = interpolate_bound(&s, &pb, &qb).unwrap();
        let two_step = interpolate_bound(&mid, &pc, &qc).unwrap();
        let direct = interpolate_bound(&s, &pc, &qc).unwrap();
        prop_assert_eq!(&two_step.upper.unwrap().value, &direct.upper.unwrap().value);
    }

    #[test]
    fn transferred_nikolskii_never_beats_direct(n in 1usize..64, e in transfer_chain()) {
        let [p2, q2, _, _, pc, qc] = e.map(quarter);
        prop_assume!(pc != qc);
        let moved = interpolate_bound(&source(n, &p2, &q2), &pc, &qc).unwrap().upper.unwrap().value;
        let direct = lambda_upper_nikolskii(n, &pc, &qc).unwrap().value;
        prop_assert_ne!(direct.certified_cmp(&moved, 1024), Some(Ordering::Greater));
    }

    #[test]
    fn strip_intervals_are_monotone(
        l in 0.0f64..2.0,
        tails in prop::collection::vec((2u32..=4, 0.0f64..0.5, any::<bool>()), 0..3),
        grid in prop::collection::btree_set(4i64..=24, 1..8),
    ) {
        let hyper: Vec<HyperIndex> = tails
            .iter()
            .map(|&(k, t, exact)| HyperIndex {
                k,
                profile: TailEstimate { sequence: vec![(1, t)], window: 1, tail_max: t },
                tail_exact: exact,
                threshold: 0.02,
                verdict: Verdict::Inconclusive,
                growth_guard: 0.0,
            })
            .collect();
        let grid: Vec<_> = grid.into_iter().map(|x| rat(x, 4)).collect();
        let (rows, (lo, hi)) = strip_bounds(l, &grid, &hyper).unwrap();
        prop_assert_eq!(rows.len(), grid.len());
        for w in rows.windows(2) {
            prop_assert!(w[0].p < w[1].p);
            prop_assert!(w[1].upper <= w[0].upper + 1e-12);
        }
        for r in &rows {
            prop_assert!(r.lower <= r.upper + 1e-12);
            if r.p >= rat_int(2) {
                prop_assert_eq!(r.upper, l / 2.0);
            }
        }
        prop_assert_eq!(lo, rat_int(1));
        prop_assert!(hi >= rat_int(1) && hi <= rat_int(2));
    }
}
