use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use schmidt_bench::benchmark::{
    certify, certify_with_tolerance, fidelity_direct, fidelity_via_choi, process_fidelity, process_fidelity_lower_bound,
    schmidt_threshold, GateTask, SIMULATION_TOL,
};
use schmidt_bench::channels::{dephasing, depolarizing, random_channel, saturating_channel};
use schmidt_bench::linalg::ComplexMatrix;
use schmidt_bench::states::Mode;
use schmidt_bench::QuantumChannel;

fn memory(d: usize) -> GateTask {
    GateTask::identity(d, Mode::Qudit).unwrap()
}

fn random(d: usize, n: usize, seed: u64) -> QuantumChannel {
    random_channel(d, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direct_and_choi_paths_agree(d in 2usize..=4, n in 1usize..=4, seed in any::<u64>()) {
        let ch = random(d, n, seed);
        let direct = fidelity_direct(&ch, &memory(d)).unwrap().f_avg;
        let via = fidelity_via_choi(&ch, &memory(d)).unwrap();
        prop_assert!((direct - via).abs() < 1e-10);
    }

    #[test]
    fn fidelity_is_a_probability(d in 2usize..=4, n in 1usize..=4, seed in any::<u64>()) {
        let ch = random(d, n, seed);
        let r = fidelity_direct(&ch, &memory(d)).unwrap();
        for (_, f) in &r.per_state {
            prop_assert!(*f >= -1e-12 && *f <= 1.0 + 1e-12);
        }
        prop_assert!((r.f_avg - (r.f_z + r.f_x) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn process_fidelity_bound_holds(d in 2usize..=4, n in 1usize..=4, seed in any::<u64>()) {
        let ch = random(d, n, seed);
        let report = fidelity_direct(&ch, &memory(d)).unwrap();
        let fp = process_fidelity(&ch, &memory(d)).unwrap();
        prop_assert!(fp + 1e-12 >= process_fidelity_lower_bound(&report));
    }

    #[test]
    fn unitary_target_matches_undone_channel(d in 2usize..=3, n in 1usize..=3, seed in any::<u64>()) {
        // running E then U against target U equals running E against identity
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let u = ComplexMatrix::random_unitary(d, &mut rng);
        let ch = random(d, n, seed);
        let composed = ch.followed_by_unitary(&u).unwrap();
        let task = GateTask::with_target(u, Mode::Qudit).unwrap();
        let a = fidelity_direct(&composed, &task).unwrap().f_avg;
        let b = fidelity_direct(&ch, &memory(d)).unwrap().f_avg;
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn certified_number_never_exceeds_kraus_rank_bound(d in 2usize..=4, n in 1usize..=4, seed in any::<u64>()) {
        let ch = random(d, n, seed);
        let f = fidelity_direct(&ch, &memory(d)).unwrap().f_avg;
        let cert = certify_with_tolerance(d, f, SIMULATION_TOL).unwrap();
        prop_assert!(cert.certified_schmidt_number <= ch.schmidt_number_upper_bound().unwrap());
    }

    #[test]
    fn certification_is_monotone(d in 2usize..=8, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let s_lo = certify(d, lo).unwrap().certified_schmidt_number;
        let s_hi = certify(d, hi).unwrap().certified_schmidt_number;
        prop_assert!(s_lo <= s_hi);
        prop_assert!(s_hi <= d);
    }

    #[test]
    fn depolarizing_fidelity_is_linear(d in 2usize..=5, p in 0.0f64..=1.0) {
        let f = fidelity_direct(&depolarizing(d, p).unwrap(), &memory(d)).unwrap().f_avg;
        prop_assert!((f - (1.0 - p + p / d as f64)).abs() < 1e-12);
    }

    #[test]
    fn dephasing_spares_z_basis(d in 2usize..=5, p in 0.0f64..=1.0) {
        let r = fidelity_direct(&dephasing(d, p).unwrap(), &memory(d)).unwrap();
        prop_assert!((r.f_z - 1.0).abs() < 1e-12);
        prop_assert!(r.f_x <= 1.0 + 1e-12);
    }
}

#[test]
fn saturating_channels_sit_on_thresholds() {
    for d in 2..=6 {
        for k in 1..d {
            let f = fidelity_direct(&saturating_channel(d, k).unwrap(), &memory(d)).unwrap().f_avg;
            let t = schmidt_threshold(d, k).unwrap();
            assert!((f - t).abs() < 1e-12);
            // touching a threshold is not exceeding it
            let cert = certify(d, t).unwrap();
            assert_eq!(cert.certified_schmidt_number, k);
        }
    }
}

#[test]
fn thresholds_interleave_uniform_and_process_limits() {
    use schmidt_bench::benchmark::informational_limits;
    for d in 2..=8 {
        for k in 1..d {
            let f = schmidt_threshold(d, k).unwrap();
            let (uniform, process) = informational_limits(d, k).unwrap();
            // two-basis threshold dominates the corresponding uniform limit
            assert!(f >= uniform - 1e-15);
            assert!(2.0 * f - 1.0 <= process + 1e-15);
        }
    }
}
