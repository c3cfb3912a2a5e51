//! Statistical agreement between the trajectory simulator and the averaged
//! states. Gates are 4σ (5σ for the curve) under a binomial error model.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqclass::measure::{disturbed_ensemble, second_povm, weak_two_qubit_povm, FirstOutcome, UpdatedState, WeakParams};
use seqclass::simulate::{estimate_curve, run_trajectories};
use seqclass::{analytic_state, monte_carlo_state, schur_transform, Hypothesis};

fn within(observed: u64, n: u64, q: f64, sigmas: f64) -> bool {
    if n == 0 {
        return true;
    }
    let freq = observed as f64 / n as f64;
    let sd = (q * (1.0 - q) / n as f64).sqrt();
    (freq - q).abs() <= sigmas * sd + 1e-12
}

#[test]
fn first_outcome_marginals_per_hypothesis() {
    let params = WeakParams::new(0.6, 0.15).unwrap();
    let s = run_trajectories(params, 400_000, 11).unwrap();
    let povm = weak_two_qubit_povm(params).unwrap();
    for h in Hypothesis::THREE_QUBIT {
        let rho = analytic_state::<f64>(h.prefix());
        let q = povm.element("minus").unwrap().matrix().trace_product(rho.matrix()).re;
        let n = s.hypothesis_count(h);
        let k = s.first_count(h, FirstOutcome::Minus);
        assert!(within(k, n, q, 4.0), "{h}: {k}/{n} vs {q}");
    }
}

#[test]
fn second_outcome_conditionals() {
    let params = WeakParams::new(0.7, 0.1).unwrap();
    let s = run_trajectories(params, 400_000, 12).unwrap();
    for outcome in FirstOutcome::BOTH {
        let ensemble = disturbed_ensemble(params, outcome).unwrap();
        let povm = second_povm(params, outcome).unwrap();
        for entry in &ensemble.entries {
            let UpdatedState::State(rho) = &entry.state else { continue };
            let n = s.first_count(entry.hypothesis, outcome);
            for (j, el) in povm.elements().iter().enumerate() {
                let q = el.op.matrix().trace_product(rho.matrix()).re.clamp(0.0, 1.0);
                let k = s.second_count(entry.hypothesis, outcome, Hypothesis::THREE_QUBIT[j]);
                assert!(within(k, n, q, 4.0), "{} {outcome} -> {}: {k}/{n} vs {q}", entry.hypothesis, el.label);
            }
        }
    }
}

#[test]
fn curve_is_reproducible_and_close() {
    let a = estimate_curve(5, 100_000, 21).unwrap();
    let b = estimate_curve(5, 100_000, 21).unwrap();
    assert_eq!(a, b);
    for s in &a {
        assert!((s.p1_hat - s.p1_analytic).abs() <= 5.0 * s.p1_stderr, "{s:?}");
        assert!((s.p2_hat - s.p2_analytic).abs() <= 5.0 * s.p2_stderr, "{s:?}");
    }
    assert_eq!(a.first().unwrap().params.alpha, 0.0);
    assert_eq!(a.last().unwrap().params.alpha, 1.0);
}

#[test]
fn sampled_states_approach_averages() {
    let t = schur_transform::<f64>(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for h in Hypothesis::THREE_QUBIT {
        let mc = monte_carlo_state::<f64, _>(h, 100_000, &mut rng).unwrap();
        let exact = analytic_state::<f64>(h);
        let diff = t.to_schur(mc.matrix()).max_abs_diff(exact.matrix());
        assert!(diff < 1.5e-2, "{h}: {diff}");
    }
}
