//! Trajectory-level Monte Carlo of the two-stage protocol.
//!
//! Each trajectory draws a hypothesis and two Haar-random qubits, prepares the
//! pure product state, samples the first outcome from `π± ⊗ 𝟙`, applies the
//! Lüders update to the pure state and samples the second outcome. Nothing
//! here uses the averaged density matrices, so the estimates are an
//! independent check of the closed forms.
//!
//! Runs are split into chunks of [`CHUNK`] trajectories and chunk `c` draws
//! from ChaCha stream `c` of the seed, which makes results independent of the
//! thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix};
use crate::measure::{second_povm, FirstOutcome, WeakParams};
use crate::scalar::{Scalar, C};
use crate::schur::schur_transform;
use crate::states::{haar_sample_qubit, product_state, Hypothesis, PureQubit, CHUNK};
use crate::tradeoff::{optimize_beta, p_first, p_second_closed};

/// One run of the protocol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub hypothesis: Hypothesis,
    /// Qubit states in positions 1, 2, 3.
    pub qubits: [PureQubit<f64>; 3],
    pub first_outcome: FirstOutcome,
    pub second_outcome: Hypothesis,
    pub first_correct: bool,
    pub second_correct: bool,
}

/// Operators of the protocol in the computational basis.
#[derive(Clone, Debug)]
pub struct Protocol {
    params: WeakParams<f64>,
    /// `√π± ⊗ 𝟙`, indexed as [`outcome_index`].
    kraus: [ComplexMatrix<f64>; 2],
    /// Second measurement per first outcome; `None` when that outcome cannot
    /// occur.
    second: [Option<[ComplexMatrix<f64>; 4]>; 2],
}

/// `Plus → 0`, `Minus → 1`.
pub fn outcome_index(outcome: FirstOutcome) -> usize {
    match outcome {
        FirstOutcome::Plus => 0,
        FirstOutcome::Minus => 1,
    }
}

impl Protocol {
    pub fn new(params: WeakParams<f64>) -> Result<Self> {
        let t2 = schur_transform::<f64>(2)?;
        let t3 = schur_transform::<f64>(3)?;
        let id2 = ComplexMatrix::identity(2);
        let mut kraus = [ComplexMatrix::zeros(8, 8), ComplexMatrix::zeros(8, 8)];
        let mut second = [None, None];
        for outcome in FirstOutcome::BOTH {
            let i = outcome_index(outcome);
            let form = params.branch(outcome);
            // the element is diagonal in the Schur basis
            let y = form.identity.max(0.0).sqrt();
            let root = ComplexMatrix::diagonal(&[y, y, y, (form.projector + form.identity).max(0.0).sqrt()]);
            kraus[i] = tensor(&t2.to_computational(&root), &id2);
            if form.outcome_probability() > <f64 as Scalar>::ZERO_PROBABILITY {
                let povm = second_povm(params, outcome)?;
                let els: Vec<_> = povm.elements().iter().map(|e| t3.to_computational(e.op.matrix())).collect();
                second[i] = Some(els.try_into().map_err(|_| Error::Internal("second measurement size".into()))?);
            }
        }
        Ok(Self { params, kraus, second })
    }

    pub fn params(&self) -> WeakParams<f64> {
        self.params
    }

    /// Samples one trajectory.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Trajectory {
        let hypothesis = Hypothesis::THREE_QUBIT[rng.random_range(0..4)];
        let pair = [haar_sample_qubit::<f64, _>(rng), haar_sample_qubit::<f64, _>(rng)];
        let ket = product_state(hypothesis, &pair);

        let plus = self.kraus[0].mat_vec(&ket);
        let p_plus = norm_sqr(&plus);
        let u: f64 = rng.random();
        let (first_outcome, branch) =
            if u < p_plus { (FirstOutcome::Plus, plus) } else { (FirstOutcome::Minus, self.kraus[1].mat_vec(&ket)) };
        let scale = 1.0 / norm_sqr(&branch).sqrt();
        let post: Vec<C<f64>> = branch.iter().map(|z| z * scale).collect();

        let elements =
            self.second[outcome_index(first_outcome)].as_ref().expect("sampled outcomes have positive probability");
        let v: f64 = rng.random();
        let mut acc = 0.0;
        let mut second_index = 3;
        for (k, el) in elements.iter().enumerate() {
            acc += el.expectation(&post).re;
            if v < acc {
                second_index = k;
                break;
            }
        }
        let second_outcome = Hypothesis::THREE_QUBIT[second_index];
        let pattern = hypothesis.pattern();
        let qubits = [pair[pattern[0]], pair[pattern[1]], pair[pattern[2]]];
        let first_correct = match first_outcome {
            FirstOutcome::Plus => pattern[1] == 0,
            FirstOutcome::Minus => pattern[1] == 1,
        };
        Trajectory {
            hypothesis,
            qubits,
            first_outcome,
            second_outcome,
            first_correct,
            second_correct: second_outcome == hypothesis,
        }
    }
}

fn norm_sqr(v: &[C<f64>]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Tally of a run: `counts[hypothesis][first][second]` with hypotheses and
/// second outcomes in the order `000, 001, 010, 011` and first outcomes as in
/// [`outcome_index`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub params: WeakParams<f64>,
    pub seed: u64,
    pub n_trajectories: u64,
    pub p1_hat: f64,
    pub p1_stderr: f64,
    pub p2_hat: f64,
    pub p2_stderr: f64,
    /// Closed-form values at the same parameters, for overlay.
    pub p1_analytic: f64,
    pub p2_analytic: f64,
    pub counts: [[[u64; 4]; 2]; 4],
}

type Counts = [[[u64; 4]; 2]; 4];

fn binomial(successes: u64, n: u64) -> (f64, f64) {
    let p = successes as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

impl RunSummary {
    fn from_counts(params: WeakParams<f64>, seed: u64, counts: Counts) -> Result<Self> {
        let n: u64 = counts.iter().flatten().flatten().sum();
        let mut first = 0;
        let mut second = 0;
        for (h, hyp) in Hypothesis::THREE_QUBIT.iter().enumerate() {
            let correct_first = if hyp.pattern()[1] == 0 { 0 } else { 1 };
            first += counts[h][correct_first].iter().sum::<u64>();
            second += counts[h][0][h] + counts[h][1][h];
        }
        let (p1_hat, p1_stderr) = binomial(first, n);
        let (p2_hat, p2_stderr) = binomial(second, n);
        Ok(Self {
            params,
            seed,
            n_trajectories: n,
            p1_hat,
            p1_stderr,
            p2_hat,
            p2_stderr,
            p1_analytic: p_first(params.alpha)?,
            p2_analytic: p_second_closed(params),
            counts,
        })
    }

    /// Trajectories with the given hypothesis.
    pub fn hypothesis_count(&self, h: Hypothesis) -> u64 {
        self.counts[h.index()].iter().flatten().sum()
    }

    /// Trajectories with hypothesis `h` and first outcome `outcome`.
    pub fn first_count(&self, h: Hypothesis, outcome: FirstOutcome) -> u64 {
        self.counts[h.index()][outcome_index(outcome)].iter().sum()
    }

    /// Trajectories with hypothesis `h`, first outcome `outcome` and second
    /// outcome `second`.
    pub fn second_count(&self, h: Hypothesis, outcome: FirstOutcome, second: Hypothesis) -> u64 {
        self.counts[h.index()][outcome_index(outcome)][second.index()]
    }
}

fn run_chunks(protocol: &Protocol, n: u64, seed: u64, stream_base: u64) -> Counts {
    let chunk = CHUNK as u64;
    let n_chunks = n.div_ceil(chunk);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_base | c);
            let mut counts: Counts = [[[0; 4]; 2]; 4];
            for _ in 0..chunk.min(n - c * chunk) {
                let t = protocol.sample(&mut rng);
                counts[t.hypothesis.index()][outcome_index(t.first_outcome)][t.second_outcome.index()] += 1;
            }
            counts
        })
        .reduce(
            || [[[0; 4]; 2]; 4],
            |mut a, b| {
                for (x, y) in a.iter_mut().flatten().flatten().zip(b.iter().flatten().flatten()) {
                    *x += y;
                }
                a
            },
        )
}

/// Runs `n` trajectories at `params`.
pub fn run_trajectories(params: WeakParams<f64>, n: u64, seed: u64) -> Result<RunSummary> {
    if n == 0 {
        return Err(Error::OutOfRange { name: "n", value: 0.0, range: "[1, ∞)" });
    }
    let protocol = Protocol::new(params)?;
    RunSummary::from_counts(params, seed, run_chunks(&protocol, n, seed, 0))
}

/// Runs `n_per_point` trajectories at each of `n_points` points of the
/// optimal tradeoff, `p_first` uniform on `[1/2, 5/8]`. Point `i` uses ChaCha
/// streams `(i << 32) | chunk`.
pub fn estimate_curve(n_points: usize, n_per_point: u64, seed: u64) -> Result<Vec<RunSummary>> {
    if n_points < 2 {
        return Err(Error::OutOfRange { name: "n_points", value: n_points as f64, range: "[2, ∞)" });
    }
    if n_per_point == 0 {
        return Err(Error::OutOfRange { name: "n_per_point", value: 0.0, range: "[1, ∞)" });
    }
    (0..n_points)
        .map(|i| {
            let alpha = (i as f64 / (n_points - 1) as f64).min(1.0);
            let (beta, _) = optimize_beta(alpha)?;
            let params = WeakParams::new(alpha, beta)?;
            let protocol = Protocol::new(params)?;
            RunSummary::from_counts(params, seed, run_chunks(&protocol, n_per_point, seed, (i as u64) << 32))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, b: f64) -> WeakParams<f64> {
        WeakParams::new(a, b).unwrap()
    }

    #[test]
    fn kraus_operators_complete() {
        let p = Protocol::new(params(0.4, 0.3)).unwrap();
        let sum = &(&p.kraus[0].adjoint() * &p.kraus[0]) + &(&p.kraus[1].adjoint() * &p.kraus[1]);
        assert!(sum.approx_eq(&ComplexMatrix::identity(8), 1e-14));
    }

    #[test]
    fn trajectory_flags_are_consistent() {
        let p = Protocol::new(params(0.5, 0.2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let t = p.sample(&mut rng);
            let prefix_minus = t.hypothesis.pattern()[1] == 1;
            assert_eq!(t.first_correct, prefix_minus == (t.first_outcome == FirstOutcome::Minus));
            assert_eq!(t.second_correct, t.second_outcome == t.hypothesis);
            let pattern = t.hypothesis.pattern();
            assert_eq!(t.qubits[0] == t.qubits[1], pattern[1] == 0);
            assert_eq!(t.qubits[0] == t.qubits[2], pattern[2] == 0);
        }
    }

    #[test]
    fn projective_minus_never_follows_symmetric_pair() {
        // P₋ annihilates the symmetric states |φφ⟩
        let s = run_trajectories(params(1.0, 0.0), 20_000, 9).unwrap();
        assert_eq!(s.first_count(Hypothesis::H000, FirstOutcome::Minus), 0);
        assert_eq!(s.first_count(Hypothesis::H001, FirstOutcome::Minus), 0);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = run_trajectories(params(0.3, 0.3), 50_000, 17).unwrap();
        let b = run_trajectories(params(0.3, 0.3), 50_000, 17).unwrap();
        assert_eq!(a, b);
        let c = run_trajectories(params(0.3, 0.3), 50_000, 18).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn moderate_run_near_closed_forms() {
        let s = run_trajectories(params(2.0 / 3.0, 1.0 / 3.0), 200_000, 3).unwrap();
        assert!((s.p1_hat - 7.0 / 12.0).abs() <= 4.0 * s.p1_stderr);
        assert!((s.p2_hat - 5.0 / 12.0).abs() <= 4.0 * s.p2_stderr);
        assert_eq!(s.n_trajectories, 200_000);
    }

    #[test]
    fn rejects_empty_runs() {
        assert!(run_trajectories(params(0.1, 0.1), 0, 1).is_err());
        assert!(estimate_curve(1, 10, 1).is_err());
    }
}
