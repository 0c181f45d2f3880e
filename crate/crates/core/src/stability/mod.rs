//! Sampled tests of real stability.
//!
//! A homogeneous `f` is stable when `t -> f(t v + w)` is real-rooted for
//! every `v > 0` and real `w`. These routines restrict `f` to pseudo-random
//! rational lines and decide real-rootedness exactly with Sturm sequences.
//! A passing report is evidence only; the proof engine's certificates are
//! what establish stability. A single failing line disproves it.

mod univariate;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::par::{self, Execution};
use crate::poly::{rayleigh_difference, MultiAffinePoly, PolyError, RationalPoint};
use crate::rational::{frac, serde_q, serde_q_vec, Q};
pub use univariate::{is_real_rooted, sturm_real_root_count, UnivariatePoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilityError {
    #[error("the zero polynomial has no stability verdict")]
    ZeroPolynomial,
    #[error("direction v must be strictly positive (coordinate {0})")]
    NonPositiveDirection(usize),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial has a non-positive coefficient")]
    NonPositiveCoefficient,
    #[error("weights must be nonnegative and not all zero")]
    BadWeights,
    #[error("trials must be positive")]
    NoTrials,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A line `t -> t v + w` with `v > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineSample {
    pub v: RationalPoint,
    pub w: RationalPoint,
}

impl LineSample {
    pub fn new(v: RationalPoint, w: RationalPoint) -> Result<Self, StabilityError> {
        if v.len() != w.len() {
            return Err(PolyError::Dimension { expected: v.len(), found: w.len() }.into());
        }
        if let Some(k) = v.coords().iter().position(|c| !c.is_positive()) {
            return Err(StabilityError::NonPositiveDirection(k + 1));
        }
        Ok(Self { v, w })
    }
}

/// Exact coefficients of `t -> f(t v + w)`.
pub fn substitute_line(f: &MultiAffinePoly, s: &LineSample) -> Result<UnivariatePoly, StabilityError> {
    if s.v.len() != f.nvars() {
        return Err(PolyError::Dimension { expected: f.nvars(), found: s.v.len() }.into());
    }
    let lines: Vec<UnivariatePoly> = s
        .v
        .coords()
        .iter()
        .zip(s.w.coords())
        .map(|(v, w)| UnivariatePoly::new(vec![w.clone(), v.clone()]))
        .collect();
    let mut acc = UnivariatePoly::zero();
    for (vars, c) in f.terms() {
        let term = crate::matroid::set::elems(vars)
            .into_iter()
            .fold(UnivariatePoly::new(vec![c.clone()]), |p, i| p.mul(&lines[i - 1]));
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// SplitMix64 (Steele, Lea and Flood): state advances by the golden-ratio
/// increment `0x9E3779B97F4A7C15`, output is the standard two-multiply
/// finalizer.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(Self::GOLDEN);
        Self::mix(self.state)
    }

    /// Generator for trial `index` of a run seeded with `seed`; independent
    /// of how trials are scheduled.
    pub fn for_trial(seed: u64, index: usize) -> Self {
        Self::new(seed ^ Self::mix((index as u64).wrapping_add(1).wrapping_mul(Self::GOLDEN)))
    }

    /// Uniform in `{1/8, 2/8, ..., 32/8}`.
    pub fn positive_coordinate(&mut self) -> Q {
        frac((self.next_u64() % 32) as i64 + 1, 8)
    }

    /// Uniform in `{-16/8, ..., 16/8}`.
    pub fn signed_coordinate(&mut self) -> Q {
        frac((self.next_u64() % 33) as i64 - 16, 8)
    }

    pub fn line(&mut self, n: usize) -> LineSample {
        let v = (0..n).map(|_| self.positive_coordinate()).collect();
        let w = (0..n).map(|_| self.signed_coordinate()).collect();
        LineSample { v: RationalPoint::new(v), w: RationalPoint::new(w) }
    }

    pub fn point(&mut self, n: usize) -> RationalPoint {
        RationalPoint::new((0..n).map(|_| self.signed_coordinate()).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `f(t v + w)` is not real-rooted.
    Line {
        trial: usize,
        sample: LineSample,
        degree: usize,
        distinct_real_roots: usize,
        squarefree_degree: usize,
        #[serde(with = "serde_q_vec")]
        coefficients: Vec<Q>,
    },
    /// `Delta_{i,j} f(a) < 0`.
    Rayleigh {
        trial: usize,
        i: usize,
        j: usize,
        point: RationalPoint,
        #[serde(with = "serde_q")]
        value: Q,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub check: String,
    pub seed: u64,
    pub trials: usize,
    pub verdict: Verdict,
    pub failures: Vec<Witness>,
    pub note: &'static str,
}

const NOTE: &str = "sampled evidence only: a pass does not prove stability, a single failure disproves it";

impl StabilityReport {
    fn new(check: String, seed: u64, trials: usize, failures: Vec<Witness>) -> Self {
        let verdict = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
        Self { check, seed, trials, verdict, failures, note: NOTE }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn require_stability_candidate(f: &MultiAffinePoly) -> Result<(), StabilityError> {
    if f.is_zero() {
        return Err(StabilityError::ZeroPolynomial);
    }
    if f.homogeneous_degree().is_none() {
        return Err(StabilityError::NotHomogeneous);
    }
    if !f.has_positive_coefficients() {
        return Err(StabilityError::NonPositiveCoefficient);
    }
    Ok(())
}

/// Tests real-rootedness of `f` along `trials` seeded random lines.
pub fn sample_stability(f: &MultiAffinePoly, trials: usize, seed: u64) -> Result<StabilityReport, StabilityError> {
    sample_stability_with(f, trials, seed, Execution::Parallel)
}

pub fn sample_stability_with(
    f: &MultiAffinePoly,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<StabilityReport, StabilityError> {
    require_stability_candidate(f)?;
    if trials == 0 {
        return Err(StabilityError::NoTrials);
    }
    let outcomes = par::map_range(exec, trials, |trial| -> Result<Option<Witness>, StabilityError> {
        let sample = SplitMix64::for_trial(seed, trial).line(f.nvars());
        let g = substitute_line(f, &sample)?;
        let sqf = g.squarefree_part();
        let real = sturm_real_root_count(&sqf)?;
        let sqf_deg = sqf.degree().unwrap_or(0);
        Ok((real != sqf_deg).then(|| Witness::Line {
            trial,
            sample,
            degree: g.degree().unwrap_or(0),
            distinct_real_roots: real,
            squarefree_degree: sqf_deg,
            coefficients: g.coeffs().to_vec(),
        }))
    });
    let failures = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().flatten().collect();
    Ok(StabilityReport::new("stability".into(), seed, trials, failures))
}

/// Evaluates `Delta_{i,j} f` at `trials` seeded random points and reports
/// every strictly negative value.
pub fn rayleigh_spot_check(
    f: &MultiAffinePoly,
    i: usize,
    j: usize,
    trials: usize,
    seed: u64,
) -> Result<StabilityReport, StabilityError> {
    rayleigh_spot_check_with(f, i, j, trials, seed, Execution::Parallel)
}

pub fn rayleigh_spot_check_with(
    f: &MultiAffinePoly,
    i: usize,
    j: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<StabilityReport, StabilityError> {
    if trials == 0 {
        return Err(StabilityError::NoTrials);
    }
    let delta = rayleigh_difference(f, i, j)?;
    let outcomes = par::map_range(exec, trials, |trial| -> Result<Option<Witness>, StabilityError> {
        let point = SplitMix64::for_trial(seed, trial).point(f.nvars());
        let value = delta.evaluate(&point)?;
        Ok(value.is_negative().then_some(Witness::Rayleigh { trial, i, j, point, value }))
    });
    let failures = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().flatten().collect();
    Ok(StabilityReport::new(format!("rayleigh({i},{j})"), seed, trials, failures))
}

/// `sum_i lambda_i df/dx_i`.
pub fn directional_derivative(f: &MultiAffinePoly, lambda: &RationalPoint) -> Result<MultiAffinePoly, StabilityError> {
    if lambda.len() != f.nvars() {
        return Err(PolyError::Dimension { expected: f.nvars(), found: lambda.len() }.into());
    }
    if lambda.coords().iter().any(Signed::is_negative) || lambda.coords().iter().all(Zero::is_zero) {
        return Err(StabilityError::BadWeights);
    }
    let mut acc = MultiAffinePoly::zero(f.nvars());
    for (k, l) in lambda.coords().iter().enumerate() {
        if !l.is_zero() {
            acc = acc.add(&f.partial_derivative(k + 1)?.scale(l));
        }
    }
    Ok(acc)
}

/// Sample-tests stability of `sum_i lambda_i df/dx_i` for `lambda >= 0`.
pub fn derivative_closure_check(
    f: &MultiAffinePoly,
    lambda: &RationalPoint,
    trials: usize,
    seed: u64,
) -> Result<StabilityReport, StabilityError> {
    let g = directional_derivative(f, lambda)?;
    let mut report = sample_stability(&g, trials, seed)?;
    report.check = "derivative_closure".into();
    Ok(report)
}

/// Leading coefficient of `f(t v + w)`: `f(v)` for homogeneous `f`.
pub fn line_leading_coefficient(f: &MultiAffinePoly, s: &LineSample) -> Result<Q, StabilityError> {
    Ok(substitute_line(f, s)?.leading().cloned().unwrap_or_else(Q::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{uniform, vamos_matroid};
    use crate::poly::{basis_generating_poly, elementary_symmetric};
    use crate::rational::q;
    use num_traits::One;

    fn unit(n: usize, k: usize) -> RationalPoint {
        RationalPoint::new((0..n).map(|i| if i == k { Q::one() } else { Q::zero() }).collect())
    }

    fn pt(xs: &[i64]) -> RationalPoint {
        RationalPoint::new(xs.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn substitution_examples() {
        let e23 = elementary_symmetric(2, 3).unwrap();
        let s = LineSample::new(pt(&[1, 1, 1]), pt(&[0, 0, 0])).unwrap();
        assert_eq!(substitute_line(&e23, &s).unwrap(), UnivariatePoly::from_i64(&[0, 0, 3]));

        let x1x2 = uniform(2, 2).map(|m| basis_generating_poly(&m)).unwrap();
        let s = LineSample::new(pt(&[1, 1]), pt(&[1, -1])).unwrap();
        assert_eq!(substitute_line(&x1x2, &s).unwrap(), UnivariatePoly::from_i64(&[-1, 0, 1]));

        let f8 = basis_generating_poly(&vamos_matroid(4).unwrap());
        let s = LineSample::new(RationalPoint::ones(8), unit(8, 0)).unwrap();
        let g = substitute_line(&f8, &s).unwrap();
        assert_eq!(g.degree(), Some(4));
        assert_eq!(g.leading(), Some(&q(65)));
    }

    #[test]
    fn direction_must_be_positive() {
        assert_eq!(
            LineSample::new(pt(&[1, 0]), pt(&[0, 0])),
            Err(StabilityError::NonPositiveDirection(2))
        );
    }

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 0 of the reference SplitMix64
        let mut g = SplitMix64::new(0);
        assert_eq!(g.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(g.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn uniform_matroid_samples_pass() {
        let f = basis_generating_poly(&uniform(2, 4).unwrap());
        assert!(sample_stability(&f, 200, 7).unwrap().passed());
    }

    #[test]
    fn sampling_is_reproducible_and_schedule_independent() {
        let f = basis_generating_poly(&vamos_matroid(4).unwrap());
        let a = sample_stability_with(&f, 50, 99, Execution::Sequential).unwrap();
        let b = sample_stability_with(&f, 50, 99, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_inputs() {
        let zero = MultiAffinePoly::zero(3);
        assert_eq!(sample_stability(&zero, 10, 1), Err(StabilityError::ZeroPolynomial));
        let f = elementary_symmetric(3, 3).unwrap();
        assert_eq!(sample_stability(&f, 0, 1), Err(StabilityError::NoTrials));
        assert_eq!(derivative_closure_check(&f, &pt(&[0, 0, 0]), 10, 1), Err(StabilityError::BadWeights));
    }

    #[test]
    fn derivative_closure_of_e33() {
        let f = elementary_symmetric(3, 3).unwrap();
        let g = directional_derivative(&f, &pt(&[1, 1, 1])).unwrap();
        assert_eq!(g, elementary_symmetric(2, 3).unwrap());
        assert!(derivative_closure_check(&f, &pt(&[1, 1, 1]), 100, 3).unwrap().passed());
    }
}

