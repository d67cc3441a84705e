//! Piecewise-constant canonical systems `𝒥u' + F u = z ℋ u` on `[a, b]` or
//! `[a, ∞)`, their fundamental solutions and monodromy matrices.

mod indivisible;
mod json;
mod propagate;

pub use indivisible::{detect_indivisible, IndivisibleRun};
pub use json::{SegmentSpec, SystemSpec};
pub use propagate::{monodromy, propagator, FundamentalSolution, SolutionBlocks};

use nalgebra::DMatrix;

use crate::error::{CoefficientIssue, Error, Result};

/// Tolerance for symmetry, positivity and trace normalization of coefficients.
pub const COEFFICIENT_TOL: f64 = 1e-10;

/// Tolerance for recognizing a rank-one `ℋ = ξξ*`.
pub const RANK_ONE_TOL: f64 = 1e-9;

/// One constant cell of a piecewise-constant profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub length: f64,
    pub h: DMatrix<f64>,
    pub f: DMatrix<f64>,
}

impl Segment {
    pub fn new(length: f64, h: DMatrix<f64>, f: DMatrix<f64>) -> Self {
        Self { length, h, f }
    }

    /// Segment with `F = 0`.
    pub fn with_weight(length: f64, h: DMatrix<f64>) -> Self {
        let n = h.nrows();
        Self::new(length, h, DMatrix::zeros(n, n))
    }

    /// Segment with `ℋ = I/(2p)` and `F = 0`.
    pub fn free(p: usize, length: f64) -> Self {
        let n = 2 * p;
        Self::with_weight(length, DMatrix::identity(n, n) / n as f64)
    }

    /// Rank-one segment `ℋ = ξ_ψ ξ_ψ*` with `ξ_ψ = (cos ψ, sin ψ)` (p = 1).
    pub fn indivisible(length: f64, psi: f64) -> Self {
        let (s, c) = psi.sin_cos();
        Self::with_weight(length, DMatrix::from_row_slice(2, 2, &[c * c, c * s, c * s, s * s]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RightEndpoint {
    Regular,
    LimitPoint,
}

/// A canonical system with piecewise-constant coefficients. For a half-line
/// system the finite mesh is followed by a tail segment repeated forever; the
/// tail's `length` is the repetition unit used for truncation.
#[derive(Debug, Clone)]
pub struct CanonicalSystem {
    p: usize,
    a: f64,
    segments: Vec<Segment>,
    tail: Option<Segment>,
    endpoint_right: RightEndpoint,
    breakpoints: Vec<f64>,
    name: Option<String>,
}

/// Result of a successful [`validate_system`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Indices of segments with rank-one `ℋ` (p = 1 only); the tail, if
    /// rank-one, is reported as `segments.len()`.
    pub rank_one_segments: Vec<usize>,
}

impl CanonicalSystem {
    /// Structural checks only (shapes, lengths, tail presence); coefficient
    /// conditions are checked by [`validate_system`].
    pub fn new(
        p: usize,
        a: f64,
        segments: Vec<Segment>,
        endpoint_right: RightEndpoint,
        tail: Option<Segment>,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInput("p must be at least 1".into()));
        }
        if !a.is_finite() {
            return Err(Error::InvalidInput("a must be finite".into()));
        }
        let n = 2 * p;
        let all = segments
            .iter()
            .enumerate()
            .map(|(k, s)| (format!("segments[{k}]"), s))
            .chain(tail.iter().map(|s| ("tail".to_string(), s)));
        for (path, s) in all {
            if !(s.length > 0.0) || !s.length.is_finite() {
                return Err(Error::InvalidInput(format!("{path}.length must be positive and finite")));
            }
            if s.h.shape() != (n, n) {
                return Err(Error::InvalidInput(format!("{path}.H must be {n}×{n}")));
            }
            if s.f.shape() != (n, n) {
                return Err(Error::InvalidInput(format!("{path}.F must be {n}×{n}")));
            }
            if s.h.iter().chain(s.f.iter()).any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("{path} has non-finite entries")));
            }
        }
        match (endpoint_right, &tail) {
            (RightEndpoint::Regular, Some(_)) => {
                return Err(Error::InvalidInput("a regular system cannot have a tail".into()))
            }
            (RightEndpoint::Regular, None) if segments.is_empty() => {
                return Err(Error::InvalidInput("a regular system needs at least one segment".into()))
            }
            (RightEndpoint::LimitPoint, None) => {
                return Err(Error::InvalidInput("a limit-point system needs a tail segment".into()))
            }
            _ => {}
        }
        let mut breakpoints = Vec::with_capacity(segments.len() + 1);
        breakpoints.push(a);
        for s in &segments {
            let last = *breakpoints.last().unwrap();
            breakpoints.push(last + s.length);
        }
        Ok(Self {
            p,
            a,
            segments,
            tail,
            endpoint_right,
            breakpoints,
            name: None,
        })
    }

    /// [`CanonicalSystem::new`] followed by [`validate_system`].
    pub fn validated(
        p: usize,
        a: f64,
        segments: Vec<Segment>,
        endpoint_right: RightEndpoint,
        tail: Option<Segment>,
    ) -> Result<Self> {
        let sys = Self::new(p, a, segments, endpoint_right, tail)?;
        validate_system(&sys)?;
        Ok(sys)
    }

    /// Regular system on `[a, b]` from segments.
    pub fn regular(p: usize, a: f64, segments: Vec<Segment>) -> Result<Self> {
        Self::validated(p, a, segments, RightEndpoint::Regular, None)
    }

    /// Half-line system: finite mesh followed by a repeated tail.
    pub fn half_line(p: usize, a: f64, segments: Vec<Segment>, tail: Segment) -> Result<Self> {
        Self::validated(p, a, segments, RightEndpoint::LimitPoint, Some(tail))
    }

    /// `ℋ = I/(2p)`, `F = 0` on `[0, length]`.
    pub fn free(p: usize, length: f64) -> Self {
        Self::regular(p, 0.0, vec![Segment::free(p, length)])
            .expect("free system is valid")
            .with_name("free")
    }

    /// `ℋ = I/(2p)`, `F = 0` on `[0, ∞)` (unit tail repetition length).
    pub fn free_half_line(p: usize) -> Self {
        Self::half_line(p, 0.0, Vec::new(), Segment::free(p, 1.0))
            .expect("free half-line is valid")
            .with_name("free-half-line")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("system")
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        2 * self.p
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn tail(&self) -> Option<&Segment> {
        self.tail.as_ref()
    }

    pub fn endpoint_right(&self) -> RightEndpoint {
        self.endpoint_right
    }

    pub fn is_regular(&self) -> bool {
        self.endpoint_right == RightEndpoint::Regular
    }

    /// Segment boundaries `a = t_0 < t_1 < … < t_N`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// End of the finite mesh (`b` for a regular system).
    pub fn mesh_end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// Right endpoint `b` of a regular system.
    pub fn b(&self) -> Result<f64> {
        if self.is_regular() {
            Ok(self.mesh_end())
        } else {
            Err(Error::NotRegular)
        }
    }

    /// Index of the segment containing `t` (the tail is `segments.len()`).
    pub fn segment_index(&self, t: f64) -> Result<usize> {
        let end = self.mesh_end();
        if t < self.a || t.is_nan() || (self.is_regular() && t > end) {
            return Err(Error::OutOfInterval {
                t,
                a: self.a,
                b: if self.is_regular() { end } else { f64::INFINITY },
            });
        }
        if t >= end && !self.is_regular() {
            return Ok(self.segments.len());
        }
        let k = self.breakpoints.partition_point(|&x| x <= t);
        Ok(k.saturating_sub(1).min(self.segments.len() - 1))
    }

    /// Coefficients of the segment containing `t`.
    pub fn segment_at(&self, t: f64) -> Result<&Segment> {
        let k = self.segment_index(t)?;
        Ok(if k == self.segments.len() {
            self.tail.as_ref().expect("half-line systems have a tail")
        } else {
            &self.segments[k]
        })
    }

    /// `ℋ(t)` as a complex matrix.
    pub fn weight_at(&self, t: f64) -> Result<crate::CMatrix> {
        Ok(crate::linalg::to_complex(&self.segment_at(t)?.h))
    }
}

fn check_segment(path: &str, s: &Segment, issues: &mut Vec<CoefficientIssue>) {
    let h = &s.h;
    let asym = (h - h.transpose()).abs().max();
    if asym > COEFFICIENT_TOL {
        issues.push(CoefficientIssue {
            path: format!("{path}.H"),
            reason: format!("not symmetric (asymmetry {asym:.3e})"),
        });
        return;
    }
    let min_eig = h.clone().symmetric_eigenvalues().min();
    if min_eig < -COEFFICIENT_TOL {
        issues.push(CoefficientIssue {
            path: format!("{path}.H"),
            reason: format!("not positive semidefinite (eigenvalue {min_eig:.3e})"),
        });
    }
    let trace = h.trace();
    if (trace - 1.0).abs() > COEFFICIENT_TOL {
        issues.push(CoefficientIssue {
            path: format!("{path}.H"),
            reason: format!("trace is {trace}, expected 1"),
        });
    }
    let fasym = (&s.f - s.f.transpose()).abs().max();
    if fasym > COEFFICIENT_TOL {
        issues.push(CoefficientIssue {
            path: format!("{path}.F"),
            reason: format!("not symmetric (asymmetry {fasym:.3e})"),
        });
    }
}

/// Check symmetry, positivity and trace normalization of every segment, and
/// for p = 1 the absence of a direction annihilated by `ℋ` on the whole
/// interval.
pub fn validate_system(sys: &CanonicalSystem) -> Result<ValidationReport> {
    let mut issues = Vec::new();
    for (k, s) in sys.segments.iter().enumerate() {
        check_segment(&format!("segments[{k}]"), s, &mut issues);
    }
    if let Some(t) = &sys.tail {
        check_segment("tail", t, &mut issues);
    }
    if !issues.is_empty() {
        return Err(Error::InvalidCoefficients(issues));
    }
    let mut rank_one_segments = Vec::new();
    if sys.p == 1 {
        let all: Vec<&Segment> = sys.segments.iter().chain(sys.tail.iter()).collect();
        let types: Vec<Option<f64>> = all.iter().map(|s| indivisible::rank_one_type(&s.h)).collect();
        for (k, t) in types.iter().enumerate() {
            if t.is_some() {
                rank_one_segments.push(k);
            }
        }
        if let Some(Some(first)) = types.first() {
            if types
                .iter()
                .all(|t| matches!(t, Some(psi) if indivisible::same_type(*psi, *first)))
            {
                return Err(Error::InvalidCoefficients(vec![CoefficientIssue {
                    path: "segments".into(),
                    reason: "ℋ annihilates a common direction on the whole interval (not definite)".into(),
                }]));
            }
        }
    }
    Ok(ValidationReport { rank_one_segments })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(v: [f64; 4]) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &v)
    }

    #[test]
    fn validation_examples() {
        let sys = CanonicalSystem::new(1, 0.0, vec![Segment::free(1, 1.0)], RightEndpoint::Regular, None).unwrap();
        assert!(validate_system(&sys).unwrap().rank_one_segments.is_empty());

        let bad = CanonicalSystem::new(
            1,
            0.0,
            vec![Segment::with_weight(1.0, m2([1.0, 0.0, 0.0, 1.0]))],
            RightEndpoint::Regular,
            None,
        )
        .unwrap();
        match validate_system(&bad) {
            Err(Error::InvalidCoefficients(issues)) => assert_eq!(issues[0].path, "segments[0].H"),
            other => panic!("unexpected {other:?}"),
        }

        let sys = CanonicalSystem::new(
            1,
            0.0,
            vec![Segment::free(1, 1.0), Segment::with_weight(1.0, m2([1.0, 0.0, 0.0, 0.0]))],
            RightEndpoint::Regular,
            None,
        )
        .unwrap();
        assert_eq!(validate_system(&sys).unwrap().rank_one_segments, vec![1]);
    }

    #[test]
    fn single_direction_profile_is_not_definite() {
        let sys = CanonicalSystem::new(
            1,
            0.0,
            vec![Segment::indivisible(1.0, 0.3), Segment::indivisible(2.0, 0.3)],
            RightEndpoint::Regular,
            None,
        )
        .unwrap();
        assert!(matches!(validate_system(&sys), Err(Error::InvalidCoefficients(_))));
    }

    #[test]
    fn structural_errors() {
        assert!(CanonicalSystem::new(1, 0.0, vec![Segment::free(1, -1.0)], RightEndpoint::Regular, None).is_err());
        assert!(CanonicalSystem::new(1, 0.0, vec![Segment::free(2, 1.0)], RightEndpoint::Regular, None).is_err());
        assert!(CanonicalSystem::new(1, 0.0, vec![], RightEndpoint::LimitPoint, None).is_err());
    }

    #[test]
    fn segment_lookup() {
        let sys = CanonicalSystem::regular(1, 1.0, vec![Segment::free(1, 1.0), Segment::free(1, 2.0)]).unwrap();
        assert_eq!(sys.segment_index(1.0).unwrap(), 0);
        assert_eq!(sys.segment_index(2.0).unwrap(), 1);
        assert_eq!(sys.segment_index(4.0).unwrap(), 1);
        assert!(matches!(sys.segment_index(4.5), Err(Error::OutOfInterval { .. })));
        let hl = CanonicalSystem::free_half_line(1);
        assert_eq!(hl.segment_index(100.0).unwrap(), 0);
    }
}
