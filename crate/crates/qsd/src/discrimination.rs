//! Two-pure-state discrimination problems and POVMs on their real span.
//!
//! A problem is `(π, c)` with prior `Pr(X=1) = π ≤ 1/2` and overlap
//! `c = ⟨s0|s1⟩ ∈ [0, 1]` (real without loss of generality). States are unit
//! vectors in the plane, placed symmetrically about the x-axis at angles
//! `±θ/2` with `cos θ = c`. A POVM is a finite list of symmetric PSD 2×2
//! operators summing to the identity; measuring state `s_i` produces outcome
//! `j` with probability `q_{i,j} = ⟨s_i|E_j|s_i⟩`, and Bayes' rule gives the
//! posterior `p_j = π q_{1,j} / q_j`.

use serde::Serialize;
use thiserror::Error;

/// Absolute tolerance on eigenvalues and on `‖ΣE_j − I‖_max` for PSD and
/// completeness checks (unit-scale doubles).
pub const PSD_TOL: f64 = 1e-9;

/// Outcomes with mass below this are dropped before posterior computation,
/// avoiding 0/0 in Bayes' rule.
pub const OUTCOME_EPS: f64 = 1e-12;

/// Default absolute tolerance for the eligibility test.
pub const ELIGIBLE_TOL: f64 = 1e-8;

/// Posteriors within this distance of an endpoint are snapped to exactly 0
/// or 1. Quadratic forms leave last-ulp residue (~1e−34) on outcomes that are
/// exactly impossible in exact arithmetic, which would otherwise break the
/// 0/1-indicator bookkeeping of the ambiguity objective.
pub const POSTERIOR_SNAP_EPS: f64 = 1e-14;

#[derive(Debug, Error, PartialEq)]
pub enum DiscriminationError {
    #[error("prior must lie in (0, 1/2], got {0}")]
    InvalidPrior(f64),
    #[error("overlap must lie in [0, 1], got {0}")]
    InvalidOverlap(f64),
    #[error("POVM element {index} is not PSD (min eigenvalue {min_eig:.3e})")]
    NotPsd { index: usize, min_eig: f64 },
    #[error("POVM does not sum to identity (max deviation {deviation:.3e})")]
    Incomplete { deviation: f64 },
    #[error("POVM must have at least one element")]
    Empty,
}

/// A real 2-vector on the span of the states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn from_angle(psi: f64) -> Self {
        Vec2 {
            x: psi.cos(),
            y: psi.sin(),
        }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Counterclockwise rotation by 90 degrees. `v.dot(v.rot90())` is exactly
    /// zero in floating point, which keeps "certain" outcome probabilities
    /// exactly zero where the theory says they vanish.
    pub fn rot90(self) -> Vec2 {
        Vec2 {
            x: -self.y,
            y: self.x,
        }
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

/// A symmetric 2×2 matrix `[[a, b], [b, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sym2 {
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl Sym2 {
    pub const ZERO: Sym2 = Sym2 {
        a: 0.0,
        b: 0.0,
        d: 0.0,
    };

    pub const IDENTITY: Sym2 = Sym2 {
        a: 1.0,
        b: 0.0,
        d: 1.0,
    };

    /// Outer product `w · v vᵀ`.
    pub fn outer(weight: f64, v: Vec2) -> Self {
        Sym2 {
            a: weight * v.x * v.x,
            b: weight * v.x * v.y,
            d: weight * v.y * v.y,
        }
    }

    pub fn add(self, other: Sym2) -> Sym2 {
        Sym2 {
            a: self.a + other.a,
            b: self.b + other.b,
            d: self.d + other.d,
        }
    }

    pub fn sub(self, other: Sym2) -> Sym2 {
        Sym2 {
            a: self.a - other.a,
            b: self.b - other.b,
            d: self.d - other.d,
        }
    }

    /// Eigenvalues in ascending order (closed form).
    pub fn eigenvalues(self) -> (f64, f64) {
        let mean = 0.5 * (self.a + self.d);
        let radius = (0.25 * (self.a - self.d).powi(2) + self.b * self.b).sqrt();
        (mean - radius, mean + radius)
    }

    /// Unit eigenvector for the given eigenvalue.
    pub fn eigenvector(self, lambda: f64) -> Vec2 {
        // (a - λ)x + b y = 0; pick the better-conditioned row.
        let r1 = (self.a - lambda).abs() + self.b.abs();
        let r2 = (self.d - lambda).abs() + self.b.abs();
        let v = if r1 >= r2 {
            Vec2::new(-self.b, self.a - lambda)
        } else {
            Vec2::new(self.d - lambda, -self.b)
        };
        let norm = v.dot(v).sqrt();
        if norm == 0.0 {
            Vec2::new(1.0, 0.0)
        } else {
            Vec2::new(v.x / norm, v.y / norm)
        }
    }

    pub fn quad_form(self, u: Vec2, v: Vec2) -> f64 {
        u.x * (self.a * v.x + self.b * v.y) + u.y * (self.b * v.x + self.d * v.y)
    }

    pub fn max_abs(self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.d.abs())
    }

    pub fn min_eigenvalue(self) -> f64 {
        self.eigenvalues().0
    }
}

/// Prior and overlap of a two-pure-state discrimination problem.
///
/// The prior is attached to the state `s1`: `Pr(X=1) = π ≤ 1/2`. Callers with
/// `π > 1/2` must swap the state labels first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminationProblem {
    prior: f64,
    overlap: f64,
}

impl DiscriminationProblem {
    pub fn new(prior: f64, overlap: f64) -> Result<Self, DiscriminationError> {
        if !(prior > 0.0 && prior <= 0.5) {
            return Err(DiscriminationError::InvalidPrior(prior));
        }
        if !(0.0..=1.0).contains(&overlap) {
            return Err(DiscriminationError::InvalidOverlap(overlap));
        }
        Ok(DiscriminationProblem { prior, overlap })
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    /// Angle `θ = arccos c` between the state vectors.
    pub fn angle(&self) -> f64 {
        self.overlap.acos()
    }

    /// `π/(1−π) ≥ c²`: the regime in which the three-element unambiguous
    /// measurement exists with nonnegative weights.
    pub fn not_too_skewed(&self) -> bool {
        self.prior / (1.0 - self.prior) >= self.overlap * self.overlap
    }
}

/// Unit vectors for the two states, at angles `+θ/2` (s0) and `−θ/2` (s1).
pub fn state_vectors(problem: &DiscriminationProblem) -> (Vec2, Vec2) {
    let half = 0.5 * problem.angle();
    (Vec2::from_angle(half), Vec2::from_angle(-half))
}

/// Rank-1 decomposition metadata `w · v(ψ) v(ψ)ᵀ` of a POVM element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rank1 {
    pub weight: f64,
    pub angle: f64,
}

/// One POVM element: a symmetric PSD matrix, with rank-1 metadata when the
/// element was constructed as a weighted projector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PovmElement {
    pub matrix: Sym2,
    pub rank1: Option<Rank1>,
}

impl PovmElement {
    pub fn from_rank1(weight: f64, angle: f64) -> Self {
        PovmElement {
            matrix: Sym2::outer(weight, Vec2::from_angle(angle)),
            rank1: Some(Rank1 { weight, angle }),
        }
    }

    /// Rank-1 element along an explicit direction vector (kept exact: no
    /// angle round-trip through trig functions).
    pub fn from_rank1_vector(weight: f64, v: Vec2) -> Self {
        PovmElement {
            matrix: Sym2::outer(weight, v),
            rank1: Some(Rank1 {
                weight,
                angle: v.angle().rem_euclid(std::f64::consts::PI),
            }),
        }
    }

    pub fn from_matrix(matrix: Sym2) -> Self {
        PovmElement {
            matrix,
            rank1: None,
        }
    }
}

/// An ordered list of PSD elements summing to the identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Povm {
    elements: Vec<PovmElement>,
}

impl Povm {
    /// Validates positivity of each element and completeness to [`PSD_TOL`].
    pub fn new(elements: Vec<PovmElement>) -> Result<Self, DiscriminationError> {
        if elements.is_empty() {
            return Err(DiscriminationError::Empty);
        }
        let mut sum = Sym2::ZERO;
        for (index, element) in elements.iter().enumerate() {
            let min_eig = element.matrix.min_eigenvalue();
            if min_eig < -PSD_TOL {
                return Err(DiscriminationError::NotPsd { index, min_eig });
            }
            sum = sum.add(element.matrix);
        }
        let deviation = sum.sub(Sym2::IDENTITY).max_abs();
        if deviation > PSD_TOL {
            return Err(DiscriminationError::Incomplete { deviation });
        }
        Ok(Povm { elements })
    }

    pub fn identity() -> Self {
        Povm {
            elements: vec![PovmElement::from_matrix(Sym2::IDENTITY)],
        }
    }

    pub fn elements(&self) -> &[PovmElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// One outcome: its probability `q_j` and the posterior `p_j = Pr(X=1 | j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeEntry {
    pub probability: f64,
    pub posterior: f64,
}

/// Outcome probabilities with posteriors; zero-probability outcomes dropped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    pub entries: Vec<OutcomeEntry>,
}

impl OutcomeDistribution {
    /// `Σ_j q_j b(p_j)` — the expected Bhattacharyya parameter.
    pub fn mean_bhattacharyya(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.probability * crate::objectives::bhattacharyya(e.posterior))
            .sum()
    }
}

/// Outcome distribution induced by measuring the problem's states with `povm`.
///
/// `q_{i,j} = ⟨s_i|E_j|s_i⟩`, `q_j = (1−π) q_{0,j} + π q_{1,j}`,
/// `p_j = π q_{1,j} / q_j`. Outcomes with `q_j < OUTCOME_EPS` are removed.
pub fn outcome_distribution(
    problem: &DiscriminationProblem,
    povm: &Povm,
) -> Result<OutcomeDistribution, DiscriminationError> {
    // Re-validate: `Povm::new` checked at construction, but a POVM may travel.
    let mut sum = Sym2::ZERO;
    for (index, element) in povm.elements.iter().enumerate() {
        let min_eig = element.matrix.min_eigenvalue();
        if min_eig < -PSD_TOL {
            return Err(DiscriminationError::NotPsd { index, min_eig });
        }
        sum = sum.add(element.matrix);
    }
    let deviation = sum.sub(Sym2::IDENTITY).max_abs();
    if deviation > PSD_TOL {
        return Err(DiscriminationError::Incomplete { deviation });
    }

    let (s0, s1) = state_vectors(problem);
    let pi = problem.prior();
    let mut entries = Vec::with_capacity(povm.len());
    for element in &povm.elements {
        let q0 = element.matrix.quad_form(s0, s0).max(0.0);
        let q1 = element.matrix.quad_form(s1, s1).max(0.0);
        let q = (1.0 - pi) * q0 + pi * q1;
        if q < OUTCOME_EPS {
            continue;
        }
        let mut posterior = (pi * q1 / q).clamp(0.0, 1.0);
        if posterior < POSTERIOR_SNAP_EPS {
            posterior = 0.0;
        } else if posterior > 1.0 - POSTERIOR_SNAP_EPS {
            posterior = 1.0;
        }
        entries.push(OutcomeEntry {
            probability: q,
            posterior,
        });
    }
    Ok(OutcomeDistribution { entries })
}

/// `Σ_j q_j · g(p_j)`.
pub fn expected_objective(dist: &OutcomeDistribution, g: &crate::objectives::ObjectiveFn) -> f64 {
    dist.entries
        .iter()
        .map(|e| e.probability * g.eval(e.posterior))
        .sum()
}

/// Eligibility test: every element must achieve Cauchy-Schwarz equality
/// `⟨s0|E_j|s0⟩⟨s1|E_j|s1⟩ = ⟨s0|E_j|s1⟩²` and have a nonnegative cross term
/// `⟨s0|E_j|s1⟩ ≥ 0`, both to the absolute tolerance `tol`.
pub fn is_eligible(problem: &DiscriminationProblem, povm: &Povm, tol: f64) -> bool {
    let (s0, s1) = state_vectors(problem);
    povm.elements.iter().all(|element| {
        let q0 = element.matrix.quad_form(s0, s0);
        let q1 = element.matrix.quad_form(s1, s1);
        let cross = element.matrix.quad_form(s0, s1);
        (q0 * q1 - cross * cross).abs() <= tol && cross >= -tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::builtin_objective;

    fn problem(pi: f64, c: f64) -> DiscriminationProblem {
        DiscriminationProblem::new(pi, c).unwrap()
    }

    #[test]
    fn problem_validation() {
        assert!(DiscriminationProblem::new(0.0, 0.5).is_err());
        assert!(DiscriminationProblem::new(0.6, 0.5).is_err());
        assert!(DiscriminationProblem::new(0.3, 1.5).is_err());
        assert!(DiscriminationProblem::new(0.3, -0.1).is_err());
        assert!(DiscriminationProblem::new(0.5, 1.0).is_ok());
    }

    #[test]
    fn state_vectors_overlap() {
        // c = 1: identical states.
        let (s0, s1) = state_vectors(&problem(0.5, 1.0));
        assert_eq!(s0, s1);
        // c = 0: orthogonal, θ = π/2.
        let (s0, s1) = state_vectors(&problem(0.5, 0.0));
        assert!(s0.dot(s1).abs() < 1e-15);
        // c = 0.6: θ = arccos 0.6 ≈ 0.9273.
        let p = problem(0.3, 0.6);
        assert!((p.angle() - 0.9272952180016122).abs() < 1e-15);
        let (s0, s1) = state_vectors(&p);
        assert!((s0.dot(s1) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn identity_measurement_returns_prior() {
        let p = problem(0.3, 0.7);
        let dist = outcome_distribution(&p, &Povm::identity()).unwrap();
        assert_eq!(dist.entries.len(), 1);
        assert!((dist.entries[0].probability - 1.0).abs() < 1e-15);
        assert!((dist.entries[0].posterior - 0.3).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_states_perfectly_distinguished() {
        let p = problem(0.3, 0.0);
        let (s0, s1) = state_vectors(&p);
        let povm = Povm::new(vec![
            PovmElement::from_rank1_vector(1.0, s0),
            PovmElement::from_rank1_vector(1.0, s1),
        ])
        .unwrap();
        let dist = outcome_distribution(&p, &povm).unwrap();
        assert_eq!(dist.entries.len(), 2);
        assert!((dist.entries[0].probability - 0.7).abs() < 1e-12);
        assert!(dist.entries[0].posterior.abs() < 1e-12);
        assert!((dist.entries[1].probability - 0.3).abs() < 1e-12);
        assert!((dist.entries[1].posterior - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incomplete_povm_rejected() {
        let e = PovmElement::from_rank1(0.5, 0.3);
        assert!(matches!(
            Povm::new(vec![e]),
            Err(DiscriminationError::Incomplete { .. })
        ));
    }

    #[test]
    fn non_psd_rejected() {
        let bad = PovmElement::from_matrix(Sym2 {
            a: 1.5,
            b: 0.0,
            d: -0.5,
        });
        let pad = PovmElement::from_matrix(Sym2 {
            a: -0.5,
            b: 0.0,
            d: 1.5,
        });
        assert!(matches!(
            Povm::new(vec![bad, pad]),
            Err(DiscriminationError::NotPsd { index: 0, .. })
        ));
    }

    #[test]
    fn expected_objective_examples() {
        let g = builtin_objective("error").unwrap();
        let dist = OutcomeDistribution {
            entries: vec![
                OutcomeEntry {
                    probability: 0.5,
                    posterior: 0.2,
                },
                OutcomeEntry {
                    probability: 0.5,
                    posterior: 0.8,
                },
            ],
        };
        assert!((expected_objective(&dist, &g) - 0.2).abs() < 1e-15);

        // Single-outcome distribution: ḡ = g(π).
        let b = builtin_objective("bhattacharyya").unwrap();
        let single = OutcomeDistribution {
            entries: vec![OutcomeEntry {
                probability: 1.0,
                posterior: 0.3,
            }],
        };
        assert!((expected_objective(&single, &b) - (0.3f64 * 0.7).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn projection_between_states_not_eligible() {
        let p = problem(0.4, 0.6);
        // Basis vector on the x-axis sits strictly between the states, so its
        // orthogonal partner has a forbidden angle.
        let povm = Povm::new(vec![
            PovmElement::from_rank1(1.0, 0.0),
            PovmElement::from_rank1(1.0, std::f64::consts::FRAC_PI_2),
        ])
        .unwrap();
        assert!(!is_eligible(&p, &povm, ELIGIBLE_TOL));
    }

    #[test]
    fn identity_on_overlapping_states_is_eligible_iff_rank1_like() {
        // J=1 identity: Cauchy-Schwarz equality requires c = 1.
        let p1 = problem(0.5, 1.0);
        assert!(is_eligible(&p1, &Povm::identity(), ELIGIBLE_TOL));
        let p2 = problem(0.5, 0.5);
        assert!(!is_eligible(&p2, &Povm::identity(), ELIGIBLE_TOL));
    }
}

