//! Closed-form optimal measurements and optimal expected objectives.
//!
//! For a problem `(π, c)` let `b* = b(π)·c`. The two extremal measurements
//! are:
//!
//! - the minimum-error projection, whose two posteriors satisfy
//!   `p_0 + p_1 = 1` and whose expected error is the Helstrom value
//!   `½[1 − √(1 − 4π(1−π)c²)]`;
//! - the three-element unambiguous POVM (valid when `π/(1−π) ≥ c²`), whose
//!   posteriors are exactly `{0, 1, 1/2}` and whose uncertain outcome has
//!   probability `2√(π(1−π))·c`.
//!
//! Both are eligible, so both attain `Σ q_j b(p_j) = b*`. For a
//! convex-admissible objective the projection is optimal with value `g(p*)`,
//! `b(p*) = b*`; for a concave-admissible objective (not too skewed) the
//! three-element POVM is optimal with value `2 b* g(1/2)`.
//!
//! The unambiguous weights solve `max (1−π)α_0 + π α_1` over
//! `(1 − 1/α_0)(1 − 1/α_1) ≥ cos²θ`, `0 ≤ α ≤ 1`:
//!
//! ```text
//! α_0 = (1 − √(π/(1−π)) c) / sin²θ      (detector orthogonal to s1)
//! α_1 = (1 − √((1−π)/π) c) / sin²θ      (detector orthogonal to s0)
//! ```
//!
//! The rare state's detector `α_1` is the one that hits zero at the skewness
//! boundary, where the third element aligns with `s1` and the POVM
//! degenerates into the `{⊥s1, s1}` projection. Only this assignment is
//! stationary for the weighted certainty probability, and only it makes the
//! uncertain-outcome posterior exactly uniform.

use crate::discrimination::{
    outcome_distribution, state_vectors, DiscriminationError, DiscriminationProblem,
    OutcomeDistribution, Povm, PovmElement, Sym2,
};
use crate::objectives::{
    bhattacharyya, classify, invert_bhattacharyya, ConvexityClass, ObjectiveError, ObjectiveFn,
    DEFAULT_CLASSIFY_GRID,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("objective {0:?} is neither convex- nor concave-admissible; no optimality claim")]
    UnsupportedObjective(String),
    #[error(
        "very skewed problem (pi/(1-pi) = {ratio:.6} < c^2 = {c_squared:.6}); \
         the concave-admissible optimum is out of scope"
    )]
    VerySkewed { ratio: f64, c_squared: f64 },
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    Discrimination(#[from] DiscriminationError),
}

/// Which closed form produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Projection,
    ThreeElement,
    VerySkewedProjection,
}

/// A measurement together with its induced distribution and expected value.
#[derive(Debug, Clone, Serialize)]
pub struct OptimalSolution {
    pub povm: Povm,
    pub value: f64,
    pub distribution: OutcomeDistribution,
    pub regime: Regime,
}

/// Helstrom bound `½[1 − √(1 − 4π(1−π)c²)]` on the error probability.
pub fn helstrom(problem: &DiscriminationProblem) -> f64 {
    let pi = problem.prior();
    let c = problem.overlap();
    0.5 * (1.0 - (1.0 - 4.0 * pi * (1.0 - pi) * c * c).max(0.0).sqrt())
}

/// Minimum-error projection.
///
/// The basis bisector is rotated by `φ/2` from the states' bisector, where
/// `tan φ = (1−2π) cot θ` solves the stationarity condition
/// `(1−π) cos(θ+φ) = π cos(θ−φ)`. Outcome 0 detects `s0`. The posteriors
/// satisfy `p_1 = 1 − p_0` and the expected error equals [`helstrom`].
///
/// Identical states (`c = 1`) degenerate to the single-outcome identity
/// measurement, whose expected error is `π`.
pub fn min_error_projection(
    problem: &DiscriminationProblem,
) -> Result<OptimalSolution, SolveError> {
    if problem.overlap() == 1.0 {
        let povm = Povm::identity();
        let distribution = outcome_distribution(problem, &povm)?;
        return Ok(OptimalSolution {
            povm,
            value: problem.prior(),
            distribution,
            regime: Regime::Projection,
        });
    }
    let theta = problem.angle();
    let phi = ((1.0 - 2.0 * problem.prior()) * (theta.cos() / theta.sin())).atan();
    let quarter = std::f64::consts::FRAC_PI_4;
    let povm = Povm::new(vec![
        PovmElement::from_rank1(1.0, quarter - 0.5 * phi),
        PovmElement::from_rank1(1.0, -quarter - 0.5 * phi),
    ])?;
    let distribution = outcome_distribution(problem, &povm)?;
    let value = distribution
        .entries
        .iter()
        .map(|e| e.probability * e.posterior.min(1.0 - e.posterior))
        .sum();
    Ok(OptimalSolution {
        povm,
        value,
        distribution,
        regime: Regime::Projection,
    })
}

/// Optimal unambiguous measurement.
///
/// Not too skewed: the three-element POVM described in the module docs; the
/// reported `value` is the probability of the uncertain outcome (the expected
/// ambiguity). Very skewed: the best unambiguous strategy keeps only the
/// common state's certainty detector at full weight, i.e. the projection onto
/// `{⊥s1, s1}`, and the result carries [`Regime::VerySkewedProjection`]
/// without any optimality claim beyond ambiguity.
pub fn unambiguous_povm(problem: &DiscriminationProblem) -> Result<OptimalSolution, SolveError> {
    let pi = problem.prior();
    let c = problem.overlap();
    let (s0, s1) = state_vectors(problem);

    if c == 1.0 {
        // Degenerate: every outcome is uncertain.
        let povm = Povm::identity();
        let distribution = outcome_distribution(problem, &povm)?;
        return Ok(OptimalSolution {
            povm,
            value: 1.0,
            distribution,
            regime: if problem.not_too_skewed() {
                Regime::ThreeElement
            } else {
                Regime::VerySkewedProjection
            },
        });
    }

    // Exact orthogonality: outcome 0 never fires on s1, outcome 1 never on s0.
    let psi0 = s1.rot90();
    let psi1 = s0.rot90();

    if !problem.not_too_skewed() {
        let povm = Povm::new(vec![
            PovmElement::from_rank1_vector(1.0, psi0),
            PovmElement::from_rank1_vector(1.0, s1),
        ])?;
        let distribution = outcome_distribution(problem, &povm)?;
        let value = distribution
            .entries
            .iter()
            .filter(|e| e.posterior != 0.0 && e.posterior != 1.0)
            .map(|e| e.probability)
            .sum();
        return Ok(OptimalSolution {
            povm,
            value,
            distribution,
            regime: Regime::VerySkewedProjection,
        });
    }

    let sin_sq = 1.0 - c * c;
    let skew = (pi / (1.0 - pi)).sqrt();
    let a0 = ((1.0 - skew * c) / sin_sq).clamp(0.0, 1.0);
    let a1 = ((1.0 - c / skew) / sin_sq).clamp(0.0, 1.0);

    let e0 = PovmElement::from_rank1_vector(a0, psi0);
    let e1 = PovmElement::from_rank1_vector(a1, psi1);
    let rest = Sym2::IDENTITY.sub(e0.matrix).sub(e1.matrix);
    let (lo, hi) = rest.eigenvalues();
    if lo < -1e-10 {
        // Cannot happen in the not-too-skewed regime; guard anyway.
        return Err(SolveError::Discrimination(DiscriminationError::NotPsd {
            index: 2,
            min_eig: lo,
        }));
    }
    // The third operator is rank-1 in exact arithmetic; clamp the stray
    // eigenvalue and keep the dominant direction.
    let e2 = PovmElement::from_rank1_vector(hi.max(0.0), rest.eigenvector(hi));
    let povm = Povm::new(vec![e0, e1, e2])?;
    let distribution = outcome_distribution(problem, &povm)?;
    let value = 2.0 * bhattacharyya(pi) * c;
    Ok(OptimalSolution {
        povm,
        value,
        distribution,
        regime: Regime::ThreeElement,
    })
}

/// The optimal expected objective over all POVMs, by convexity class.
///
/// Convex-admissible: `g(p*)` with `b(p*) = b(π)·c`, achieved by the
/// minimum-error projection. Concave-admissible and not too skewed:
/// `2 b(π) c g(1/2)`, achieved by the unambiguous POVM. Returns an error for
/// `Neither` objectives and for concave objectives on very skewed problems
/// (no optimality claim is available there).
pub fn theorem_pure_value(
    problem: &DiscriminationProblem,
    g: &ObjectiveFn,
) -> Result<OptimalSolution, SolveError> {
    let class = classify(g, DEFAULT_CLASSIFY_GRID)?;
    theorem_pure_value_with_class(problem, g, class)
}

/// Same as [`theorem_pure_value`] with a precomputed classification.
pub fn theorem_pure_value_with_class(
    problem: &DiscriminationProblem,
    g: &ObjectiveFn,
    class: ConvexityClass,
) -> Result<OptimalSolution, SolveError> {
    let b_star = bhattacharyya(problem.prior()) * problem.overlap();
    match class {
        ConvexityClass::ConvexAdmissible => {
            let mut sol = min_error_projection(problem)?;
            sol.value = g.eval(invert_bhattacharyya(b_star));
            Ok(sol)
        }
        ConvexityClass::ConcaveAdmissible => {
            if !problem.not_too_skewed() {
                return Err(SolveError::VerySkewed {
                    ratio: problem.prior() / (1.0 - problem.prior()),
                    c_squared: problem.overlap() * problem.overlap(),
                });
            }
            let mut sol = unambiguous_povm(problem)?;
            sol.value = 2.0 * b_star * g.value_at_half();
            Ok(sol)
        }
        ConvexityClass::Neither => Err(SolveError::UnsupportedObjective(g.name())),
    }
}

/// Minimax-optimal value: the Bayes solution under the uniform prior, which
/// is never too skewed.
pub fn minimax_value(overlap: f64, g: &ObjectiveFn) -> Result<OptimalSolution, SolveError> {
    let problem = DiscriminationProblem::new(0.5, overlap)?;
    theorem_pure_value(&problem, g)
}
