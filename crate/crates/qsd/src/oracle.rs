//! Brute-force grid optimizer over small rank-1 POVM families.
//!
//! This is the independent ground truth for the closed forms: it never looks
//! at the theorem structure, only at `E[g(p)]` evaluated on candidate
//! measurements.
//!
//! Families searched per outcome count `J`:
//!
//! - `J = 2`: projections, one basis angle;
//! - `J = 3`: two weighted rank-1 elements (two angles, two weights), the
//!   remainder `I − ΣE` kept when PSD;
//! - `J = 4`: three weighted rank-1 elements, remainder as above.
//!
//! Each pass scans a uniform grid; `refine_iters` passes shrink the window by
//! a factor of 4 around the incumbent at the same per-pass point counts, so
//! the effective angle resolution is `angle_resolution` and the effective
//! weight resolution is `weight_resolution · 4^refine_iters`. The angle axes
//! always include a handful of geometry anchors (the state directions, their
//! exact orthogonal complements, the bisector): indicator-style objectives
//! such as the ambiguity have needle-shaped optima at exact orthogonality
//! which no uniform grid can hit.
//!
//! Grid cells are evaluated in parallel; the reduction is a deterministic
//! lexicographic min over `(value, candidate index)`, so the returned argmin
//! does not depend on thread scheduling.

use crate::discrimination::{
    state_vectors, DiscriminationError, DiscriminationProblem, Povm, PovmElement, Sym2, Vec2,
    OUTCOME_EPS, POSTERIOR_SNAP_EPS,
};
use crate::objectives::ObjectiveFn;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error("no feasible POVM found at the given resolution")]
    EmptyFeasible,
    #[error("rejection sampling failed after {0} attempts")]
    SamplingExhausted(usize),
    #[error("degenerate overlap c = 1: only trivial measurements exist")]
    DegenerateOverlap,
    #[error(transparent)]
    Discrimination(#[from] DiscriminationError),
}

/// Search-space description for [`brute_force_optimum`].
#[derive(Debug, Clone, Copy)]
pub struct SearchSpec {
    /// Outcome count J, between 2 and 4.
    pub outcomes: usize,
    /// Effective angle resolution over `[0, π)` after refinement.
    pub angle_resolution: usize,
    /// Weight grid points per pass on `[0, 1]`.
    pub weight_resolution: usize,
    /// Window-shrink passes (factor 4 per pass) around the incumbent.
    pub refine_iters: usize,
}

impl SearchSpec {
    pub fn with_outcomes(outcomes: usize) -> Self {
        SearchSpec {
            outcomes,
            angle_resolution: 720,
            weight_resolution: 64,
            refine_iters: 3,
        }
    }

    fn validate(&self) -> Result<(), OracleError> {
        if !(2..=4).contains(&self.outcomes) {
            return Err(OracleError::InvalidSpec(format!(
                "outcomes must be 2, 3 or 4, got {}",
                self.outcomes
            )));
        }
        if self.angle_resolution < 8 || self.weight_resolution < 8 {
            return Err(OracleError::InvalidSpec(
                "resolutions must be at least 8".into(),
            ));
        }
        Ok(())
    }
}

/// Per-direction precomputation: outcome probabilities under both states and
/// the projector entries.
#[derive(Clone, Copy)]
struct DirData {
    dir: Vec2,
    q0: f64,
    q1: f64,
    xx: f64,
    xy: f64,
    yy: f64,
}

impl DirData {
    fn new(dir: Vec2, s0: Vec2, s1: Vec2) -> Self {
        let d0 = s0.dot(dir);
        let d1 = s1.dot(dir);
        DirData {
            dir,
            q0: d0 * d0,
            q1: d1 * d1,
            xx: dir.x * dir.x,
            xy: dir.x * dir.y,
            yy: dir.y * dir.y,
        }
    }
}

struct Evaluator<'a> {
    pi: f64,
    g: &'a ObjectiveFn,
}

impl Evaluator<'_> {
    #[inline]
    fn outcome_term(&self, q0: f64, q1: f64) -> f64 {
        let q = (1.0 - self.pi) * q0 + self.pi * q1;
        if q < OUTCOME_EPS {
            return 0.0;
        }
        let mut p = (self.pi * q1 / q).clamp(0.0, 1.0);
        if p < POSTERIOR_SNAP_EPS {
            p = 0.0;
        } else if p > 1.0 - POSTERIOR_SNAP_EPS {
            p = 1.0;
        }
        q * self.g.eval(p)
    }
}

/// One candidate measurement in compact form.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    dirs: [Vec2; 3],
    weights: [f64; 3],
    free: usize,
}

impl Candidate {
    fn to_povm(self) -> Result<Povm, DiscriminationError> {
        if self.free == 1 {
            // Projection: the partner direction is the exact rotation.
            let v = self.dirs[0];
            return Povm::new(vec![
                PovmElement::from_rank1_vector(1.0, v),
                PovmElement::from_rank1_vector(1.0, v.rot90()),
            ]);
        }
        let mut elements = Vec::with_capacity(self.free + 1);
        let mut rest = Sym2::IDENTITY;
        for i in 0..self.free {
            let e = PovmElement::from_rank1_vector(self.weights[i], self.dirs[i]);
            rest = rest.sub(e.matrix);
            elements.push(e);
        }
        elements.push(PovmElement::from_matrix(rest));
        Povm::new(elements)
    }
}

/// Uniform axis of directions over an angle window, plus the fixed anchors.
fn direction_axis(center: f64, halfwidth: f64, count: usize, anchors: &[Vec2]) -> Vec<Vec2> {
    let mut axis = Vec::with_capacity(count + anchors.len());
    for i in 0..count {
        let t = if count == 1 {
            0.5
        } else {
            i as f64 / (count - 1) as f64
        };
        axis.push(Vec2::from_angle(center - halfwidth + 2.0 * halfwidth * t));
    }
    axis.extend_from_slice(anchors);
    axis
}

fn weight_axis(center: f64, halfwidth: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let t = if count == 1 {
                0.5
            } else {
                i as f64 / (count - 1) as f64
            };
            (center - halfwidth + 2.0 * halfwidth * t).clamp(0.0, 1.0)
        })
        .collect()
}

const PSD_GRID_TOL: f64 = 1e-12;

/// Exhaustive minimization of `E[g(p)]` over the rank-1 family of the spec.
///
/// Returns the minimal value and the argmin POVM. The search space always
/// contains feasible points (zero weights give the identity remainder), so
/// [`OracleError::EmptyFeasible`] signals a resolution so low that every
/// candidate failed the PSD filter.
pub fn brute_force_optimum(
    problem: &DiscriminationProblem,
    g: &ObjectiveFn,
    spec: &SearchSpec,
) -> Result<(f64, Povm), OracleError> {
    spec.validate()?;
    let (s0, s1) = state_vectors(problem);
    let eval = Evaluator {
        pi: problem.prior(),
        g,
    };
    let anchors = [s0, s1, s0.rot90(), s1.rot90(), Vec2::new(1.0, 0.0)];

    let shrink = 4.0f64;
    let passes = spec.refine_iters + 1;
    let half_pi = 0.5 * std::f64::consts::PI;

    // Per-pass axis sizes chosen so that the effective resolutions meet the
    // spec while each pass stays small enough to scan exhaustively.
    let effective_factor = shrink.powi(spec.refine_iters as i32);
    let angle_pts = |target: usize, floor: usize| {
        ((target as f64 / effective_factor).ceil() as usize).max(floor)
    };

    match spec.outcomes {
        2 => {
            let mut center = half_pi;
            let mut halfwidth = half_pi;
            let mut best: Option<(f64, usize, Candidate)> = None;
            for pass in 0..passes {
                let count = if pass == 0 {
                    spec.angle_resolution
                } else {
                    spec.angle_resolution.min(65)
                };
                let axis = direction_axis(center, halfwidth, count, &anchors);
                let pass_best = axis
                    .par_iter()
                    .enumerate()
                    .map(|(idx, &v)| {
                        let a = DirData::new(v, s0, s1);
                        let b = DirData::new(v.rot90(), s0, s1);
                        let value =
                            eval.outcome_term(a.q0, a.q1) + eval.outcome_term(b.q0, b.q1);
                        (
                            value,
                            idx,
                            Candidate {
                                dirs: [v, v, v],
                                weights: [1.0, 0.0, 0.0],
                                free: 1,
                            },
                        )
                    })
                    .reduce_with(min_by_value_then_index)
                    .ok_or(OracleError::EmptyFeasible)?;
                if best.as_ref().map_or(true, |b| pass_best.0 < b.0) {
                    best = Some(pass_best);
                }
                center = best.as_ref().unwrap().2.dirs[0].angle();
                halfwidth /= shrink;
            }
            finish(best)
        }
        j => {
            let free = j - 1;
            let a_pts = if j == 3 {
                angle_pts(spec.angle_resolution, 8)
            } else {
                8
            };
            let w_pts = if j == 3 {
                spec.weight_resolution
            } else {
                (spec.weight_resolution / 4).max(8)
            };
            let mut a_center = [half_pi; 3];
            let mut a_half = [half_pi; 3];
            let mut w_center = [0.5; 3];
            let mut w_half = [0.5; 3];
            let mut best: Option<(f64, usize, Candidate)> = None;

            for _pass in 0..passes {
                let dir_axes: Vec<Vec<DirData>> = (0..free)
                    .map(|ax| {
                        direction_axis(a_center[ax], a_half[ax], a_pts, &anchors)
                            .into_iter()
                            .map(|v| DirData::new(v, s0, s1))
                            .collect()
                    })
                    .collect();
                let weight_axes: Vec<Vec<f64>> = (0..free)
                    .map(|ax| weight_axis(w_center[ax], w_half[ax], w_pts))
                    .collect();

                let outer: Vec<usize> = (0..dir_axes[0].len()).collect();
                let pass_best = outer
                    .par_iter()
                    .filter_map(|&i0| {
                        let mut local: Option<(f64, usize, Candidate)> = None;
                        let mut idx = i0 * stride(&dir_axes, &weight_axes, free);
                        scan_rest(
                            &eval,
                            &dir_axes,
                            &weight_axes,
                            free,
                            i0,
                            &mut idx,
                            &mut local,
                        );
                        local
                    })
                    .reduce_with(min_by_value_then_index);

                let pass_best = match pass_best {
                    Some(b) => b,
                    None => continue,
                };
                if best.as_ref().map_or(true, |b| pass_best.0 < b.0) {
                    best = Some(pass_best);
                }
                let inc = best.as_ref().unwrap().2;
                for ax in 0..free {
                    a_center[ax] = inc.dirs[ax].angle();
                    a_half[ax] /= shrink;
                    w_center[ax] = inc.weights[ax];
                    w_half[ax] /= shrink;
                }
            }
            finish(best)
        }
    }
}

fn stride(dir_axes: &[Vec<DirData>], weight_axes: &[Vec<f64>], free: usize) -> usize {
    let mut s = 1usize;
    for ax in 1..free {
        s *= dir_axes[ax].len();
    }
    for ax in 0..free {
        s *= weight_axes[ax].len();
    }
    s
}

/// Scans all remaining axes for a fixed first-direction index; `J−1` nested
/// direction loops then `J−1` weight loops, remainder element checked for
/// positivity inline.
#[allow(clippy::too_many_arguments)]
fn scan_rest(
    eval: &Evaluator,
    dir_axes: &[Vec<DirData>],
    weight_axes: &[Vec<f64>],
    free: usize,
    i0: usize,
    idx: &mut usize,
    best: &mut Option<(f64, usize, Candidate)>,
) {
    let d0 = dir_axes[0][i0];
    match free {
        2 => {
            for &d1 in &dir_axes[1] {
                for &w0 in &weight_axes[0] {
                    for &w1 in &weight_axes[1] {
                        evaluate_candidate(eval, &[d0, d1], &[w0, w1], *idx, best);
                        *idx += 1;
                    }
                }
            }
        }
        3 => {
            for &d1 in &dir_axes[1] {
                for &d2 in &dir_axes[2] {
                    for &w0 in &weight_axes[0] {
                        for &w1 in &weight_axes[1] {
                            for &w2 in &weight_axes[2] {
                                evaluate_candidate(eval, &[d0, d1, d2], &[w0, w1, w2], *idx, best);
                                *idx += 1;
                            }
                        }
                    }
                }
            }
        }
        _ => unreachable!("free outcome count is 2 or 3"),
    }
}

#[inline]
fn evaluate_candidate(
    eval: &Evaluator,
    dirs: &[DirData],
    weights: &[f64],
    idx: usize,
    best: &mut Option<(f64, usize, Candidate)>,
) {
    // Remainder entries and PSD filter.
    let mut a = 1.0;
    let mut d = 1.0;
    let mut b = 0.0;
    let mut q0r = 1.0;
    let mut q1r = 1.0;
    let mut value = 0.0;
    for (dd, &w) in dirs.iter().zip(weights) {
        a -= w * dd.xx;
        d -= w * dd.yy;
        b -= w * dd.xy;
        let q0 = w * dd.q0;
        let q1 = w * dd.q1;
        q0r -= q0;
        q1r -= q1;
        value += eval.outcome_term(q0, q1);
    }
    if a < -PSD_GRID_TOL || d < -PSD_GRID_TOL || a * d - b * b < -PSD_GRID_TOL {
        return;
    }
    value += eval.outcome_term(q0r.max(0.0), q1r.max(0.0));
    if best.as_ref().map_or(true, |bst| value < bst.0) {
        let mut cd = [dirs[0].dir; 3];
        let mut cw = [0.0f64; 3];
        for i in 0..dirs.len() {
            cd[i] = dirs[i].dir;
            cw[i] = weights[i];
        }
        *best = Some((
            value,
            idx,
            Candidate {
                dirs: cd,
                weights: cw,
                free: dirs.len(),
            },
        ));
    }
}

fn min_by_value_then_index(
    a: (f64, usize, Candidate),
    b: (f64, usize, Candidate),
) -> (f64, usize, Candidate) {
    if (b.0, b.1) < (a.0, a.1) {
        b
    } else {
        a
    }
}

fn finish(best: Option<(f64, usize, Candidate)>) -> Result<(f64, Povm), OracleError> {
    let (value, _, candidate) = best.ok_or(OracleError::EmptyFeasible)?;
    let povm = candidate.to_povm()?;
    Ok((value, povm))
}

/// Draws `n` random eligible POVMs for the problem: random allowed angles,
/// weights solved from the completeness constraint, rejection sampling until
/// everything is positive. Deterministic in `seed`.
pub fn eligible_continuum_sample(
    problem: &DiscriminationProblem,
    n: usize,
    seed: u64,
) -> Result<Vec<Povm>, OracleError> {
    if problem.overlap() >= 1.0 {
        return Err(OracleError::DegenerateOverlap);
    }
    let (s0, s1) = state_vectors(problem);
    let allowed = |v: Vec2| s0.dot(v) * s1.dot(v) >= 1e-9;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    const MAX_ATTEMPTS: usize = 2_000_000;

    while out.len() < n {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(OracleError::SamplingExhausted(MAX_ATTEMPTS));
        }
        let j = match rng.gen_range(0..4u8) {
            0 => 2,
            1 | 2 => 3,
            _ => 4,
        };
        let sample_dir = |rng: &mut ChaCha12Rng| {
            Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::PI))
        };
        let povm = match j {
            2 => {
                let v = sample_dir(&mut rng);
                if !(allowed(v) && allowed(v.rot90())) {
                    continue;
                }
                Povm::new(vec![
                    PovmElement::from_rank1_vector(1.0, v),
                    PovmElement::from_rank1_vector(1.0, v.rot90()),
                ])
            }
            _ => {
                let extra = if j == 4 {
                    let v = sample_dir(&mut rng);
                    if !allowed(v) {
                        continue;
                    }
                    Some((rng.gen_range(0.05..0.5), v))
                } else {
                    None
                };
                let dirs: Vec<Vec2> = (0..3).map(|_| sample_dir(&mut rng)).collect();
                if !dirs.iter().all(|&v| allowed(v)) {
                    continue;
                }
                // Completeness target, minus the fixed fourth element if any.
                let (mut tx, mut ty, mut txy) = (1.0, 1.0, 0.0);
                if let Some((w4, v4)) = extra {
                    tx -= w4 * v4.x * v4.x;
                    ty -= w4 * v4.y * v4.y;
                    txy -= w4 * v4.x * v4.y;
                }
                let Some(weights) = solve_completeness(&dirs, tx, ty, txy) else {
                    continue;
                };
                if weights.iter().any(|&w| w < 1e-9) {
                    continue;
                }
                let mut elements: Vec<PovmElement> = dirs
                    .iter()
                    .zip(&weights)
                    .map(|(&v, &w)| PovmElement::from_rank1_vector(w, v))
                    .collect();
                if let Some((w4, v4)) = extra {
                    elements.push(PovmElement::from_rank1_vector(w4, v4));
                }
                Povm::new(elements)
            }
        };
        if let Ok(povm) = povm {
            out.push(povm);
        }
    }
    Ok(out)
}

/// Solves `Σ w_i v_i v_iᵀ = [[tx, txy], [txy, ty]]` for three directions.
fn solve_completeness(dirs: &[Vec2], tx: f64, ty: f64, txy: f64) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for (col, v) in dirs.iter().enumerate() {
        m[0][col] = v.x * v.x;
        m[1][col] = v.y * v.y;
        m[2][col] = v.x * v.y;
    }
    m[0][3] = tx;
    m[1][3] = ty;
    m[2][3] = txy;
    // Gaussian elimination with partial pivoting.
    for k in 0..3 {
        let pivot = (k..3).max_by(|&a, &b| m[a][k].abs().total_cmp(&m[b][k].abs()))?;
        if m[pivot][k].abs() < 1e-9 {
            return None;
        }
        m.swap(k, pivot);
        for r in 0..3 {
            if r != k {
                let f = m[r][k] / m[k][k];
                for c in k..4 {
                    m[r][c] -= f * m[k][c];
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

/// A random POVM with no eligibility structure: random PSD pieces conjugated
/// by the inverse square root of their sum (`E_i = S^{-1/2} A_i S^{-1/2}`).
pub fn random_povm(outcomes: usize, rng: &mut ChaCha12Rng) -> Povm {
    loop {
        let parts: Vec<Sym2> = (0..outcomes.max(2))
            .map(|_| {
                let l11: f64 = rng.gen_range(-1.0..1.0);
                let l21: f64 = rng.gen_range(-1.0..1.0);
                let l22: f64 = rng.gen_range(-1.0..1.0);
                Sym2 {
                    a: l11 * l11,
                    b: l11 * l21,
                    d: l21 * l21 + l22 * l22,
                }
            })
            .collect();
        let sum = parts
            .iter()
            .fold(Sym2::ZERO, |acc, &p| acc.add(p));
        let (lo, hi) = sum.eigenvalues();
        if lo < 1e-6 {
            continue;
        }
        let u = sum.eigenvector(lo);
        let w = sum.eigenvector(hi);
        // S^{-1/2} = u uᵀ/√lo + w wᵀ/√hi
        let t = Sym2::outer(1.0 / lo.sqrt(), u).add(Sym2::outer(1.0 / hi.sqrt(), w));
        let conj = |x: Sym2| -> Sym2 {
            // t x t, all symmetric.
            let c00 = t.a * x.a + t.b * x.b;
            let c01 = t.a * x.b + t.b * x.d;
            let c10 = t.b * x.a + t.d * x.b;
            let c11 = t.b * x.b + t.d * x.d;
            Sym2 {
                a: c00 * t.a + c01 * t.b,
                b: c00 * t.b + c01 * t.d,
                d: c10 * t.b + c11 * t.d,
            }
        };
        let elements: Vec<PovmElement> = parts
            .into_iter()
            .map(|p| PovmElement::from_matrix(conj(p)))
            .collect();
        if let Ok(povm) = Povm::new(elements) {
            return povm;
        }
    }
}
