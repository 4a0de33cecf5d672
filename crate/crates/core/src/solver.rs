//! Constructive structured inverse eigenvalue solver.
//!
//! Given a graph `G` with matching number `k` and strictly decreasing
//! positive targets `μ_1 > … > μ_k`, the solver produces a real
//! skew-symmetric matrix whose graph is exactly `G` and whose spectrum is
//! `{±iμ_j}` plus `n - 2k` zeros.
//!
//! The route: align a maximum matching with positions `(2j-1, 2j)`, start
//! from the block-diagonal matrix that has `μ_j` in those positions and
//! zeros elsewhere (its spectrum is exact and its spectrum Jacobian in the
//! matched variables is the identity), freeze the free entries at `±ε`,
//! and run Newton on the matched variables until the top-`k` positive
//! parts hit the targets. If Newton fails or a matched entry drifts below
//! `ε`, halve `ε` and restart from the seed.

use nalgebra::{DVector, LU};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{maximum_matching, Graph, GraphError};
use crate::spectral::{
    build_pattern, evaluate_pattern, jacobian_from_eigen, rank_numeric, skew_eigen, SkewMatrix,
    SkewPattern, SpectralError,
};
use crate::{fabs, scalar, Real};

/// Targets closer than this (relative to `μ_1`) are rejected as equal.
pub const TARGET_MIN_RELATIVE_GAP: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("target has {got} values but match(G) = {expected}")]
    TargetSize { expected: usize, got: usize },
    #[error("invalid targets: {0}")]
    InvalidTargets(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("no convergence: perturbation underflow after {restarts} restarts")]
    EpsilonUnderflow { restarts: usize, trace: Vec<f64> },
}

/// Strictly decreasing positive spectral targets for a graph of a given
/// order: the realized spectrum is `{±iμ_j}` plus `n - 2k` zeros.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralTarget<T> {
    mu: Vec<T>,
    zero_multiplicity: usize,
}

impl<T: Real> SpectralTarget<T> {
    /// Validates `μ_1 > … > μ_k > 0` (strict, with relative gaps of at
    /// least [`TARGET_MIN_RELATIVE_GAP`]) and `2k <= n`.
    pub fn new(mu: Vec<T>, n: usize) -> Result<Self, SolverError> {
        let k = mu.len();
        if 2 * k > n {
            return Err(SolverError::InvalidTargets(format!(
                "{k} targets need order >= {}, graph has {n}",
                2 * k
            )));
        }
        if let Some(&last) = mu.last() {
            if last <= T::zero() {
                return Err(SolverError::InvalidTargets(
                    "targets must be strictly positive".into(),
                ));
            }
            let min_gap = scalar::<T>(TARGET_MIN_RELATIVE_GAP) * mu[0];
            for w in mu.windows(2) {
                if w[0] - w[1] < min_gap {
                    return Err(SolverError::InvalidTargets(
                        "targets must be strictly decreasing with distinct values".into(),
                    ));
                }
            }
        }
        Ok(Self {
            mu,
            zero_multiplicity: n - 2 * k,
        })
    }

    /// Targets `μ_1 > … > μ_k`, descending.
    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    pub fn k(&self) -> usize {
        self.mu.len()
    }

    /// Multiplicity of the zero eigenvalue, `n - 2k`.
    pub fn zero_multiplicity(&self) -> usize {
        self.zero_multiplicity
    }

    /// Order of the matrices this target describes.
    pub fn order(&self) -> usize {
        2 * self.mu.len() + self.zero_multiplicity
    }
}

/// Solver knobs. [`SolverConfig::for_target`] gives the defaults: the
/// perturbation starts at `0.05·μ_k` and may halve down to `1e-8·μ_k`.
#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig<T> {
    /// Initial magnitude of the free entries.
    pub epsilon0: T,
    /// Smallest allowed perturbation before giving up.
    pub epsilon_min: T,
    /// Residual target: `max_j |μ_j(A) - μ_j| <= newton_tol` succeeds.
    pub newton_tol: T,
    /// Newton updates per perturbation level.
    pub newton_max_iter: usize,
    /// Relative gap below which the Jacobian is refused.
    pub gap_tol: T,
    /// Seed for the signs of the free entries.
    pub seed: u64,
}

impl<T: Real> SolverConfig<T> {
    pub fn for_target(target: &SpectralTarget<T>) -> Self {
        let mu_k = target.mu().last().copied().unwrap_or_else(T::one);
        Self {
            epsilon0: scalar::<T>(0.05) * mu_k,
            epsilon_min: scalar::<T>(1e-8) * mu_k,
            newton_tol: scalar::<T>(1e-9),
            newton_max_iter: 50,
            gap_tol: scalar::<T>(1e-6),
            seed: 0,
        }
    }

    fn validate(&self) -> Result<(), SolverError> {
        if !(self.epsilon0 > T::zero()
            && self.epsilon_min > T::zero()
            && self.newton_tol > T::zero()
            && self.gap_tol > T::zero())
        {
            return Err(SolverError::InvalidConfig(
                "tolerances and perturbations must be positive".into(),
            ));
        }
        if self.epsilon_min >= self.epsilon0 {
            return Err(SolverError::InvalidConfig(
                "epsilon_min must be below epsilon0".into(),
            ));
        }
        if self.newton_max_iter == 0 {
            return Err(SolverError::InvalidConfig(
                "newton_max_iter must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Solver output. `matrix` is in the original vertex labels and its graph
/// is exactly the input graph; `trace` logs the residual after every
/// spectrum evaluation, across restarts.
#[derive(Debug, Clone, Serialize)]
#[serde(bound(serialize = "T: Serialize + crate::Entry"))]
pub struct SolverResult<T> {
    pub matrix: SkewMatrix<T>,
    pub residual: T,
    pub epsilon_used: T,
    pub iterations: usize,
    pub trace: Vec<T>,
}

/// The exact-spectrum starting point: `μ_j` at the matched positions,
/// zeros everywhere else (in relabeled coordinates).
pub fn seed_matrix<T: Real>(
    p: &SkewPattern,
    target: &SpectralTarget<T>,
) -> Result<SkewMatrix<T>, SolverError> {
    if p.matched_count() != target.k() {
        return Err(SolverError::TargetSize {
            expected: p.matched_count(),
            got: target.k(),
        });
    }
    if p.order() != target.order() {
        return Err(SolverError::InvalidTargets(format!(
            "target describes order {} but pattern has order {}",
            target.order(),
            p.order()
        )));
    }
    Ok(evaluate_pattern(
        p,
        target.mu(),
        &vec![T::zero(); p.free_count()],
    )?)
}

enum RoundFailure {
    IterationCap,
    JacobianGate,
    SingularJacobian,
    DegeneracyGuard,
}

/// Solves the inverse eigenvalue problem for `g` and `target`.
///
/// `target` must have exactly `match(G)` values. On success the returned
/// matrix has graph exactly `g`, top positive parts within
/// `cfg.newton_tol` of the targets, and `n - 2k` zero eigenvalues.
pub fn solve<T: Real>(
    g: &Graph,
    target: &SpectralTarget<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolverResult<T>, SolverError> {
    cfg.validate()?;
    if target.order() != g.vertex_count() {
        return Err(SolverError::InvalidTargets(format!(
            "target describes order {} but graph has {} vertices",
            target.order(),
            g.vertex_count()
        )));
    }
    let matching = maximum_matching(g);
    if matching.len() != target.k() {
        return Err(SolverError::TargetSize {
            expected: matching.len(),
            got: target.k(),
        });
    }
    let pattern = build_pattern(g, &matching)?;
    let to_old = pattern.relabeling().inverse_perm().to_vec();

    if pattern.free_count() == 0 {
        // a disjoint union of matching edges: the seed already is the answer
        let matrix = seed_matrix(&pattern, target)?.relabeled(&to_old);
        return Ok(SolverResult {
            matrix,
            residual: T::zero(),
            epsilon_used: T::zero(),
            iterations: 0,
            trace: Vec::new(),
        });
    }

    let mu = target.mu();
    let mu_k = *mu.last().expect("free edges imply k >= 1");
    let step_cap = scalar::<T>(0.5) * mu_k;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let signs: Vec<T> = (0..pattern.free_count())
        .map(|_| {
            if rng.random::<bool>() {
                T::one()
            } else {
                -T::one()
            }
        })
        .collect();

    let mut trace: Vec<T> = Vec::new();
    let mut iterations = 0usize;
    let mut restarts = 0usize;
    let mut eps = cfg.epsilon0;
    let half = scalar::<T>(0.5);
    while eps >= cfg.epsilon_min {
        let y: Vec<T> = signs.iter().map(|&s| s * eps).collect();
        match newton_round(&pattern, mu, &y, eps, cfg, step_cap, &mut trace, &mut iterations) {
            Ok((matrix, residual)) => {
                return Ok(SolverResult {
                    matrix: matrix.relabeled(&to_old),
                    residual,
                    epsilon_used: eps,
                    iterations,
                    trace,
                });
            }
            Err(_) => {
                restarts += 1;
                eps *= half;
            }
        }
    }
    Err(SolverError::EpsilonUnderflow {
        restarts,
        trace: trace
            .iter()
            .map(|&r| num_traits::cast(r).unwrap_or(f64::NAN))
            .collect(),
    })
}

/// One Newton run at a fixed perturbation: iterate on the matched values
/// until the residual passes, the iteration budget runs out, or an iterate
/// leaves the trustworthy region.
#[allow(clippy::too_many_arguments)]
fn newton_round<T: Real>(
    pattern: &SkewPattern,
    mu: &[T],
    y: &[T],
    eps: T,
    cfg: &SolverConfig<T>,
    step_cap: T,
    trace: &mut Vec<T>,
    iterations: &mut usize,
) -> Result<(SkewMatrix<T>, T), RoundFailure> {
    let k = mu.len();
    let mut x: Vec<T> = mu.to_vec();
    let mut updates = 0usize;
    loop {
        let a = evaluate_pattern(pattern, &x, y).expect("pattern dimensions are fixed");
        let eigen = skew_eigen(&a);
        let parts = eigen.spectrum.positive_parts();
        let residual = (0..k).fold(T::zero(), |acc, j| acc.max(fabs(parts[j] - mu[j])));
        trace.push(residual);
        if residual <= cfg.newton_tol {
            return Ok((a, residual));
        }
        if updates == cfg.newton_max_iter {
            return Err(RoundFailure::IterationCap);
        }
        let jac = jacobian_from_eigen(pattern, &eigen, cfg.gap_tol)
            .map_err(|_| RoundFailure::JacobianGate)?;
        let rhs = DVector::from_iterator(k, (0..k).map(|j| mu[j] - parts[j]));
        let delta = LU::new(jac)
            .solve(&rhs)
            .ok_or(RoundFailure::SingularJacobian)?;
        let max_step = delta.iter().fold(T::zero(), |acc, &d| acc.max(fabs(d)));
        let damp = if max_step > step_cap {
            step_cap / max_step
        } else {
            T::one()
        };
        for j in 0..k {
            x[j] += damp * delta[j];
        }
        updates += 1;
        *iterations += 1;
        // matched entries this small can no longer guarantee the graph
        if x.iter().any(|&xj| fabs(xj) < eps) {
            return Err(RoundFailure::DegeneracyGuard);
        }
    }
}

/// Per-check verification report for a claimed solution.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport<T> {
    /// Nonzero pattern of the matrix equals the graph exactly.
    pub graph_ok: bool,
    /// `A = -Aᵀ` holds entry by entry.
    pub skew_ok: bool,
    /// Top-`k` positive parts match the targets within the tolerance.
    pub spectrum_ok: bool,
    /// Exactly `2k` nonzero eigenvalues, and never more than `2·match(G)`.
    pub rank_ok: bool,
    pub nonzero_count: usize,
    pub max_spectrum_error: T,
    pub all_passed: bool,
}

/// Checks a claimed solution: graph equality, exact skew-symmetry, target
/// spectrum within `tol`, and the nonzero-eigenvalue count. Failures are
/// report entries, never errors.
pub fn verify_solution<T: Real>(
    g: &Graph,
    target: &SpectralTarget<T>,
    a: &SkewMatrix<T>,
    tol: T,
) -> VerifyReport<T> {
    let graph_ok = a.order() == g.vertex_count() && a.graph() == *g;
    let mut skew_ok = true;
    for i in 1..=a.order() {
        for j in 1..=a.order() {
            if a.get(i, j) != -a.get(j, i) {
                skew_ok = false;
            }
        }
    }
    let eigen = skew_eigen(a);
    let parts = eigen.spectrum.positive_parts();
    let k = target.k();
    let mut max_err = T::zero();
    let mut spectrum_ok = a.order() == target.order() && parts.len() >= k;
    if spectrum_ok {
        for (&part, &wanted) in parts.iter().zip(target.mu()) {
            max_err = max_err.max(fabs(part - wanted));
        }
        spectrum_ok = max_err <= tol;
    }
    let nonzero_count = eigen.spectrum.nonzero_eigenvalue_count();
    let match_number = maximum_matching(g).len();
    let rank_ok = nonzero_count == 2 * k && nonzero_count <= 2 * match_number;
    let all_passed = graph_ok && skew_ok && spectrum_ok && rank_ok;
    VerifyReport {
        graph_ok,
        skew_ok,
        spectrum_ok,
        rank_ok,
        nonzero_count,
        max_spectrum_error: max_err,
        all_passed,
    }
}

/// Converse certificate: a skew matrix whose graph is exactly `g` and
/// whose numeric rank is `2·⌊n/2⌋` forces the matching number up to
/// `⌊n/2⌋`, since the rank of any evaluation is at most twice the matching
/// number. The matching number is re-derived so a contradiction surfaces
/// as a panic instead of a wrong answer.
pub fn certifies_full_matching<T: Real>(g: &Graph, a: &SkewMatrix<T>, tol: T) -> bool {
    let certified =
        a.order() == g.vertex_count() && a.graph() == *g && rank_numeric(a, tol) == 2 * (g.vertex_count() / 2);
    if certified {
        assert_eq!(
            maximum_matching(g).len(),
            g.vertex_count() / 2,
            "rank certificate contradicts the matching number"
        );
    }
    certified
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Matching;
    use crate::spectral::rank_exact_rational;
    use crate::Rational;
    use num_bigint::BigInt;

    fn example_graph() -> Graph {
        Graph::new(6, [(1, 2), (2, 3), (2, 5), (3, 4), (4, 6), (4, 5), (2, 4)]).unwrap()
    }

    fn two_leg_tree() -> Graph {
        Graph::new(
            11,
            [
                (1, 2),
                (2, 3),
                (1, 6),
                (6, 7),
                (3, 4),
                (4, 8),
                (8, 10),
                (3, 5),
                (5, 9),
                (9, 11),
            ],
        )
        .unwrap()
    }

    fn target(mu: &[f64], n: usize) -> SpectralTarget<f64> {
        SpectralTarget::new(mu.to_vec(), n).unwrap()
    }

    #[test]
    fn target_validation() {
        assert!(SpectralTarget::new(vec![2.0, 1.0], 6).is_ok());
        assert!(matches!(
            SpectralTarget::new(vec![1.0, 2.0], 6),
            Err(SolverError::InvalidTargets(_))
        ));
        assert!(matches!(
            SpectralTarget::new(vec![2.0, 2.0], 6),
            Err(SolverError::InvalidTargets(_))
        ));
        assert!(matches!(
            SpectralTarget::new(vec![2.0, -1.0], 6),
            Err(SolverError::InvalidTargets(_))
        ));
        assert!(matches!(
            SpectralTarget::new(vec![3.0, 2.0, 1.0], 4),
            Err(SolverError::InvalidTargets(_))
        ));
        let t = target(&[2.0, 1.0], 7);
        assert_eq!(t.zero_multiplicity(), 3);
        assert_eq!(t.order(), 7);
    }

    #[test]
    fn seed_matrix_examples() {
        let g = Graph::new(2, [(1, 2)]).unwrap();
        let p = build_pattern(&g, &maximum_matching(&g)).unwrap();
        let a = seed_matrix(&p, &target(&[3.0], 2)).unwrap();
        assert_eq!(a.get(1, 2), 3.0);
        assert_eq!(a.get(2, 1), -3.0);

        let g = Graph::new(6, [(1, 2), (3, 4)]).unwrap();
        let p = build_pattern(&g, &maximum_matching(&g)).unwrap();
        let a = seed_matrix(&p, &target(&[2.0, 1.0], 6)).unwrap();
        let parts = skew_eigen(&a).spectrum.positive_parts().to_vec();
        assert!((parts[0] - 2.0).abs() < 1e-14);
        assert!((parts[1] - 1.0).abs() < 1e-14);
        assert!(parts[2].abs() < 1e-14);

        let g = Graph::new(3, []).unwrap();
        let p = build_pattern(&g, &maximum_matching(&g)).unwrap();
        let a = seed_matrix(&p, &target(&[], 3)).unwrap();
        assert!(a.upper_triples().is_empty());
    }

    #[test]
    fn solve_single_edge_is_exact() {
        let g = Graph::new(2, [(1, 2)]).unwrap();
        let t = target(&[5.0], 2);
        let r = solve(&g, &t, &SolverConfig::for_target(&t)).unwrap();
        assert_eq!(r.matrix.get(1, 2), 5.0);
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.iterations, 0);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn solve_example_graph() {
        let g = example_graph();
        let t = target(&[2.0, 1.0], 6);
        let r = solve(&g, &t, &SolverConfig::for_target(&t)).unwrap();
        assert!(r.residual <= 1e-9, "residual {}", r.residual);
        assert_eq!(r.matrix.graph(), g);
        assert_eq!(r.matrix.upper_triples().len(), 7);
        let report = verify_solution(&g, &t, &r.matrix, 1e-8);
        assert!(report.all_passed, "{report:?}");
    }

    #[test]
    fn solve_two_leg_tree_full_spectrum() {
        let g = two_leg_tree();
        let t = target(&[5.0, 4.0, 3.0, 2.0, 1.0], 11);
        let r = solve(&g, &t, &SolverConfig::for_target(&t)).unwrap();
        assert!(r.residual <= 1e-9);
        assert_eq!(r.matrix.graph(), g);
        let eig = skew_eigen(&r.matrix);
        assert_eq!(eig.spectrum.nonzero_eigenvalue_count(), 10);
        assert_eq!(eig.spectrum.zero_eigenvalue_count(), 1);
    }

    #[test]
    fn solve_requires_matching_count() {
        let g = example_graph();
        let t = target(&[3.0, 2.0, 1.0], 6);
        assert!(matches!(
            solve(&g, &t, &SolverConfig::for_target(&t)),
            Err(SolverError::TargetSize {
                expected: 2,
                got: 3
            })
        ));
    }

    #[test]
    fn solve_fixed_point_on_disjoint_edges() {
        let g = Graph::new(4, [(1, 2), (3, 4)]).unwrap();
        let t = target(&[2.0, 1.0], 4);
        let p = build_pattern(&g, &maximum_matching(&g)).unwrap();
        let seed = seed_matrix(&p, &t).unwrap();
        let r = solve(&g, &t, &SolverConfig::for_target(&t)).unwrap();
        assert_eq!(r.matrix, seed);
    }

    #[test]
    fn solve_on_disconnected_graph_with_isolated_vertices() {
        // matching number 1 on a path component, three isolated vertices
        let g = Graph::new(6, [(1, 2), (2, 3)]).unwrap();
        let t = target(&[2.0], 6);
        let r = solve(&g, &t, &SolverConfig::for_target(&t)).unwrap();
        assert!(r.residual <= 1e-9);
        assert_eq!(r.matrix.graph(), g);
        let eig = skew_eigen(&r.matrix);
        assert_eq!(eig.spectrum.nonzero_eigenvalue_count(), 2);
        assert_eq!(eig.spectrum.zero_eigenvalue_count(), 4);
        assert!(verify_solution(&g, &t, &r.matrix, 1e-8).all_passed);
    }

    #[test]
    fn solve_restores_original_labels() {
        // only edge {2, 3}: the pattern lives on relabeled {1, 2}, the
        // answer must come back on {2, 3}
        let g = Graph::new(4, [(2, 3)]).unwrap();
        let t = target(&[7.0], 4);
        let r = solve(&g, &t, &SolverConfig::for_target(&t)).unwrap();
        assert_eq!(r.matrix.get(2, 3), 7.0);
        assert_eq!(r.matrix.graph(), g);
    }

    #[test]
    fn solve_is_deterministic() {
        let g = example_graph();
        let t = target(&[2.5, 0.75], 6);
        let cfg = SolverConfig::for_target(&t);
        let a = solve(&g, &t, &cfg).unwrap();
        let b = solve(&g, &t, &cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn solve_restarts_shrink_epsilon() {
        // a deliberately oversized perturbation forces at least one restart
        let g = example_graph();
        let t = target(&[2.0, 1.0], 6);
        let mut cfg = SolverConfig::for_target(&t);
        cfg.epsilon0 = 10.0;
        cfg.newton_max_iter = 4;
        let r = solve(&g, &t, &cfg).unwrap();
        assert!(r.epsilon_used < cfg.epsilon0);
        assert!(r.residual <= cfg.newton_tol);
        assert_eq!(r.matrix.graph(), g);
    }

    #[test]
    fn solve_reports_underflow() {
        let g = example_graph();
        let t = target(&[2.0, 1.0], 6);
        let mut cfg = SolverConfig::for_target(&t);
        // one round at a hopeless perturbation, then epsilon dips under the floor
        cfg.epsilon0 = 10.0;
        cfg.epsilon_min = 9.0;
        cfg.newton_tol = 1e-16;
        cfg.newton_max_iter = 2;
        match solve(&g, &t, &cfg) {
            Err(SolverError::EpsilonUnderflow { restarts, trace }) => {
                assert_eq!(restarts, 1);
                assert!(!trace.is_empty());
            }
            other => panic!("expected underflow, got {other:?}"),
        }
    }

    #[test]
    fn solve_f32_smoke() {
        let g = Graph::new(2, [(1, 2)]).unwrap();
        let t = SpectralTarget::<f32>::new(vec![2.0], 2).unwrap();
        let r = solve(&g, &t, &SolverConfig::for_target(&t)).unwrap();
        assert_eq!(r.matrix.get(1, 2), 2.0f32);
    }

    #[test]
    fn verify_flags_missing_edges() {
        // the seed omits every free edge, so the graph check must fail
        let g = example_graph();
        let t = target(&[2.0, 1.0], 6);
        let p = build_pattern(&g, &maximum_matching(&g)).unwrap();
        let seed = seed_matrix(&p, &t).unwrap();
        let report = verify_solution(&g, &t, &seed, 1e-8);
        assert!(!report.graph_ok);
        assert!(report.skew_ok);
        assert!(report.spectrum_ok);
        assert!(!report.all_passed);
    }

    #[test]
    fn verify_flags_wrong_spectrum() {
        // K_{2,2} rank-2 evaluation cannot carry two nonzero pairs
        let x = [1.0, 1.0, 1.0, 1.0];
        let y = [1.0, 1.0, 2.0, 2.0];
        let mut a = SkewMatrix::<f64>::zeros(4);
        for i in 1..=4 {
            for j in (i + 1)..=4 {
                let v = x[i - 1] * y[j - 1] - y[i - 1] * x[j - 1];
                if v != 0.0 {
                    a.set(i, j, v);
                }
            }
        }
        let g = a.graph();
        let t = target(&[2.0, 1.0], 4);
        let report = verify_solution(&g, &t, &a, 1e-8);
        assert!(report.graph_ok);
        assert!(!report.spectrum_ok);
        assert!(!report.rank_ok);
        assert_eq!(report.nonzero_count, 2);
    }

    #[test]
    fn certificate_on_solver_output() {
        let g = example_graph();
        // match(G) = 2 < 3 = floor(6/2): a full-rank certificate must not appear
        let t = target(&[2.0, 1.0], 6);
        let r = solve(&g, &t, &SolverConfig::for_target(&t)).unwrap();
        assert!(!certifies_full_matching(&g, &r.matrix, 1e-9));

        // the two-leg tree has a full matching; its solver output certifies it
        let tree = two_leg_tree();
        let t = target(&[5.0, 4.0, 3.0, 2.0, 1.0], 11);
        let r = solve(&tree, &t, &SolverConfig::for_target(&t)).unwrap();
        assert!(certifies_full_matching(&tree, &r.matrix, 1e-9));
    }

    #[test]
    fn rank_never_exceeds_certified_bound() {
        // random evaluations on the example graph stay at rank <= 4
        use rand::{Rng, SeedableRng};
        let g = example_graph();
        let edges: Vec<_> = g.edges().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let mut a = SkewMatrix::<f64>::zeros(6);
            for &(u, v) in &edges {
                a.set(u, v, rng.random_range(-2.0..2.0));
            }
            assert!(rank_numeric(&a, 1e-9) <= 4);
        }
    }

    #[test]
    fn exact_rank_of_solver_pattern_matches() {
        // pin the dual-route rank agreement on a solved instance by
        // rounding the solution to rationals with denominator 2^40
        let g = example_graph();
        let t = target(&[2.0, 1.0], 6);
        let r = solve(&g, &t, &SolverConfig::for_target(&t)).unwrap();
        let mut exact = SkewMatrix::<Rational>::zeros(6);
        let denom = BigInt::from(1u64 << 40);
        for (i, j, v) in r.matrix.upper_triples() {
            let scaled = (v * (1u64 << 40) as f64).round() as i64;
            exact.set(i, j, Rational::new(BigInt::from(scaled), denom.clone()));
        }
        assert_eq!(rank_exact_rational(&exact), 4);
    }

    #[test]
    fn config_validation() {
        let t = target(&[1.0], 2);
        let mut cfg = SolverConfig::for_target(&t);
        cfg.epsilon_min = cfg.epsilon0;
        assert!(matches!(
            solve(&Graph::new(2, [(1, 2)]).unwrap(), &t, &cfg),
            Err(SolverError::InvalidConfig(_))
        ));
        let mut cfg = SolverConfig::for_target(&t);
        cfg.newton_tol = 0.0;
        assert!(matches!(
            solve(&Graph::new(2, [(1, 2)]).unwrap(), &t, &cfg),
            Err(SolverError::InvalidConfig(_))
        ));
    }

    #[test]
    fn build_pattern_rejects_non_maximum_via_solver_path() {
        let g = Graph::new(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        let m = Matching::new(&g, [(2, 3)]).unwrap();
        assert!(build_pattern(&g, &m).is_err());
    }
}
