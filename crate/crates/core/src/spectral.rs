//! Skew-symmetric matrices, structured patterns, and their spectra.
//!
//! The eigenvalues of a real skew-symmetric `A` are `±iμ` pairs plus
//! structural zeros. Everything here works with the real positive parts
//! `μ`: the Hermitian matrix `-iA` has the same eigenvectors and real
//! eigenvalues `±μ`, so one Hermitian solve yields the spectrum and the
//! unit eigenvectors that the analytic derivative formula needs.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{maximum_matching, Graph, GraphError, Matching, VertexRelabeling};
use crate::graph::relabel_for_matching;
use crate::{fabs, scalar, Entry, Rational, Real};

/// Relative gap below which two positive parts are treated as clustered
/// and the spectrum Jacobian is refused.
pub const JACOBIAN_GAP_TOL: f64 = 1e-6;

/// Positive parts at or below `1e-8 * max(1, μ₁)` count as zero.
pub const ZERO_PART_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("matching has {got} edges but a maximum matching has {maximum}")]
    NotMaximumMatching { got: usize, maximum: usize },
    #[error("expected {expected} {what}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("entry ({i}, {j}) invalid for order {n}")]
    BadEntry { i: usize, j: usize, n: usize },
    #[error("duplicate entry ({i}, {j})")]
    DuplicateEntry { i: usize, j: usize },
    #[error("eigenvector is not unit (norm {norm})")]
    NonUnitEigenvector { norm: f64 },
    #[error("perturbation indices must be two distinct off-diagonal positions")]
    InvalidPerturbation,
    #[error("Jacobian unreliable: positive parts {j} and {next} are within the gap tolerance")]
    JacobianUnreliable { j: usize, next: usize },
}

/// Dense real skew-symmetric matrix of order `n`.
///
/// Only the strict upper triangle is stored; the lower triangle is the
/// reflection with flipped sign and the diagonal is zero, so `A = -Aᵀ`
/// holds exactly by construction. Indices are 1-based like graph vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix<T> {
    n: usize,
    upper: Vec<T>,
}

impl<T: Entry> SkewMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "order must be positive");
        Self {
            n,
            upper: vec![T::zero(); n * (n - 1) / 2],
        }
    }

    /// Builds from 1-based `(i, j, value)` triples with `i < j`.
    pub fn from_upper_triples(
        n: usize,
        triples: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self, SpectralError> {
        let mut a = Self::zeros(n);
        let mut filled = vec![false; a.upper.len()];
        for (i, j, value) in triples {
            if i == 0 || j == 0 || i >= j || j > n {
                return Err(SpectralError::BadEntry { i, j, n });
            }
            let idx = a.index(i - 1, j - 1);
            if filled[idx] {
                return Err(SpectralError::DuplicateEntry { i, j });
            }
            filled[idx] = true;
            a.upper[idx] = value;
        }
        Ok(a)
    }

    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Entry `a_ij` (1-based); the diagonal is zero and `a_ji = -a_ij`.
    pub fn get(&self, i: usize, j: usize) -> T {
        assert!(i >= 1 && j >= 1 && i <= self.n && j <= self.n);
        if i == j {
            T::zero()
        } else if i < j {
            self.upper[self.index(i - 1, j - 1)].clone()
        } else {
            -self.upper[self.index(j - 1, i - 1)].clone()
        }
    }

    /// Sets `a_ij = value` and `a_ji = -value` (1-based, `i != j`).
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(i != j, "diagonal entries are structurally zero");
        assert!(i >= 1 && j >= 1 && i <= self.n && j <= self.n);
        if i < j {
            let idx = self.index(i - 1, j - 1);
            self.upper[idx] = value;
        } else {
            let idx = self.index(j - 1, i - 1);
            self.upper[idx] = -value;
        }
    }

    /// Nonzero upper-triangle entries as sorted 1-based triples.
    pub fn upper_triples(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::new();
        for i in 1..self.n {
            for j in (i + 1)..=self.n {
                let v = self.upper[self.index(i - 1, j - 1)].clone();
                if !v.is_zero() {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    /// The graph of the matrix: vertices `1..=n`, an edge per nonzero
    /// off-diagonal position.
    pub fn graph(&self) -> Graph {
        let edges = self
            .upper_triples()
            .into_iter()
            .map(|(i, j, _)| (i, j))
            .collect::<Vec<_>>();
        Graph::new(self.n, edges).expect("triples are valid edges")
    }

    /// Relabels indices: entry `(i, j)` moves to `(to_new[i], to_new[j])`.
    /// `to_new` is 1-based with slot 0 unused.
    pub fn relabeled(&self, to_new: &[usize]) -> Self {
        let mut out = Self::zeros(self.n);
        for (i, j, v) in self.upper_triples() {
            out.set(to_new[i], to_new[j], v);
        }
        out
    }
}

impl<T: Entry + std::ops::Mul<Output = T>> SkewMatrix<T> {
    /// Squared Frobenius norm: twice the sum of squared upper entries.
    pub fn frobenius_norm_squared(&self) -> T {
        let half = self
            .upper
            .iter()
            .fold(T::zero(), |acc, v| acc + v.clone() * v.clone());
        half.clone() + half
    }
}

impl<T: Real> SkewMatrix<T> {
    pub fn to_dense(&self) -> DMatrix<T> {
        DMatrix::from_fn(self.n, self.n, |i, j| {
            if i == j {
                T::zero()
            } else {
                self.get(i + 1, j + 1)
            }
        })
    }

    /// The Hermitian matrix `-iA`, whose eigenvalues are the real numbers
    /// `μ` with `A v = iμ v`.
    fn to_hermitian(&self) -> DMatrix<Complex<T>> {
        DMatrix::from_fn(self.n, self.n, |i, j| {
            Complex::new(T::zero(), -self.get(i + 1, j + 1))
        })
    }
}

#[derive(Serialize, Deserialize)]
struct SkewMatrixRepr<T> {
    n: usize,
    upper: Vec<(usize, usize, T)>,
}

impl<T: Entry + Serialize> Serialize for SkewMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SkewMatrixRepr {
            n: self.n,
            upper: self.upper_triples(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Entry + Deserialize<'de>> Deserialize<'de> for SkewMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SkewMatrixRepr::<T>::deserialize(deserializer)?;
        if repr.n == 0 {
            return Err(D::Error::custom("matrix order must be positive"));
        }
        SkewMatrix::from_upper_triples(repr.n, repr.upper).map_err(D::Error::custom)
    }
}

/// Symbolic skew-symmetric pattern of a graph aligned with a maximum
/// matching: matched variables sit at `(2j-1, 2j)` and every remaining
/// edge of the relabeled graph carries a free variable.
#[derive(Debug, Clone)]
pub struct SkewPattern {
    n: usize,
    x_positions: Vec<(usize, usize)>,
    y_positions: Vec<(usize, usize)>,
    source_graph: Graph,
    relabeling: VertexRelabeling,
}

impl SkewPattern {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of matched variables `k`.
    pub fn matched_count(&self) -> usize {
        self.x_positions.len()
    }

    /// Number of free variables `m`.
    pub fn free_count(&self) -> usize {
        self.y_positions.len()
    }

    /// Matched positions `(2j-1, 2j)` in relabeled coordinates.
    pub fn x_positions(&self) -> &[(usize, usize)] {
        &self.x_positions
    }

    /// Free positions in relabeled coordinates, lexicographically sorted.
    pub fn y_positions(&self) -> &[(usize, usize)] {
        &self.y_positions
    }

    pub fn source_graph(&self) -> &Graph {
        &self.source_graph
    }

    pub fn relabeling(&self) -> &VertexRelabeling {
        &self.relabeling
    }
}

/// Builds the pattern for `g` over the maximum matching `m`.
///
/// `m` must be maximum: otherwise two unmatched vertices could be
/// adjacent and the all-zero block over the unmatched vertices would gain
/// an edge.
pub fn build_pattern(g: &Graph, m: &Matching) -> Result<SkewPattern, SpectralError> {
    m.validate_for(g)?;
    let maximum = maximum_matching(g).len();
    if m.len() != maximum {
        return Err(SpectralError::NotMaximumMatching {
            got: m.len(),
            maximum,
        });
    }
    let relabeling = relabel_for_matching(g, m)?;
    let relabeled = relabeling.apply_graph(g);
    let k = m.len();
    let x_positions: Vec<(usize, usize)> = (1..=k).map(|j| (2 * j - 1, 2 * j)).collect();
    let y_positions: Vec<(usize, usize)> = relabeled
        .edges()
        .filter(|&(u, v)| !(v == u + 1 && u % 2 == 1 && v <= 2 * k))
        .collect();
    debug_assert!(
        y_positions.iter().all(|&(u, _)| u <= 2 * k),
        "unmatched vertices span no edges when the matching is maximum"
    );
    Ok(SkewPattern {
        n: g.vertex_count(),
        x_positions,
        y_positions,
        source_graph: g.clone(),
        relabeling,
    })
}

/// Real evaluation of a pattern: `x` fills the matched positions, `y` the
/// free positions. The result lives in relabeled coordinates.
pub fn evaluate_pattern<T: Entry>(
    p: &SkewPattern,
    x: &[T],
    y: &[T],
) -> Result<SkewMatrix<T>, SpectralError> {
    if x.len() != p.matched_count() {
        return Err(SpectralError::DimensionMismatch {
            what: "matched values",
            expected: p.matched_count(),
            got: x.len(),
        });
    }
    if y.len() != p.free_count() {
        return Err(SpectralError::DimensionMismatch {
            what: "free values",
            expected: p.free_count(),
            got: y.len(),
        });
    }
    let mut a = SkewMatrix::zeros(p.order());
    for (&(i, j), v) in p.x_positions.iter().zip(x) {
        a.set(i, j, v.clone());
    }
    for (&(i, j), v) in p.y_positions.iter().zip(y) {
        a.set(i, j, v.clone());
    }
    Ok(a)
}

/// Positive parts of a skew spectrum: the `⌊n/2⌋` largest imaginary parts
/// of the upper-half-plane eigenvalues, descending. The full spectrum is
/// `{±iμ_j}` plus one structural zero when `n` is odd.
#[derive(Debug, Clone, Serialize)]
pub struct SkewSpectrum<T> {
    positive_parts: Vec<T>,
    zero_count_numeric: usize,
    #[serde(skip)]
    order: usize,
}

impl<T: Real> SkewSpectrum<T> {
    pub fn positive_parts(&self) -> &[T] {
        &self.positive_parts
    }

    /// Positive parts at or below the zero threshold.
    pub fn zero_count_numeric(&self) -> usize {
        self.zero_count_numeric
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `μ` counts as nonzero when above `1e-8 * max(1, μ₁)`.
    pub fn zero_threshold(&self) -> T {
        let top = self
            .positive_parts
            .first()
            .copied()
            .unwrap_or_else(T::zero);
        scalar::<T>(ZERO_PART_TOL) * top.max(T::one())
    }

    /// Number of nonzero eigenvalues of the full spectrum (`2 ×` the
    /// nonzero positive parts).
    pub fn nonzero_eigenvalue_count(&self) -> usize {
        2 * (self.positive_parts.len() - self.zero_count_numeric)
    }

    /// Number of zero eigenvalues of the full spectrum, counting the
    /// structural odd-order zero.
    pub fn zero_eigenvalue_count(&self) -> usize {
        self.order - self.nonzero_eigenvalue_count()
    }
}

/// Spectrum plus unit eigenvectors for the nonzero positive parts:
/// `eigenvectors[j]` satisfies `A v = iμ_j v` with the largest-magnitude
/// entry rotated to the positive real axis.
#[derive(Debug, Clone)]
pub struct SkewEigen<T: Real> {
    pub spectrum: SkewSpectrum<T>,
    pub eigenvectors: Vec<DVector<Complex<T>>>,
}

/// Full eigendecomposition of a skew-symmetric matrix via the Hermitian
/// matrix `-iA`.
pub fn skew_eigen<T: Real>(a: &SkewMatrix<T>) -> SkewEigen<T> {
    let n = a.order();
    let eigen = SymmetricEigen::new(a.to_hermitian());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        eigen.eigenvalues[y]
            .partial_cmp(&eigen.eigenvalues[x])
            .expect("finite eigenvalues")
    });

    let half = n / 2;
    let positive_parts: Vec<T> = order[..half]
        .iter()
        .map(|&idx| eigen.eigenvalues[idx].max(T::zero()))
        .collect();
    let top = positive_parts.first().copied().unwrap_or_else(T::zero);
    let threshold = scalar::<T>(ZERO_PART_TOL) * top.max(T::one());
    let zero_count_numeric = positive_parts.iter().filter(|&&m| m <= threshold).count();

    let nonzero = half - zero_count_numeric;
    let mut eigenvectors = Vec::with_capacity(nonzero);
    for &idx in &order[..nonzero] {
        let mut v: DVector<Complex<T>> = eigen.eigenvectors.column(idx).into_owned();
        v /= Complex::new(v.norm(), T::zero());
        // rotate the largest-magnitude entry onto the positive real axis
        let mut best = 0usize;
        let mut best_sq = T::zero();
        for (i, z) in v.iter().enumerate() {
            let sq = z.norm_sqr();
            if sq > best_sq {
                best_sq = sq;
                best = i;
            }
        }
        let pivot = v[best];
        let modulus = pivot.norm_sqr().sqrt();
        let phase = pivot.conj() / Complex::new(modulus, T::zero());
        v *= phase;
        eigenvectors.push(v);
    }

    SkewEigen {
        spectrum: SkewSpectrum {
            positive_parts,
            zero_count_numeric,
            order: n,
        },
        eigenvectors,
    }
}

/// Numeric rank: the number of singular values above `tol · n · σ_max`.
///
/// Computed through an SVD of the real matrix, independently of the
/// eigenvalue route, so the two can cross-check each other.
pub fn rank_numeric<T: Real>(a: &SkewMatrix<T>, tol: T) -> usize {
    assert!(tol > T::zero(), "tolerance must be positive");
    let sv = a.to_dense().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(T::zero(), |acc, s| acc.max(s));
    let cutoff = tol * scalar::<T>(a.order() as f64) * smax;
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Exact rank of a rational skew matrix by fraction-free (Bareiss)
/// elimination over the integers after clearing denominators row by row.
pub fn rank_exact_rational(a: &SkewMatrix<Rational>) -> usize {
    let n = a.order();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 1..=n {
        let row: Vec<Rational> = (1..=n).map(|j| a.get(i, j)).collect();
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        m.push(
            row.into_iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect(),
        );
    }
    bareiss_rank(m)
}

fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pivot_row) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot_row);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let t = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                debug_assert!((&t % &prev).is_zero(), "fraction-free step must divide");
                m[i][j] = t / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        rank += 1;
        r += 1;
        if r == rows {
            break;
        }
    }
    rank
}

/// Certified and sampled maximum rank over all skew matrices with a given
/// graph.
#[derive(Debug, Clone, Serialize)]
pub struct MaxSkewRank {
    /// `2 × match(G)` — the maximum rank any such matrix can attain.
    pub certified: usize,
    /// Largest numeric rank over random evaluations of the edge entries.
    pub sampled: usize,
}

/// Certifies `2 × match(G)` and samples random evaluations (entry
/// magnitudes uniform in `[1, 2]` with random signs, bounded away from
/// zero so generic rank is reached with overwhelming probability).
pub fn max_skew_rank<T: Real>(g: &Graph, samples: usize, seed: u64, tol: T) -> MaxSkewRank {
    let certified = 2 * maximum_matching(g).len();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled = 0usize;
    for _ in 0..samples {
        let mut a = SkewMatrix::<T>::zeros(g.vertex_count());
        for &(u, v) in &edges {
            let magnitude: f64 = rng.random_range(1.0..2.0);
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            a.set(u, v, scalar::<T>(sign * magnitude));
        }
        sampled = sampled.max(rank_numeric(&a, tol));
    }
    MaxSkewRank { certified, sampled }
}

/// Derivative of the `j`-th positive part under the skew perturbation
/// `A + t·E_rs - t·E_sr` at `t = 0`, given a unit eigenvector `v` for
/// `iμ_j`: the value is `2·Im(conj(v_r)·v_s)` (1-based indices).
pub fn eigenvalue_derivative<T: Real>(
    a: &SkewMatrix<T>,
    v: &DVector<Complex<T>>,
    r: usize,
    s: usize,
) -> Result<T, SpectralError> {
    let n = a.order();
    if r == 0 || s == 0 || r > n || s > n || r == s {
        return Err(SpectralError::InvalidPerturbation);
    }
    if v.len() != n {
        return Err(SpectralError::DimensionMismatch {
            what: "eigenvector entries",
            expected: n,
            got: v.len(),
        });
    }
    let norm = v.norm();
    if fabs(norm - T::one()) > scalar::<T>(1e-8) {
        return Err(SpectralError::NonUnitEigenvector {
            norm: num_traits::cast(norm).unwrap_or(f64::NAN),
        });
    }
    Ok(scalar::<T>(2.0) * (v[r - 1].conj() * v[s - 1]).im)
}

/// Jacobian of the top-`k` positive parts with respect to the matched
/// variables, evaluated at `(x, y)`. Entry `(j, l)` is the derivative of
/// `μ_j` along the matched position `(2l-1, 2l)`.
///
/// Requires the top `k` positive parts to be simple and nonzero: any
/// consecutive relative gap at or below [`JACOBIAN_GAP_TOL`] is refused.
pub fn jacobian_x<T: Real>(
    p: &SkewPattern,
    x: &[T],
    y: &[T],
) -> Result<DMatrix<T>, SpectralError> {
    let a = evaluate_pattern(p, x, y)?;
    let eigen = skew_eigen(&a);
    jacobian_from_eigen(p, &eigen, scalar::<T>(JACOBIAN_GAP_TOL))
}

/// Jacobian from an existing eigendecomposition; shared with the solver so
/// one Hermitian solve serves both the residual and the Newton step.
pub(crate) fn jacobian_from_eigen<T: Real>(
    p: &SkewPattern,
    eigen: &SkewEigen<T>,
    gap_tol: T,
) -> Result<DMatrix<T>, SpectralError> {
    let k = p.matched_count();
    let parts = eigen.spectrum.positive_parts();
    debug_assert!(parts.len() >= k, "2k <= n guarantees k positive parts");
    let top = parts.first().copied().unwrap_or_else(T::zero);
    let span = top.max(T::one());
    for j in 0..k {
        let next = if j + 1 < parts.len() {
            parts[j + 1]
        } else {
            T::zero()
        };
        if parts[j] - next <= gap_tol * span {
            return Err(SpectralError::JacobianUnreliable { j: j + 1, next: j + 2 });
        }
    }
    if eigen.eigenvectors.len() < k {
        return Err(SpectralError::JacobianUnreliable { j: k, next: k + 1 });
    }
    let mut jac = DMatrix::<T>::zeros(k, k);
    for j in 0..k {
        let v = &eigen.eigenvectors[j];
        for (l, &(r, s)) in p.x_positions().iter().enumerate() {
            jac[(j, l)] = scalar::<T>(2.0) * (v[r - 1].conj() * v[s - 1]).im;
        }
    }
    Ok(jac)
}
