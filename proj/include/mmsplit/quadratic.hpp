#pragma once

// Matrix examples: splitting tuples for commuting positive definite
// families, and a three-marginal set in (R^2)^3 that splits although none
// of its two-marginal projections is monotone.

#include <cstdint>
#include <random>
#include <vector>

#include "mmsplit/core.hpp"
#include "mmsplit/monotone.hpp"
#include "mmsplit/splitting.hpp"

namespace mmsplit {

/// Dense symmetric matrix; entries may differ from the transpose by at
/// most 1e-12 (absolute), and the stored matrix is the symmetric part.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& a);

  const Matrix& matrix() const { return a_; }
  Eigen::Index size() const { return a_.rows(); }

 private:
  Matrix a_;
};

struct PsdReport {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
  Vector eigenvalues;  // ascending
  Matrix eigenvectors;
};

/// Symmetric eigendecomposition; PSD iff the smallest eigenvalue is at
/// least -1e-10.
PsdReport psd_check(const SymMatrix& a);

struct QuadraticSplitting {
  /// M_i = (sum_{k != i} Q_k) Q_i^{-1}
  std::vector<Matrix> M;
  /// G_i = (sum_k Q_k) Q_i^{-1}, computed separately from M_i.
  std::vector<Matrix> G;
  /// Smallest eigenvalue over all M_i.
  double min_eigenvalue = 0.0;
};

/// Requires N >= 2 positive definite, pairwise commuting matrices
/// (||Q_i Q_j - Q_j Q_i||_F <= 1e-9). Throws NotPositiveDefinite,
/// NotCommuting, DimensionMismatch.
QuadraticSplitting quadratic_splitting(const std::vector<SymMatrix>& Q);

/// {(Q_1 v, ..., Q_N v) : v in vs}.
GammaSet commuting_spd_gamma(const std::vector<SymMatrix>& Q, const std::vector<Vector>& vs);

/// The closed-form tuple (q_{M_1}, ..., q_{M_N}).
SplittingTuple quadratic_tuple(const QuadraticSplitting& s);

/// Q_i = U diag(lambda_i) U^T with one random orthogonal U and diagonal
/// entries uniform in [lo, hi].
std::vector<SymMatrix> random_commuting_spd(std::size_t n_marginals, int dim, std::mt19937_64& rng,
                                            double lo = 0.5, double hi = 3.0);

/// A random vector of the given norm orthogonal to {(Q_1 v, ..., Q_N v)}.
std::vector<Vector> orthogonal_perturbation(const std::vector<SymMatrix>& Q, double norm, std::mt19937_64& rng);

struct Counterexample {
  Matrix A1, A2, A3;
  /// u_1 = indicator of R x {0} + q_{A1}, u_2 = indicator of the diagonal
  /// + q_{A2}, u_3 = q_{A3}.
  std::vector<ClosedForm> u;
  ProductPoint v1, v2;
  /// Quadratic form of sum u - c_1 on (a1, a2, a3, b3) and its symmetric part.
  Matrix M, symM;

  /// lambda v1 + mu v2.
  ProductPoint point(double lambda, double mu = 1.0) const;
};

Counterexample counterexample_construct();

struct ProjectionWitness {
  std::size_t i = 0, j = 0;
  double lambda = 0.0;
  /// <x_i(lambda), x_j(lambda)>, the monotonicity defect against the origin.
  double value = 0.0;
  bool cyclic_fails = false;
  bool classical_fails = false;
};

struct CounterexampleReport {
  Vector eigenvalues;
  bool psd = false;
  std::size_t kernel_dim = 0;
  double positive_sum = 0.0;
  double positive_product = 0.0;
  /// ||P_numeric - P_expected||_F for the kernel projectors.
  double kernel_distance = 0.0;
  SplittingCertificate certificate;
  std::vector<ProjectionWitness> witnesses;
  bool pass = false;
};

/// Eigen data of sym(M), the splitting certificate on gamma points
/// lambda v1 + mu v2 (pairs of the two lists) against random_points
/// seeded samples of dom u_1 x dom u_2 x R^2, and the projection witnesses
/// at lambda = 3, -1, 1.9.
CounterexampleReport counterexample_verify(const std::vector<std::pair<double, double>>& samples,
                                           std::size_t random_points, std::uint64_t seed);

/// 200 seeded (lambda, mu) pairs in [-5, 5]^2 including (0, 0) and (0, 1).
std::vector<std::pair<double, double>> default_counterexample_samples(std::uint64_t seed);

}  // namespace mmsplit
