#pragma once

// Domain types shared by every module: marginal and product points, the
// pairwise-coupling cost class, separable closed-form terms and finite
// subsets of the product space together with their projections.
//
// Indices are zero-based throughout the C++ API. External files (JSON,
// CSV) use one-based marginal labels.

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mmsplit/error.hpp"

namespace mmsplit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point of one marginal space X_i = R^{d_i}.
using MarginalPoint = Vector;

/// Exact coordinate equality (no tolerance); points of differing dimension
/// are never equal.
bool same_point(const MarginalPoint& a, const MarginalPoint& b);

/// Strict weak ordering used for deterministic deduplication.
bool lex_less(const MarginalPoint& a, const MarginalPoint& b);

MarginalPoint scalar_point(double v);

/// One point (x_1, ..., x_N) of the product space.
class ProductPoint {
 public:
  ProductPoint() = default;
  /// Requires at least two parts with finite coordinates.
  explicit ProductPoint(std::vector<MarginalPoint> parts);

  std::size_t marginals() const { return parts_.size(); }
  const MarginalPoint& operator[](std::size_t i) const { return parts_[i]; }
  const std::vector<MarginalPoint>& parts() const { return parts_; }
  std::vector<int> dims() const;

  friend bool operator==(const ProductPoint& a, const ProductPoint& b);

 private:
  std::vector<MarginalPoint> parts_;
};

bool lex_less(const ProductPoint& a, const ProductPoint& b);

/// Builds a product point of one-dimensional marginals.
ProductPoint scalar_tuple(const std::vector<double>& values);

using PointPair = std::pair<MarginalPoint, MarginalPoint>;

// ---------------------------------------------------------------------------
// Pairwise couplings c_{i,j}

struct InnerProduct {};
struct HalfSqDist {};
struct Bilinear {
  Matrix A;  // d_i x d_j, c(x, y) = x^T A y
};
struct Tabulated {
  std::vector<MarginalPoint> grid_i;
  std::vector<MarginalPoint> grid_j;
  Matrix table;  // |grid_i| x |grid_j|
};

class PairwiseCost {
 public:
  using Kind = std::variant<InnerProduct, HalfSqDist, Bilinear, Tabulated>;

  PairwiseCost() : kind_(InnerProduct{}) {}
  /// sign must be +1 or -1.
  PairwiseCost(Kind kind, int sign);

  static PairwiseCost inner_product(int sign = 1) { return {InnerProduct{}, sign}; }
  static PairwiseCost half_sq_dist(int sign = 1) { return {HalfSqDist{}, sign}; }
  static PairwiseCost bilinear(Matrix A, int sign = 1) { return {Bilinear{std::move(A)}, sign}; }
  static PairwiseCost tabulated(std::vector<MarginalPoint> grid_i,
                                std::vector<MarginalPoint> grid_j, Matrix table,
                                int sign = 1);

  const Kind& kind() const { return kind_; }
  int sign() const { return sign_; }

  PairwiseCost negated() const { return {kind_, -sign_}; }

  /// Throws DimensionMismatch if this coupling cannot act on R^{di} x R^{dj}.
  void check_dims(int di, int dj) const;

  double operator()(const MarginalPoint& x, const MarginalPoint& y) const;

 private:
  Kind kind_;
  int sign_ = 1;
};

double eval_pairwise(const PairwiseCost& c, const MarginalPoint& x, const MarginalPoint& y);

// ---------------------------------------------------------------------------
// Registered closed forms for single-marginal functions

/// 1/2 x^T A x + b^T x + c, plus the indicator of ker(constraint) when the
/// constraint matrix has rows. Membership in the kernel is tested exactly.
struct QuadraticForm {
  Matrix A;
  Vector b;
  double c = 0.0;
  Matrix constraint;
};

/// coef * x^(num/den) on the real line, den odd and positive. Fractional
/// powers of negative arguments use the real odd root: (x^(1/den))^num.
struct PowerTerm {
  double coef = 0.0;
  int num = 0;
  int den = 1;
};

struct PowerSum {
  std::vector<PowerTerm> terms;
};

using FormTerm = std::variant<QuadraticForm, PowerSum>;

/// A finite sum of registered terms. Evaluates to +inf off an indicator's set.
class ClosedForm {
 public:
  ClosedForm() = default;
  explicit ClosedForm(std::vector<FormTerm> terms);
  ClosedForm(FormTerm term) : ClosedForm(std::vector<FormTerm>{std::move(term)}) {}

  const std::vector<FormTerm>& terms() const { return terms_; }
  /// Dimension the form acts on, or nullopt when it has no terms.
  std::optional<int> dim() const;
  bool has_indicator() const;

  double operator()(const MarginalPoint& x) const;

  ClosedForm plus(const ClosedForm& other) const;
  ClosedForm scaled(double factor) const;

 private:
  std::vector<FormTerm> terms_;
};

/// q_A(x) = 1/2 <x, A x>.
ClosedForm quadratic_closed_form(const Matrix& A);
/// q = q_Id on R^d.
ClosedForm half_sq_norm(int d);
/// <w, x> + c.
ClosedForm affine_closed_form(const Vector& w, double c);
ClosedForm zero_closed_form(int d);

double odd_root_power(double x, int num, int den);

// ---------------------------------------------------------------------------
// Cost specifications c = sum_{i<j} c_{i,j}(x_i, x_j) + sum_i h_i(x_i)

class CostSpec {
 public:
  using PairKey = std::pair<std::size_t, std::size_t>;

  CostSpec() = default;
  /// Requires every pair i < j to be present and compatible with dims, and,
  /// when given, one finite shift term per marginal.
  CostSpec(std::vector<int> dims, std::map<PairKey, PairwiseCost> pairs,
           std::optional<std::vector<ClosedForm>> shift = std::nullopt);

  std::size_t marginals() const { return dims_.size(); }
  const std::vector<int>& dims() const { return dims_; }
  const std::map<PairKey, PairwiseCost>& pairs() const { return pairs_; }
  const PairwiseCost& pair(std::size_t i, std::size_t j) const;
  const std::optional<std::vector<ClosedForm>>& shift() const { return shift_; }

  /// Throws DimensionMismatch when p does not fit this specification.
  void check_point(const ProductPoint& p) const;

  double pairwise_part(const ProductPoint& p) const;
  double shift_part(const ProductPoint& p) const;
  double shift_term(std::size_t i, const MarginalPoint& x) const;
  double operator()(const ProductPoint& p) const;

 private:
  std::vector<int> dims_;
  std::map<PairKey, PairwiseCost> pairs_;
  std::optional<std::vector<ClosedForm>> shift_;
};

double eval_total_cost(const CostSpec& spec, const ProductPoint& p);

enum class Classical { c1, c2, c3 };

/// c1 = sum <x_i, x_j>, c2 = sum 1/2 |x_i - x_j|^2, c3 = 1/2 |sum x_i|^2
/// (stored as c1 plus the separable shift sum q(x_i)).
CostSpec classical_cost(Classical which, std::size_t n_marginals, int dim);

/// Returns spec with h_i added to its shift. Shift terms must be finite.
CostSpec add_separable_shift(const CostSpec& spec, const std::vector<ClosedForm>& h);

/// -c, including the shift.
CostSpec negated(const CostSpec& spec);

// ---------------------------------------------------------------------------
// Finite subsets of the product space

class GammaSet {
 public:
  GammaSet() = default;
  /// Deduplicates exactly, keeping first occurrences in input order.
  /// Requires a nonempty list of points with identical marginal dimensions.
  explicit GammaSet(std::vector<ProductPoint> points);

  std::size_t size() const { return points_.size(); }
  std::size_t marginals() const { return dims_.size(); }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<ProductPoint>& points() const { return points_; }
  const ProductPoint& operator[](std::size_t k) const { return points_[k]; }

  std::optional<std::size_t> index_of(const ProductPoint& p) const;
  bool contains(const ProductPoint& p) const { return index_of(p).has_value(); }

 private:
  std::vector<ProductPoint> points_;
  std::vector<int> dims_;
};

/// Gamma_i: deduplicated i-th coordinates in order of first appearance.
std::vector<MarginalPoint> project(const GammaSet& g, std::size_t i);

/// Gamma_{i,j} for i < j, deduplicated in order of first appearance.
std::vector<PointPair> project_pair(const GammaSet& g, std::size_t i, std::size_t j);

/// Gamma + z.
GammaSet translate(const GammaSet& g, const ProductPoint& z);

/// Deduplicates a list of marginal points, keeping first occurrences.
std::vector<MarginalPoint> unique_points(const std::vector<MarginalPoint>& pts);

/// All tuples of the Cartesian product of per-marginal lists, first
/// marginal varying slowest.
std::vector<ProductPoint> product_grid(const std::vector<std::vector<MarginalPoint>>& lists);

}  // namespace mmsplit
