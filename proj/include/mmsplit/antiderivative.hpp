#pragma once

// Two-marginal machinery: potentials on finite sets, the Rockafellar-type
// antiderivative, c-conjugates and c-subdifferential graphs.

#include <optional>
#include <vector>

#include "mmsplit/core.hpp"
#include "mmsplit/monotone.hpp"

namespace mmsplit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// An extended-real function on one marginal, given by a finite table
/// and/or a registered closed form. Values are finite or +inf.
class Potential {
 public:
  Potential() = default;
  /// The closed form, when given, must match every tabulated value within
  /// 1e-9 (or both be +inf).
  Potential(std::vector<MarginalPoint> points, std::vector<double> values,
            std::optional<ClosedForm> closed_form = std::nullopt);

  /// Closed form tabulated at the given points.
  static Potential from_closed_form(ClosedForm f, std::vector<MarginalPoint> points = {});

  const std::vector<MarginalPoint>& points() const { return points_; }
  const std::vector<double>& values() const { return values_; }
  const std::optional<ClosedForm>& closed_form() const { return closed_form_; }
  std::size_t size() const { return points_.size(); }

  std::optional<std::size_t> find(const MarginalPoint& x) const;

  /// Closed form when present, table lookup otherwise (OffDomain if absent).
  double operator()(const MarginalPoint& x) const;

  /// At least one finite tabulated value.
  bool has_finite_value() const;

  /// Pointwise sum with a closed-form term; tables and closed form both move.
  Potential plus(const ClosedForm& h) const;

 private:
  void build_index();

  std::vector<MarginalPoint> points_;
  std::vector<double> values_;
  std::optional<ClosedForm> closed_form_;
  std::vector<std::size_t> order_;
};

/// R_[c, pairs, s1] evaluated at eval_points: the largest telescoped gain
/// sum_j c(x^{j+1}, y^j) - c(x^j, y^j) over chains in pairs starting at the
/// first coordinate s1 and ending at x. R(s1) = 0.
/// Throws CycleError(NotCyclicallyMonotone) when pairs carry a positive
/// cycle and Error(BasePointNotInProjection) when s1 is not a first
/// coordinate of pairs.
Potential rockafellar_potential(const PairwiseCost& c, const std::vector<PointPair>& pairs,
                                const MarginalPoint& s1, const std::vector<MarginalPoint>& eval_points,
                                double tol = kTolerance);

struct ConjugateTable {
  Potential potential;
  /// Index into f's points attaining each supremum (lowest on ties).
  std::vector<std::size_t> argmax;
};

/// f^c(y) = max over f's finite tabulated points x of c(x, y) - f(x).
ConjugateTable c_conjugate(const Potential& f, const PairwiseCost& c, const std::vector<MarginalPoint>& eval_points);

/// The Fenchel conjugate of a registered closed form under the inner
/// product: (q_A + <b, .> + k)^* = q_{A^{-1}}(. - b) - k for positive
/// definite A without indicator. Throws InvalidArgument otherwise.
ClosedForm closed_form_conjugate(const ClosedForm& f);

struct SubdiffGraph {
  std::vector<PointPair> pairs;
  std::vector<double> residuals;
};

/// Candidates (x, y) with |f(x) + f^c(y) - c(x, y)| <= tol, f^c taken over
/// f's tabulated points.
SubdiffGraph c_subdifferential_graph(const Potential& f, const PairwiseCost& c,
                                     const std::vector<PointPair>& candidates, double tol = kTolerance);

struct AntiderivativeCheck {
  bool holds = true;
  /// max of f(x) + c(x', y) - f(x') - c(x, y) over pairs and tabulated x'.
  double max_residual = -kInfinity;
};

/// Whether every pair lies in the c-subdifferential of f, checked against
/// all tabulated points of f.
AntiderivativeCheck verify_antiderivative(const Potential& f, const std::vector<PointPair>& pairs,
                                          const PairwiseCost& c, double tol = kTolerance);

}  // namespace mmsplit
