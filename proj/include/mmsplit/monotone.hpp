#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mmsplit/core.hpp"

namespace mmsplit {

/// Slack applied to every inequality check: violations at or below it are
/// treated as holding.
inline constexpr double kTolerance = 1e-9;

/// A rearrangement that increases the total cost: n tuples, N permutations
/// (the first is the identity) and both sides of the inequality.
struct Witness {
  std::vector<ProductPoint> tuples;
  std::vector<std::vector<std::size_t>> permutations;
  double permuted_sum = 0.0;
  double diagonal_sum = 0.0;

  double gain() const { return permuted_sum - diagonal_sum; }
};

/// Raised when a construction needs cyclic monotonicity and a violating
/// cycle exists. pair is set when the cycle lives in a projection.
class CycleError : public Error {
 public:
  CycleError(ErrorKind kind, const std::string& what, Witness witness,
             std::optional<std::pair<std::size_t, std::size_t>> pair = std::nullopt)
      : Error(kind, what), witness_(std::move(witness)), pair_(pair) {}

  const Witness& witness() const { return witness_; }
  const std::optional<std::pair<std::size_t, std::size_t>>& pair() const { return pair_; }

 private:
  Witness witness_;
  std::optional<std::pair<std::size_t, std::size_t>> pair_;
};

struct MonotonicityVerdict {
  bool holds = true;
  std::optional<Witness> witness;
  std::uint64_t checked = 0;
  double tolerance = kTolerance;
};

/// Re-evaluates a witness through eval_total_cost and returns
/// permuted_sum - diagonal_sum.
double recheck_witness(const Witness& w, const CostSpec& spec);

/// The two-marginal cost specification {(0,1) -> c}.
CostSpec two_marginal_spec(const PairwiseCost& c, int dim_x, int dim_y);

struct BruteForceLimits {
  std::size_t max_order = 7;
  std::size_t max_marginals = 4;
  /// Cap on (n!)^(N-1) * C(|G| + n - 1, n).
  double max_evaluations = 5e7;
};

/// Exhaustive check of n-c-cyclic monotonicity: every multiset of n points
/// of g (repetition allowed) and every (sigma_2, ..., sigma_N) with sigma_1
/// fixed to the identity. The first violation in lexicographic order is
/// reported. Throws OrderTooLarge past the limits.
MonotonicityVerdict is_n_c_monotone_bruteforce(const GammaSet& g, const CostSpec& spec, std::size_t n,
                                               const BruteForceLimits& limits = {},
                                               double tol = kTolerance);

/// 2-c-monotonicity: all pairs of points and all swap patterns.
MonotonicityVerdict is_c_monotone(const GammaSet& g, const CostSpec& spec, double tol = kTolerance);

/// Searches the complete digraph on pairs, with edge gain
/// c(x_q, y_p) - c(x_p, y_p) for p -> q, for a cycle of positive total gain.
/// Each edge is charged tol / |pairs| so cycles of gain <= 0 are never
/// reported and every cycle of gain > tol is. Returns node indices in cycle
/// order (lowest-index entry point on ties).
std::optional<std::vector<std::size_t>> find_positive_cycle(const std::vector<PointPair>& pairs,
                                                            const PairwiseCost& c,
                                                            double tol = kTolerance);

/// Two-marginal cyclic monotonicity by cycle detection.
MonotonicityVerdict is_two_marginal_cyclically_monotone(const std::vector<PointPair>& pairs,
                                                        const PairwiseCost& c,
                                                        double tol = kTolerance);

/// Classical monotonicity <x - x', y - y'> >= -tol for every two pairs.
MonotonicityVerdict is_pair_monotone_classical(const std::vector<PointPair>& pairs, double tol = 1e-12);

/// For one-dimensional marginals: every difference of two points has all
/// coordinates of one sign (zero counts as both). The witness is the c1
/// violation obtained by exchanging the negative coordinates.
MonotonicityVerdict sign_criterion_1d(const GammaSet& g);

struct ProjectionReport {
  std::map<CostSpec::PairKey, MonotonicityVerdict> pairs;
  bool holds = true;
};

/// Cyclic monotonicity of every two-marginal projection under its coupling.
ProjectionReport check_projection_condition(const GammaSet& g, const CostSpec& spec,
                                            double tol = kTolerance);

struct CouplingOptimum {
  double value = 0.0;
  double diagonal_value = 0.0;
  /// sigma_1 (identity), sigma_2, ..., sigma_N of the first maximiser found.
  std::vector<std::vector<std::size_t>> permutations;
  bool diagonal_optimal = true;
};

/// Maximum of sum_j c(x_1^j, x_2^{sigma_2(j)}, ...) over all permutations.
/// lists[i][j] is the j-th point of marginal i. Throws BudgetExceeded when
/// (n!)^(N-1) exceeds limits.max_evaluations.
CouplingOptimum brute_force_optimal_coupling(const std::vector<std::vector<MarginalPoint>>& lists,
                                             const CostSpec& spec, const BruteForceLimits& limits = {},
                                             double tol = kTolerance);

}  // namespace mmsplit
