#pragma once

// Splitting tuples assembled from two-marginal potentials, their
// certification against a cost on a declared sample, and the exactness
// (equality-set) checks.

#include <cstdint>
#include <optional>
#include <vector>

#include "mmsplit/antiderivative.hpp"
#include "mmsplit/core.hpp"
#include "mmsplit/monotone.hpp"

namespace mmsplit {

/// f_{i,j} used for one pair, tabulated on marginal i's evaluation grid.
struct PairPotential {
  std::size_t i = 0;
  std::size_t j = 0;
  Potential f;
};

struct SplittingTuple {
  std::vector<Potential> potentials;
  /// Empty for user-supplied or closed-form tuples.
  std::vector<PairPotential> pair_potentials;
  std::optional<ProductPoint> base;
};

/// u_i = sum_{k>i} f_{i,k} + sum_{k<i} f_{k,i}^c (+ h_i when spec carries
/// a shift), with f_{i,j} the Rockafellar potential of Gamma_{i,j} based
/// at s_i. Each u_i is tabulated on Gamma_i followed by eval_grids[i]
/// (an empty eval_grids means Gamma_i alone).
/// Throws CycleError(ProjectionNotMonotone) carrying the pair, or
/// Error(BasePointNotInGamma).
SplittingTuple assemble_splitting_tuple(const GammaSet& g, const CostSpec& spec, const ProductPoint& s,
                                        const std::vector<std::vector<MarginalPoint>>& eval_grids = {},
                                        double tol = kTolerance);

/// Same with s = g[base_index].
SplittingTuple assemble_splitting_tuple(const GammaSet& g, const CostSpec& spec, std::size_t base_index,
                                        const std::vector<std::vector<MarginalPoint>>& eval_grids = {},
                                        double tol = kTolerance);

/// Tuple of closed forms, one per marginal.
SplittingTuple closed_form_tuple(const std::vector<ClosedForm>& forms);

/// (u_1 + h_1, ..., u_N + h_N).
SplittingTuple shifted_tuple(const SplittingTuple& t, const std::vector<ClosedForm>& h);

struct SplittingCertificate {
  /// max of c(p) - sum u_i(p_i) over test points with every u_i finite;
  /// -inf when there are none.
  double max_violation = -kInfinity;
  std::optional<ProductPoint> violation_witness;
  /// max of |c(p) - sum u_i(p_i)| over Gamma.
  double max_residual = 0.0;
  std::optional<ProductPoint> residual_witness;
  std::size_t test_points = 0;
  std::size_t infinite_points = 0;
  std::size_t gamma_points = 0;
  std::optional<std::uint64_t> seed;
  double tolerance = kTolerance;
  bool pass = false;
};

/// Throws UndefinedOnGamma when some u_i is +inf on Gamma_i.
SplittingCertificate certify_splitting(const SplittingTuple& tuple, const GammaSet& g, const CostSpec& spec,
                                       const std::vector<ProductPoint>& test_points, double tol = kTolerance,
                                       std::optional<std::uint64_t> seed = std::nullopt);

/// Lattice with per_axis points per coordinate over the bounding box of
/// Gamma's coordinates, expanded by half its width on each side (a
/// degenerate side gets width 1), followed by random_count seeded uniform
/// points in the same box. Throws BudgetExceeded past 2e6 lattice points.
std::vector<ProductPoint> lattice_and_random_points(const GammaSet& g, std::size_t per_axis,
                                                    std::size_t random_count, std::uint64_t seed);

/// The product of the projections Gamma_1 x ... x Gamma_N.
std::vector<ProductPoint> projection_product(const GammaSet& g, std::size_t max_points = 2000000);

/// The product of the potentials' tabulated points.
std::vector<ProductPoint> potential_grid(const SplittingTuple& t, std::size_t max_points = 2000000);

struct ExactnessReport {
  /// Points of the intersection of the pair preimages (within the product
  /// of projections) that are not in Gamma.
  std::vector<ProductPoint> extra_intersection_points;
  /// Test points on the product of projections attaining equality but not
  /// in Gamma.
  std::vector<ProductPoint> equality_off_gamma;
  /// min of sum u_i(p_i) - c(p) over finite test points not in Gamma.
  double min_slack_off_gamma = kInfinity;
  std::size_t candidates = 0;
  bool intersection_equals_gamma = true;
  bool holds = true;
};

ExactnessReport check_exactness_condition(const GammaSet& g, const SplittingTuple& tuple, const CostSpec& spec,
                                          const std::vector<ProductPoint>& test_points, double tol = kTolerance);

/// Runs the brute-force verifier at order n on g. A splitting tuple forces
/// cyclic monotonicity, so a failure raises InternalInconsistency.
MonotonicityVerdict splitting_implies_monotone_check(const SplittingTuple& tuple, const GammaSet& g,
                                                     const CostSpec& spec, std::size_t n,
                                                     const BruteForceLimits& limits = {}, double tol = kTolerance);

}  // namespace mmsplit
