#pragma once

// Real-line specialisation: the equivalence battery for one-dimensional
// marginals, potentials of monotone curves by quadrature, Young's
// inequality and the Knott-Smith example.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mmsplit/antiderivative.hpp"
#include "mmsplit/core.hpp"
#include "mmsplit/monotone.hpp"
#include "mmsplit/splitting.hpp"

namespace mmsplit {

/// A continuous, strictly increasing map of R onto R with alpha(0) = 0.
/// Strict increase is checked on a probe grid over [-10, 10]; the inverse
/// is computed by bisection.
class MonotoneBijection {
 public:
  using Fn = std::function<double(double)>;

  MonotoneBijection(Fn forward, std::string name = "custom");

  static MonotoneBijection identity();
  /// coef * t^(num/den) with the odd-root branch; num and den odd, coef > 0.
  static MonotoneBijection power(int num, int den, double coef = 1.0);
  /// A sum of odd powers with positive coefficients.
  static MonotoneBijection power_sum(const PowerSum& terms);
  /// Looks up "identity", "cube", "fifth", "cbrt" or "p/q" (odd p, q).
  static MonotoneBijection named(const std::string& name);

  const std::string& name() const { return name_; }
  double operator()(double t) const { return forward_(t); }

  /// alpha^{-1}(y) to full double precision. The bracket grows
  /// geometrically from [-1, 1]; InversionFailure if it passes 2^60.
  double inverse(double y) const;

 private:
  Fn forward_;
  std::string name_;
};

/// Signed integral from 0 to each x of f, on panels of width 2^-10 refined
/// by adaptive Simpson. error_estimate sums the local Richardson estimates.
struct QuadratureTable {
  std::vector<double> values;
  double error_estimate = 0.0;
};

QuadratureTable integrate_from_zero(const std::function<double(double)>& f, const std::vector<double>& xs);

struct CurvePotentials {
  std::vector<Potential> potentials;
  double error_estimate = 0.0;
};

/// u_i(x) = int_0^x sum_{k != i} alpha_k(alpha_i^{-1}(t)) dt, tabulated on grid.
CurvePotentials curve_potentials(const std::vector<MonotoneBijection>& alphas, const std::vector<double>& grid);

struct YoungResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool equality = false;
  double error_estimate = 0.0;
};

/// ab against int_0^a g + int_0^b g^{-1}; equality iff |b - g(a)| <= 1e-9.
YoungResult young_check(const MonotoneBijection& g, double a, double b);

/// x^4/4 + x^6/6, 3/4 x^(4/3) + 3/8 x^(8/3), 5/6 x^(6/5) + 5/8 x^(8/5).
std::vector<ClosedForm> knott_smith_closed_forms();

/// (t, t^3, t^5).
std::vector<MonotoneBijection> knott_smith_alphas();

struct KnottSmithValues {
  std::array<double, 3> u{};
  /// u_i + q.
  std::array<double, 3> shifted{};
  double c1 = 0.0;
  double c3 = 0.0;
  /// sum u - c1 and sum shifted - c3.
  double c1_slack = 0.0;
  double c3_slack = 0.0;
};

KnottSmithValues knott_smith_potentials(double x1, double x2, double x3);

struct CurveFigure {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// samples equally spaced t in [t_lo, t_hi]; columns t, x1..xN and, per
/// pair i < j, the pair coordinates.
CurveFigure emit_curve_figure_data(const std::vector<MonotoneBijection>& alphas, double t_lo, double t_hi,
                                   std::size_t samples);

std::string to_csv(const CurveFigure& fig);

struct Characterization {
  /// Brute-force n-c-cyclic monotonicity for n = 2..max_order_checked.
  bool cyclic = false;
  std::size_t max_order_checked = 0;
  /// c-monotonicity; the sign criterion and the pairwise check agree.
  bool c_monotone = false;
  /// Every Gamma_{i,j} cyclically monotone in R^2.
  bool projections_cyclic = false;
  /// Every Gamma_{i,j} monotone in R^2.
  bool projections_monotone = false;
  /// Assembled potentials certify on the product of projections.
  bool splitting = false;
  /// Every Gamma_{i,j} lies in the subdifferential of its Rockafellar potential.
  bool antiderivatives = false;
  std::optional<Witness> witness;
  std::optional<SplittingCertificate> certificate;

  bool all_agree() const;
};

/// Evaluates all six equivalent assertions for one-dimensional marginals.
/// c2 enters through -c2. Throws NotOneDimensional, or
/// InternalInconsistency when the verdicts disagree.
Characterization characterize_1d(const GammaSet& g, Classical which, std::size_t max_order = 4);

}  // namespace mmsplit
