#include "mmsplit/onedim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace mmsplit {

namespace {

constexpr double kPanelWidth = 1.0 / 1024.0;

bool odd(int k) { return k % 2 != 0; }

struct Simpson {
  const std::function<double(double)>& f;
  double error = 0.0;

  double whole(double a, double fa, double fm, double b, double fb) const {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  double refine(double a, double fa, double b, double fb, double m, double fm, double s, double eps, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = whole(a, fa, flm, m, fm);
    const double right = whole(m, fm, frm, b, fb);
    const double delta = left + right - s;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps || lm == a || rm == b) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    const double half = std::max(0.5 * eps, 1e-16);
    return refine(a, fa, m, fm, lm, flm, left, half, depth - 1) + refine(m, fm, b, fb, rm, frm, right, half, depth - 1);
  }

  double panel(double a, double b) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return refine(a, fa, b, fb, m, fm, whole(a, fa, fm, b, fb), 1e-13, 60);
  }

  double interval(double a, double b) {
    if (a == b) return 0.0;
    const auto n = static_cast<std::size_t>(std::ceil(std::abs(b - a) / kPanelWidth));
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double lo = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
      const double hi = k + 1 == n ? b : a + (b - a) * static_cast<double>(k + 1) / static_cast<double>(n);
      sum += panel(lo, hi);
    }
    return sum;
  }
};

}  // namespace

MonotoneBijection::MonotoneBijection(Fn forward, std::string name) : forward_(std::move(forward)), name_(std::move(name)) {
  if (!forward_) throw Error(ErrorKind::InvalidArgument, "empty map");
  if (std::abs(forward_(0.0)) > 1e-12) throw Error(ErrorKind::InvalidArgument, "map must vanish at 0");
  double prev = forward_(-10.0);
  for (int k = 1; k <= 2000; ++k) {
    const double v = forward_(-10.0 + 0.01 * k);
    if (!(v > prev)) throw Error(ErrorKind::InvalidArgument, "map is not strictly increasing on the probe grid");
    prev = v;
  }
}

MonotoneBijection MonotoneBijection::identity() {
  return MonotoneBijection([](double t) { return t; }, "identity");
}

MonotoneBijection MonotoneBijection::power(int num, int den, double coef) {
  if (!odd(num) || !odd(den) || num <= 0 || den <= 0 || !(coef > 0.0))
    throw Error(ErrorKind::InvalidArgument, "power map needs odd positive exponents and a positive coefficient");
  std::ostringstream os;
  if (coef != 1.0) os << coef << "*";
  os << "t^" << num << "/" << den;
  return MonotoneBijection([=](double t) { return coef * odd_root_power(t, num, den); }, os.str());
}

MonotoneBijection MonotoneBijection::power_sum(const PowerSum& terms) {
  if (terms.terms.empty()) throw Error(ErrorKind::InvalidArgument, "empty power sum");
  for (const auto& t : terms.terms)
    if (!odd(t.num) || !odd(t.den) || t.num <= 0 || t.den <= 0 || !(t.coef > 0.0))
      throw Error(ErrorKind::InvalidArgument, "power sum needs odd positive exponents and positive coefficients");
  return MonotoneBijection(
      [terms](double x) {
        double s = 0.0;
        for (const auto& t : terms.terms) s += t.coef * odd_root_power(x, t.num, t.den);
        return s;
      },
      "power-sum");
}

MonotoneBijection MonotoneBijection::named(const std::string& name) {
  if (name == "identity") return identity();
  if (name == "cube") return power(3, 1);
  if (name == "fifth") return power(5, 1);
  if (name == "cbrt") return power(1, 3);
  const auto slash = name.find('/');
  if (slash != std::string::npos) {
    try {
      std::size_t used = 0;
      const int num = std::stoi(name.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(name);
      const std::string rest = name.substr(slash + 1);
      const int den = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(name);
      return power(num, den);
    } catch (const std::logic_error&) {
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown map '" + name + "'");
}

double MonotoneBijection::inverse(double y) const {
  if (!std::isfinite(y)) throw Error(ErrorKind::InversionFailure, "cannot invert a non-finite value");
  double lo = -1.0, hi = 1.0;
  for (int k = 0; forward_(lo) > y; ++k) {
    if (k > 60) throw Error(ErrorKind::InversionFailure, "no bracket below the target value");
    hi = lo;
    lo *= 2.0;
  }
  for (int k = 0; forward_(hi) < y; ++k) {
    if (k > 60) throw Error(ErrorKind::InversionFailure, "no bracket above the target value");
    lo = hi;
    hi *= 2.0;
  }
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = forward_(mid);
    if (v == y) return mid;
    (v < y ? lo : hi) = mid;
  }
  return std::abs(forward_(lo) - y) <= std::abs(forward_(hi) - y) ? lo : hi;
}

QuadratureTable integrate_from_zero(const std::function<double(double)>& f, const std::vector<double>& xs) {
  QuadratureTable out;
  out.values.assign(xs.size(), 0.0);
  std::vector<std::size_t> pos, neg;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!std::isfinite(xs[k])) throw Error(ErrorKind::InvalidArgument, "non-finite quadrature endpoint");
    if (xs[k] > 0) pos.push_back(k);
    if (xs[k] < 0) neg.push_back(k);
  }
  std::sort(pos.begin(), pos.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::sort(neg.begin(), neg.end(), [&](auto a, auto b) { return xs[a] > xs[b]; });

  Simpson s{f};
  for (const auto* side : {&pos, &neg}) {
    double at = 0.0, acc = 0.0;
    for (auto k : *side) {
      acc += s.interval(at, xs[k]);
      at = xs[k];
      out.values[k] = acc;
    }
  }
  out.error_estimate = s.error;
  return out;
}

CurvePotentials curve_potentials(const std::vector<MonotoneBijection>& alphas, const std::vector<double>& grid) {
  if (alphas.size() < 2) throw Error(ErrorKind::InvalidArgument, "at least two maps expected");
  CurvePotentials out;
  std::vector<MarginalPoint> points;
  points.reserve(grid.size());
  for (double x : grid) points.push_back(scalar_point(x));
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    auto integrand = [&](double t) {
      const double s = alphas[i].inverse(t);
      double sum = 0.0;
      for (std::size_t k = 0; k < alphas.size(); ++k)
        if (k != i) sum += alphas[k](s);
      return sum;
    };
    auto table = integrate_from_zero(integrand, grid);
    out.error_estimate += table.error_estimate;
    out.potentials.emplace_back(points, std::move(table.values));
  }
  return out;
}

YoungResult young_check(const MonotoneBijection& g, double a, double b) {
  YoungResult r;
  r.lhs = a * b;
  const auto ia = integrate_from_zero([&](double t) { return g(t); }, {a});
  const auto ib = integrate_from_zero([&](double t) { return g.inverse(t); }, {b});
  r.rhs = ia.values[0] + ib.values[0];
  r.error_estimate = ia.error_estimate + ib.error_estimate;
  r.equality = std::abs(b - g(a)) <= 1e-9;
  return r;
}

std::vector<ClosedForm> knott_smith_closed_forms() {
  return {
      ClosedForm(PowerSum{{{1.0 / 4.0, 4, 1}, {1.0 / 6.0, 6, 1}}}),
      ClosedForm(PowerSum{{{3.0 / 4.0, 4, 3}, {3.0 / 8.0, 8, 3}}}),
      ClosedForm(PowerSum{{{5.0 / 6.0, 6, 5}, {5.0 / 8.0, 8, 5}}}),
  };
}

std::vector<MonotoneBijection> knott_smith_alphas() {
  return {MonotoneBijection::identity(), MonotoneBijection::power(3, 1), MonotoneBijection::power(5, 1)};
}

KnottSmithValues knott_smith_potentials(double x1, double x2, double x3) {
  static const auto forms = knott_smith_closed_forms();
  KnottSmithValues v;
  const std::array<double, 3> x{x1, x2, x3};
  double su = 0.0, ss = 0.0;
  for (int i = 0; i < 3; ++i) {
    v.u[i] = forms[i](scalar_point(x[i]));
    v.shifted[i] = v.u[i] + 0.5 * x[i] * x[i];
    su += v.u[i];
    ss += v.shifted[i];
  }
  v.c1 = x1 * x2 + x2 * x3 + x3 * x1;
  const double s = x1 + x2 + x3;
  v.c3 = 0.5 * s * s;
  v.c1_slack = su - v.c1;
  v.c3_slack = ss - v.c3;
  return v;
}

CurveFigure emit_curve_figure_data(const std::vector<MonotoneBijection>& alphas, double t_lo, double t_hi,
                                   std::size_t samples) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "at least two samples expected");
  if (alphas.size() < 2) throw Error(ErrorKind::InvalidArgument, "at least two maps expected");
  const std::size_t N = alphas.size();
  CurveFigure fig;
  fig.header.push_back("t");
  for (std::size_t i = 0; i < N; ++i) fig.header.push_back("x" + std::to_string(i + 1));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      const std::string tag = "pair_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
      fig.header.push_back(tag + "_x" + std::to_string(i + 1));
      fig.header.push_back(tag + "_x" + std::to_string(j + 1));
    }
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = k + 1 == samples ? t_hi
                                      : t_lo + (t_hi - t_lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
    std::vector<double> row{t};
    std::vector<double> x(N);
    for (std::size_t i = 0; i < N; ++i) row.push_back(x[i] = alphas[i](t));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) {
        row.push_back(x[i]);
        row.push_back(x[j]);
      }
    fig.rows.push_back(std::move(row));
  }
  return fig;
}

std::string to_csv(const CurveFigure& fig) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t k = 0; k < fig.header.size(); ++k) os << (k ? "," : "") << fig.header[k];
  os << "\n";
  for (const auto& row : fig.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k];
    os << "\n";
  }
  return os.str();
}

bool Characterization::all_agree() const {
  const bool v = cyclic;
  return c_monotone == v && projections_cyclic == v && projections_monotone == v && splitting == v &&
         antiderivatives == v;
}

Characterization characterize_1d(const GammaSet& g, Classical which, std::size_t max_order) {
  for (int d : g.dims())
    if (d != 1) throw Error(ErrorKind::NotOneDimensional, "all marginals must be one-dimensional");
  const std::size_t N = g.marginals();
  CostSpec spec = classical_cost(which, N, 1);
  if (which == Classical::c2) spec = negated(spec);

  Characterization rep;

  // (i)
  rep.cyclic = true;
  const std::size_t top = std::min(max_order, std::max<std::size_t>(g.size(), 2));
  for (std::size_t n = 2; n <= top && rep.cyclic; ++n) {
    try {
      const auto v = is_n_c_monotone_bruteforce(g, spec, n);
      rep.max_order_checked = n;
      if (!v.holds) {
        rep.cyclic = false;
        rep.witness = v.witness;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OrderTooLarge) throw;
      break;
    }
  }

  // (ii)
  const auto sign = sign_criterion_1d(g);
  const auto pairwise = is_c_monotone(g, spec);
  if (sign.holds != pairwise.holds)
    throw Error(ErrorKind::InternalInconsistency, "sign criterion and pairwise c-monotonicity disagree");
  rep.c_monotone = sign.holds;
  if (!sign.holds && !rep.witness) rep.witness = sign.witness;

  // (iii), (iv), (vi)
  rep.projections_cyclic = rep.projections_monotone = rep.antiderivatives = true;
  const auto product = PairwiseCost::inner_product();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      const auto pairs = project_pair(g, i, j);
      if (!is_two_marginal_cyclically_monotone(pairs, product).holds) rep.projections_cyclic = false;
      if (!is_pair_monotone_classical(pairs).holds) rep.projections_monotone = false;
      try {
        std::vector<MarginalPoint> firsts;
        for (const auto& pr : pairs) firsts.push_back(pr.first);
        const auto f = rockafellar_potential(product, pairs, pairs.front().first, unique_points(firsts));
        if (!verify_antiderivative(f, pairs, product).holds) rep.antiderivatives = false;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotCyclicallyMonotone) throw;
        rep.antiderivatives = false;
      }
    }

  // (v)
  try {
    const auto tuple = assemble_splitting_tuple(g, spec, std::size_t{0});
    auto cert = certify_splitting(tuple, g, spec, projection_product(g));
    rep.splitting = cert.pass;
    rep.certificate = std::move(cert);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ProjectionNotMonotone) throw;
    rep.splitting = false;
  }

  if (!rep.all_agree()) {
    std::ostringstream os;
    os << "equivalent assertions disagree: cyclic=" << rep.cyclic << " c_monotone=" << rep.c_monotone
       << " projections_cyclic=" << rep.projections_cyclic << " projections_monotone=" << rep.projections_monotone
       << " splitting=" << rep.splitting << " antiderivatives=" << rep.antiderivatives;
    throw Error(ErrorKind::InternalInconsistency, os.str());
  }
  return rep;
}

}  // namespace mmsplit
