#include "mmsplit/antiderivative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace mmsplit {

Potential::Potential(std::vector<MarginalPoint> points, std::vector<double> values,
                     std::optional<ClosedForm> closed_form)
    : points_(std::move(points)), values_(std::move(values)), closed_form_(std::move(closed_form)) {
  if (points_.size() != values_.size()) throw Error(ErrorKind::InvalidArgument, "points and values differ in length");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    if (std::isnan(v) || v == -kInfinity) throw Error(ErrorKind::InvalidArgument, "potential values must be finite or +inf");
    if (!points_[k].allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite potential point");
    if (closed_form_) {
      const double w = (*closed_form_)(points_[k]);
      const bool agree = (std::isinf(v) && std::isinf(w)) || std::abs(v - w) <= 1e-9;
      if (!agree) throw Error(ErrorKind::InvalidArgument, "closed form disagrees with tabulated value");
    }
  }
  if (points_.size() > 1) {
    const auto d = points_.front().size();
    for (const auto& x : points_)
      if (x.size() != d) throw Error(ErrorKind::DimensionMismatch, "potential points disagree on dimension");
  }
  build_index();
}

void Potential::build_index() {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return lex_less(points_[a], points_[b]); });
}

Potential Potential::from_closed_form(ClosedForm f, std::vector<MarginalPoint> points) {
  std::vector<double> values;
  values.reserve(points.size());
  for (const auto& x : points) values.push_back(f(x));
  return Potential(std::move(points), std::move(values), std::move(f));
}

std::optional<std::size_t> Potential::find(const MarginalPoint& x) const {
  auto it = std::lower_bound(order_.begin(), order_.end(), x,
                             [&](std::size_t k, const MarginalPoint& v) { return lex_less(points_[k], v); });
  if (it != order_.end() && same_point(points_[*it], x)) return *it;
  return std::nullopt;
}

double Potential::operator()(const MarginalPoint& x) const {
  if (closed_form_) return (*closed_form_)(x);
  if (auto k = find(x)) return values_[*k];
  throw Error(ErrorKind::OffDomain, "potential evaluated off its tabulated points");
}

bool Potential::has_finite_value() const {
  return std::any_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Potential Potential::plus(const ClosedForm& h) const {
  std::vector<double> shifted = values_;
  for (std::size_t k = 0; k < shifted.size(); ++k) shifted[k] += h(points_[k]);
  std::optional<ClosedForm> cf;
  if (closed_form_) cf = closed_form_->plus(h);
  return Potential(points_, std::move(shifted), std::move(cf));
}

// ---------------------------------------------------------------------------

Potential rockafellar_potential(const PairwiseCost& c, const std::vector<PointPair>& pairs,
                                const MarginalPoint& s1, const std::vector<MarginalPoint>& eval_points,
                                double tol) {
  if (pairs.empty()) throw Error(ErrorKind::InvalidArgument, "pairs must be nonempty");
  if (pairs.size() > 10000) throw Error(ErrorKind::BudgetExceeded, "at most 1e4 pairs");
  const std::size_t n = pairs.size();
  const bool base_listed = std::any_of(pairs.begin(), pairs.end(),
                                       [&](const PointPair& p) { return same_point(p.first, s1); });
  if (!base_listed) throw Error(ErrorKind::BasePointNotInProjection, "base point is not a first coordinate of the pairs");

  const auto verdict = is_two_marginal_cyclically_monotone(pairs, c, tol);
  if (!verdict.holds) {
    std::ostringstream os;
    os << "positive cycle of length " << verdict.witness->tuples.size() << " with gain " << verdict.witness->gain();
    throw CycleError(ErrorKind::NotCyclicallyMonotone, os.str(), *verdict.witness);
  }

  // Longest chain values ending at each pair, before the final step.
  Vector diag(n);
  for (std::size_t p = 0; p < n; ++p) diag[p] = c(pairs[p].first, pairs[p].second);
  Matrix step(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) step(p, q) = c(pairs[q].first, pairs[p].second) - diag[p];

  std::vector<double> chain(n, -kInfinity);
  for (std::size_t p = 0; p < n; ++p)
    if (same_point(pairs[p].first, s1)) chain[p] = 0.0;
  for (std::size_t round = 0; round <= n; ++round) {
    bool changed = false;
    for (std::size_t p = 0; p < n; ++p) {
      if (chain[p] == -kInfinity) continue;
      for (std::size_t q = 0; q < n; ++q) {
        const double cand = chain[p] + step(p, q);
        if (cand > chain[q]) {
          chain[q] = cand;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  std::vector<double> values;
  values.reserve(eval_points.size());
  for (const auto& x : eval_points) {
    if (same_point(x, s1)) {
      values.push_back(0.0);
      continue;
    }
    double best = -kInfinity;
    for (std::size_t p = 0; p < n; ++p) best = std::max(best, chain[p] + c(x, pairs[p].second) - diag[p]);
    values.push_back(best);
  }
  return Potential(eval_points, std::move(values));
}

ConjugateTable c_conjugate(const Potential& f, const PairwiseCost& c, const std::vector<MarginalPoint>& eval_points) {
  if (!f.has_finite_value()) throw Error(ErrorKind::ImproperInput, "conjugate of a potential with no finite value");
  ConjugateTable out;
  std::vector<double> values;
  values.reserve(eval_points.size());
  out.argmax.reserve(eval_points.size());
  for (const auto& y : eval_points) {
    double best = -kInfinity;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double fx = f.values()[k];
      if (!std::isfinite(fx)) continue;
      const double v = c(f.points()[k], y) - fx;
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    values.push_back(best);
    out.argmax.push_back(arg);
  }
  out.potential = Potential(eval_points, std::move(values));
  return out;
}

ClosedForm closed_form_conjugate(const ClosedForm& f) {
  if (f.terms().size() != 1 || !std::holds_alternative<QuadraticForm>(f.terms().front()))
    throw Error(ErrorKind::InvalidArgument, "closed-form conjugate needs a single quadratic term");
  const auto& q = std::get<QuadraticForm>(f.terms().front());
  if (q.constraint.rows() > 0) throw Error(ErrorKind::InvalidArgument, "closed-form conjugate of an indicator is not registered");
  Eigen::LLT<Matrix> llt(q.A);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "quadratic form is not positive definite");
  const auto d = q.A.rows();
  const Matrix inv = llt.solve(Matrix::Identity(d, d));
  const Vector b = q.b.size() ? q.b : Vector::Zero(d);
  // q_{A^-1}(y - b) - k = 1/2 y'A^-1 y - (A^-1 b)'y + 1/2 b'A^-1 b - k
  const Matrix sym = 0.5 * (inv + inv.transpose());
  return ClosedForm(QuadraticForm{sym, -(sym * b), 0.5 * b.dot(sym * b) - q.c, Matrix()});
}

SubdiffGraph c_subdifferential_graph(const Potential& f, const PairwiseCost& c,
                                     const std::vector<PointPair>& candidates, double tol) {
  if (!f.has_finite_value()) throw Error(ErrorKind::ImproperInput, "subdifferential of a potential with no finite value");
  SubdiffGraph graph;
  if (candidates.empty()) return graph;
  std::vector<MarginalPoint> ys;
  ys.reserve(candidates.size());
  for (const auto& pr : candidates) ys.push_back(pr.second);
  const auto conj = c_conjugate(f, c, ys);
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto& [x, y] = candidates[k];
    const double fx = f(x);
    if (!std::isfinite(fx)) continue;
    const double r = std::abs(fx + conj.potential.values()[k] - c(x, y));
    if (r <= tol) {
      graph.pairs.push_back(candidates[k]);
      graph.residuals.push_back(r);
    }
  }
  return graph;
}

AntiderivativeCheck verify_antiderivative(const Potential& f, const std::vector<PointPair>& pairs,
                                          const PairwiseCost& c, double tol) {
  if (!f.has_finite_value()) throw Error(ErrorKind::ImproperInput, "antiderivative check of a potential with no finite value");
  AntiderivativeCheck check;
  for (const auto& [x, y] : pairs) {
    const double fx = f(x);
    if (!std::isfinite(fx)) {
      check.holds = false;
      check.max_residual = kInfinity;
      continue;
    }
    const double cxy = c(x, y);
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double fxp = f.values()[k];
      if (!std::isfinite(fxp)) continue;
      const double r = fx + c(f.points()[k], y) - fxp - cxy;
      check.max_residual = std::max(check.max_residual, r);
    }
  }
  if (check.max_residual > tol) check.holds = false;
  return check;
}

}  // namespace mmsplit
