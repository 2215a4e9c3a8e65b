#include "mmsplit/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace mmsplit {

namespace {

std::vector<MarginalPoint> merged_grid(const std::vector<MarginalPoint>& gamma_i,
                                       const std::vector<std::vector<MarginalPoint>>& eval_grids, std::size_t i) {
  std::vector<MarginalPoint> all = gamma_i;
  if (i < eval_grids.size()) all.insert(all.end(), eval_grids[i].begin(), eval_grids[i].end());
  return unique_points(all);
}

std::size_t checked_product(const std::vector<std::size_t>& sizes, std::size_t cap) {
  double total = 1.0;
  for (auto s : sizes) total *= static_cast<double>(s);
  if (total > static_cast<double>(cap)) {
    std::ostringstream os;
    os << "product of " << sizes.size() << " lists has " << total << " points, cap " << cap;
    throw Error(ErrorKind::BudgetExceeded, os.str());
  }
  return static_cast<std::size_t>(total);
}

// sum u_i(p_i); +inf if any term is.
double tuple_value(const SplittingTuple& t, const ProductPoint& p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < t.potentials.size(); ++i) {
    const double v = t.potentials[i](p[i]);
    if (v == kInfinity) return kInfinity;
    sum += v;
  }
  return sum;
}

void check_tuple_fits(const SplittingTuple& t, const CostSpec& spec) {
  if (t.potentials.size() != spec.marginals())
    throw Error(ErrorKind::DimensionMismatch, "tuple and cost disagree on the number of marginals");
}

}  // namespace

SplittingTuple assemble_splitting_tuple(const GammaSet& g, const CostSpec& spec, const ProductPoint& s,
                                        const std::vector<std::vector<MarginalPoint>>& eval_grids, double tol) {
  const std::size_t N = spec.marginals();
  if (g.marginals() != N || g.dims() != spec.dims())
    throw Error(ErrorKind::DimensionMismatch, "gamma and cost disagree on marginal dimensions");
  if (!eval_grids.empty() && eval_grids.size() != N)
    throw Error(ErrorKind::DimensionMismatch, "one evaluation grid per marginal expected");
  if (!g.contains(s)) throw Error(ErrorKind::BasePointNotInGamma, "base point is not a point of gamma");

  std::vector<std::vector<MarginalPoint>> grids(N);
  for (std::size_t i = 0; i < N; ++i) grids[i] = merged_grid(project(g, i), eval_grids, i);

  SplittingTuple out;
  out.base = s;
  std::vector<std::vector<double>> u(N);
  for (std::size_t i = 0; i < N; ++i) u[i].assign(grids[i].size(), 0.0);

  for (const auto& [key, cij] : spec.pairs()) {
    const auto [i, j] = key;
    const auto pairs = project_pair(g, i, j);
    const auto verdict = is_two_marginal_cyclically_monotone(pairs, cij, tol);
    if (!verdict.holds) {
      std::ostringstream os;
      os << "projection (" << i + 1 << "," << j + 1 << ") carries a cycle with gain " << verdict.witness->gain();
      throw CycleError(ErrorKind::ProjectionNotMonotone, os.str(), *verdict.witness, std::make_pair(i, j));
    }
    Potential f = rockafellar_potential(cij, pairs, s[i], grids[i], tol);
    const auto fc = c_conjugate(f, cij, grids[j]);
    for (std::size_t k = 0; k < grids[i].size(); ++k) u[i][k] += f.values()[k];
    for (std::size_t k = 0; k < grids[j].size(); ++k) u[j][k] += fc.potential.values()[k];
    out.pair_potentials.push_back({i, j, std::move(f)});
  }

  for (std::size_t i = 0; i < N; ++i) {
    if (spec.shift())
      for (std::size_t k = 0; k < grids[i].size(); ++k) u[i][k] += spec.shift_term(i, grids[i][k]);
    out.potentials.emplace_back(grids[i], std::move(u[i]));
  }
  return out;
}

SplittingTuple assemble_splitting_tuple(const GammaSet& g, const CostSpec& spec, std::size_t base_index,
                                        const std::vector<std::vector<MarginalPoint>>& eval_grids, double tol) {
  if (base_index >= g.size()) throw Error(ErrorKind::BasePointNotInGamma, "base index beyond the size of gamma");
  return assemble_splitting_tuple(g, spec, g[base_index], eval_grids, tol);
}

SplittingTuple closed_form_tuple(const std::vector<ClosedForm>& forms) {
  SplittingTuple t;
  for (const auto& f : forms) t.potentials.push_back(Potential::from_closed_form(f));
  return t;
}

SplittingTuple shifted_tuple(const SplittingTuple& t, const std::vector<ClosedForm>& h) {
  if (h.size() != t.potentials.size()) throw Error(ErrorKind::DimensionMismatch, "one shift term per potential expected");
  SplittingTuple out = t;
  for (std::size_t i = 0; i < h.size(); ++i) out.potentials[i] = t.potentials[i].plus(h[i]);
  return out;
}

SplittingCertificate certify_splitting(const SplittingTuple& tuple, const GammaSet& g, const CostSpec& spec,
                                       const std::vector<ProductPoint>& test_points, double tol,
                                       std::optional<std::uint64_t> seed) {
  check_tuple_fits(tuple, spec);
  SplittingCertificate cert;
  cert.tolerance = tol;
  cert.seed = seed;
  cert.test_points = test_points.size();
  cert.gamma_points = g.size();

  for (const auto& p : test_points) {
    spec.check_point(p);
    const double u = tuple_value(tuple, p);
    if (u == kInfinity) {
      ++cert.infinite_points;
      continue;
    }
    const double v = spec(p) - u;
    if (v > cert.max_violation) {
      cert.max_violation = v;
      cert.violation_witness = p;
    }
  }

  for (const auto& p : g.points()) {
    spec.check_point(p);
    const double u = tuple_value(tuple, p);
    if (u == kInfinity) throw Error(ErrorKind::UndefinedOnGamma, "a potential is +inf on a projection of gamma");
    const double r = std::abs(spec(p) - u);
    if (!cert.residual_witness || r > cert.max_residual) {
      cert.max_residual = r;
      cert.residual_witness = p;
    }
    // Gamma belongs to the sample as well.
    if (spec(p) - u > cert.max_violation) {
      cert.max_violation = spec(p) - u;
      cert.violation_witness = p;
    }
  }
  cert.pass = cert.max_violation <= tol && cert.max_residual <= tol;
  return cert;
}

std::vector<ProductPoint> lattice_and_random_points(const GammaSet& g, std::size_t per_axis,
                                                    std::size_t random_count, std::uint64_t seed) {
  const auto& dims = g.dims();
  std::vector<double> lo, hi;
  for (std::size_t i = 0; i < dims.size(); ++i)
    for (int c = 0; c < dims[i]; ++c) {
      double a = kInfinity, b = -kInfinity;
      for (const auto& p : g.points()) {
        a = std::min(a, p[i][c]);
        b = std::max(b, p[i][c]);
      }
      const double w = b > a ? b - a : 1.0;
      lo.push_back(a - 0.5 * w);
      hi.push_back(b + 0.5 * w);
    }
  const std::size_t D = lo.size();

  auto assemble = [&](const std::vector<double>& flat) {
    std::vector<MarginalPoint> parts;
    std::size_t off = 0;
    for (int d : dims) {
      parts.emplace_back(Vector::Map(flat.data() + off, d));
      off += static_cast<std::size_t>(d);
    }
    return ProductPoint(std::move(parts));
  };

  std::vector<ProductPoint> out;
  if (per_axis > 0) {
    const std::size_t count = checked_product(std::vector<std::size_t>(D, per_axis), 2000000);
    out.reserve(count + random_count);
    std::vector<std::size_t> idx(D, 0);
    std::vector<double> flat(D);
    for (std::size_t n = 0; n < count; ++n) {
      for (std::size_t k = 0; k < D; ++k)
        flat[k] = per_axis == 1 ? 0.5 * (lo[k] + hi[k])
                                : lo[k] + (hi[k] - lo[k]) * static_cast<double>(idx[k]) / static_cast<double>(per_axis - 1);
      out.push_back(assemble(flat));
      for (std::size_t k = D; k-- > 0;) {
        if (++idx[k] < per_axis) break;
        idx[k] = 0;
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<double> flat(D);
  for (std::size_t n = 0; n < random_count; ++n) {
    for (std::size_t k = 0; k < D; ++k) flat[k] = std::uniform_real_distribution<double>(lo[k], hi[k])(rng);
    out.push_back(assemble(flat));
  }
  return out;
}

std::vector<ProductPoint> projection_product(const GammaSet& g, std::size_t max_points) {
  std::vector<std::vector<MarginalPoint>> lists;
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < g.marginals(); ++i) {
    lists.push_back(project(g, i));
    sizes.push_back(lists.back().size());
  }
  checked_product(sizes, max_points);
  return product_grid(lists);
}

std::vector<ProductPoint> potential_grid(const SplittingTuple& t, std::size_t max_points) {
  std::vector<std::vector<MarginalPoint>> lists;
  std::vector<std::size_t> sizes;
  for (const auto& u : t.potentials) {
    if (u.size() == 0) throw Error(ErrorKind::InvalidArgument, "potential has no tabulated points");
    lists.push_back(u.points());
    sizes.push_back(u.size());
  }
  checked_product(sizes, max_points);
  return product_grid(lists);
}

ExactnessReport check_exactness_condition(const GammaSet& g, const SplittingTuple& tuple, const CostSpec& spec,
                                          const std::vector<ProductPoint>& test_points, double tol) {
  check_tuple_fits(tuple, spec);
  const std::size_t N = g.marginals();
  ExactnessReport rep;

  // Pair projections as sorted sets for membership tests.
  auto less_pair = [](const PointPair& a, const PointPair& b) {
    if (lex_less(a.first, b.first)) return true;
    if (lex_less(b.first, a.first)) return false;
    return lex_less(a.second, b.second);
  };
  auto less_point = [](const MarginalPoint& a, const MarginalPoint& b) { return lex_less(a, b); };
  std::map<CostSpec::PairKey, std::set<PointPair, decltype(less_pair)>> pair_sets;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      auto& s = pair_sets.try_emplace({i, j}, less_pair).first->second;
      for (auto& pr : project_pair(g, i, j)) s.insert(std::move(pr));
    }
  std::vector<std::set<MarginalPoint, decltype(less_point)>> marg_sets;
  for (std::size_t i = 0; i < N; ++i) {
    marg_sets.emplace_back(less_point);
    for (auto& x : project(g, i)) marg_sets.back().insert(std::move(x));
  }

  const auto candidates = projection_product(g);
  rep.candidates = candidates.size();
  for (const auto& p : candidates) {
    bool in_all = true;
    for (const auto& [key, s] : pair_sets)
      if (!s.count({p[key.first], p[key.second]})) {
        in_all = false;
        break;
      }
    if (in_all && !g.contains(p)) rep.extra_intersection_points.push_back(p);
  }
  rep.intersection_equals_gamma = rep.extra_intersection_points.empty();

  for (const auto& p : test_points) {
    if (g.contains(p)) continue;
    const double u = tuple_value(tuple, p);
    if (u == kInfinity) continue;
    const double slack = u - spec(p);
    rep.min_slack_off_gamma = std::min(rep.min_slack_off_gamma, slack);
    if (std::abs(slack) > tol) continue;
    bool on_product = true;
    for (std::size_t i = 0; i < N && on_product; ++i) on_product = marg_sets[i].count(p[i]) > 0;
    if (on_product) rep.equality_off_gamma.push_back(p);
  }
  rep.holds = rep.intersection_equals_gamma && rep.equality_off_gamma.empty();
  return rep;
}

MonotonicityVerdict splitting_implies_monotone_check(const SplittingTuple& tuple, const GammaSet& g,
                                                     const CostSpec& spec, std::size_t n,
                                                     const BruteForceLimits& limits, double tol) {
  const auto cert = certify_splitting(tuple, g, spec, {}, tol);
  if (!cert.pass) throw Error(ErrorKind::InvalidArgument, "tuple does not split the cost on gamma");
  auto verdict = is_n_c_monotone_bruteforce(g, spec, n, limits, tol);
  if (!verdict.holds) {
    std::ostringstream os;
    os << "gamma admits a splitting tuple but fails " << n << "-monotonicity with gain " << verdict.witness->gain();
    throw Error(ErrorKind::InternalInconsistency, os.str());
  }
  return verdict;
}

}  // namespace mmsplit
