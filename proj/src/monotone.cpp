#include "mmsplit/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mmsplit {

namespace {

std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

double binomial(std::size_t n, std::size_t k) {
  double b = 1.0;
  for (std::size_t r = 1; r <= k; ++r) b = b * static_cast<double>(n - k + r) / static_cast<double>(r);
  return b;
}

std::vector<std::size_t> identity_permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// Cost evaluations between all candidate points, one column per marginal.
struct CostTables {
  std::vector<CostSpec::PairKey> keys;
  std::vector<Matrix> pair;
  std::vector<Vector> shift;

  CostTables(const std::vector<std::vector<MarginalPoint>>& columns, const CostSpec& spec) {
    for (const auto& [key, c] : spec.pairs()) {
      const auto& ci = columns[key.first];
      const auto& cj = columns[key.second];
      Matrix t(ci.size(), cj.size());
      for (std::size_t a = 0; a < ci.size(); ++a)
        for (std::size_t b = 0; b < cj.size(); ++b) t(a, b) = c(ci[a], cj[b]);
      keys.push_back(key);
      pair.push_back(std::move(t));
    }
    if (spec.shift()) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        Vector h(columns[i].size());
        for (std::size_t a = 0; a < columns[i].size(); ++a) h[a] = spec.shift_term(i, columns[i][a]);
        shift.push_back(std::move(h));
      }
    }
  }

  // slot(i, j): index into column i used by row j.
  template <typename Slot>
  double total(std::size_t rows, Slot slot) const {
    double s = 0.0;
    for (std::size_t j = 0; j < rows; ++j) {
      for (std::size_t k = 0; k < keys.size(); ++k)
        s += pair[k](slot(keys[k].first, j), slot(keys[k].second, j));
      for (std::size_t i = 0; i < shift.size(); ++i) s += shift[i][slot(i, j)];
    }
    return s;
  }
};

MarginalPoint pick(const ProductPoint& p, std::size_t i) { return p[i]; }

}  // namespace

CostSpec two_marginal_spec(const PairwiseCost& c, int dim_x, int dim_y) {
  std::map<CostSpec::PairKey, PairwiseCost> pairs;
  pairs.emplace(CostSpec::PairKey{0, 1}, c);
  return CostSpec({dim_x, dim_y}, std::move(pairs));
}

double recheck_witness(const Witness& w, const CostSpec& spec) {
  const std::size_t n = w.tuples.size();
  const std::size_t N = spec.marginals();
  if (w.permutations.size() != N) throw Error(ErrorKind::InvalidArgument, "witness needs one permutation per marginal");
  double permuted = 0.0;
  double diagonal = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<MarginalPoint> parts;
    for (std::size_t i = 0; i < N; ++i) parts.push_back(pick(w.tuples[w.permutations[i][j]], i));
    permuted += spec(ProductPoint(std::move(parts)));
    diagonal += spec(w.tuples[j]);
  }
  return permuted - diagonal;
}

MonotonicityVerdict is_n_c_monotone_bruteforce(const GammaSet& g, const CostSpec& spec, std::size_t n,
                                               const BruteForceLimits& limits, double tol) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "order must be positive");
  if (g.dims() != spec.dims()) throw Error(ErrorKind::DimensionMismatch, "gamma and cost dimensions differ");
  const std::size_t N = g.marginals();
  const std::size_t m = g.size();
  if (n > limits.max_order) throw Error(ErrorKind::OrderTooLarge, "order exceeds factorial guard");
  if (N > limits.max_marginals) throw Error(ErrorKind::OrderTooLarge, "too many marginals for full enumeration");
  const double budget = std::pow(factorial(n), static_cast<double>(N - 1)) * binomial(m + n - 1, n);
  if (budget > limits.max_evaluations) throw Error(ErrorKind::OrderTooLarge, "enumeration budget exceeded");

  std::vector<std::vector<MarginalPoint>> columns(N);
  for (std::size_t i = 0; i < N; ++i)
    for (const auto& p : g.points()) columns[i].push_back(p[i]);
  const CostTables tables(columns, spec);
  const auto perms = all_permutations(n);

  MonotonicityVerdict verdict;
  verdict.tolerance = tol;
  std::vector<std::size_t> idx(n, 0);
  std::vector<std::size_t> sel(N - 1, 0);
  while (true) {
    const double diagonal = tables.total(n, [&](std::size_t, std::size_t j) { return idx[j]; });
    std::fill(sel.begin(), sel.end(), 0);
    while (true) {
      // advance the odometer; the all-identity tuple is skipped
      std::size_t pos = N - 1;
      while (pos > 0) {
        if (++sel[pos - 1] < perms.size()) break;
        sel[pos - 1] = 0;
        --pos;
      }
      if (pos == 0) break;
      const double permuted = tables.total(n, [&](std::size_t i, std::size_t j) {
        return i == 0 ? idx[j] : idx[perms[sel[i - 1]][j]];
      });
      ++verdict.checked;
      if (permuted > diagonal + tol) {
        Witness w;
        for (std::size_t j = 0; j < n; ++j) w.tuples.push_back(g[idx[j]]);
        w.permutations.push_back(identity_permutation(n));
        for (std::size_t i = 1; i < N; ++i) w.permutations.push_back(perms[sel[i - 1]]);
        w.permuted_sum = permuted;
        w.diagonal_sum = diagonal;
        verdict.holds = false;
        verdict.witness = std::move(w);
        return verdict;
      }
    }
    // next nondecreasing multiset
    std::size_t k = n;
    while (k > 0 && idx[k - 1] == m - 1) --k;
    if (k == 0) break;
    const std::size_t v = idx[k - 1] + 1;
    for (std::size_t r = k - 1; r < n; ++r) idx[r] = v;
  }
  return verdict;
}

MonotonicityVerdict is_c_monotone(const GammaSet& g, const CostSpec& spec, double tol) {
  if (g.dims() != spec.dims()) throw Error(ErrorKind::DimensionMismatch, "gamma and cost dimensions differ");
  const std::size_t N = g.marginals();
  MonotonicityVerdict verdict;
  verdict.tolerance = tol;
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      const double diagonal = spec(g[a]) + spec(g[b]);
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (N - 1)); ++mask) {
        std::vector<MarginalPoint> first;
        std::vector<MarginalPoint> second;
        std::vector<std::vector<std::size_t>> perms{{0, 1}};
        for (std::size_t i = 0; i < N; ++i) {
          const bool swap = i > 0 && ((mask >> (i - 1)) & 1U);
          first.push_back(swap ? g[b][i] : g[a][i]);
          second.push_back(swap ? g[a][i] : g[b][i]);
          if (i > 0) perms.push_back(swap ? std::vector<std::size_t>{1, 0} : std::vector<std::size_t>{0, 1});
        }
        const double permuted = spec(ProductPoint(std::move(first))) + spec(ProductPoint(std::move(second)));
        ++verdict.checked;
        if (permuted > diagonal + tol) {
          verdict.holds = false;
          verdict.witness = Witness{{g[a], g[b]}, std::move(perms), permuted, diagonal};
          return verdict;
        }
      }
    }
  }
  return verdict;
}

std::optional<std::vector<std::size_t>> find_positive_cycle(const std::vector<PointPair>& pairs,
                                                            const PairwiseCost& c, double tol) {
  const std::size_t n = pairs.size();
  if (n < 2) return std::nullopt;
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const double charge = tol / static_cast<double>(n);

  Vector diag(n);
  for (std::size_t p = 0; p < n; ++p) diag[p] = c(pairs[p].first, pairs[p].second);
  Matrix cross;
  const bool cached = n <= 2048;
  if (cached) {
    cross.resize(n, n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) cross(p, q) = c(pairs[q].first, pairs[p].second);
  }
  auto weight = [&](std::size_t p, std::size_t q) {
    const double cq = cached ? cross(p, q) : c(pairs[q].first, pairs[p].second);
    return cq - diag[p] - charge;
  };

  std::vector<double> dist(n, 0.0);
  std::vector<std::size_t> pred(n, kNone);
  std::size_t start = kNone;
  for (std::size_t round = 0; round <= n; ++round) {
    std::size_t first_updated = kNone;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        if (p == q) continue;
        const double cand = dist[p] + weight(p, q);
        if (cand > dist[q]) {
          dist[q] = cand;
          pred[q] = p;
          first_updated = std::min(first_updated, q);
        }
      }
    }
    if (first_updated == kNone) return std::nullopt;
    if (round == n) start = first_updated;
  }

  auto cycle_from = [&](std::size_t v) -> std::optional<std::vector<std::size_t>> {
    for (std::size_t k = 0; k < n; ++k) {
      if (pred[v] == kNone) return std::nullopt;
      v = pred[v];
    }
    std::vector<std::size_t> cyc;
    std::size_t u = v;
    do {
      cyc.push_back(u);
      u = pred[u];
    } while (u != v);
    std::reverse(cyc.begin(), cyc.end());
    std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
    return cyc;
  };
  if (auto cyc = cycle_from(start)) return cyc;
  for (std::size_t v = 0; v < n; ++v)
    if (auto cyc = cycle_from(v)) return cyc;
  throw Error(ErrorKind::InternalInconsistency, "relaxation did not settle but no predecessor cycle exists");
}

MonotonicityVerdict is_two_marginal_cyclically_monotone(const std::vector<PointPair>& pairs,
                                                        const PairwiseCost& c, double tol) {
  if (pairs.empty()) throw Error(ErrorKind::InvalidArgument, "pairs must be nonempty");
  if (pairs.size() > 10000) throw Error(ErrorKind::BudgetExceeded, "cycle detection supports at most 1e4 pairs");
  MonotonicityVerdict verdict;
  verdict.tolerance = tol;
  const std::size_t n = pairs.size();
  verdict.checked = static_cast<std::uint64_t>(n) * (n - 1);
  const auto cyc = find_positive_cycle(pairs, c, tol);
  if (!cyc) return verdict;

  const std::size_t k = cyc->size();
  Witness w;
  std::vector<std::size_t> back(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& pr = pairs[(*cyc)[j]];
    w.tuples.emplace_back(std::vector<MarginalPoint>{pr.first, pr.second});
    back[j] = (j + k - 1) % k;
  }
  w.permutations = {identity_permutation(k), back};
  for (std::size_t j = 0; j < k; ++j) {
    const auto& cur = pairs[(*cyc)[j]];
    const auto& prev = pairs[(*cyc)[back[j]]];
    w.permuted_sum += c(cur.first, prev.second);
    w.diagonal_sum += c(cur.first, cur.second);
  }
  verdict.holds = false;
  verdict.witness = std::move(w);
  return verdict;
}

MonotonicityVerdict is_pair_monotone_classical(const std::vector<PointPair>& pairs, double tol) {
  MonotonicityVerdict verdict;
  verdict.tolerance = tol;
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    if (pairs[a].first.size() != pairs[a].second.size())
      throw Error(ErrorKind::DimensionMismatch, "classical monotonicity needs x and y of equal dimension");
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      const auto& [x, y] = pairs[a];
      const auto& [xp, yp] = pairs[b];
      if (x.size() != xp.size() || y.size() != yp.size())
        throw Error(ErrorKind::DimensionMismatch, "pairs disagree on dimension");
      ++verdict.checked;
      const double inner = (x - xp).dot(y - yp);
      if (inner < -tol) {
        Witness w;
        w.tuples.emplace_back(std::vector<MarginalPoint>{x, y});
        w.tuples.emplace_back(std::vector<MarginalPoint>{xp, yp});
        w.permutations = {{0, 1}, {1, 0}};
        w.permuted_sum = x.dot(yp) + xp.dot(y);
        w.diagonal_sum = x.dot(y) + xp.dot(yp);
        verdict.holds = false;
        verdict.witness = std::move(w);
        return verdict;
      }
    }
  }
  return verdict;
}

MonotonicityVerdict sign_criterion_1d(const GammaSet& g) {
  for (int d : g.dims())
    if (d != 1) throw Error(ErrorKind::NotOneDimensional, "sign criterion needs one-dimensional marginals");
  const std::size_t N = g.marginals();
  const CostSpec c1 = classical_cost(Classical::c1, N, 1);
  MonotonicityVerdict verdict;
  verdict.tolerance = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      ++verdict.checked;
      bool pos = false;
      bool neg = false;
      for (std::size_t i = 0; i < N; ++i) {
        const double t = g[a][i][0] - g[b][i][0];
        pos = pos || t > 0.0;
        neg = neg || t < 0.0;
      }
      if (pos && neg) {
        Witness w;
        w.tuples = {g[a], g[b]};
        std::vector<MarginalPoint> first;
        std::vector<MarginalPoint> second;
        for (std::size_t i = 0; i < N; ++i) {
          const bool swap = g[a][i][0] - g[b][i][0] < 0.0;
          w.permutations.push_back(swap ? std::vector<std::size_t>{1, 0} : std::vector<std::size_t>{0, 1});
          first.push_back(swap ? g[b][i] : g[a][i]);
          second.push_back(swap ? g[a][i] : g[b][i]);
        }
        // sigma_1 is the identity by convention; relabel rows if marginal 1 swapped
        if (w.permutations[0][0] == 1) {
          for (auto& p : w.permutations) std::swap(p[0], p[1]);
        }
        w.permuted_sum = c1(ProductPoint(std::move(first))) + c1(ProductPoint(std::move(second)));
        w.diagonal_sum = c1(g[a]) + c1(g[b]);
        verdict.holds = false;
        verdict.witness = std::move(w);
        return verdict;
      }
    }
  }
  return verdict;
}

ProjectionReport check_projection_condition(const GammaSet& g, const CostSpec& spec, double tol) {
  if (g.dims() != spec.dims()) throw Error(ErrorKind::DimensionMismatch, "gamma and cost dimensions differ");
  ProjectionReport report;
  for (const auto& [key, c] : spec.pairs()) {
    auto v = is_two_marginal_cyclically_monotone(project_pair(g, key.first, key.second), c, tol);
    report.holds = report.holds && v.holds;
    report.pairs.emplace(key, std::move(v));
  }
  return report;
}

CouplingOptimum brute_force_optimal_coupling(const std::vector<std::vector<MarginalPoint>>& lists,
                                             const CostSpec& spec, const BruteForceLimits& limits,
                                             double tol) {
  const std::size_t N = lists.size();
  if (N != spec.marginals()) throw Error(ErrorKind::DimensionMismatch, "one list per marginal required");
  const std::size_t n = lists.front().size();
  for (std::size_t i = 0; i < N; ++i) {
    if (lists[i].size() != n) throw Error(ErrorKind::InvalidArgument, "marginal lists must share a length");
    for (const auto& x : lists[i])
      if (x.size() != spec.dims()[i]) throw Error(ErrorKind::DimensionMismatch, "marginal list dimension");
  }
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "marginal lists must be nonempty");
  if (N > limits.max_marginals || std::pow(factorial(n), static_cast<double>(N - 1)) > limits.max_evaluations)
    throw Error(ErrorKind::BudgetExceeded, "too many permutation tuples");

  const CostTables tables(lists, spec);
  const auto perms = all_permutations(n);
  CouplingOptimum best;
  best.diagonal_value = tables.total(n, [](std::size_t, std::size_t j) { return j; });
  best.value = best.diagonal_value;
  best.permutations.assign(N, identity_permutation(n));

  std::vector<std::size_t> sel(N - 1, 0);
  while (true) {
    std::size_t pos = N - 1;
    while (pos > 0) {
      if (++sel[pos - 1] < perms.size()) break;
      sel[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
    const double v = tables.total(n, [&](std::size_t i, std::size_t j) { return i == 0 ? j : perms[sel[i - 1]][j]; });
    if (v > best.value) {
      best.value = v;
      best.permutations[0] = identity_permutation(n);
      for (std::size_t i = 1; i < N; ++i) best.permutations[i] = perms[sel[i - 1]];
    }
  }
  best.diagonal_optimal = best.diagonal_value >= best.value - tol;
  return best;
}

}  // namespace mmsplit
