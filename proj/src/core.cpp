#include "mmsplit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace mmsplit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::OffGrid: return "OffGrid";
    case ErrorKind::OffDomain: return "OffDomain";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OrderTooLarge: return "OrderTooLarge";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotCyclicallyMonotone: return "NotCyclicallyMonotone";
    case ErrorKind::BasePointNotInProjection: return "BasePointNotInProjection";
    case ErrorKind::BasePointNotInGamma: return "BasePointNotInGamma";
    case ErrorKind::ProjectionNotMonotone: return "ProjectionNotMonotone";
    case ErrorKind::ImproperInput: return "ImproperInput";
    case ErrorKind::UndefinedOnGamma: return "UndefinedOnGamma";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::InversionFailure: return "InversionFailure";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotOneDimensional: return "NotOneDimensional";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownExample: return "UnknownExample";
  }
  return "Unknown";
}

namespace {

void require_finite(const MarginalPoint& x) {
  if (!x.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite coordinate");
}

std::string dim_message(long a, long b) {
  std::ostringstream os;
  os << "dimension " << a << " vs " << b;
  return os.str();
}

}  // namespace

bool same_point(const MarginalPoint& a, const MarginalPoint& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a[k] != b[k]) return false;
  }
  return true;
}

bool lex_less(const MarginalPoint& a, const MarginalPoint& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) return true;
    if (b[k] < a[k]) return false;
  }
  return false;
}

MarginalPoint scalar_point(double v) {
  MarginalPoint x(1);
  x[0] = v;
  return x;
}

ProductPoint::ProductPoint(std::vector<MarginalPoint> parts) : parts_(std::move(parts)) {
  if (parts_.size() < 2) throw Error(ErrorKind::InvalidArgument, "product point needs N >= 2");
  for (const auto& x : parts_) require_finite(x);
}

std::vector<int> ProductPoint::dims() const {
  std::vector<int> d;
  d.reserve(parts_.size());
  for (const auto& x : parts_) d.push_back(static_cast<int>(x.size()));
  return d;
}

bool operator==(const ProductPoint& a, const ProductPoint& b) {
  if (a.parts_.size() != b.parts_.size()) return false;
  for (std::size_t i = 0; i < a.parts_.size(); ++i) {
    if (!same_point(a.parts_[i], b.parts_[i])) return false;
  }
  return true;
}

bool lex_less(const ProductPoint& a, const ProductPoint& b) {
  if (a.marginals() != b.marginals()) return a.marginals() < b.marginals();
  for (std::size_t i = 0; i < a.marginals(); ++i) {
    if (lex_less(a[i], b[i])) return true;
    if (lex_less(b[i], a[i])) return false;
  }
  return false;
}

ProductPoint scalar_tuple(const std::vector<double>& values) {
  std::vector<MarginalPoint> parts;
  parts.reserve(values.size());
  for (double v : values) parts.push_back(scalar_point(v));
  return ProductPoint(std::move(parts));
}

// ---------------------------------------------------------------------------

PairwiseCost::PairwiseCost(Kind kind, int sign) : kind_(std::move(kind)), sign_(sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "sign must be +1 or -1");
  if (const auto* t = std::get_if<Tabulated>(&kind_)) {
    if (t->table.rows() != static_cast<Eigen::Index>(t->grid_i.size()) ||
        t->table.cols() != static_cast<Eigen::Index>(t->grid_j.size())) {
      throw Error(ErrorKind::DimensionMismatch, "tabulated cost table shape does not match grids");
    }
    if (!t->table.allFinite()) throw Error(ErrorKind::InvalidArgument, "tabulated cost has non-finite entries");
  }
}

PairwiseCost PairwiseCost::tabulated(std::vector<MarginalPoint> grid_i,
                                     std::vector<MarginalPoint> grid_j, Matrix table, int sign) {
  return {Tabulated{std::move(grid_i), std::move(grid_j), std::move(table)}, sign};
}

void PairwiseCost::check_dims(int di, int dj) const {
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, InnerProduct> || std::is_same_v<K, HalfSqDist>) {
          if (di != dj) throw Error(ErrorKind::DimensionMismatch, dim_message(di, dj));
        } else if constexpr (std::is_same_v<K, Bilinear>) {
          if (k.A.rows() != di || k.A.cols() != dj)
            throw Error(ErrorKind::DimensionMismatch, "bilinear matrix shape");
        } else {
          for (const auto& g : k.grid_i)
            if (g.size() != di) throw Error(ErrorKind::DimensionMismatch, "tabulated grid_i");
          for (const auto& g : k.grid_j)
            if (g.size() != dj) throw Error(ErrorKind::DimensionMismatch, "tabulated grid_j");
        }
      },
      kind_);
}

double PairwiseCost::operator()(const MarginalPoint& x, const MarginalPoint& y) const {
  const double base = std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, InnerProduct>) {
          if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, dim_message(x.size(), y.size()));
          return x.dot(y);
        } else if constexpr (std::is_same_v<K, HalfSqDist>) {
          if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, dim_message(x.size(), y.size()));
          return 0.5 * (x - y).squaredNorm();
        } else if constexpr (std::is_same_v<K, Bilinear>) {
          if (k.A.rows() != x.size() || k.A.cols() != y.size())
            throw Error(ErrorKind::DimensionMismatch, "bilinear matrix shape");
          return x.dot(k.A * y);
        } else {
          const auto find = [](const std::vector<MarginalPoint>& grid, const MarginalPoint& p) {
            for (std::size_t r = 0; r < grid.size(); ++r)
              if (same_point(grid[r], p)) return static_cast<Eigen::Index>(r);
            throw Error(ErrorKind::OffGrid, "point not listed in tabulated cost grid");
          };
          return k.table(find(k.grid_i, x), find(k.grid_j, y));
        }
      },
      kind_);
  return sign_ * base;
}

double eval_pairwise(const PairwiseCost& c, const MarginalPoint& x, const MarginalPoint& y) {
  return c(x, y);
}

// ---------------------------------------------------------------------------

double odd_root_power(double x, int num, int den) {
  if (den <= 0 || den % 2 == 0) throw Error(ErrorKind::InvalidArgument, "power denominator must be odd and positive");
  if (den == 1) return std::pow(x, num);
  const double root = std::copysign(std::pow(std::abs(x), 1.0 / den), x);
  return std::pow(root, num);
}

namespace {

int term_dim(const FormTerm& t) {
  if (const auto* q = std::get_if<QuadraticForm>(&t)) return static_cast<int>(q->A.rows());
  return 1;
}

double eval_term(const FormTerm& t, const MarginalPoint& x) {
  if (const auto* q = std::get_if<QuadraticForm>(&t)) {
    if (q->A.rows() != x.size()) throw Error(ErrorKind::DimensionMismatch, dim_message(q->A.rows(), x.size()));
    if (q->constraint.rows() > 0) {
      const Vector r = q->constraint * x;
      for (Eigen::Index k = 0; k < r.size(); ++k)
        if (r[k] != 0.0) return std::numeric_limits<double>::infinity();
    }
    double v = 0.5 * x.dot(q->A * x) + q->c;
    if (q->b.size() > 0) v += q->b.dot(x);
    return v;
  }
  const auto& p = std::get<PowerSum>(t);
  if (x.size() != 1) throw Error(ErrorKind::DimensionMismatch, "power sum acts on the real line");
  double v = 0.0;
  for (const auto& term : p.terms) v += term.coef * odd_root_power(x[0], term.num, term.den);
  return v;
}

void validate_term(const FormTerm& t) {
  if (const auto* q = std::get_if<QuadraticForm>(&t)) {
    if (q->A.rows() != q->A.cols()) throw Error(ErrorKind::DimensionMismatch, "quadratic form matrix must be square");
    if (q->b.size() != 0 && q->b.size() != q->A.rows())
      throw Error(ErrorKind::DimensionMismatch, "quadratic form linear part");
    if (q->constraint.rows() > 0 && q->constraint.cols() != q->A.rows())
      throw Error(ErrorKind::DimensionMismatch, "quadratic form constraint");
  } else {
    for (const auto& term : std::get<PowerSum>(t).terms)
      if (term.den <= 0 || term.den % 2 == 0)
        throw Error(ErrorKind::InvalidArgument, "power denominator must be odd and positive");
  }
}

}  // namespace

ClosedForm::ClosedForm(std::vector<FormTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) validate_term(t);
  if (auto d = dim()) {
    for (const auto& t : terms_)
      if (term_dim(t) != *d) throw Error(ErrorKind::DimensionMismatch, "closed form terms disagree on dimension");
  }
}

std::optional<int> ClosedForm::dim() const {
  if (terms_.empty()) return std::nullopt;
  return term_dim(terms_.front());
}

bool ClosedForm::has_indicator() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const FormTerm& t) {
    const auto* q = std::get_if<QuadraticForm>(&t);
    return q && q->constraint.rows() > 0;
  });
}

double ClosedForm::operator()(const MarginalPoint& x) const {
  double v = 0.0;
  for (const auto& t : terms_) {
    v += eval_term(t, x);
    if (std::isinf(v)) return v;
  }
  return v;
}

ClosedForm ClosedForm::plus(const ClosedForm& other) const {
  std::vector<FormTerm> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return ClosedForm(std::move(all));
}

ClosedForm ClosedForm::scaled(double factor) const {
  std::vector<FormTerm> out = terms_;
  for (auto& t : out) {
    if (auto* q = std::get_if<QuadraticForm>(&t)) {
      q->A *= factor;
      q->b *= factor;
      q->c *= factor;
    } else {
      for (auto& term : std::get<PowerSum>(t).terms) term.coef *= factor;
    }
  }
  return ClosedForm(std::move(out));
}

ClosedForm quadratic_closed_form(const Matrix& A) {
  return ClosedForm(QuadraticForm{A, Vector(), 0.0, Matrix()});
}

ClosedForm half_sq_norm(int d) { return quadratic_closed_form(Matrix::Identity(d, d)); }

ClosedForm affine_closed_form(const Vector& w, double c) {
  const auto d = w.size();
  return ClosedForm(QuadraticForm{Matrix::Zero(d, d), w, c, Matrix()});
}

ClosedForm zero_closed_form(int d) { return quadratic_closed_form(Matrix::Zero(d, d)); }

// ---------------------------------------------------------------------------

CostSpec::CostSpec(std::vector<int> dims, std::map<PairKey, PairwiseCost> pairs,
                   std::optional<std::vector<ClosedForm>> shift)
    : dims_(std::move(dims)), pairs_(std::move(pairs)), shift_(std::move(shift)) {
  const std::size_t n = dims_.size();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "cost needs N >= 2 marginals");
  for (int d : dims_)
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "marginal dimension must be positive");
  if (pairs_.size() != n * (n - 1) / 2) throw Error(ErrorKind::InvalidArgument, "cost must list every pair i < j");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto it = pairs_.find({i, j});
      if (it == pairs_.end()) throw Error(ErrorKind::InvalidArgument, "missing pair cost");
      it->second.check_dims(dims_[i], dims_[j]);
    }
  }
  if (shift_) {
    if (shift_->size() != n) throw Error(ErrorKind::InvalidArgument, "shift needs one term per marginal");
    for (std::size_t i = 0; i < n; ++i) {
      const auto& h = (*shift_)[i];
      if (h.has_indicator()) throw Error(ErrorKind::InvalidArgument, "shift terms must be finite");
      if (auto d = h.dim(); d && *d != dims_[i]) throw Error(ErrorKind::DimensionMismatch, "shift term dimension");
    }
  }
}

const PairwiseCost& CostSpec::pair(std::size_t i, std::size_t j) const {
  auto it = pairs_.find({i, j});
  if (it == pairs_.end()) throw Error(ErrorKind::IndexOutOfRange, "no such pair (requires i < j < N)");
  return it->second;
}

void CostSpec::check_point(const ProductPoint& p) const {
  if (p.marginals() != dims_.size())
    throw Error(ErrorKind::DimensionMismatch, "point has wrong number of marginals");
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (p[i].size() != dims_[i]) throw Error(ErrorKind::DimensionMismatch, dim_message(p[i].size(), dims_[i]));
}

double CostSpec::pairwise_part(const ProductPoint& p) const {
  check_point(p);
  double total = 0.0;
  for (const auto& [key, c] : pairs_) total += c(p[key.first], p[key.second]);
  return total;
}

double CostSpec::shift_term(std::size_t i, const MarginalPoint& x) const {
  if (!shift_) return 0.0;
  return (*shift_)[i](x);
}

double CostSpec::shift_part(const ProductPoint& p) const {
  if (!shift_) return 0.0;
  check_point(p);
  double total = 0.0;
  for (std::size_t i = 0; i < dims_.size(); ++i) total += (*shift_)[i](p[i]);
  return total;
}

double CostSpec::operator()(const ProductPoint& p) const { return pairwise_part(p) + shift_part(p); }

double eval_total_cost(const CostSpec& spec, const ProductPoint& p) { return spec(p); }

CostSpec classical_cost(Classical which, std::size_t n_marginals, int dim) {
  if (n_marginals < 2 || dim < 1) throw Error(ErrorKind::InvalidArgument, "classical cost needs N >= 2, d >= 1");
  std::map<CostSpec::PairKey, PairwiseCost> pairs;
  const PairwiseCost c = which == Classical::c2 ? PairwiseCost::half_sq_dist() : PairwiseCost::inner_product();
  for (std::size_t i = 0; i < n_marginals; ++i)
    for (std::size_t j = i + 1; j < n_marginals; ++j) pairs.emplace(CostSpec::PairKey{i, j}, c);
  std::vector<int> dims(n_marginals, dim);
  if (which == Classical::c3) {
    return CostSpec(dims, std::move(pairs), std::vector<ClosedForm>(n_marginals, half_sq_norm(dim)));
  }
  return CostSpec(dims, std::move(pairs));
}

CostSpec add_separable_shift(const CostSpec& spec, const std::vector<ClosedForm>& h) {
  if (h.size() != spec.marginals()) throw Error(ErrorKind::InvalidArgument, "shift needs one term per marginal");
  std::vector<ClosedForm> combined;
  combined.reserve(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    combined.push_back(spec.shift() ? (*spec.shift())[i].plus(h[i]) : h[i]);
  }
  return CostSpec(spec.dims(), spec.pairs(), std::move(combined));
}

CostSpec negated(const CostSpec& spec) {
  std::map<CostSpec::PairKey, PairwiseCost> pairs;
  for (const auto& [key, c] : spec.pairs()) pairs.emplace(key, c.negated());
  std::optional<std::vector<ClosedForm>> shift;
  if (spec.shift()) {
    shift.emplace();
    for (const auto& h : *spec.shift()) shift->push_back(h.scaled(-1.0));
  }
  return CostSpec(spec.dims(), std::move(pairs), std::move(shift));
}

// ---------------------------------------------------------------------------

GammaSet::GammaSet(std::vector<ProductPoint> points) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "gamma set must be nonempty");
  dims_ = points.front().dims();
  auto cmp = [](const ProductPoint* a, const ProductPoint* b) { return lex_less(*a, *b); };
  std::set<const ProductPoint*, decltype(cmp)> seen(cmp);
  std::vector<bool> keep(points.size(), false);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].dims() != dims_) throw Error(ErrorKind::DimensionMismatch, "gamma points disagree on dimensions");
    keep[k] = seen.insert(&points[k]).second;
  }
  for (std::size_t k = 0; k < points.size(); ++k)
    if (keep[k]) points_.push_back(std::move(points[k]));
}

std::optional<std::size_t> GammaSet::index_of(const ProductPoint& p) const {
  for (std::size_t k = 0; k < points_.size(); ++k)
    if (points_[k] == p) return k;
  return std::nullopt;
}

std::vector<MarginalPoint> unique_points(const std::vector<MarginalPoint>& pts) {
  auto cmp = [](const MarginalPoint* a, const MarginalPoint* b) { return lex_less(*a, *b); };
  std::set<const MarginalPoint*, decltype(cmp)> seen(cmp);
  std::vector<MarginalPoint> out;
  for (const auto& x : pts)
    if (seen.insert(&x).second) out.push_back(x);
  return out;
}

std::vector<MarginalPoint> project(const GammaSet& g, std::size_t i) {
  if (i >= g.marginals()) throw Error(ErrorKind::IndexOutOfRange, "marginal index");
  std::vector<MarginalPoint> column;
  column.reserve(g.size());
  for (const auto& p : g.points()) column.push_back(p[i]);
  return unique_points(column);
}

std::vector<PointPair> project_pair(const GammaSet& g, std::size_t i, std::size_t j) {
  if (i >= g.marginals() || j >= g.marginals()) throw Error(ErrorKind::IndexOutOfRange, "marginal index");
  if (i >= j) throw Error(ErrorKind::IndexOutOfRange, "pair projection requires i < j");
  auto cmp = [](const PointPair* a, const PointPair* b) {
    if (lex_less(a->first, b->first)) return true;
    if (lex_less(b->first, a->first)) return false;
    return lex_less(a->second, b->second);
  };
  std::vector<PointPair> all;
  all.reserve(g.size());
  for (const auto& p : g.points()) all.emplace_back(p[i], p[j]);
  std::set<const PointPair*, decltype(cmp)> seen(cmp);
  std::vector<PointPair> out;
  for (const auto& pr : all)
    if (seen.insert(&pr).second) out.push_back(pr);
  return out;
}

GammaSet translate(const GammaSet& g, const ProductPoint& z) {
  if (z.dims() != g.dims()) throw Error(ErrorKind::DimensionMismatch, "translation vector dimensions");
  std::vector<ProductPoint> moved;
  moved.reserve(g.size());
  for (const auto& p : g.points()) {
    std::vector<MarginalPoint> parts;
    for (std::size_t i = 0; i < p.marginals(); ++i) parts.push_back(p[i] + z[i]);
    moved.emplace_back(std::move(parts));
  }
  return GammaSet(std::move(moved));
}

std::vector<ProductPoint> product_grid(const std::vector<std::vector<MarginalPoint>>& lists) {
  if (lists.size() < 2) throw Error(ErrorKind::InvalidArgument, "product grid needs N >= 2 lists");
  std::size_t total = 1;
  for (const auto& l : lists) {
    if (l.empty()) return {};
    total *= l.size();
  }
  std::vector<ProductPoint> out;
  out.reserve(total);
  std::vector<std::size_t> idx(lists.size(), 0);
  for (std::size_t count = 0; count < total; ++count) {
    std::vector<MarginalPoint> parts;
    parts.reserve(lists.size());
    for (std::size_t i = 0; i < lists.size(); ++i) parts.push_back(lists[i][idx[i]]);
    out.emplace_back(std::move(parts));
    for (std::size_t i = lists.size(); i-- > 0;) {
      if (++idx[i] < lists[i].size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

}  // namespace mmsplit
