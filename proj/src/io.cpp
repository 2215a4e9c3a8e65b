#include "mmsplit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mmsplit::io {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(what) + ": " + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  return *it;
}

std::string pair_label(std::size_t i, std::size_t j) { return std::to_string(i + 1) + "," + std::to_string(j + 1); }

CostSpec::PairKey parse_pair_label(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    const long i = std::stol(s.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(s);
    const std::string rest = s.substr(comma + 1);
    const long j = std::stol(rest, &used);
    if (used != rest.size() || i < 1 || j < 1) throw std::invalid_argument(s);
    return {static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::ParseError, "bad pair label '" + s + "', expected \"i,j\"");
  }
}

json optional_point(const std::optional<ProductPoint>& p) { return p ? product_point_to_json(*p) : json(nullptr); }

}  // namespace

json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  return v;
}

double to_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw Error(ErrorKind::ParseError, "expected a number, got " + j.dump());
}

json point_to_json(const MarginalPoint& x) {
  json a = json::array();
  for (Eigen::Index k = 0; k < x.size(); ++k) a.push_back(number(x[k]));
  return a;
}

MarginalPoint point_from_json(const json& j) {
  if (j.is_number()) return scalar_point(j.get<double>());
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected a coordinate list, got " + j.dump());
  Vector x(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) x[static_cast<Eigen::Index>(k)] = to_number(j[k]);
  return x;
}

json product_point_to_json(const ProductPoint& p) {
  json a = json::array();
  for (const auto& x : p.parts()) a.push_back(point_to_json(x));
  return a;
}

ProductPoint product_point_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected a list of marginal points");
  std::vector<MarginalPoint> parts;
  for (const auto& x : j) parts.push_back(point_from_json(x));
  return ProductPoint(std::move(parts));
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(number(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected a row-major matrix");
  if (j.empty()) return Matrix();
  const auto cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw Error(ErrorKind::ParseError, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = to_number(j[r][c]);
  }
  return m;
}

json gamma_to_json(const GammaSet& g) {
  json pts = json::array();
  for (const auto& p : g.points()) pts.push_back(product_point_to_json(p));
  return {{"N", g.marginals()}, {"dims", g.dims()}, {"points", pts}};
}

GammaSet gamma_from_json(const json& j) {
  return guarded("gamma", [&] {
    std::vector<ProductPoint> pts;
    for (const auto& p : field(j, "points")) pts.push_back(product_point_from_json(p));
    if (pts.empty()) throw Error(ErrorKind::ParseError, "gamma has no points");
    GammaSet g(std::move(pts));
    if (j.contains("N") && j["N"].get<std::size_t>() != g.marginals())
      throw Error(ErrorKind::ParseError, "declared N disagrees with the points");
    if (j.contains("dims") && j["dims"].get<std::vector<int>>() != g.dims())
      throw Error(ErrorKind::ParseError, "declared dims disagree with the points");
    return g;
  });
}

json closed_form_to_json(const ClosedForm& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) {
    if (const auto* q = std::get_if<QuadraticForm>(&t)) {
      json o = {{"type", "quadratic"}, {"A", matrix_to_json(q->A)}, {"b", point_to_json(q->b)}, {"c", number(q->c)}};
      if (q->constraint.rows() > 0) o["constraint"] = matrix_to_json(q->constraint);
      terms.push_back(o);
    } else {
      json ps = json::array();
      for (const auto& p : std::get<PowerSum>(t).terms) ps.push_back({{"coef", number(p.coef)}, {"num", p.num}, {"den", p.den}});
      terms.push_back({{"type", "power_sum"}, {"terms", ps}});
    }
  }
  return {{"terms", terms}};
}

ClosedForm closed_form_from_json(const json& j) {
  return guarded("closed form", [&] {
    std::vector<FormTerm> terms;
    for (const auto& t : field(j, "terms")) {
      const auto type = field(t, "type").get<std::string>();
      if (type == "quadratic") {
        QuadraticForm q;
        q.A = matrix_from_json(field(t, "A"));
        q.b = t.contains("b") ? point_from_json(t["b"]) : Vector::Zero(q.A.rows());
        q.c = t.contains("c") ? to_number(t["c"]) : 0.0;
        if (t.contains("constraint")) q.constraint = matrix_from_json(t["constraint"]);
        terms.emplace_back(std::move(q));
      } else if (type == "power_sum") {
        PowerSum ps;
        for (const auto& p : field(t, "terms"))
          ps.terms.push_back({to_number(field(p, "coef")), field(p, "num").get<int>(), field(p, "den").get<int>()});
        terms.emplace_back(std::move(ps));
      } else {
        throw Error(ErrorKind::ParseError, "unknown closed-form term '" + type + "'");
      }
    }
    return ClosedForm(std::move(terms));
  });
}

json pairwise_to_json(const PairwiseCost& c) {
  json o = {{"sign", c.sign()}};
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, InnerProduct>) {
          o["kind"] = "inner_product";
        } else if constexpr (std::is_same_v<K, HalfSqDist>) {
          o["kind"] = "half_sq_dist";
        } else if constexpr (std::is_same_v<K, Bilinear>) {
          o["kind"] = "bilinear";
          o["A"] = matrix_to_json(k.A);
        } else {
          o["kind"] = "tabulated";
          json gi = json::array(), gj = json::array();
          for (const auto& x : k.grid_i) gi.push_back(point_to_json(x));
          for (const auto& y : k.grid_j) gj.push_back(point_to_json(y));
          o["grid_i"] = gi;
          o["grid_j"] = gj;
          o["table"] = matrix_to_json(k.table);
        }
      },
      c.kind());
  return o;
}

PairwiseCost pairwise_from_json(const json& j) {
  return guarded("pairwise cost", [&] {
    const auto kind = field(j, "kind").get<std::string>();
    const int sign = j.contains("sign") ? j["sign"].get<int>() : 1;
    if (kind == "inner_product") return PairwiseCost::inner_product(sign);
    if (kind == "half_sq_dist") return PairwiseCost::half_sq_dist(sign);
    if (kind == "bilinear") return PairwiseCost::bilinear(matrix_from_json(field(j, "A")), sign);
    if (kind == "tabulated") {
      std::vector<MarginalPoint> gi, gj;
      for (const auto& x : field(j, "grid_i")) gi.push_back(point_from_json(x));
      for (const auto& y : field(j, "grid_j")) gj.push_back(point_from_json(y));
      return PairwiseCost::tabulated(std::move(gi), std::move(gj), matrix_from_json(field(j, "table")), sign);
    }
    throw Error(ErrorKind::ParseError, "unknown coupling kind '" + kind + "'");
  });
}

json cost_to_json(const CostSpec& c) {
  json pairs = json::object();
  for (const auto& [key, pc] : c.pairs()) pairs[pair_label(key.first, key.second)] = pairwise_to_json(pc);
  json o = {{"N", c.marginals()}, {"dims", c.dims()}, {"pairs", pairs}};
  if (c.shift()) {
    json sh = json::array();
    for (const auto& h : *c.shift()) sh.push_back(closed_form_to_json(h));
    o["shift"] = sh;
  }
  return o;
}

CostSpec cost_from_json(const json& j) {
  return guarded("cost", [&] {
    if (j.contains("classical")) {
      const auto name = j["classical"].get<std::string>();
      const auto dims = field(j, "dims").get<std::vector<int>>();
      if (dims.empty()) throw Error(ErrorKind::ParseError, "classical cost needs dims");
      for (int d : dims)
        if (d != dims.front()) throw Error(ErrorKind::ParseError, "classical costs need equal dimensions");
      Classical which;
      if (name == "c1") which = Classical::c1;
      else if (name == "c2") which = Classical::c2;
      else if (name == "c3") which = Classical::c3;
      else throw Error(ErrorKind::ParseError, "unknown classical cost '" + name + "'");
      return classical_cost(which, dims.size(), dims.front());
    }
    const auto dims = field(j, "dims").get<std::vector<int>>();
    if (j.contains("N") && j["N"].get<std::size_t>() != dims.size())
      throw Error(ErrorKind::ParseError, "declared N disagrees with dims");
    std::map<CostSpec::PairKey, PairwiseCost> pairs;
    for (const auto& [label, pc] : field(j, "pairs").items()) {
      const auto key = parse_pair_label(label);
      if (key.first >= key.second) throw Error(ErrorKind::ParseError, "pair labels must be i,j with i < j");
      pairs.emplace(key, pairwise_from_json(pc));
    }
    std::optional<std::vector<ClosedForm>> shift;
    if (j.contains("shift") && !j["shift"].is_null()) {
      shift.emplace();
      for (const auto& h : j["shift"]) shift->push_back(closed_form_from_json(h));
    }
    return CostSpec(dims, std::move(pairs), std::move(shift));
  });
}

json pairs_to_json(const std::vector<PointPair>& pairs) {
  json a = json::array();
  for (const auto& [x, y] : pairs) a.push_back(json::array({point_to_json(x), point_to_json(y)}));
  return {{"pairs", a}};
}

std::vector<PointPair> pairs_from_json(const json& j) {
  return guarded("pairs", [&] {
    std::vector<PointPair> out;
    for (const auto& pr : field(j, "pairs")) {
      if (!pr.is_array() || pr.size() != 2) throw Error(ErrorKind::ParseError, "each pair needs two points");
      out.emplace_back(point_from_json(pr[0]), point_from_json(pr[1]));
    }
    if (out.empty()) throw Error(ErrorKind::ParseError, "no pairs given");
    return out;
  });
}

json potential_to_json(const Potential& p) {
  json pts = json::array(), vals = json::array();
  for (const auto& x : p.points()) pts.push_back(point_to_json(x));
  for (double v : p.values()) vals.push_back(number(v));
  json o = {{"points", pts}, {"values", vals}};
  if (p.closed_form()) o["closed_form"] = closed_form_to_json(*p.closed_form());
  return o;
}

Potential potential_from_json(const json& j) {
  return guarded("potential", [&] {
    std::vector<MarginalPoint> pts;
    std::vector<double> vals;
    for (const auto& x : field(j, "points")) pts.push_back(point_from_json(x));
    for (const auto& v : field(j, "values")) vals.push_back(to_number(v));
    std::optional<ClosedForm> cf;
    if (j.contains("closed_form") && !j["closed_form"].is_null()) cf = closed_form_from_json(j["closed_form"]);
    return Potential(std::move(pts), std::move(vals), std::move(cf));
  });
}

json witness_to_json(const Witness& w) {
  json tuples = json::array();
  for (const auto& t : w.tuples) tuples.push_back(product_point_to_json(t));
  return {{"tuples", tuples},
          {"permutations", w.permutations},
          {"permuted_sum", number(w.permuted_sum)},
          {"diagonal_sum", number(w.diagonal_sum)},
          {"gain", number(w.gain())}};
}

json verdict_to_json(const MonotonicityVerdict& v) {
  return {{"holds", v.holds},
          {"witness", v.witness ? witness_to_json(*v.witness) : json(nullptr)},
          {"checked", v.checked},
          {"tolerance", number(v.tolerance)}};
}

json certificate_to_json(const SplittingCertificate& c) {
  return {{"pass", c.pass},
          {"max_violation", number(c.max_violation)},
          {"violation_witness", optional_point(c.violation_witness)},
          {"max_residual", number(c.max_residual)},
          {"residual_witness", optional_point(c.residual_witness)},
          {"test_points", c.test_points},
          {"infinite_points", c.infinite_points},
          {"gamma_points", c.gamma_points},
          {"seed", c.seed ? json(*c.seed) : json(nullptr)},
          {"tolerance", number(c.tolerance)}};
}

json exactness_to_json(const ExactnessReport& r) {
  json extra = json::array(), eq = json::array();
  for (const auto& p : r.extra_intersection_points) extra.push_back(product_point_to_json(p));
  for (const auto& p : r.equality_off_gamma) eq.push_back(product_point_to_json(p));
  return {{"holds", r.holds},
          {"intersection_equals_gamma", r.intersection_equals_gamma},
          {"extra_intersection_points", extra},
          {"equality_off_gamma", eq},
          {"min_slack_off_gamma", number(r.min_slack_off_gamma)},
          {"candidates", r.candidates}};
}

json characterization_to_json(const Characterization& r) {
  return {{"cyclic", r.cyclic},
          {"max_order_checked", r.max_order_checked},
          {"c_monotone", r.c_monotone},
          {"projections_cyclic", r.projections_cyclic},
          {"projections_monotone", r.projections_monotone},
          {"splitting", r.splitting},
          {"antiderivatives", r.antiderivatives},
          {"witness", r.witness ? witness_to_json(*r.witness) : json(nullptr)},
          {"certificate", r.certificate ? certificate_to_json(*r.certificate) : json(nullptr)}};
}

json counterexample_report_to_json(const CounterexampleReport& r) {
  json ws = json::array();
  for (const auto& w : r.witnesses)
    ws.push_back({{"pair", pair_label(w.i, w.j)},
                  {"lambda", number(w.lambda)},
                  {"value", number(w.value)},
                  {"cyclic_fails", w.cyclic_fails},
                  {"classical_fails", w.classical_fails}});
  return {{"pass", r.pass},
          {"eigenvalues", point_to_json(r.eigenvalues)},
          {"psd", r.psd},
          {"kernel_dim", r.kernel_dim},
          {"positive_sum", number(r.positive_sum)},
          {"positive_product", number(r.positive_product)},
          {"kernel_distance", number(r.kernel_distance)},
          {"certificate", certificate_to_json(r.certificate)},
          {"projection_witnesses", ws}};
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace mmsplit::io
