#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "mmsplit/io.hpp"

namespace mmsplit::cli {

namespace {

using io::json;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string example;
  std::string cost = "c1";
  double tol = kTolerance;
  std::uint64_t seed = 1;
  std::size_t samples = 10000;
  std::size_t brute = 0;
  std::size_t base = 1;
  std::string grid;
  std::string out;
  std::string format = "json";
  std::string figure;
  bool sign_criterion = false;
  double tmax = 1.5;
  std::string g = "cube";
  double a = 2.0;
  double b = 1.0;
  std::string alphas = "identity,cube,fifth";
  std::size_t marginals = 3;
  int dim = 2;
};

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + cfg.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

CostSpec load_cost(const std::string& name, const std::vector<int>& dims) {
  if (name == "c1" || name == "c2" || name == "c3") {
    for (int d : dims)
      if (d != dims.front()) throw Error(ErrorKind::InvalidArgument, "classical costs need equal marginal dimensions");
    const Classical which = name == "c1" ? Classical::c1 : name == "c2" ? Classical::c2 : Classical::c3;
    return classical_cost(which, dims.size(), dims.front());
  }
  auto spec = io::cost_from_json(io::read_file(name));
  if (spec.dims() != dims) throw Error(ErrorKind::DimensionMismatch, "cost file and gamma disagree on dimensions");
  return spec;
}

PairwiseCost load_pair_cost(const std::string& name) {
  if (name == "c1" || name == "c3") return PairwiseCost::inner_product();
  if (name == "c2") return PairwiseCost::half_sq_dist();
  return io::pairwise_from_json(io::read_file(name));
}

std::vector<MarginalPoint> lattice(const std::vector<double>& axis, int dim) {
  double count = std::pow(static_cast<double>(axis.size()), dim);
  if (count > 1e5) throw Error(ErrorKind::BudgetExceeded, "grid has more than 1e5 points per marginal");
  std::vector<MarginalPoint> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  for (std::size_t n = 0; n < static_cast<std::size_t>(count); ++n) {
    Vector x(dim);
    for (int k = 0; k < dim; ++k) x[k] = axis[idx[static_cast<std::size_t>(k)]];
    out.push_back(std::move(x));
    for (int k = dim; k-- > 0;) {
      if (++idx[static_cast<std::size_t>(k)] < axis.size()) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return out;
}

json base_report(const RunConfig& cfg) {
  return {{"command", cfg.command}, {"seed", cfg.seed}, {"tolerance", io::number(cfg.tol)}};
}

// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto g = io::gamma_from_json(io::read_file(cfg.inputs.at(0)));
  const auto spec = load_cost(cfg.cost, g.dims());
  json rep = base_report(cfg);
  bool holds = true;

  const auto proj = check_projection_condition(g, spec, cfg.tol);
  json pairs = json::object();
  for (const auto& [key, v] : proj.pairs)
    pairs[std::to_string(key.first + 1) + "," + std::to_string(key.second + 1)] = io::verdict_to_json(v);
  rep["projection"] = {{"holds", proj.holds}, {"pairs", pairs}};
  holds = holds && proj.holds;

  const auto cm = is_c_monotone(g, spec, cfg.tol);
  rep["c_monotone"] = io::verdict_to_json(cm);
  holds = holds && cm.holds;

  if (cfg.brute > 0) {
    const auto v = is_n_c_monotone_bruteforce(g, spec, cfg.brute, {}, cfg.tol);
    rep["brute"] = {{"n", cfg.brute}, {"verdict", io::verdict_to_json(v)}};
    holds = holds && v.holds;
  }
  if (cfg.sign_criterion) {
    const auto v = sign_criterion_1d(g);
    rep["sign_criterion"] = io::verdict_to_json(v);
    holds = holds && v.holds;
  }
  rep["holds"] = holds;
  emit(cfg, dump(rep), out);
  return holds ? 0 : 1;
}

std::vector<ProductPoint> certification_points(const SplittingTuple& t, const GammaSet& g, const RunConfig& cfg) {
  const bool tabulated = std::all_of(t.potentials.begin(), t.potentials.end(),
                                     [](const Potential& u) { return !u.closed_form() && u.size() > 0; });
  if (tabulated) return potential_grid(t);
  int total_dim = 0;
  for (int d : g.dims()) total_dim += d;
  const auto per_axis = static_cast<std::size_t>(std::clamp(std::floor(std::pow(1e5, 1.0 / total_dim)), 2.0, 11.0));
  return lattice_and_random_points(g, per_axis, cfg.samples, cfg.seed);
}

int cmd_split(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto g = io::gamma_from_json(io::read_file(cfg.inputs.at(0)));
  const auto spec = load_cost(cfg.cost, g.dims());
  if (cfg.base < 1 || cfg.base > g.size()) throw Error(ErrorKind::BasePointNotInGamma, "--base must lie in 1..|gamma|");
  std::vector<std::vector<MarginalPoint>> grids;
  if (!cfg.grid.empty()) {
    const auto axis = parse_grid(cfg.grid);
    for (int d : g.dims()) grids.push_back(lattice(axis, d));
  }

  SplittingTuple tuple;
  try {
    tuple = assemble_splitting_tuple(g, spec, cfg.base - 1, grids, cfg.tol);
  } catch (const CycleError& e) {
    json diag = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}, {"witness", io::witness_to_json(e.witness())}};
    if (e.pair()) diag["pair"] = std::to_string(e.pair()->first + 1) + "," + std::to_string(e.pair()->second + 1);
    err << dump(diag);
    return 1;
  }
  const auto cert = certify_splitting(tuple, g, spec, potential_grid(tuple), cfg.tol, cfg.seed);

  json pots = json::array();
  for (const auto& u : tuple.potentials) pots.push_back(io::potential_to_json(u));
  if (!cfg.out.empty()) {
    std::filesystem::create_directories(cfg.out);
    for (std::size_t i = 0; i < tuple.potentials.size(); ++i) {
      std::ofstream f(std::filesystem::path(cfg.out) / ("u" + std::to_string(i + 1) + ".json"));
      f << dump(pots[i]);
    }
    json rep = base_report(cfg);
    rep["base"] = cfg.base;
    rep["certificate"] = io::certificate_to_json(cert);
    std::ofstream f(std::filesystem::path(cfg.out) / "certificate.json");
    f << dump(rep);
    out << (cert.pass ? "PASS" : "FAIL") << "\n";
  } else {
    json rep = base_report(cfg);
    rep["base"] = cfg.base;
    rep["certificate"] = io::certificate_to_json(cert);
    rep["potentials"] = pots;
    out << dump(rep);
  }
  return cert.pass ? 0 : 1;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() < 2) throw Error(ErrorKind::InvalidArgument, "certify needs gamma and potential files");
  const auto g = io::gamma_from_json(io::read_file(cfg.inputs[0]));
  const auto spec = load_cost(cfg.cost, g.dims());
  SplittingTuple tuple;
  for (std::size_t k = 1; k < cfg.inputs.size(); ++k) {
    const auto j = io::read_file(cfg.inputs[k]);
    if (j.contains("potentials")) {
      for (const auto& p : j["potentials"]) tuple.potentials.push_back(io::potential_from_json(p));
    } else {
      tuple.potentials.push_back(io::potential_from_json(j));
    }
  }
  const auto cert = certify_splitting(tuple, g, spec, certification_points(tuple, g, cfg), cfg.tol, cfg.seed);
  json rep = base_report(cfg);
  rep["certificate"] = io::certificate_to_json(cert);
  emit(cfg, dump(rep), out);
  return cert.pass ? 0 : 1;
}

int cmd_rockafellar(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto pairs = io::pairs_from_json(io::read_file(cfg.inputs.at(0)));
  const auto c = load_pair_cost(cfg.cost);
  if (cfg.base < 1 || cfg.base > pairs.size()) throw Error(ErrorKind::InvalidArgument, "--base must lie in 1..|pairs|");
  const auto& s1 = pairs[cfg.base - 1].first;
  std::vector<MarginalPoint> eval;
  for (const auto& pr : pairs) eval.push_back(pr.first);
  if (!cfg.grid.empty()) {
    const auto more = lattice(parse_grid(cfg.grid), static_cast<int>(s1.size()));
    eval.insert(eval.end(), more.begin(), more.end());
  }
  eval = unique_points(eval);
  try {
    const auto f = rockafellar_potential(c, pairs, s1, eval, cfg.tol);
    json rep = base_report(cfg);
    rep["base_point"] = io::point_to_json(s1);
    rep["potential"] = io::potential_to_json(f);
    emit(cfg, dump(rep), out);
    return 0;
  } catch (const CycleError& e) {
    err << dump({{"error", std::string(to_string(e.kind()))}, {"message", e.what()}, {"witness", io::witness_to_json(e.witness())}});
    return 1;
  }
}

// ---------------------------------------------------------------------------

int example_quadratic(const RunConfig& cfg, std::ostream& out) {
  std::mt19937_64 rng(cfg.seed);
  const auto Q = random_commuting_spd(cfg.marginals, cfg.dim, rng);
  const auto qs = quadratic_splitting(Q);
  std::normal_distribution<double> gauss;
  std::vector<Vector> vs;
  for (int k = 0; k < 100; ++k) {
    Vector v(cfg.dim);
    for (int c = 0; c < cfg.dim; ++c) v[c] = gauss(rng);
    vs.push_back(v);
  }
  const auto g = commuting_spd_gamma(Q, vs);
  const auto spec = classical_cost(Classical::c1, cfg.marginals, cfg.dim);
  const auto tuple = quadratic_tuple(qs);

  std::vector<ProductPoint> perturbed;
  std::uniform_real_distribution<double> size(1e-2, 1.0);
  for (const auto& p : g.points()) {
    const auto d = orthogonal_perturbation(Q, size(rng), rng);
    std::vector<MarginalPoint> parts;
    for (std::size_t i = 0; i < d.size(); ++i) parts.push_back(p[i] + d[i]);
    perturbed.emplace_back(std::move(parts));
  }
  auto tests = lattice_and_random_points(g, 0, cfg.samples, cfg.seed);
  tests.insert(tests.end(), perturbed.begin(), perturbed.end());
  const auto cert = certify_splitting(tuple, g, spec, tests, cfg.tol, cfg.seed);
  double min_slack = kInfinity;
  for (const auto& p : perturbed) {
    double s = -spec(p);
    for (std::size_t i = 0; i < p.marginals(); ++i) s += tuple.potentials[i](p[i]);
    min_slack = std::min(min_slack, s);
  }
  double g_err = 0.0;
  for (const auto& p : g.points())
    for (std::size_t i = 0; i < p.marginals(); ++i) {
      const auto& x = p[i];
      g_err = std::max(g_err, std::abs(0.5 * x.dot(qs.G[i] * x) - 0.5 * x.squaredNorm() - 0.5 * x.dot(qs.M[i] * x)));
    }

  json rep = base_report(cfg);
  rep["example"] = "quadratic";
  json Ms = json::array(), Gs = json::array(), Qs = json::array();
  for (std::size_t i = 0; i < Q.size(); ++i) {
    Qs.push_back(io::matrix_to_json(Q[i].matrix()));
    Ms.push_back(io::matrix_to_json(qs.M[i]));
    Gs.push_back(io::matrix_to_json(qs.G[i]));
  }
  rep["Q"] = Qs;
  rep["M"] = Ms;
  rep["G"] = Gs;
  rep["min_eigenvalue_M"] = io::number(qs.min_eigenvalue);
  rep["certificate"] = io::certificate_to_json(cert);
  rep["min_slack_off_gamma"] = io::number(min_slack);
  rep["G_relation_error"] = io::number(g_err);
  const bool pass = qs.min_eigenvalue >= -1e-9 && cert.pass && min_slack > 0.0 && g_err <= 1e-12;
  rep["pass"] = pass;
  emit(cfg, dump(rep), out);
  return pass ? 0 : 1;
}

int example_counterexample(const RunConfig& cfg, std::ostream& out) {
  const auto rep = counterexample_verify(default_counterexample_samples(cfg.seed), cfg.samples, cfg.seed);
  json j = base_report(cfg);
  j["example"] = "counterexample";
  j["report"] = io::counterexample_report_to_json(rep);
  j["pass"] = rep.pass;
  emit(cfg, dump(j), out);
  return rep.pass ? 0 : 1;
}

int example_curves(const RunConfig& cfg, std::ostream& out) {
  std::vector<MonotoneBijection> alphas;
  for (const auto& name : split_list(cfg.alphas)) alphas.push_back(MonotoneBijection::named(name));
  if (alphas.size() < 2) throw Error(ErrorKind::InvalidArgument, "--alphas needs at least two maps");
  const std::size_t N = alphas.size();
  const auto ts = linspace(-cfg.tmax, cfg.tmax, 21);
  const auto axis = parse_grid(std::to_string(-cfg.tmax) + ":" + std::to_string(cfg.tmax) + ":0.25");

  std::vector<std::vector<double>> grids(N);
  std::vector<ProductPoint> curve;
  for (double t : ts) {
    std::vector<MarginalPoint> parts;
    for (std::size_t i = 0; i < N; ++i) parts.push_back(scalar_point(alphas[i](t)));
    curve.emplace_back(std::move(parts));
  }
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<MarginalPoint> pts;
    for (const auto& p : curve) pts.push_back(p[i]);
    for (double x : axis) pts.push_back(scalar_point(x));
    for (const auto& x : unique_points(pts)) grids[i].push_back(x[0]);
  }
  SplittingTuple tuple;
  double error = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    // u_i only needs its own grid; integrate marginal by marginal.
    auto cp = curve_potentials(alphas, grids[i]);
    tuple.potentials.push_back(cp.potentials[i]);
    error += cp.error_estimate;
  }
  const GammaSet g(curve);
  const auto spec = classical_cost(Classical::c1, N, 1);
  const double tol = std::max(cfg.tol, 10.0 * error);
  const auto cert = certify_splitting(tuple, g, spec, potential_grid(tuple), tol, cfg.seed);
  json rep = base_report(cfg);
  rep["example"] = "curves";
  rep["alphas"] = split_list(cfg.alphas);
  rep["quadrature_error_estimate"] = io::number(error);
  rep["certificate"] = io::certificate_to_json(cert);
  rep["pass"] = cert.pass;
  emit(cfg, dump(rep), out);
  return cert.pass ? 0 : 1;
}

int example_knott_smith(const RunConfig& cfg, std::ostream& out) {
  const auto forms = knott_smith_closed_forms();
  const auto alphas = knott_smith_alphas();
  const auto axis = parse_grid(std::to_string(-cfg.tmax) + ":" + std::to_string(cfg.tmax) + ":0.1");
  const auto ts = linspace(-cfg.tmax, cfg.tmax, 61);

  std::vector<ProductPoint> curve;
  for (double t : ts) curve.push_back(scalar_tuple({alphas[0](t), alphas[1](t), alphas[2](t)}));
  const GammaSet g(curve);
  std::vector<MarginalPoint> axis_pts;
  for (double x : axis) axis_pts.push_back(scalar_point(x));
  const auto grid = product_grid({axis_pts, axis_pts, axis_pts});

  const auto c1 = classical_cost(Classical::c1, 3, 1);
  const auto c3 = classical_cost(Classical::c3, 3, 1);
  const auto tuple = closed_form_tuple(forms);
  const auto shifted = shifted_tuple(tuple, {half_sq_norm(1), half_sq_norm(1), half_sq_norm(1)});
  const auto cert1 = certify_splitting(tuple, g, c1, grid, cfg.tol, cfg.seed);
  const auto cert3 = certify_splitting(shifted, g, c3, grid, cfg.tol, cfg.seed);

  const auto quad = curve_potentials(alphas, axis);
  double quad_err = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < axis.size(); ++k)
      quad_err = std::max(quad_err, std::abs(quad.potentials[i].values()[k] - forms[i](axis_pts[k])));

  const auto fig = emit_curve_figure_data(alphas, -cfg.tmax, cfg.tmax, 61);
  if (!cfg.figure.empty()) {
    std::ofstream f(cfg.figure);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + cfg.figure);
    f << to_csv(fig);
  }
  const bool pass = cert1.pass && cert3.pass && quad_err <= 1e-6;
  if (cfg.format == "csv") {
    emit(cfg, to_csv(fig), out);
    return pass ? 0 : 1;
  }
  const auto one = knott_smith_potentials(1, 1, 1);
  json rep = base_report(cfg);
  rep["example"] = "knott-smith";
  rep["c1_certificate"] = io::certificate_to_json(cert1);
  rep["c3_certificate"] = io::certificate_to_json(cert3);
  rep["quadrature_max_error"] = io::number(quad_err);
  rep["quadrature_error_estimate"] = io::number(quad.error_estimate);
  rep["u_at_one"] = {io::number(one.u[0]), io::number(one.u[1]), io::number(one.u[2])};
  rep["c1_at_one"] = io::number(one.c1);
  rep["pass"] = pass;
  emit(cfg, dump(rep), out);
  return pass ? 0 : 1;
}

int example_young(const RunConfig& cfg, std::ostream& out) {
  const auto g = MonotoneBijection::named(cfg.g);
  const auto r = young_check(g, cfg.a, cfg.b);
  const bool holds = r.lhs <= r.rhs + cfg.tol;
  json rep = base_report(cfg);
  rep["example"] = "young";
  rep["g"] = cfg.g;
  rep["a"] = io::number(cfg.a);
  rep["b"] = io::number(cfg.b);
  rep["lhs"] = io::number(r.lhs);
  rep["rhs"] = io::number(r.rhs);
  rep["equality"] = r.equality;
  rep["strict"] = r.lhs < r.rhs - cfg.tol;
  rep["quadrature_error_estimate"] = io::number(r.error_estimate);
  rep["holds"] = holds;
  emit(cfg, dump(rep), out);
  return holds ? 0 : 1;
}

int cmd_example(const RunConfig& cfg, std::ostream& out) {
  if (cfg.example == "quadratic") return example_quadratic(cfg, out);
  if (cfg.example == "counterexample") return example_counterexample(cfg, out);
  if (cfg.example == "curves") return example_curves(cfg, out);
  if (cfg.example == "knott-smith") return example_knott_smith(cfg, out);
  if (cfg.example == "young") return example_young(cfg, out);
  throw Error(ErrorKind::UnknownExample, "unknown example '" + cfg.example + "'");
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  double lo, hi, step;
  try {
    if (parts.size() != 3) throw std::invalid_argument(spec);
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(spec);
    hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(spec);
    step = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(spec);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::ParseError, "grid must look like lo:hi:step, got '" + spec + "'");
  }
  if (!(step > 0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorKind::ParseError, "grid needs lo <= hi and a positive step");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (n > 100000) throw Error(ErrorKind::BudgetExceeded, "grid has more than 1e5 values");
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Snap to 12 decimals so 0.1-steps land on 0, 1, ... exactly.
    const double v = lo + step * static_cast<double>(k);
    out[k] = std::abs(v) < 1e6 ? std::round(v * 1e12) / 1e12 : v;
  }
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Multi-marginal cyclic monotonicity and splitting potentials", "mmsplit"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--cost", cfg.cost, "c1, c2, c3 or a cost JSON file");
    sub->add_option("--tol", cfg.tol, "inequality tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--samples", cfg.samples, "random sample count");
    sub->add_option("--out", cfg.out, "output path");
  };

  auto* verify = app.add_subcommand("verify", "check monotonicity of a gamma file");
  verify->add_option("gamma", cfg.inputs, "gamma JSON")->required()->expected(1);
  add_common(verify);
  verify->add_option("--brute", cfg.brute, "also run the permutation check of order n");
  verify->add_flag("--sign-criterion", cfg.sign_criterion, "also run the one-dimensional sign test");

  auto* split = app.add_subcommand("split", "assemble and certify splitting potentials");
  split->add_option("gamma", cfg.inputs, "gamma JSON")->required()->expected(1);
  add_common(split);
  split->add_option("--base", cfg.base, "1-based index of the base point in gamma");
  split->add_option("--grid", cfg.grid, "extra evaluation grid lo:hi:step");

  auto* certify = app.add_subcommand("certify", "certify potentials read from files");
  certify->add_option("files", cfg.inputs, "gamma JSON followed by potential JSON files")->required();
  add_common(certify);

  auto* rock = app.add_subcommand("rockafellar", "Rockafellar potential of a pair set");
  rock->add_option("pairs", cfg.inputs, "pairs JSON")->required()->expected(1);
  add_common(rock);
  rock->add_option("--base", cfg.base, "1-based index of the base pair");
  rock->add_option("--grid", cfg.grid, "extra evaluation grid lo:hi:step");

  auto* example = app.add_subcommand("example", "reproduce a worked example");
  example->add_option("name", cfg.example, "quadratic, counterexample, curves, knott-smith or young")->required();
  add_common(example);
  example->add_option("--tmax", cfg.tmax, "half-width of the parameter range")->check(CLI::PositiveNumber);
  example->add_option("--g", cfg.g, "map for young: identity, cube, fifth, cbrt or p/q");
  example->add_option("--a", cfg.a, "young: a");
  example->add_option("--b", cfg.b, "young: b");
  example->add_option("--alphas", cfg.alphas, "curves: comma-separated maps");
  example->add_option("--marginals", cfg.marginals, "quadratic: N")->check(CLI::Range(2, 8));
  example->add_option("--dim", cfg.dim, "quadratic: d")->check(CLI::Range(1, 16));
  example->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  example->add_option("--figure", cfg.figure, "knott-smith: write curve CSV here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (verify->parsed()) {
      cfg.command = "verify";
      return cmd_verify(cfg, out);
    }
    if (split->parsed()) {
      cfg.command = "split";
      return cmd_split(cfg, out, err);
    }
    if (certify->parsed()) {
      cfg.command = "certify";
      return cmd_certify(cfg, out);
    }
    if (rock->parsed()) {
      cfg.command = "rockafellar";
      return cmd_rockafellar(cfg, out, err);
    }
    if (example->parsed()) {
      cfg.command = "example";
      return cmd_example(cfg, out);
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace mmsplit::cli
