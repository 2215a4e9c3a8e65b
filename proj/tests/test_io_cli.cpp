#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "mmsplit/io.hpp"
#include "test_support.hpp"

using namespace mmsplit;
using testsupport::pt;
using io::json;

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mmsplit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const json& j) const {
    const auto path = (dir_ / name).string();
    std::ofstream(path) << j.dump();
    return path;
  }

  std::string write_gamma(const std::string& name, const std::vector<ProductPoint>& pts) const {
    return write(name, io::gamma_to_json(GammaSet(pts)));
  }

  fs::path dir_;
};

}  // namespace

TEST(Io, NumbersRoundTrip) {
  for (double v : {0.0, -1.5, 0.1, 1.0 / 3.0, 1e-300, 6.02214076e23}) EXPECT_EQ(io::to_number(io::number(v)), v);
  EXPECT_EQ(io::number(kInfinity), json("inf"));
  EXPECT_EQ(io::to_number(json("-inf")), -kInfinity);
  EXPECT_THROW(io::to_number(json("nan")), Error);
}

TEST(Io, GammaRoundTrip) {
  const GammaSet g({ProductPoint({pt({0.1, -2}), pt({1.0 / 3.0})}), ProductPoint({pt({5, 6}), pt({-7})})});
  const auto back = io::gamma_from_json(io::parse(io::gamma_to_json(g).dump()));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.points(), g.points());
  EXPECT_EQ(back.dims(), (std::vector<int>{2, 1}));
}

TEST(Io, CostRoundTrip) {
  Matrix A(2, 1);
  A << 1, -2;
  const CostSpec c({2, 1, 1},
                   {{{0, 1}, PairwiseCost::bilinear(A)},
                    {{0, 2}, PairwiseCost::bilinear(A, -1)},
                    {{1, 2}, PairwiseCost::tabulated({pt({0}), pt({1})}, {pt({2})}, Matrix::Constant(2, 1, 4.0))}},
                   std::vector<ClosedForm>{half_sq_norm(2), affine_closed_form(pt({3}), 1.0), zero_closed_form(1)});
  const auto back = io::cost_from_json(io::parse(io::cost_to_json(c).dump()));
  const ProductPoint p({pt({1, 2}), pt({1}), pt({2})});
  EXPECT_DOUBLE_EQ(back(p), c(p));
  EXPECT_EQ(io::cost_to_json(back), io::cost_to_json(c));
  EXPECT_TRUE(io::cost_to_json(c)["pairs"].contains("1,2"));
}

TEST(Io, ClassicalCostShortcut) {
  const auto c = io::cost_from_json(json{{"classical", "c3"}, {"N", 3}, {"dims", {1, 1, 1}}});
  EXPECT_DOUBLE_EQ(c(scalar_tuple({1, 2, 3})), 18.0);
}

TEST(Io, PotentialRoundTripKeepsInfinity) {
  QuadraticForm ind{Matrix::Zero(2, 2), Vector::Zero(2), 0.0, (Matrix(1, 2) << 0, 1).finished()};
  const Potential u({pt({1, 0}), pt({1, 1})}, {0.0, kInfinity}, ClosedForm(ind));
  const auto j = io::potential_to_json(u);
  EXPECT_EQ(j["values"][1], json("inf"));
  const auto back = io::potential_from_json(io::parse(j.dump()));
  EXPECT_EQ(back.values(), u.values());
  EXPECT_EQ(back(pt({4, 2})), kInfinity);
  EXPECT_EQ(back(pt({4, 0})), 0.0);
}

TEST(Io, ParseErrors) {
  try {
    io::parse("{not json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
  EXPECT_THROW(io::gamma_from_json(json{{"points", 3}}), Error);
  EXPECT_THROW(io::read_file("/nonexistent/file.json"), Error);
}

TEST(Grid, ParsesRanges) {
  EXPECT_EQ(cli::parse_grid("-1:1:0.5"), (std::vector<double>{-1, -0.5, 0, 0.5, 1}));
  EXPECT_EQ(cli::parse_grid("0:1:0.1").size(), 11u);
  EXPECT_EQ(cli::parse_grid("0:1:0.1")[3], 0.3);
  EXPECT_THROW(cli::parse_grid("1:0:0.1"), Error);
  EXPECT_THROW(cli::parse_grid("0:1"), Error);
  EXPECT_THROW(cli::parse_grid("0:1:0"), Error);
  EXPECT_THROW(cli::parse_grid("0:1e9:1e-3"), Error);
}

TEST_F(CliTest, VerifyDiagonalPasses) {
  std::vector<ProductPoint> pts;
  for (double t : {-1.0, 0.0, 2.0}) pts.push_back(ProductPoint({pt({t, 1}), pt({t, 1}), pt({t, 1})}));
  const auto r = run({"verify", write_gamma("g.json", pts), "--brute", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["holds"].get<bool>());
  EXPECT_EQ(j["seed"], 1);
  EXPECT_EQ(j["command"], "verify");
}

TEST_F(CliTest, VerifyCounterexampleProjectionsFailBruteHolds) {
  const auto ce = counterexample_construct();
  std::vector<ProductPoint> pts{ce.point(0, 0), ce.v2, ce.point(3), ce.point(-1), ce.point(1.9)};
  const auto r = run({"verify", write_gamma("g.json", pts), "--brute", "2"});
  EXPECT_EQ(r.code, 1);
  const auto j = json::parse(r.out);
  EXPECT_FALSE(j["projection"]["holds"].get<bool>());
  for (const auto* key : {"1,2", "1,3", "2,3"}) EXPECT_FALSE(j["projection"]["pairs"][key]["holds"].get<bool>());
  EXPECT_TRUE(j["brute"]["verdict"]["holds"].get<bool>());
}

TEST_F(CliTest, VerifySignCriterionWitness) {
  const auto r = run({"verify", write_gamma("g.json", {scalar_tuple({0, 0, 0}), scalar_tuple({1, -1, 2})}),
                      "--sign-criterion"});
  EXPECT_EQ(r.code, 1);
  const auto j = json::parse(r.out);
  EXPECT_FALSE(j["sign_criterion"]["holds"].get<bool>());
  EXPECT_FALSE(j["sign_criterion"]["witness"].is_null());
}

TEST_F(CliTest, SplitComonotonePasses) {
  const auto gamma = write_gamma("g.json", {scalar_tuple({0, 0, 0}), scalar_tuple({1, 1, 2}), scalar_tuple({2, 3, 5})});
  const auto r = run({"split", gamma, "--grid", "-1:3:0.5"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["certificate"]["pass"].get<bool>());
  EXPECT_EQ(j["potentials"].size(), 3u);
}

TEST_F(CliTest, SplitSinglePointGivesZeros) {
  const auto r = run({"split", write_gamma("g.json", {scalar_tuple({0, 0})})});
  EXPECT_EQ(r.code, 0) << r.err;
  for (const auto& u : json::parse(r.out)["potentials"]) EXPECT_EQ(io::to_number(u["values"][0]), 0.0);

  // away from the origin the conjugate side carries the whole cost
  const auto off = run({"split", write_gamma("h.json", {scalar_tuple({4, -2})})});
  EXPECT_EQ(off.code, 0) << off.err;
  const auto j = json::parse(off.out)["potentials"];
  EXPECT_EQ(io::to_number(j[0]["values"][0]), 0.0);
  EXPECT_EQ(io::to_number(j[1]["values"][0]), -8.0);
}

TEST_F(CliTest, SplitCounterexampleRefused) {
  const auto ce = counterexample_construct();
  const auto r = run({"split", write_gamma("g.json", {ce.point(0, 0), ce.point(3), ce.point(-1)})});
  EXPECT_EQ(r.code, 1);
  const auto j = json::parse(r.err);
  EXPECT_EQ(j["error"], "ProjectionNotMonotone");
  EXPECT_EQ(j["pair"], "1,2");
}

TEST_F(CliTest, SplitThenCertifyRoundTrip) {
  const auto gamma = write_gamma("g.json", {scalar_tuple({0, 0, 0}), scalar_tuple({1, 2, 1}), scalar_tuple({-1, -1, -3}),
                                            scalar_tuple({2, 2, 2})});
  const auto out = (dir_ / "split").string();
  const auto r = run({"split", gamma, "--grid", "-3:3:0.5", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "PASS\n");
  const auto cert = io::read_file(out + "/certificate.json")["certificate"];
  const auto again = run({"certify", gamma, out + "/u1.json", out + "/u2.json", out + "/u3.json"});
  ASSERT_EQ(again.code, 0) << again.err;
  const auto j = json::parse(again.out)["certificate"];
  EXPECT_NEAR(io::to_number(j["max_violation"]), io::to_number(cert["max_violation"]), 1e-12);
  EXPECT_NEAR(io::to_number(j["max_residual"]), io::to_number(cert["max_residual"]), 1e-12);
  EXPECT_EQ(j["test_points"], cert["test_points"]);
}

TEST_F(CliTest, CertifyDetectsBadPotentials) {
  const auto gamma = write_gamma("g.json", {scalar_tuple({1, 1})});
  const auto zero = write(
      "zero.json", io::potential_to_json(Potential::from_closed_form(zero_closed_form(1), {pt({1})})));
  const auto r = run({"certify", gamma, zero, zero, "--samples", "50"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(json::parse(r.out)["certificate"]["pass"].get<bool>());
}

TEST_F(CliTest, RockafellarIdentityAndAntitone) {
  const auto id = write("id.json", io::pairs_to_json({{pt({-1}), pt({-1})}, {pt({0}), pt({0})}, {pt({1}), pt({1})}}));
  const auto r = run({"rockafellar", id, "--base", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto u = io::potential_from_json(json::parse(r.out)["potential"]);
  EXPECT_EQ(u(pt({0})), 0.0);

  const auto anti = write("anti.json", io::pairs_to_json({{pt({0}), pt({1})}, {pt({1}), pt({0})}}));
  const auto bad = run({"rockafellar", anti});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(json::parse(bad.err)["error"], "NotCyclicallyMonotone");

  const auto single = write("one.json", io::pairs_to_json({{pt({3}), pt({2})}}));
  const auto one = run({"rockafellar", single, "--grid", "0:4:1"});
  ASSERT_EQ(one.code, 0);
  const auto f = io::potential_from_json(json::parse(one.out)["potential"]);
  // chain-0 values: c(x, 2) - c(3, 2)
  for (double x : {0.0, 1.0, 4.0}) EXPECT_DOUBLE_EQ(f(pt({x})), 2 * x - 6);
}

TEST_F(CliTest, ExampleYoung) {
  const auto r = run({"example", "young", "--g", "cube", "--a", "2", "--b", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_DOUBLE_EQ(io::to_number(j["lhs"]), 2.0);
  EXPECT_NEAR(io::to_number(j["rhs"]), 4.75, 1e-9);
}

TEST_F(CliTest, ExampleCounterexample) {
  const auto r = run({"example", "counterexample", "--samples", "2000"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["report"]["kernel_dim"], 2);
}

TEST_F(CliTest, ExampleKnottSmithWritesFigure) {
  const auto fig = (dir_ / "ks.csv").string();
  const auto r = run({"example", "knott-smith", "--tmax", "1.5", "--figure", fig});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["pass"].get<bool>());
  std::ifstream in(fig);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.substr(0, 11), "t,x1,x2,x3,");
}

TEST_F(CliTest, ExamplesQuadraticAndCurves) {
  EXPECT_EQ(run({"example", "quadratic", "--marginals", "3", "--dim", "2", "--samples", "500"}).code, 0);
  EXPECT_EQ(run({"example", "curves", "--alphas", "identity,cube,fifth"}).code, 0);
}

TEST_F(CliTest, DeterministicOutput) {
  const auto a = run({"example", "quadratic", "--seed", "9", "--samples", "300"});
  const auto b = run({"example", "quadratic", "--seed", "9", "--samples", "300"});
  EXPECT_EQ(a.out, b.out);
  const auto gamma = write_gamma("g.json", {scalar_tuple({0, 0}), scalar_tuple({1, 2})});
  EXPECT_EQ(run({"split", gamma, "--grid", "-2:2:0.25"}).out, run({"split", gamma, "--grid", "-2:2:0.25"}).out);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"example", "nope"}).code, 2);
  EXPECT_NE(run({"example", "nope"}).err.find("UnknownExample"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify"}).code, 2);
  EXPECT_EQ(run({"verify", (dir_ / "missing.json").string()}).code, 2);
  const auto junk = (dir_ / "junk.json").string();
  std::ofstream(junk) << "{";
  EXPECT_EQ(run({"verify", junk}).code, 2);
  const auto gamma = write_gamma("g.json", {scalar_tuple({0, 0})});
  EXPECT_EQ(run({"verify", gamma, "--tol", "-1"}).code, 2);
  EXPECT_EQ(run({"split", gamma, "--base", "5"}).code, 2);
  EXPECT_EQ(run({"verify", gamma, "--brute", "9"}).code, 2);
  EXPECT_EQ(run({"split", gamma, "--grid", "0:1e9:1e-6"}).code, 2);
}
