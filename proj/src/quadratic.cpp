#include "mmsplit/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mmsplit {

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::NotSymmetric, "matrix is not square");
  if (!a.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  if (a.size() > 0 && (a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw Error(ErrorKind::NotSymmetric, "matrix differs from its transpose by more than 1e-12");
  a_ = 0.5 * (a + a.transpose());
}

PsdReport psd_check(const SymMatrix& a) {
  PsdReport r;
  if (a.size() == 0) {
    r.is_psd = true;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  if (es.info() != Eigen::Success) throw Error(ErrorKind::InternalInconsistency, "eigen solver did not converge");
  r.eigenvalues = es.eigenvalues();
  r.eigenvectors = es.eigenvectors();
  r.min_eigenvalue = r.eigenvalues.minCoeff();
  r.is_psd = r.min_eigenvalue >= -1e-10;
  return r;
}

QuadraticSplitting quadratic_splitting(const std::vector<SymMatrix>& Q) {
  const std::size_t N = Q.size();
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "at least two matrices expected");
  const auto d = Q.front().size();
  for (const auto& q : Q)
    if (q.size() != d) throw Error(ErrorKind::DimensionMismatch, "matrices differ in size");

  std::vector<Matrix> inv;
  for (std::size_t i = 0; i < N; ++i) {
    Eigen::LLT<Matrix> llt(Q[i].matrix());
    if (llt.info() != Eigen::Success || psd_check(Q[i]).min_eigenvalue <= 0.0)
      throw Error(ErrorKind::NotPositiveDefinite, "Q_" + std::to_string(i + 1) + " is not positive definite");
    inv.push_back(llt.solve(Matrix::Identity(d, d)));
  }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      const Matrix a = Q[i].matrix(), b = Q[j].matrix();
      if ((a * b - b * a).norm() > 1e-9)
        throw Error(ErrorKind::NotCommuting,
                    "Q_" + std::to_string(i + 1) + " and Q_" + std::to_string(j + 1) + " do not commute");
    }

  QuadraticSplitting out;
  Matrix total = Matrix::Zero(d, d);
  for (const auto& q : Q) total += q.matrix();
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < N; ++i) {
    Matrix others = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < N; ++k)
      if (k != i) others += Q[k].matrix();
    const Matrix m = others * inv[i];
    const Matrix g = total * inv[i];
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
      throw Error(ErrorKind::InternalInconsistency, "M_" + std::to_string(i + 1) + " is not symmetric");
    out.M.push_back(0.5 * (m + m.transpose()));
    out.G.push_back(0.5 * (g + g.transpose()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(out.M.back(), Eigen::EigenvaluesOnly);
    out.min_eigenvalue = std::min(out.min_eigenvalue, es.eigenvalues().minCoeff());
  }
  return out;
}

GammaSet commuting_spd_gamma(const std::vector<SymMatrix>& Q, const std::vector<Vector>& vs) {
  quadratic_splitting(Q);
  std::vector<ProductPoint> pts;
  for (const auto& v : vs) {
    if (v.size() != Q.front().size()) throw Error(ErrorKind::DimensionMismatch, "v has the wrong dimension");
    std::vector<MarginalPoint> parts;
    for (const auto& q : Q) parts.push_back(q.matrix() * v);
    pts.emplace_back(std::move(parts));
  }
  return GammaSet(std::move(pts));
}

SplittingTuple quadratic_tuple(const QuadraticSplitting& s) {
  std::vector<ClosedForm> forms;
  for (const auto& m : s.M) forms.push_back(quadratic_closed_form(m));
  return closed_form_tuple(forms);
}

std::vector<SymMatrix> random_commuting_spd(std::size_t n_marginals, int dim, std::mt19937_64& rng, double lo,
                                            double hi) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(lo, hi);
  Matrix z(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) z(r, c) = gauss(rng);
  const Matrix u = Eigen::HouseholderQR<Matrix>(z).householderQ();
  std::vector<SymMatrix> out;
  for (std::size_t i = 0; i < n_marginals; ++i) {
    Vector diag(dim);
    for (int k = 0; k < dim; ++k) diag[k] = unif(rng);
    const Matrix q = u * diag.asDiagonal() * u.transpose();
    out.emplace_back(0.5 * (q + q.transpose()));
  }
  return out;
}

std::vector<Vector> orthogonal_perturbation(const std::vector<SymMatrix>& Q, double norm, std::mt19937_64& rng) {
  const auto d = Q.front().size();
  const auto N = static_cast<Eigen::Index>(Q.size());
  Matrix basis(N * d, d);
  for (Eigen::Index i = 0; i < N; ++i) basis.middleRows(i * d, d) = Q[i].matrix();
  Eigen::HouseholderQR<Matrix> qr(basis);
  const Matrix full = qr.householderQ();
  const Matrix span = full.leftCols(d);

  std::normal_distribution<double> gauss;
  Vector z(N * d);
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = gauss(rng);
  Vector p = z - span * (span.transpose() * z);
  p *= norm / p.norm();
  std::vector<Vector> out;
  for (Eigen::Index i = 0; i < N; ++i) out.emplace_back(p.segment(i * d, d));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

}  // namespace

ProductPoint Counterexample::point(double lambda, double mu) const {
  std::vector<MarginalPoint> parts;
  for (std::size_t i = 0; i < 3; ++i) parts.push_back(lambda * v1[i] + mu * v2[i]);
  return ProductPoint(std::move(parts));
}

Counterexample counterexample_construct() {
  Counterexample cx;
  cx.A1 = 2.0 * (Matrix(2, 2) << 1, 0, 0, 0).finished();
  cx.A2 = 2.0 * Matrix::Identity(2, 2);
  cx.A3 = (Matrix(2, 2) << 8, 3, 3, 2).finished() / 7.0;

  Matrix on_axis = (Matrix(1, 2) << 0, 1).finished();
  Matrix on_diag = (Matrix(1, 2) << 1, -1).finished();
  cx.u.push_back(ClosedForm(QuadraticForm{cx.A1, Vector::Zero(2), 0.0, on_axis}));
  cx.u.push_back(ClosedForm(QuadraticForm{cx.A2, Vector::Zero(2), 0.0, on_diag}));
  cx.u.push_back(quadratic_closed_form(cx.A3));

  cx.v1 = ProductPoint({vec2(0, 0), vec2(-1, -1), vec2(1, -5)});
  cx.v2 = ProductPoint({vec2(1, 0), vec2(2, 2), vec2(0, 7)});

  cx.M = (Matrix(4, 4) << 1, -1, -1, 0,
                          0, 2, -1, -1,
                          0, 0, 4.0 / 7.0, 3.0 / 7.0,
                          0, 0, 0, 1.0 / 7.0).finished();
  cx.symM = 0.5 * (cx.M + cx.M.transpose());
  return cx;
}

std::vector<std::pair<double, double>> default_counterexample_samples(std::uint64_t seed) {
  std::vector<std::pair<double, double>> out{{0.0, 0.0}, {0.0, 1.0}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  while (out.size() < 200) out.emplace_back(unif(rng), unif(rng));
  return out;
}

CounterexampleReport counterexample_verify(const std::vector<std::pair<double, double>>& samples,
                                           std::size_t random_points, std::uint64_t seed) {
  const auto cx = counterexample_construct();
  CounterexampleReport rep;

  const auto eig = psd_check(SymMatrix(cx.symM));
  rep.eigenvalues = eig.eigenvalues;
  rep.psd = eig.is_psd;
  rep.positive_product = 1.0;
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    const double l = eig.eigenvalues[k];
    if (std::abs(l) < 1e-10) {
      kernel.push_back(k);
    } else if (l > 0) {
      rep.positive_sum += l;
      rep.positive_product *= l;
    }
  }
  rep.kernel_dim = kernel.size();
  const Matrix expected = (Matrix(4, 2) << 0, 1, -1, 2, 1, 0, -5, 7).finished();
  const Matrix p_expected = expected * (expected.transpose() * expected).inverse() * expected.transpose();
  Matrix e(4, static_cast<Eigen::Index>(kernel.size()));
  for (std::size_t k = 0; k < kernel.size(); ++k) e.col(static_cast<Eigen::Index>(k)) = eig.eigenvectors.col(kernel[k]);
  rep.kernel_distance = (e * e.transpose() - p_expected).norm();

  std::vector<ProductPoint> gamma;
  for (const auto& [l, m] : samples) gamma.push_back(cx.point(l, m));
  const GammaSet g(std::move(gamma));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  std::vector<ProductPoint> tests;
  tests.reserve(random_points);
  for (std::size_t k = 0; k < random_points; ++k) {
    const double a1 = unif(rng), a2 = unif(rng), a3 = unif(rng), b3 = unif(rng);
    tests.push_back(ProductPoint({vec2(a1, 0), vec2(a2, a2), vec2(a3, b3)}));
  }
  const auto spec = classical_cost(Classical::c1, 3, 2);
  rep.certificate = certify_splitting(closed_form_tuple(cx.u), g, spec, tests, kTolerance, seed);

  const std::vector<std::tuple<std::size_t, std::size_t, double>> cases{{0, 1, 3.0}, {0, 2, -1.0}, {1, 2, 1.9}};
  for (const auto& [i, j, lambda] : cases) {
    ProjectionWitness w{i, j, lambda};
    const auto p = cx.point(lambda);
    w.value = p[i].dot(p[j]);
    const GammaSet pair_set({ProductPoint({Vector::Zero(2), Vector::Zero(2), Vector::Zero(2)}), p});
    const auto pairs = project_pair(pair_set, i, j);
    w.cyclic_fails = !is_two_marginal_cyclically_monotone(pairs, PairwiseCost::inner_product()).holds;
    w.classical_fails = !is_pair_monotone_classical(pairs).holds;
    rep.witnesses.push_back(w);
  }

  const bool witnesses_ok = std::all_of(rep.witnesses.begin(), rep.witnesses.end(),
                                        [](const ProjectionWitness& w) { return w.cyclic_fails && w.classical_fails; });
  rep.pass = rep.psd && rep.kernel_dim == 2 && rep.kernel_distance <= 1e-9 && rep.certificate.pass && witnesses_ok;
  return rep;
}

}  // namespace mmsplit
