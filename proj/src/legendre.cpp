#include "hbvm/legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "hbvm/errors.hpp"

namespace hbvm {

namespace {

struct LegendrePair {
  double value;     // L_n(t)
  double previous;  // L_{n-1}(t), 0 for n = 0
};

// Standard Legendre L_n on [-1,1] by the three-term recurrence.
LegendrePair legendre(std::size_t n, double t) {
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double jj = static_cast<double>(j);
    const double next = ((2.0 * jj + 1.0) * t * cur - jj * prev) / (jj + 1.0);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace

double shifted_legendre(std::size_t j, double x) {
  return std::sqrt(2.0 * static_cast<double>(j) + 1.0) * legendre(j, 2.0 * x - 1.0).value;
}

double shifted_legendre_integral(std::size_t j, double c) {
  if (j == 0) return c;
  const double t = 2.0 * c - 1.0;
  const double jj = static_cast<double>(j);
  const LegendrePair lj = legendre(j, t);  // value L_j, previous L_{j-1}
  const double next = ((2.0 * jj + 1.0) * t * lj.value - jj * lj.previous) / (jj + 1.0);
  // int_{-1}^{t} L_j = (L_{j+1} - L_{j-1}) / (2j+1); the x -> t map halves it.
  return std::sqrt(2.0 * jj + 1.0) * (next - lj.previous) / (2.0 * (2.0 * jj + 1.0));
}

QuadratureRule gauss_rule(std::size_t k) {
  if (k == 0) throw InvalidArgument("gauss_rule: k must be at least 1");
  QuadratureRule rule;
  rule.k = k;
  rule.nodes.assign(k, 0.0);
  rule.weights.assign(k, 0.0);
  const double kk = static_cast<double>(k);

  // Roots on [-1,1] come in +/- pairs; compute the negative half and mirror.
  for (std::size_t i = 0; i < (k + 1) / 2; ++i) {
    double t = -std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (kk + 0.5));
    double derivative = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      const LegendrePair l = legendre(k, t);
      derivative = kk * (t * l.value - l.previous) / (t * t - 1.0);
      const double dt = l.value / derivative;
      t -= dt;
      if (std::fabs(dt) <= 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NumericalError("gauss_rule: Newton iteration did not converge for k=" +
                           std::to_string(k));
    const LegendrePair l = legendre(k, t);
    derivative = kk * (t * l.value - l.previous) / (t * t - 1.0);
    const double w = 1.0 / ((1.0 - t * t) * derivative * derivative);  // half of the [-1,1] weight

    const std::size_t mirror = k - 1 - i;
    if (mirror == i) {
      rule.nodes[i] = 0.5;
      rule.weights[i] = w;
    } else {
      rule.nodes[i] = 0.5 * (1.0 + t);
      rule.nodes[mirror] = 1.0 - rule.nodes[i];
      rule.weights[i] = w;
      rule.weights[mirror] = w;
    }
  }
  return rule;
}

Eigen::MatrixXd xs_closed_form(std::size_t s) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s),
                                            static_cast<Eigen::Index>(s));
  if (s == 0) return x;
  x(0, 0) = 0.5;
  for (std::size_t i = 1; i < s; ++i) {
    const double ii = static_cast<double>(i);
    const double xi = 1.0 / (2.0 * std::sqrt(4.0 * ii * ii - 1.0));
    const auto r = static_cast<Eigen::Index>(i);
    x(r - 1, r) = -xi;
    x(r, r - 1) = xi;
  }
  return x;
}

namespace {

HbvmTables build_tables(std::size_t k, std::size_t s) {
  HbvmTables t;
  t.k = k;
  t.s = s;
  t.rule = gauss_rule(k);
  const auto K = static_cast<Eigen::Index>(k);
  const auto S = static_cast<Eigen::Index>(s);
  t.P.resize(K, S);
  t.I.resize(K, S);
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = 0; j < S; ++j) {
      const double c = t.rule.nodes[static_cast<std::size_t>(i)];
      t.P(i, j) = shifted_legendre(static_cast<std::size_t>(j), c);
      t.I(i, j) = shifted_legendre_integral(static_cast<std::size_t>(j), c);
    }
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(t.rule.weights.data(), K);
  t.PtOmega = t.P.transpose() * b.asDiagonal();
  t.Xs = t.PtOmega * t.I;
  t.IXs = t.I * t.Xs;

  const Eigen::VectorXcd eig = Eigen::EigenSolver<Eigen::MatrixXd>(t.Xs, false).eigenvalues();
  t.rho = eig.cwiseAbs().minCoeff();
  const Eigen::MatrixXd xinv = t.Xs.inverse();
  t.blend = t.rho * t.rho * xinv * xinv;
  return t;
}

}  // namespace

std::shared_ptr<const HbvmTables> hbvm_tables(std::size_t k, std::size_t s) {
  if (s == 0) throw InvalidArgument("hbvm_tables: s must be at least 1");
  if (k < s)
    throw InvalidArgument("hbvm_tables: invalid method HBVM(" + std::to_string(k) + "," +
                          std::to_string(s) + "), k must be >= s");
  if (k > kMaxQuadratureNodes || s > kMaxDegree)
    throw InvalidArgument("hbvm_tables: supported range is k <= 20, s <= 6");

  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const HbvmTables>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[{k, s}];
  if (!slot) slot = std::make_shared<const HbvmTables>(build_tables(k, s));
  return slot;
}

}  // namespace hbvm
