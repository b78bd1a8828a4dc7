#pragma once
// Shifted, orthonormal Legendre polynomials on [0,1], Gauss-Legendre rules and
// the coefficient matrices of HBVM(k,s) methods built from them.

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace hbvm {

inline constexpr std::size_t kMaxQuadratureNodes = 20;
inline constexpr std::size_t kMaxDegree = 6;

// P_j(x) with int_0^1 P_i P_j = delta_ij, i.e. sqrt(2j+1) L_j(2x-1).
double shifted_legendre(std::size_t j, double x);

// int_0^c P_j(x) dx, closed form through L_{j+1} - L_{j-1}.
double shifted_legendre_integral(std::size_t j, double c);

struct QuadratureRule {
  std::size_t k = 0;
  std::vector<double> nodes;    // increasing, in (0,1)
  std::vector<double> weights;  // positive, sum to 1
};

// k-point Gauss-Legendre rule on [0,1], exact for polynomials of degree 2k-1.
// Throws NumericalError if Newton fails to converge.
QuadratureRule gauss_rule(std::size_t k);

// Everything an HBVM(k,s) step needs, computed once per (k,s).
struct HbvmTables {
  std::size_t k = 0;
  std::size_t s = 0;
  QuadratureRule rule;
  Eigen::MatrixXd P;           // k x s, P(i,j) = P_j(c_i)
  Eigen::MatrixXd I;           // k x s, I(i,j) = int_0^{c_i} P_j
  Eigen::MatrixXd PtOmega;     // s x k, P^T diag(b)
  Eigen::MatrixXd Xs;          // s x s, P^T Omega I
  Eigen::MatrixXd IXs;         // k x s, I * Xs (q-stage weights of the separable form)
  Eigen::MatrixXd blend;       // s x s, rho_s^2 Xs^{-2}
  double rho = 0.0;            // min |lambda(Xs)|
};

// Closed-form Xs: 1/2 in (0,0), -xi_i above and xi_i below the diagonal.
Eigen::MatrixXd xs_closed_form(std::size_t s);

// Throws InvalidArgument when k < s, s == 0 or the sizes exceed the supported range.
// Results are cached per (k,s) and shared; the tables are immutable.
std::shared_ptr<const HbvmTables> hbvm_tables(std::size_t k, std::size_t s);

}  // namespace hbvm
