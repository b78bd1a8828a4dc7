#pragma once
// The contract every semi-discretization exposes to the integrators:
// an autonomous system y' = J grad H(y) with a constant skew structure J.
//
// State layout is (q, p) or, for systems made autonomous by augmentation,
// (q, p, q~, p~) with q~ playing the role of time.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hbvm {

using State = std::vector<double>;

enum class BoundaryKind { none, periodic, dirichlet, neumann };
enum class SpatialScheme { none, fd2, fd4, fd6, fourier };

std::string to_string(BoundaryKind kind);
std::string to_string(SpatialScheme scheme);

// Potential density f and its derivative f', applied pointwise.
struct Nonlinearity {
  std::function<double(double)> f;
  std::function<double(double)> df;
  // Polynomial degree of f, or -1 when f is not a polynomial.
  int degree = -1;
};

Nonlinearity zero_nonlinearity();
// f(u) = sum_j coeffs[j] u^j
Nonlinearity polynomial_nonlinearity(std::vector<double> coeffs);

struct Descriptor {
  std::string problem;
  BoundaryKind boundary = BoundaryKind::none;
  SpatialScheme scheme = SpatialScheme::none;
  double a = 0.0;
  double b = 0.0;
  std::size_t n = 0;          // length of the q block
  std::vector<double> grid;   // FD nodes, or quadrature nodes of a spectral system
};

// J = scale * [[0, I], [-I, 0]] on the (q,p) block, optionally followed by the
// unit 2x2 block acting on (q~, p~).
class SkewStructure {
 public:
  static SkewStructure canonical(std::size_t n, double scale);
  static SkewStructure canonical_augmented(std::size_t n, double scale);

  std::size_t dim() const { return 2 * block_ + (augmented_ ? 2 : 0); }
  std::size_t block() const { return block_; }
  double scale() const { return scale_; }
  bool augmented() const { return augmented_; }

  void apply(std::span<const double> g, std::span<double> out) const;

 private:
  SkewStructure(std::size_t n, double scale, bool augmented)
      : block_(n), scale_(scale), augmented_(augmented) {}
  std::size_t block_;
  double scale_;
  bool augmented_;
};

class StencilOperator;

// Linear part K of the acceleration, used to build preconditioners.
struct StencilStiffness {
  const StencilOperator* op;
  double scale;  // K = scale * T
};
struct DiagonalStiffness {
  std::span<const double> diagonal;
};
using Stiffness = std::variant<StencilStiffness, DiagonalStiffness>;

// Systems of the form q' = p, p' = a(q, t) = -K q - nonlinear(q) + forcing(t).
// When augmented, the state carries (q~, p~) with q~' = 1 and
// p~' = boundary_rate(q, q~), which depends on q and time only.
class SeparableForm {
 public:
  virtual ~SeparableForm() = default;
  virtual std::size_t size() const = 0;
  virtual void acceleration(std::span<const double> q, double t, std::span<double> out) const = 0;
  virtual Stiffness stiffness() const = 0;
  virtual bool augmented() const { return false; }
  virtual double boundary_rate(std::span<const double> /*q*/, double /*t*/) const { return 0.0; }
};

class SemiDiscreteSystem {
 public:
  virtual ~SemiDiscreteSystem() = default;

  virtual std::size_t dim() const = 0;
  virtual const SkewStructure& skew() const = 0;
  virtual const Descriptor& descriptor() const = 0;
  virtual double hamiltonian(std::span<const double> y) const = 0;
  virtual void gradient(std::span<const double> y, std::span<double> g) const = 0;

  // Energy of the original, possibly time-dependent, problem. Equal to
  // hamiltonian() unless the system is augmented.
  virtual double physical_hamiltonian(std::span<const double> y) const { return hamiltonian(y); }

  virtual const SeparableForm* separable() const { return nullptr; }

  // J grad H(y). Overrides must agree with the composition of gradient()
  // and skew().apply().
  virtual void vector_field(std::span<const double> y, std::span<double> out) const;

  bool augmented() const { return skew().augmented(); }
};

// skew.apply(gradient(y)); throws InvalidArgument on a length mismatch.
State rhs(const SemiDiscreteSystem& system, std::span<const double> y);

// H(y_n) - H(y_0) over a stored trajectory (first entry 0).
std::vector<double> hamiltonian_drift(const SemiDiscreteSystem& system,
                                      const std::vector<State>& trajectory);

void check_dimension(const SemiDiscreteSystem& system, std::size_t length, const char* where);

}  // namespace hbvm
