#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>

namespace condlab {

struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Riesz kernel |x-y|^(alpha-n) with alpha in (0,2], n >= 3.
struct KernelSpec {
  double alpha;
  int n;

  KernelSpec(double alpha_, int n_) : alpha(alpha_), n(n_) {
    if (!(alpha > 0.0 && alpha <= 2.0))
      throw input_error("KernelSpec: alpha must lie in (0,2]");
    if (n < 3) throw input_error("KernelSpec: n must be >= 3");
  }

  KernelSpec half_order() const { return KernelSpec(alpha / 2.0, n); }

  bool is_newtonian() const { return alpha == 2.0; }
};

// kernel value at distance r > 0
inline double riesz_kernel_distance(const KernelSpec& spec, double r) {
  return std::pow(r, spec.alpha - spec.n);
}

// +infinity on the diagonal
double riesz_kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y);

// Self-interaction energy of a unit-mass uniform ball of radius h.
// Exact 6/(5h) for alpha=2, n=3; numeric quadrature constant otherwise.
double mollified_self_interaction(const KernelSpec& spec, double h);

// dimensionless constant: self-energy of the unit uniform ball (radius 1)
double ball_self_energy_constant(const KernelSpec& spec);

// Constant C(n,alpha) such that the plain half-order kernels compose as
//   integral |x-y|^(a/2-n) |x-z|^(a/2-n) dm(x) = C * |y-z|^(a-n).
// Half-order potentials are scaled by 1/sqrt(C) throughout so that the
// composition identity and the weak/standard energy coincidence hold
// without stray constants.
double riesz_composition_constant(const KernelSpec& spec);

// normalized half-order kernel value at distance r
inline double half_order_kernel_distance(const KernelSpec& spec, double r) {
  const double c = riesz_composition_constant(spec);
  return std::pow(r, spec.alpha / 2.0 - spec.n) / std::sqrt(c);
}

// surface area of the unit (n-1)-sphere in R^n
double unit_sphere_area(int n);
// volume of the unit ball in R^n
double unit_ball_volume(int n);

}  // namespace condlab
