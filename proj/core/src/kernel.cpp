#include "condlab/kernel.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <map>
#include <mutex>

namespace condlab {

double riesz_kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != spec.n || y.size() != spec.n)
    throw input_error("riesz_kernel_eval: point dimension does not match kernel spec");
  if (!x.allFinite() || !y.allFinite())
    throw input_error("riesz_kernel_eval: non-finite coordinates");
  const double r = (x - y).norm();
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  return riesz_kernel_distance(spec, r);
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0);
}

double unit_ball_volume(int n) {
  return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

namespace {

// 64-point Gauss-Legendre on [a,b]
template <class F>
double gauss_legendre(F&& f, double a, double b, int panels = 4) {
  static const int N = 16;
  static const double xs[N] = {
      -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
      -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
      0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
      0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
  static const double ws[N] = {
      0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
      0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
      0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
      0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
  double sum = 0.0;
  const double hp = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * hp;
    for (int i = 0; i < N; ++i) sum += ws[i] * f(c + 0.5 * hp * xs[i]);
  }
  return sum * 0.5 * hp;
}

}  // namespace

double ball_self_energy_constant(const KernelSpec& spec) {
  static std::map<std::pair<double, int>, double> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({spec.alpha, spec.n});
    if (it != cache.end()) return it->second;
  }
  // Distance distribution of two uniform points in the unit n-ball:
  //   p(t) = n t^(n-1) I_{1-t^2/4}((n+1)/2, 1/2),  t in [0,2].
  // Self-energy = integral t^(alpha-n) p(t) dt.
  const double a = (spec.n + 1) / 2.0;
  auto integrand = [&](double t) {
    const double reg = boost::math::ibeta(a, 0.5, std::max(0.0, 1.0 - t * t / 4.0));
    return spec.n * std::pow(t, spec.alpha - 1.0) * reg;
  };
  // integrand ~ t^(alpha-1) near zero; split for resolution near both ends
  double val = gauss_legendre(integrand, 0.0, 0.25, 8) + gauss_legendre(integrand, 0.25, 2.0, 16);
  {
    std::lock_guard<std::mutex> lock(mu);
    cache[{spec.alpha, spec.n}] = val;
  }
  return val;
}

double mollified_self_interaction(const KernelSpec& spec, double h) {
  if (!(h > 0.0)) throw input_error("mollified_self_interaction: h must be positive");
  if (spec.alpha == 2.0 && spec.n == 3) return 6.0 / (5.0 * h);
  return std::pow(h, spec.alpha - spec.n) * ball_self_energy_constant(spec);
}

double riesz_composition_constant(const KernelSpec& spec) {
  auto A = [&](double beta) {
    return std::pow(M_PI, spec.n / 2.0) * std::pow(2.0, beta) * std::tgamma(beta / 2.0) /
           std::tgamma((spec.n - beta) / 2.0);
  };
  const double ah = A(spec.alpha / 2.0);
  return ah * ah / A(spec.alpha);
}

}  // namespace condlab
