#include "condlab/equilibrium.hpp"

#include <cmath>
#include <future>

#include "condlab/nnqp.hpp"

namespace condlab {

namespace {

EquilibriumResult equilibrium_from_matrix(const Eigen::MatrixXd& k, const PointCloud& cloud) {
  QpResult qp = nnqp_solve(k, Eigen::VectorXd::Ones(cloud.size()), 1e-11, 300);
  EquilibriumResult res;
  res.gamma = DiscreteMeasure(cloud, qp.x);
  res.capacity = qp.x.sum();
  res.energy = qp.x.dot(k * qp.x);
  res.iterations = qp.iterations;
  res.converged = qp.converged;
  const Eigen::VectorXd pot = k * qp.x;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < cloud.size(); ++i) {
    if (qp.x[i] <= 0.0) continue;
    lo = std::min(lo, pot[i]);
    hi = std::max(hi, pot[i]);
  }
  if (std::isfinite(lo)) {
    res.potential_min = lo;
    res.potential_max = hi;
  }
  return res;
}

double fit_log_slope(const std::vector<double>& values, int k_from) {
  // least squares slope of log(value_k) against k, skipping nonpositive
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t k = k_from; k < values.size(); ++k) {
    if (!(values[k] > 0.0)) continue;
    const double x = static_cast<double>(k);
    const double y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return 0.0;
  const double denom = m * sxx - sx * sx;
  return denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
}

}  // namespace

EquilibriumResult riesz_equilibrium(const KernelSpec& spec, const PointCloud& cloud,
                                    const std::optional<DiagonalPolicy>& policy) {
  if (cloud.size() == 0) throw input_error("riesz_equilibrium: empty cloud");
  const DiagonalPolicy pol = policy.value_or(surface_mollifier(cloud));
  return equilibrium_from_matrix(assemble_kernel_matrix(spec, cloud, pol), cloud);
}

double riesz_capacity(const KernelSpec& spec, const PointCloud& cloud,
                      const std::optional<DiagonalPolicy>& policy) {
  return riesz_equilibrium(spec, cloud, policy).capacity;
}

EquilibriumResult green_equilibrium(const GreenKernelEngine& engine, const PointCloud& q_cloud,
                                    const std::optional<DiagonalPolicy>& policy) {
  if (q_cloud.size() == 0) throw input_error("green_equilibrium: empty cloud");
  for (int i = 0; i < q_cloud.size(); ++i)
    if (!engine.geometry().contains(q_cloud.point(i)))
      throw input_error("green_equilibrium: sample outside the domain");
  const DiagonalPolicy pol = policy.value_or(surface_mollifier(q_cloud));
  return equilibrium_from_matrix(engine.matrix(q_cloud, pol), q_cloud);
}

double slice_capacity(const KernelSpec& spec, const RotationProfile& profile, int k, double q,
                      int resolution, std::uint64_t seed) {
  const RotationSliceSet slice = rotation_body_slice(profile, k, q);
  const double x_lo = slice.x_lo();
  const double x_hi = slice.x_hi();
  const double length = x_hi - x_lo;
  const double rho_max = profile.radius(x_lo);

  const bool wire = spec.is_newtonian() && spec.n == 3 && rho_max < 0.1 * length;
  if (!wire) {
    const PointCloud cloud = sample_set(slice, resolution, seed);
    return riesz_capacity(spec, cloud);
  }

  // charged-wire model: axial stations, diagonal from the on-surface
  // potential of a uniform segment, evaluated in log space so that
  // underflowed radii remain usable
  const int m = 96;
  const double ell = length / m;
  Eigen::VectorXd x(m);
  for (int j = 0; j < m; ++j) x[j] = x_lo + (j + 0.5) * ell;
  Eigen::MatrixXd kmat(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) {
        const double z_log = std::log(0.5 * ell) - profile.log_radius(x[i]);
        if (z_log < 30.0)
          kmat(i, i) = 2.0 * std::asinh(std::exp(z_log)) / ell;
        else
          kmat(i, i) = 2.0 * (std::log(ell) - profile.log_radius(x[i])) / ell;
      } else {
        kmat(i, j) = 1.0 / std::abs(x[i] - x[j]);
      }
    }
  }
  QpResult qp = nnqp_solve(kmat, Eigen::VectorXd::Ones(m), 1e-11, 300);
  return qp.x.sum();
}

ThinnessVerdict wiener_thinness_diagnostic(const KernelSpec& spec, const RotationProfile& profile,
                                           double q, int k_max, int resolution,
                                           std::uint64_t seed, int jobs) {
  if (!(q > 1.0)) throw input_error("wiener_thinness_diagnostic: q must exceed 1");
  if (k_max < 8) throw input_error("wiener_thinness_diagnostic: k_max must be >= 8");

  std::vector<double> caps(k_max + 1);
  if (jobs > 1) {
    std::vector<std::future<double>> futures;
    for (int k = 0; k <= k_max; ++k)
      futures.push_back(std::async(std::launch::async, [&, k] {
        return slice_capacity(spec, profile, k, q, resolution, seed + k);
      }));
    for (int k = 0; k <= k_max; ++k) caps[k] = futures[k].get();
  } else {
    for (int k = 0; k <= k_max; ++k)
      caps[k] = slice_capacity(spec, profile, k, q, resolution, seed + k);
  }

  ThinnessVerdict verdict;
  verdict.q = q;
  std::vector<double> terms;
  double cumulative = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    const double t = caps[k] / std::pow(q, k * (spec.n - spec.alpha));
    cumulative += caps[k];
    verdict.rows.push_back({k, caps[k], t, cumulative});
    terms.push_back(t);
  }

  verdict.wiener_slope = fit_log_slope(terms, 1);
  verdict.capacity_slope = fit_log_slope(caps, 1);
  verdict.classified = spec.is_newtonian() && spec.n == 3;

  // geometric-decay test: the series diverges when its terms do not
  // decay at a geometric rate comparable to the dyadic weights
  const double tau_w = -0.5 * (spec.n - spec.alpha) * std::log(q);
  const double tau_c = -0.5 * std::log(q);
  if (verdict.wiener_slope >= tau_w)
    verdict.classification = ThinnessClass::not_thin;
  else if (verdict.capacity_slope >= tau_c)
    verdict.classification = ThinnessClass::thin_infinite_capacity;
  else
    verdict.classification = ThinnessClass::finite_capacity;
  return verdict;
}

}  // namespace condlab
