#include "condlab/balayage.hpp"

#include <cmath>
#include <random>

#include "condlab/nnqp.hpp"

namespace condlab {

namespace {

Eigen::VectorXd random_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd d(n);
  do {
    for (int i = 0; i < n; ++i) d[i] = gauss(rng);
  } while (d.norm() < 1e-12);
  return d.normalized();
}

// density constant for Riesz balayage with alpha < 2
double riesz_density_constant(const KernelSpec& spec) {
  return std::tgamma(spec.n / 2.0) * std::sin(M_PI * spec.alpha / 2.0) /
         std::pow(M_PI, spec.n / 2.0 + 1.0);
}

double max_relative_residual(const KernelSpec& spec, const DiscreteMeasure& swept,
                             const Eigen::VectorXd& y, double mass, const PointCloud& checks) {
  double worst = 0.0;
  for (int i = 0; i < checks.size(); ++i) {
    const Eigen::VectorXd x = checks.point(i);
    const double ref = mass * riesz_kernel_distance(spec, (x - y).norm());
    const double got = potential_at(spec, swept, x);
    if (ref > 0.0) worst = std::max(worst, std::abs(got - ref) / ref);
  }
  return worst;
}

double max_relative_residual(const KernelSpec& spec, const DiscreteMeasure& swept,
                             const DiscreteMeasure& nu, const PointCloud& checks) {
  double worst = 0.0;
  for (int i = 0; i < checks.size(); ++i) {
    const Eigen::VectorXd x = checks.point(i);
    const double ref = potential_at(spec, nu, x);
    const double got = potential_at(spec, swept, x);
    if (ref > 0.0) worst = std::max(worst, std::abs(got - ref) / ref);
  }
  return worst;
}

}  // namespace

PointCloud f_check_points(const DomainGeometry& geometry, const Eigen::VectorXd& focus,
                          int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = geometry.n;
  PointCloud out;
  out.points.resize(count, n);
  out.weights = Eigen::VectorXd::Ones(count);

  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd x(n);
    switch (geometry.kind) {
      case GeometryKind::ball: {
        const double r = geometry.radius * (1.15 + 5.0 * unif(rng));
        x = geometry.center + r * random_direction(rng, n);
        break;
      }
      case GeometryKind::ball_exterior: {
        const double r = geometry.radius * 0.85 * std::pow(unif(rng), 1.0 / n);
        x = geometry.center + r * random_direction(rng, n);
        break;
      }
      case GeometryKind::half_space: {
        const double s = std::max(geometry.scale(),
                                  std::abs(geometry.normal.dot(focus) - geometry.offset));
        Eigen::VectorXd foot =
            focus - (geometry.normal.dot(focus) - geometry.offset) * geometry.normal;
        Eigen::VectorXd lateral = random_direction(rng, n);
        lateral -= geometry.normal.dot(lateral) * geometry.normal;
        const double depth = s * (0.1 + 4.0 * unif(rng));
        x = foot - depth * geometry.normal + (3.0 * s * unif(rng)) * lateral;
        break;
      }
      case GeometryKind::rotation_body_complement: {
        // axis points inside the body
        const double lo = std::max(1.0, 0.5 * std::abs(focus[0]));
        const double t = lo * std::pow(16.0, unif(rng));
        x.setZero();
        x[0] = t;
        break;
      }
    }
    out.points.row(i) = x.transpose();
  }
  return out;
}

BalayageResult balayage_closed_form(const KernelSpec& spec, const DomainGeometry& geometry,
                                    const Eigen::VectorXd& y, double mass,
                                    const PointCloud& f_cloud, std::uint64_t check_seed) {
  if (y.size() != spec.n || geometry.n != spec.n)
    throw input_error("balayage_closed_form: dimension mismatch");
  if (!(mass >= 0.0)) throw input_error("balayage_closed_form: negative mass");
  if (!geometry.contains(y))
    throw input_error("balayage_closed_form: atom is not carried by the domain");
  if (geometry.kind == GeometryKind::rotation_body_complement)
    throw input_error("balayage_closed_form: no closed form for this geometry");

  const int n = spec.n;
  const bool newtonian = spec.is_newtonian();
  const double sigma = unit_sphere_area(n);
  const double c_alpha = riesz_density_constant(spec);

  Eigen::VectorXd density(f_cloud.size());
  double analytic_mass = mass;

  for (int i = 0; i < f_cloud.size(); ++i) {
    const Eigen::VectorXd x = f_cloud.point(i);
    const double dxy = (x - y).norm();
    double val = 0.0;
    switch (geometry.kind) {
      case GeometryKind::ball: {
        const double zy = (y - geometry.center).norm();
        const double r = geometry.radius;
        const double zx = (x - geometry.center).norm();
        if (newtonian) {
          val = (r * r - zy * zy) / (sigma * r * std::pow(dxy, n));
        } else {
          const double gap = zx * zx - r * r;
          val = gap > 0.0 ? c_alpha * std::pow((r * r - zy * zy) / gap, 0.5 * spec.alpha) /
                                std::pow(dxy, n)
                          : 0.0;
        }
        break;
      }
      case GeometryKind::ball_exterior: {
        const double zy = (y - geometry.center).norm();
        const double r = geometry.radius;
        const double zx = (x - geometry.center).norm();
        if (newtonian) {
          val = (zy * zy - r * r) / (sigma * r * std::pow(dxy, n));
          analytic_mass = mass * std::pow(r / zy, n - 2.0);
        } else {
          const double gap = r * r - zx * zx;
          val = gap > 0.0 ? c_alpha * std::pow((zy * zy - r * r) / gap, 0.5 * spec.alpha) /
                                std::pow(dxy, n)
                          : 0.0;
          analytic_mass = -1.0;  // no closed-form mass; keep the raw quadrature
        }
        break;
      }
      case GeometryKind::half_space: {
        const double d = geometry.normal.dot(y) - geometry.offset;
        if (newtonian) {
          val = 2.0 * d / (sigma * std::pow(dxy, n));
        } else {
          const double t = -(geometry.normal.dot(x) - geometry.offset);
          val = t > 0.0
                    ? c_alpha * std::pow(d / t, 0.5 * spec.alpha) / std::pow(dxy, n)
                    : 0.0;
        }
        break;
      }
      default:
        break;
    }
    density[i] = val;
  }

  Eigen::VectorXd masses = density.cwiseProduct(f_cloud.weights) * mass;
  const double raw = masses.sum();
  if (analytic_mass >= 0.0 && raw > 0.0) masses *= analytic_mass / raw;

  BalayageResult res;
  res.swept = DiscreteMeasure(f_cloud, masses);
  res.mass_in = mass;
  res.mass_out = res.swept.total_mass();
  const PointCloud checks = f_check_points(geometry, y, 50, check_seed);
  res.potential_residual = max_relative_residual(spec, res.swept, y, mass, checks);
  return res;
}

BalayageResult balayage_numeric(const KernelSpec& spec, const DomainGeometry& geometry,
                                const DiscreteMeasure& nu, const PointCloud& f_cloud,
                                const BalayageOptions& options) {
  if (nu.size() == 0 || nu.is_zero()) {
    BalayageResult res;
    res.swept = DiscreteMeasure(f_cloud, Eigen::VectorXd::Zero(f_cloud.size()));
    return res;
  }
  if (nu.cloud.dim() != spec.n || f_cloud.dim() != spec.n)
    throw input_error("balayage_numeric: dimension mismatch");

  const DiagonalPolicy policy = surface_mollifier(f_cloud);
  const double h = resolve_mollifier(policy, f_cloud);
  const Eigen::MatrixXd k = assemble_kernel_matrix(spec, f_cloud, policy);
  Eigen::VectorXd c(f_cloud.size());
  for (int i = 0; i < f_cloud.size(); ++i)
    c[i] = potential_at_mollified(spec, nu, f_cloud.point(i), h);

  QpResult qp = nnqp_solve(k, c, options.tol, options.max_iter);
  if (!qp.converged)
    throw convergence_error("balayage_numeric: projection did not converge", qp.kkt_residual);

  BalayageResult res;
  res.swept = DiscreteMeasure(f_cloud, qp.x);
  res.mass_in = nu.total_mass();
  res.mass_out = res.swept.total_mass();

  Eigen::VectorXd focus = Eigen::VectorXd::Zero(spec.n);
  double total = nu.total_mass();
  for (int i = 0; i < nu.size(); ++i) focus += nu.masses[i] * nu.cloud.point(i);
  if (total > 0.0) focus /= total;
  const PointCloud checks = f_check_points(geometry, focus, 50, options.check_seed);
  res.potential_residual = max_relative_residual(spec, res.swept, nu, checks);
  return res;
}

MassDiagnostic mass_diagnostic(const BalayageResult& result, const DomainGeometry& geometry,
                               double tol) {
  MassDiagnostic diag;
  if (result.mass_in <= 1e-300) return diag;
  diag.deficit = result.mass_in - result.mass_out;
  if (result.mass_out < (1.0 - tol) * result.mass_in) diag.verdict = MassVerdict::deficient;
  if (diag.verdict == MassVerdict::deficient &&
      geometry.f_thinness() == ThinnessClass::not_thin)
    diag.consistent_with_geometry = false;
  return diag;
}

}  // namespace condlab
