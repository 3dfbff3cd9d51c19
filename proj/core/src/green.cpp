#include "condlab/green.hpp"

#include <cmath>

namespace condlab {

namespace {

Eigen::VectorXd default_focus(const DomainGeometry& g) {
  switch (g.kind) {
    case GeometryKind::ball:
      return g.center;
    case GeometryKind::ball_exterior: {
      Eigen::VectorXd f = g.center;
      f[0] += 2.0 * g.radius;
      return f;
    }
    case GeometryKind::half_space:
      return (g.offset + g.scale()) * g.normal;
    case GeometryKind::rotation_body_complement: {
      Eigen::VectorXd f = Eigen::VectorXd::Zero(g.n);
      f[0] = 2.0;
      f[1] = 2.0;
      return f;
    }
  }
  return Eigen::VectorXd::Zero(g.n);
}

// image charge and location for the Newtonian ball / half-space kernels
double closed_form_image(const KernelSpec& spec, const DomainGeometry& g,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  switch (g.kind) {
    case GeometryKind::ball:
    case GeometryKind::ball_exterior: {
      const Eigen::VectorXd z = y - g.center;
      const double zn = z.norm();
      if (zn < 1e-14) {
        // center source: the image term is the constant potential r^(2-n)
        return riesz_kernel_distance(spec, g.radius);
      }
      const Eigen::VectorXd image = g.center + (g.radius * g.radius / (zn * zn)) * z;
      const double charge = std::pow(g.radius / zn, spec.n - 2.0);
      return charge * riesz_kernel_distance(spec, (x - image).norm());
    }
    case GeometryKind::half_space: {
      const Eigen::VectorXd refl = y - 2.0 * (g.normal.dot(y) - g.offset) * g.normal;
      return riesz_kernel_distance(spec, (x - refl).norm());
    }
    default:
      throw input_error("closed-form Green kernel: unsupported geometry");
  }
}

}  // namespace

double green_kernel_eval(const KernelSpec& spec, const DomainGeometry& geometry,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (!spec.is_newtonian())
    throw input_error("green_kernel_eval: closed form requires alpha = 2");
  if (!geometry.contains(x) || !geometry.contains(y))
    throw input_error("green_kernel_eval: points must lie in the domain");
  const double d = (x - y).norm();
  if (d < 1e-12 * (1.0 + x.norm()))
    throw singular_evaluation("green_kernel_eval: coincident points");
  return riesz_kernel_distance(spec, d) - closed_form_image(spec, geometry, x, y);
}

GreenKernelEngine::GreenKernelEngine(const KernelSpec& spec, const DomainGeometry& geometry,
                                     int f_resolution, std::uint64_t seed)
    : spec_(spec), geometry_(geometry), seed_(seed) {
  if (geometry.n != spec.n) throw input_error("GreenKernelEngine: dimension mismatch");
  closed_form_ = spec.is_newtonian() &&
                 geometry.kind != GeometryKind::rotation_body_complement;
  f_cloud_ = geometry.f_carrier_cloud(spec, f_resolution, seed, default_focus(geometry));
  if (!closed_form_) {
    const DiagonalPolicy policy = surface_mollifier(f_cloud_);
    f_mollifier_ = resolve_mollifier(policy, f_cloud_);
    f_factor_ = assemble_kernel_matrix(spec, f_cloud_, policy).ldlt();
  }
}

const DiscreteMeasure& GreenKernelEngine::swept_dirac(const Eigen::VectorXd& y) const {
  std::vector<double> key(y.data(), y.data() + y.size());
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;

  Eigen::VectorXd c(f_cloud_.size());
  for (int i = 0; i < f_cloud_.size(); ++i) {
    const double d = std::max((f_cloud_.point(i) - y).norm(), f_mollifier_);
    c[i] = riesz_kernel_distance(spec_, d);
  }
  Eigen::VectorXd eta = f_factor_.solve(c).cwiseMax(0.0);
  auto owned = std::make_unique<DiscreteMeasure>(f_cloud_, std::move(eta));
  const DiscreteMeasure& ref = *owned;
  cache_.emplace(std::move(key), std::move(owned));
  return ref;
}

double GreenKernelEngine::image_potential(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y) const {
  if (closed_form_) return closed_form_image(spec_, geometry_, x, y);
  return potential_at_mollified(spec_, swept_dirac(y), x, f_mollifier_);
}

double GreenKernelEngine::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if (!geometry_.contains(x) || !geometry_.contains(y))
    throw input_error("GreenKernelEngine::eval: points must lie in the domain");
  const double d = (x - y).norm();
  if (d < 1e-12 * (1.0 + x.norm()))
    throw singular_evaluation("GreenKernelEngine::eval: coincident points");
  return riesz_kernel_distance(spec_, d) - image_potential(x, y);
}

Eigen::MatrixXd GreenKernelEngine::matrix(const PointCloud& cloud,
                                          const DiagonalPolicy& policy) const {
  const int n = cloud.size();
  // per-atom smearing radii kept inside the domain, so for alpha = 2 the
  // quadratic form is the exact Gram matrix of disjoint uniform balls
  // (spherical averaging leaves both kernel parts at their center values)
  Eigen::VectorXd radii;
  if (policy.kind == DiagonalPolicy::Kind::patch)
    radii = patch_radii(cloud);
  else
    radii = Eigen::VectorXd::Constant(n, resolve_mollifier(policy, cloud));
  for (int i = 0; i < n; ++i) {
    const double bd = geometry_.signed_boundary_distance(cloud.point(i));
    if (bd > 0.0) radii[i] = std::min(radii[i], 0.9 * bd);
    radii[i] = std::max(radii[i], kMinSeparationFactor);
  }

  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v;
      if (i == j) {
        v = mollified_self_interaction(spec_, radii[i]) -
            image_potential(cloud.point(i), cloud.point(i));
      } else {
        const double d = (cloud.points.row(i) - cloud.points.row(j)).norm();
        v = riesz_kernel_distance(spec_, std::max(d, 0.25 * (radii[i] + radii[j]))) -
            image_potential(cloud.point(i), cloud.point(j));
      }
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

Eigen::MatrixXd GreenKernelEngine::matrix(const PointCloud& rows,
                                          const PointCloud& cols) const {
  Eigen::MatrixXd g =
      assemble_kernel_matrix(spec_, rows, cols, DiagonalPolicy::mollify());
  for (int j = 0; j < cols.size(); ++j) {
    const Eigen::VectorXd y = cols.point(j);
    for (int i = 0; i < rows.size(); ++i) g(i, j) -= image_potential(rows.point(i), y);
  }
  return g;
}

BalayageResult GreenKernelEngine::sweep(const DiscreteMeasure& nu) const {
  if (closed_form_) {
    Eigen::VectorXd masses = Eigen::VectorXd::Zero(f_cloud_.size());
    double mass_in = 0.0;
    for (int i = 0; i < nu.size(); ++i) {
      if (nu.masses[i] <= 0.0) continue;
      BalayageResult one = balayage_closed_form(spec_, geometry_, nu.cloud.point(i),
                                                nu.masses[i], f_cloud_, seed_ + 1);
      masses += one.swept.masses;
      mass_in += nu.masses[i];
    }
    BalayageResult res;
    res.swept = DiscreteMeasure(f_cloud_, masses);
    res.mass_in = mass_in;
    res.mass_out = res.swept.total_mass();
    Eigen::VectorXd focus = default_focus(geometry_);
    const PointCloud checks = f_check_points(geometry_, focus, 50, seed_ + 2);
    double worst = 0.0;
    for (int i = 0; i < checks.size(); ++i) {
      const Eigen::VectorXd x = checks.point(i);
      const double ref = potential_at(spec_, nu, x);
      if (ref > 0.0)
        worst = std::max(worst, std::abs(potential_at(spec_, res.swept, x) - ref) / ref);
    }
    res.potential_residual = worst;
    return res;
  }
  return balayage_numeric(spec_, geometry_, nu, f_cloud_);
}

EnergyReport green_energy(const GreenKernelEngine& engine, const DiscreteMeasure& nu,
                          const DiagonalPolicy& policy) {
  EnergyReport rep;
  rep.method = "green-quadratic-form";
  if (nu.size() == 0 || nu.is_zero()) return rep;
  for (int i = 0; i < nu.size(); ++i)
    if (nu.masses[i] > 0.0 && !engine.geometry().contains(nu.cloud.point(i)))
      throw input_error("green_energy: atom outside the domain");
  const Eigen::MatrixXd g = engine.matrix(nu.cloud, policy);
  rep.value = nu.masses.dot(g * nu.masses);
  const double h = resolve_mollifier(policy, nu.cloud);
  const double delta = mollified_self_interaction(engine.spec(), 0.5 * h) -
                       mollified_self_interaction(engine.spec(), h);
  rep.estimated_error = nu.masses.squaredNorm() * std::abs(delta);
  return rep;
}

EnergyReport green_energy(const GreenKernelEngine& engine, const SignedCondenserMeasure& nu,
                          const DiagonalPolicy& policy) {
  EnergyReport p = green_energy(engine, nu.plus, policy);
  EnergyReport q = green_energy(engine, nu.minus, policy);
  EnergyReport rep;
  rep.method = "green-quadratic-form";
  double cross = 0.0;
  if (nu.plus.size() > 0 && nu.minus.size() > 0 && !nu.plus.is_zero() && !nu.minus.is_zero())
    cross = nu.plus.masses.dot(engine.matrix(nu.plus.cloud, nu.minus.cloud) * nu.minus.masses);
  rep.value = p.value + q.value - 2.0 * cross;
  rep.estimated_error = p.estimated_error + q.estimated_error;
  return rep;
}

EnergyReport green_energy(const KernelSpec& spec, const DomainGeometry& geometry,
                          const DiscreteMeasure& nu, const DiagonalPolicy& policy) {
  GreenKernelEngine engine(spec, geometry, 400, 40961);
  return green_energy(engine, nu, policy);
}

}  // namespace condlab
