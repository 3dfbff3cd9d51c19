#include "condlab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace condlab {

namespace {

constexpr double kGoldenAngleGrid = 2.399963229728653;

Eigen::VectorXd per_atom_caps(const PointCloud& cloud) {
  const int n = cloud.size();
  Eigen::VectorXd caps(n);
  if (n == 1) {
    caps[0] = kMinSeparationFactor;
    return caps;
  }
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, (cloud.points.row(i) - cloud.points.row(j)).norm());
    }
    caps[i] = 0.5 * std::max(best, kMinSeparationFactor);
  }
  return caps;
}

// sum of m_i * max(d_i, cap_i)^e
double capped_power_sum(const Eigen::MatrixXd& pts, const Eigen::VectorXd& masses,
                        const Eigen::VectorXd& caps, const Eigen::VectorXd& x, double e) {
  double acc = 0.0;
  const bool inv_square = e == -2.0;
  for (int i = 0; i < pts.rows(); ++i) {
    const double d = std::max((pts.row(i).transpose() - x).norm(), caps[i]);
    acc += inv_square ? masses[i] / (d * d) : masses[i] * std::pow(d, e);
  }
  return acc;
}

struct HalfOrderField {
  const KernelSpec* spec;
  const SignedCondenserMeasure* m;
  Eigen::VectorXd caps_plus, caps_minus;
  double scale;  // composition normalization
  double e;

  explicit HalfOrderField(const KernelSpec& s, const SignedCondenserMeasure& mm)
      : spec(&s), m(&mm) {
    if (mm.plus.size() > 0) caps_plus = per_atom_caps(mm.plus.cloud);
    if (mm.minus.size() > 0) caps_minus = per_atom_caps(mm.minus.cloud);
    scale = 1.0 / std::sqrt(riesz_composition_constant(s));
    e = 0.5 * s.alpha - s.n;
  }

  double operator()(const Eigen::VectorXd& x) const {
    double u = 0.0;
    if (m->plus.size() > 0)
      u += capped_power_sum(m->plus.cloud.points, m->plus.masses, caps_plus, x, e);
    if (m->minus.size() > 0)
      u -= capped_power_sum(m->minus.cloud.points, m->minus.masses, caps_minus, x, e);
    return scale * u;
  }

  bool empty() const {
    return (m->plus.size() == 0 || m->plus.is_zero()) &&
           (m->minus.size() == 0 || m->minus.is_zero());
  }

  double net_mass() const { return m->plus.total_mass() - m->minus.total_mass(); }
  double gross_mass() const { return m->plus.total_mass() + m->minus.total_mass(); }

  double support_circumradius(const Eigen::VectorXd& c) const {
    double r = 0.0;
    if (m->plus.size() > 0)
      r = std::max(r, (m->plus.cloud.points.rowwise() - c.transpose()).rowwise().norm().maxCoeff());
    if (m->minus.size() > 0)
      r = std::max(r,
                   (m->minus.cloud.points.rowwise() - c.transpose()).rowwise().norm().maxCoeff());
    return r;
  }
};

void check_grid(const GridQuadrature& grid, const HalfOrderField& f) {
  const double circ = f.support_circumradius(grid.center);
  if (grid.r_trunc < 10.0 * circ * (1.0 - 1e-12))
    throw input_error("weak energy grid: truncation radius below 10x support circumradius");
}

double tail_denominator(const KernelSpec& spec, bool balanced) {
  return balanced ? (spec.n + 2.0 - spec.alpha) : (spec.n - spec.alpha);
}

}  // namespace

DiagonalPolicy surface_mollifier(const PointCloud& cloud) {
  if (cloud.size() < 3 || cloud.weights.minCoeff() <= 0.0) return DiagonalPolicy::mollify();
  return DiagonalPolicy::patch();
}

GridQuadrature make_grid_quadrature(int n, const Eigen::VectorXd& center, double r_trunc,
                                    int radial, int angular,
                                    const std::vector<double>& feature_radii, double feature_h,
                                    std::uint64_t seed) {
  if (n < 3) throw input_error("make_grid_quadrature: n must be >= 3");
  if (center.size() != n) throw input_error("make_grid_quadrature: center dimension mismatch");
  if (!(r_trunc > 0.0)) throw input_error("make_grid_quadrature: r_trunc must be positive");
  if (radial < 8 || angular < 8)
    throw input_error("make_grid_quadrature: need at least 8 radial and angular nodes");

  std::vector<double> mesh;
  const double r_min = 1e-4 * r_trunc;
  for (int k = 0; k <= radial; ++k)
    mesh.push_back(r_min * std::pow(r_trunc / r_min, static_cast<double>(k) / radial));
  const double h = feature_h > 0.0 ? feature_h : 1e-3 * r_trunc;
  for (double rho : feature_radii) {
    if (!(rho > 0.0) || rho >= r_trunc) continue;
    mesh.push_back(rho);
    for (double t = 0.5 * h; t < 0.6 * rho; t *= 1.6) {
      if (rho - t > 0.0) mesh.push_back(rho - t);
      if (rho + t < r_trunc) mesh.push_back(rho + t);
    }
  }
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end(),
                         [&](double a, double b) { return b - a < 1e-9 * r_trunc; }),
             mesh.end());
  if (mesh.front() > 0.0) mesh.insert(mesh.begin(), 0.0);
  mesh.back() = r_trunc;

  const int shells = static_cast<int>(mesh.size()) - 1;
  const double vn = unit_ball_volume(n);

  GridQuadrature grid;
  grid.center = center;
  grid.r_trunc = r_trunc;
  grid.directions = angular;
  grid.points.resize(shells * angular, n);
  grid.volumes.resize(shells * angular);
  grid.shell_start.resize(shells + 1);
  grid.shell_radius.resize(shells);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  int row = 0;
  for (int k = 0; k < shells; ++k) {
    const double a = mesh[k], b = mesh[k + 1];
    const double vol = vn * (std::pow(b, n) - std::pow(a, n));
    const double num = std::pow(b, n + 1) - std::pow(a, n + 1);
    const double den = std::pow(b, n) - std::pow(a, n);
    const double rc = den > 0.0 ? (static_cast<double>(n) / (n + 1)) * num / den : 0.5 * (a + b);
    grid.shell_start[k] = row;
    grid.shell_radius[k] = rc;
    for (int j = 0; j < angular; ++j) {
      Eigen::VectorXd dir(n);
      if (n == 3) {
        const double z = 1.0 - (2.0 * j + 1.0) / angular;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = j * kGoldenAngleGrid + k * 1.0;
        dir << r * std::cos(phi), r * std::sin(phi), z;
      } else {
        do {
          for (int d = 0; d < n; ++d) dir[d] = gauss(rng);
        } while (dir.norm() < 1e-12);
        dir.normalize();
      }
      grid.points.row(row) = (center + rc * dir).transpose();
      grid.volumes[row] = vol / angular;
      ++row;
    }
  }
  grid.shell_start[shells] = row;
  return grid;
}

GridQuadrature grid_for_measures(const KernelSpec&,
                                 const std::vector<const DiscreteMeasure*>& measures, int radial,
                                 int angular, double trunc_factor, std::uint64_t seed) {
  std::vector<const DiscreteMeasure*> live;
  for (const auto* m : measures)
    if (m && m->size() > 0) live.push_back(m);
  if (live.empty()) throw input_error("grid_for_measures: no atoms supplied");
  const int n = live.front()->cloud.dim();

  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  double total = 0.0;
  int count = 0;
  for (const auto* m : live) {
    for (int i = 0; i < m->size(); ++i) {
      c += m->masses[i] * m->cloud.point(i);
      ++count;
    }
    total += m->total_mass();
  }
  if (total > 1e-12) {
    c /= total;
  } else {
    c.setZero();
    for (const auto* m : live)
      for (int i = 0; i < m->size(); ++i) c += m->cloud.point(i);
    c /= count;
  }

  std::vector<double> radii;
  double circ = 0.0;
  double min_sep = std::numeric_limits<double>::infinity();
  for (const auto* m : live) {
    for (int i = 0; i < m->size(); ++i) {
      const double r = (m->cloud.point(i) - c).norm();
      radii.push_back(r);
      circ = std::max(circ, r);
    }
    if (m->size() > 1) min_sep = std::min(min_sep, m->cloud.min_separation());
  }
  if (!std::isfinite(min_sep)) min_sep = 0.1 * std::max(circ, 1.0);
  const double feature_h = 0.5 * min_sep;

  // cluster atom radii into a short feature list
  std::sort(radii.begin(), radii.end());
  std::vector<double> features;
  double acc = radii[0];
  int cnt = 1;
  for (size_t i = 1; i < radii.size(); ++i) {
    if (radii[i] - radii[i - 1] > std::max(2.0 * feature_h, 0.02 * std::max(circ, 1e-12))) {
      features.push_back(acc / cnt);
      acc = 0.0;
      cnt = 0;
    }
    acc += radii[i];
    ++cnt;
  }
  features.push_back(acc / cnt);
  if (features.size() > 16) {
    std::vector<double> kept;
    for (size_t i = 0; i < 16; ++i)
      kept.push_back(features[i * (features.size() - 1) / 15]);
    features = kept;
  }

  const double r_trunc = std::max(trunc_factor, 10.0) * std::max(circ, 1e-6);
  return make_grid_quadrature(n, c, r_trunc, radial, angular, features, feature_h, seed);
}

double potential_at(const KernelSpec& spec, const DiscreteMeasure& m,
                    const Eigen::VectorXd& x) {
  if (m.size() == 0) return 0.0;
  if (x.size() != m.cloud.dim()) throw input_error("potential_at: dimension mismatch");
  double acc = 0.0;
  const double guard = 1e-9 * (1.0 + x.norm());
  for (int i = 0; i < m.size(); ++i) {
    const double d = (m.cloud.point(i) - x).norm();
    if (d < guard && m.masses[i] > 0.0)
      throw singular_evaluation("potential_at: evaluation point coincides with an atom");
    acc += m.masses[i] * riesz_kernel_distance(spec, d);
  }
  return acc;
}

double potential_at(const KernelSpec& spec, const SignedCondenserMeasure& m,
                    const Eigen::VectorXd& x) {
  double v = 0.0;
  if (m.plus.size() > 0) v += potential_at(spec, m.plus, x);
  if (m.minus.size() > 0) v -= potential_at(spec, m.minus, x);
  return v;
}

double potential_at_mollified(const KernelSpec& spec, const DiscreteMeasure& m,
                              const Eigen::VectorXd& x, double h) {
  if (m.size() == 0) return 0.0;
  if (!(h > 0.0)) throw input_error("potential_at_mollified: h must be positive");
  double acc = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    const double d = (m.cloud.point(i) - x).norm();
    acc += m.masses[i] * (d <= h ? mollified_self_interaction(spec, h)
                                 : riesz_kernel_distance(spec, d));
  }
  return acc;
}

double half_order_potential_at(const KernelSpec& spec, const SignedCondenserMeasure& m,
                               const Eigen::VectorXd& x, const Eigen::VectorXd& caps_plus,
                               const Eigen::VectorXd& caps_minus) {
  const double scale = 1.0 / std::sqrt(riesz_composition_constant(spec));
  const double e = 0.5 * spec.alpha - spec.n;
  double u = 0.0;
  if (m.plus.size() > 0)
    u += capped_power_sum(m.plus.cloud.points, m.plus.masses, caps_plus, x, e);
  if (m.minus.size() > 0)
    u -= capped_power_sum(m.minus.cloud.points, m.minus.masses, caps_minus, x, e);
  return scale * u;
}

EnergyReport standard_energy(const KernelSpec& spec, const DiscreteMeasure& mu,
                             const DiagonalPolicy& policy) {
  EnergyReport rep;
  rep.method = "quadratic-form";
  if (mu.size() == 0 || mu.is_zero()) return rep;
  const Eigen::MatrixXd k = assemble_kernel_matrix(spec, mu.cloud, policy);
  rep.value = mu.masses.dot(k * mu.masses);
  const double h = resolve_mollifier(policy, mu.cloud);
  const double delta = mollified_self_interaction(spec, 0.5 * h) - mollified_self_interaction(spec, h);
  rep.estimated_error = mu.masses.squaredNorm() * std::abs(delta);
  return rep;
}

EnergyReport standard_energy(const KernelSpec& spec, const SignedCondenserMeasure& mu,
                             const DiagonalPolicy& policy) {
  EnergyReport p = standard_energy(spec, mu.plus, policy);
  EnergyReport q = standard_energy(spec, mu.minus, policy);
  EnergyReport rep;
  rep.method = "quadratic-form";
  rep.value = p.value + q.value - 2.0 * mutual_energy(spec, mu.plus, mu.minus);
  rep.estimated_error = p.estimated_error + q.estimated_error;
  return rep;
}

double mutual_energy(const KernelSpec& spec, const DiscreteMeasure& mu,
                     const DiscreteMeasure& nu) {
  if (mu.size() == 0 || nu.size() == 0 || mu.is_zero() || nu.is_zero()) return 0.0;
  double ms = std::numeric_limits<double>::infinity();
  if (mu.size() > 1) ms = std::min(ms, mu.cloud.min_separation());
  if (nu.size() > 1) ms = std::min(ms, nu.cloud.min_separation());
  const double h = std::isfinite(ms) ? std::max(0.5 * ms, kMinSeparationFactor)
                                     : kMinSeparationFactor;
  const Eigen::MatrixXd k =
      assemble_kernel_matrix(spec, mu.cloud, nu.cloud, DiagonalPolicy::mollify(h));
  return mu.masses.dot(k * nu.masses);
}

double mutual_energy(const KernelSpec& spec, const SignedCondenserMeasure& mu,
                     const SignedCondenserMeasure& theta) {
  double v = 0.0;
  v += mutual_energy(spec, mu.plus, theta.plus);
  v -= mutual_energy(spec, mu.plus, theta.minus);
  v -= mutual_energy(spec, mu.minus, theta.plus);
  v += mutual_energy(spec, mu.minus, theta.minus);
  return v;
}

EnergyReport weak_energy(const KernelSpec& spec, const SignedCondenserMeasure& mu,
                         const GridQuadrature& grid) {
  EnergyReport rep;
  HalfOrderField f(spec, mu);
  if (f.empty()) {
    rep.method = "grid";
    return rep;
  }
  check_grid(grid, f);

  double main = 0.0;
  double half = 0.0;
  int half_count = 0;
  const int j_lo = grid.shell_start[grid.shells() - 1];
  const int j_hi = grid.shell_start[grid.shells()];
  double u2_last = 0.0;

  for (int c = 0; c < grid.cells(); ++c) {
    const double u = f(grid.points.row(c).transpose());
    const double term = u * u * grid.volumes[c];
    main += term;
    const int within = c % grid.directions;
    if (within % 2 == 0) {
      half += 2.0 * term;
      ++half_count;
    }
    if (c >= j_lo && c < j_hi) u2_last += u * u;
  }
  u2_last /= (j_hi - j_lo);

  const bool balanced = std::abs(f.net_mass()) <= 1e-6 * std::max(f.gross_mass(), 1e-300);
  const double r_last = grid.shell_radius.back();
  const double tail = u2_last * unit_sphere_area(spec.n) * std::pow(r_last, spec.n) /
                      tail_denominator(spec, balanced);

  rep.value = main + tail;
  rep.estimated_error = std::abs(main - half) + tail;
  rep.method = balanced ? "grid" : "grid-monopole-tail";
  return rep;
}

double gauss_integral_weak(const KernelSpec& spec, const SignedCondenserMeasure& mu,
                           const SignedCondenserMeasure& theta, const GridQuadrature& grid) {
  HalfOrderField fm(spec, mu);
  HalfOrderField ft(spec, theta);
  if (fm.empty()) return 0.0;
  if (ft.empty()) return weak_energy(spec, mu, grid).value;
  check_grid(grid, fm);
  check_grid(grid, ft);

  double norm2 = 0.0;
  double inner = 0.0;
  const int j_lo = grid.shell_start[grid.shells() - 1];
  const int j_hi = grid.shell_start[grid.shells()];
  double u2_last = 0.0, uv_last = 0.0;

  for (int c = 0; c < grid.cells(); ++c) {
    const Eigen::VectorXd x = grid.points.row(c).transpose();
    const double u = fm(x);
    const double v = ft(x);
    norm2 += u * u * grid.volumes[c];
    inner += u * v * grid.volumes[c];
    if (c >= j_lo && c < j_hi) {
      u2_last += u * u;
      uv_last += u * v;
    }
  }
  u2_last /= (j_hi - j_lo);
  uv_last /= (j_hi - j_lo);

  const bool mu_bal = std::abs(fm.net_mass()) <= 1e-6 * std::max(fm.gross_mass(), 1e-300);
  const bool both_bal =
      mu_bal && std::abs(ft.net_mass()) <= 1e-6 * std::max(ft.gross_mass(), 1e-300);
  const double r_last = grid.shell_radius.back();
  const double area = unit_sphere_area(spec.n);
  const double tail_norm =
      u2_last * area * std::pow(r_last, spec.n) / tail_denominator(spec, mu_bal);
  const double tail_inner =
      uv_last * area * std::pow(r_last, spec.n) / tail_denominator(spec, both_bal);

  return norm2 + tail_norm + 2.0 * (inner + tail_inner);
}

double gauss_integral_standard(const KernelSpec& spec, const SignedCondenserMeasure& mu,
                               const SignedCondenserMeasure& theta) {
  return standard_energy(spec, mu, DiagonalPolicy::patch()).value +
         2.0 * mutual_energy(spec, mu, theta);
}

}  // namespace condlab
