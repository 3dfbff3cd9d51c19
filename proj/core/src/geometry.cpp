#include "condlab/geometry.hpp"

#include <cmath>

namespace condlab {

double RotationProfile::radius(double x1) const {
  if (exponential) return std::exp(-std::pow(std::max(x1, 0.0), s));
  if (s == 0.0) return 1.0;
  return std::pow(std::max(x1, 1e-12), -s);
}

double RotationProfile::log_radius(double x1) const {
  if (exponential) return -std::pow(std::max(x1, 0.0), s);
  if (s == 0.0) return 0.0;
  return -s * std::log(std::max(x1, 1e-12));
}

DomainGeometry DomainGeometry::make_ball(const Eigen::VectorXd& center, double radius) {
  if (!(radius > 0.0)) throw input_error("make_ball: radius must be positive");
  DomainGeometry g;
  g.kind = GeometryKind::ball;
  g.n = static_cast<int>(center.size());
  g.center = center;
  g.radius = radius;
  return g;
}

DomainGeometry DomainGeometry::make_half_space(const Eigen::VectorXd& normal, double offset) {
  if (normal.norm() == 0.0) throw input_error("make_half_space: zero normal");
  DomainGeometry g;
  g.kind = GeometryKind::half_space;
  g.n = static_cast<int>(normal.size());
  g.normal = normal.normalized();
  g.offset = offset;
  return g;
}

DomainGeometry DomainGeometry::make_ball_exterior(const Eigen::VectorXd& center, double radius) {
  if (!(radius > 0.0)) throw input_error("make_ball_exterior: radius must be positive");
  DomainGeometry g;
  g.kind = GeometryKind::ball_exterior;
  g.n = static_cast<int>(center.size());
  g.center = center;
  g.radius = radius;
  return g;
}

DomainGeometry DomainGeometry::make_rotation_body_complement(const RotationProfile& profile) {
  DomainGeometry g;
  g.kind = GeometryKind::rotation_body_complement;
  g.n = 3;
  g.profile = profile;
  return g;
}

bool DomainGeometry::contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  switch (kind) {
    case GeometryKind::ball:
      return (x - center).norm() < radius;
    case GeometryKind::half_space:
      return normal.dot(x) > offset;
    case GeometryKind::ball_exterior:
      return (x - center).norm() > radius;
    case GeometryKind::rotation_body_complement: {
      if (x[0] < 0.0) return true;
      const double r = std::hypot(x[1], x[2]);
      // inside Q iff r <= rho(x1); compare in log space for tiny radii
      if (r == 0.0) return false;
      return std::log(r) > profile.log_radius(x[0]);
    }
  }
  return false;
}

double DomainGeometry::scale() const {
  switch (kind) {
    case GeometryKind::ball:
    case GeometryKind::ball_exterior:
      return radius;
    case GeometryKind::half_space:
      return std::max(1.0, std::abs(offset));
    case GeometryKind::rotation_body_complement:
      return 1.0;
  }
  return 1.0;
}

double DomainGeometry::signed_boundary_distance(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  switch (kind) {
    case GeometryKind::ball:
      return radius - (x - center).norm();  // positive inside D
    case GeometryKind::half_space:
      return normal.dot(x) - offset;
    case GeometryKind::ball_exterior:
      return (x - center).norm() - radius;
    case GeometryKind::rotation_body_complement: {
      // approximate: radial clearance at the axial station
      const double r = std::hypot(x[1], x[2]);
      if (x[0] < 0.0) return std::max(-x[0], r);
      return r - profile.radius(x[0]);
    }
  }
  return 0.0;
}

ThinnessClass DomainGeometry::f_thinness() const {
  switch (kind) {
    case GeometryKind::ball:
    case GeometryKind::half_space:
      return ThinnessClass::not_thin;
    case GeometryKind::ball_exterior:
      return ThinnessClass::finite_capacity;  // F compact
    case GeometryKind::rotation_body_complement:
      if (!profile.exponential) return ThinnessClass::not_thin;
      return profile.s <= 1.0 ? ThinnessClass::thin_infinite_capacity
                              : ThinnessClass::finite_capacity;
  }
  return ThinnessClass::not_thin;
}

PointCloud DomainGeometry::boundary_sample(int resolution, std::uint64_t seed,
                                           const Eigen::VectorXd& focus) const {
  switch (kind) {
    case GeometryKind::ball:
    case GeometryKind::ball_exterior:
      return sample_sphere_surface(n, center, radius, resolution, seed);
    case GeometryKind::half_space: {
      Eigen::VectorXd foot = focus - (normal.dot(focus) - offset) * normal;
      const double extent = 4.0 * std::max(scale(), (focus - foot).norm() + scale());
      return sample_plane_disk(foot, normal, extent, resolution, seed);
    }
    case GeometryKind::rotation_body_complement: {
      const double x_hi = std::max(4.0, 2.0 * std::abs(focus[0]));
      auto rho = [this](double x) { return profile.radius(x); };
      return sample_rotation_surface(0.0, x_hi, rho, resolution, seed, true);
    }
  }
  throw input_error("boundary_sample: unsupported geometry");
}

PointCloud DomainGeometry::f_carrier_cloud(const KernelSpec& spec, int resolution,
                                           std::uint64_t seed,
                                           const Eigen::VectorXd& focus) const {
  const double far = 100.0 * scale();
  switch (kind) {
    case GeometryKind::ball: {
      // F = closed exterior; alpha = 2 sweeps onto the sphere, alpha < 2
      // spreads outward
      PointCloud surf = sample_sphere_surface(n, center, radius, resolution, seed);
      if (spec.is_newtonian()) return surf;
      const int shells = 24;
      PointCloud out = surf;
      const double ratio = std::pow(far / radius, 1.0 / shells);
      double r0 = radius;
      for (int s = 0; s < shells; ++s) {
        const double r1 = r0 * ratio;
        const double rm = 0.5 * (r0 + r1);
        PointCloud shell =
            sample_sphere_surface(n, center, rm, std::max(8, resolution / 8), seed + 101 + s);
        // convert area weights to volume weights for the shell
        shell.weights *= (r1 - r0);
        out = PointCloud::concat(out, shell);
        r0 = r1;
      }
      return out;
    }
    case GeometryKind::ball_exterior: {
      // F = closed ball
      PointCloud surf = sample_sphere_surface(n, center, radius, resolution, seed);
      if (spec.is_newtonian()) return surf;
      PointCloud inner =
          sample_ball_volume(n, center, radius * 0.98, std::max(16, resolution / 2), seed + 7);
      return PointCloud::concat(surf, inner);
    }
    case GeometryKind::half_space: {
      Eigen::VectorXd foot = focus - (normal.dot(focus) - offset) * normal;
      const double near_extent = 6.0 * std::max(scale(), std::abs(normal.dot(focus) - offset));
      PointCloud disk = sample_plane_disk(foot, normal, near_extent, (3 * resolution) / 4, seed);
      PointCloud ann = sample_plane_annulus(foot, normal, near_extent, far, resolution / 4,
                                            seed + 13);
      PointCloud out = PointCloud::concat(disk, ann);
      if (!spec.is_newtonian()) {
        // stack parallel layers into the interior of F
        const int layers = 10;
        double depth = 0.02 * near_extent;
        for (int l = 0; l < layers; ++l) {
          PointCloud layer = sample_plane_disk(foot - depth * normal, normal, near_extent,
                                               std::max(16, resolution / 8), seed + 29 + l);
          layer.weights *= depth;  // crude volume weighting, refined by the solver masses
          out = PointCloud::concat(out, layer);
          depth *= 1.8;
        }
      }
      return out;
    }
    case GeometryKind::rotation_body_complement: {
      const double x_hi = std::min(far, 100.0);
      auto rho = [this](double x) { return profile.radius(x); };
      return sample_rotation_surface(0.0, x_hi, rho, resolution, seed, true);
    }
  }
  throw input_error("f_carrier_cloud: unsupported geometry");
}

RotationSliceSet rotation_body_slice(const RotationProfile& profile, int k, double q) {
  if (!(q > 1.0)) throw input_error("rotation_body_slice: q must exceed 1");
  if (k < 0) throw input_error("rotation_body_slice: k must be >= 0");
  return RotationSliceSet{profile, q, k};
}

PointCloud sample_set(const AnalyticSet& set, int resolution, std::uint64_t seed) {
  if (resolution < 1) throw input_error("sample_set: resolution must be >= 1");
  return std::visit(
      [&](const auto& s) -> PointCloud {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SphereSet>) {
          return sample_sphere_surface(static_cast<int>(s.center.size()), s.center, s.radius,
                                       resolution, seed);
        } else if constexpr (std::is_same_v<T, BallSet>) {
          return sample_ball_volume(static_cast<int>(s.center.size()), s.center, s.radius,
                                    resolution, seed);
        } else if constexpr (std::is_same_v<T, RotationSliceSet>) {
          auto rho = [&s](double x) { return s.profile.radius(x); };
          return sample_rotation_surface(s.x_lo(), s.x_hi(), rho, resolution, seed, true);
        } else {
          // cylinder: sample along the local axis, then rotate into place
          auto rho = [&s](double) { return s.radius; };
          PointCloud local = sample_rotation_surface(0.0, s.length, rho, resolution, seed, true);
          Eigen::VectorXd axis = s.axis.normalized();
          const int n = static_cast<int>(s.base.size());
          Eigen::MatrixXd m(n, n);
          m.col(0) = axis;
          for (int j = 1; j < n; ++j) m.col(j) = Eigen::VectorXd::Unit(n, j % n);
          Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
          Eigen::MatrixXd rot = qr.householderQ();
          if (rot.col(0).dot(axis) < 0) rot = -rot;
          PointCloud out = local;
          for (int i = 0; i < local.size(); ++i)
            out.points.row(i) = (s.base + rot * local.point(i)).transpose();
          return out;
        }
      },
      set);
}

bool set_contains(const AnalyticSet& set, const Eigen::Ref<const Eigen::VectorXd>& x,
                  double tol) {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SphereSet>) {
          return std::abs((x - s.center).norm() - s.radius) <= tol;
        } else if constexpr (std::is_same_v<T, BallSet>) {
          return (x - s.center).norm() <= s.radius + tol;
        } else if constexpr (std::is_same_v<T, RotationSliceSet>) {
          if (x[0] < s.x_lo() - tol || x[0] >= s.x_hi() + tol) return false;
          const double r = std::hypot(x[1], x[2]);
          if (r == 0.0) return true;
          return std::log(r) <= s.profile.log_radius(x[0]) + tol;
        } else {
          Eigen::VectorXd axis = s.axis.normalized();
          const double t = axis.dot(x - s.base);
          if (t < -tol || t > s.length + tol) return false;
          return (x - s.base - t * axis).norm() <= s.radius + tol;
        }
      },
      set);
}

}  // namespace condlab
