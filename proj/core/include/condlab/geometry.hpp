#pragma once

#include <optional>
#include <variant>

#include "condlab/point_cloud.hpp"

namespace condlab {

// Radius profile of a rotation body around the positive x1-axis.
// Power family: rho(x1) = x1^(-s), s >= 0.
// Exponential family: rho(x1) = exp(-x1^s), s > 0.
struct RotationProfile {
  bool exponential = false;
  double s = 0.0;

  double radius(double x1) const;
  // natural log of the radius, safe where radius() underflows
  double log_radius(double x1) const;
};

// Classification of a closed set's behavior at infinity.
enum class ThinnessClass { not_thin, thin_infinite_capacity, finite_capacity };

enum class GeometryKind { ball, half_space, ball_exterior, rotation_body_complement };

// Closed-form description of the domain D (open, connected) and its
// complement F. Also supplies boundary samplers and carrier clouds for
// measures swept onto F.
struct DomainGeometry {
  GeometryKind kind;
  int n = 3;
  Eigen::VectorXd center;  // ball / ball_exterior
  double radius = 1.0;
  Eigen::VectorXd normal;  // half_space: D = { x : normal.x > offset }
  double offset = 0.0;
  RotationProfile profile;  // rotation_body_complement (n = 3 only)

  static DomainGeometry make_ball(const Eigen::VectorXd& center, double radius);
  static DomainGeometry make_half_space(const Eigen::VectorXd& normal, double offset);
  static DomainGeometry make_ball_exterior(const Eigen::VectorXd& center, double radius);
  static DomainGeometry make_rotation_body_complement(const RotationProfile& profile);

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;  // x in D (open)
  bool in_complement(const Eigen::Ref<const Eigen::VectorXd>& x) const { return !contains(x); }

  double scale() const;
  double signed_boundary_distance(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  // Known classification of F = D^c at infinity; rotation bodies are
  // classified via their profile family.
  ThinnessClass f_thinness() const;
  bool f_thin_at_infinity() const { return f_thinness() != ThinnessClass::not_thin; }

  // points on the boundary of D near `focus`
  PointCloud boundary_sample(int resolution, std::uint64_t seed,
                             const Eigen::VectorXd& focus) const;

  // Carrier cloud on F for swept measures: boundary-concentrated samples
  // plus a geometric far-field tail out to 100x the geometry scale.
  // For alpha < 2 the swept density spreads into the interior of F, so
  // interior samples are added.
  PointCloud f_carrier_cloud(const KernelSpec& spec, int resolution, std::uint64_t seed,
                             const Eigen::VectorXd& focus) const;
};

// --- analytic sets (samplable descriptions) ---

struct SphereSet {
  Eigen::VectorXd center;
  double radius;
};
struct BallSet {
  Eigen::VectorXd center;
  double radius;
};
// slice of a rotation body over the axial interval [q^k, q^(k+1))
struct RotationSliceSet {
  RotationProfile profile;
  double q;
  int k;
  double x_lo() const { return std::pow(q, k); }
  double x_hi() const { return std::pow(q, k + 1); }
};
// lateral surface (plus end disks) of a straight cylinder
struct CylinderSet {
  Eigen::VectorXd base;  // center of the starting disk
  Eigen::VectorXd axis;  // unit direction
  double length;
  double radius;
};

using AnalyticSet = std::variant<SphereSet, BallSet, RotationSliceSet, CylinderSet>;

PointCloud sample_set(const AnalyticSet& set, int resolution, std::uint64_t seed);

RotationSliceSet rotation_body_slice(const RotationProfile& profile, int k, double q);

bool set_contains(const AnalyticSet& set, const Eigen::Ref<const Eigen::VectorXd>& x,
                  double tol = 1e-9);

}  // namespace condlab
