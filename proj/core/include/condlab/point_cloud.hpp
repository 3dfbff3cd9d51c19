#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "condlab/kernel.hpp"

namespace condlab {

// Weighted point cloud: discretization carrier for surfaces and volumes.
// Rows of `points` are n-dimensional coordinates, `weights` the quadrature
// weights (area or volume units).
struct PointCloud {
  Eigen::MatrixXd points;   // N x n
  Eigen::VectorXd weights;  // N, all >= 0

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
  double total_weight() const { return weights.sum(); }
  Eigen::VectorXd point(int i) const { return points.row(i).transpose(); }

  double min_separation() const;
  // circumradius about the origin
  double circumradius() const;

  void validate(double h_min) const;

  // concatenate two clouds
  static PointCloud concat(const PointCloud& a, const PointCloud& b);
};

// default conditioning floor relative to geometry scale
inline constexpr double kMinSeparationFactor = 1e-6;

// Deterministic sphere-surface sample (area weights summing to the exact
// surface area). Fibonacci lattice for n=3, seeded directions otherwise.
PointCloud sample_sphere_surface(int n, const Eigen::VectorXd& center, double radius,
                                 int resolution, std::uint64_t seed);

// Deterministic Halton-based volume sample of a ball (volume weights).
PointCloud sample_ball_volume(int n, const Eigen::VectorXd& center, double radius, int resolution,
                              std::uint64_t seed);

// Lateral surface of a rotation body around the x1-axis between x1 in
// [a,b], radius profile rho(x1); optional end disks. n = 3 only.
PointCloud sample_rotation_surface(double a, double b, const std::function<double(double)>& rho,
                                   int resolution, std::uint64_t seed, bool end_disks);

// Flat disk of given radius in the hyperplane through `center` orthogonal
// to `normal` (area weights); used for half-space boundary sampling.
PointCloud sample_plane_disk(const Eigen::VectorXd& center, const Eigen::VectorXd& normal,
                             double radius, int resolution, std::uint64_t seed);

// Annular rings in the hyperplane, geometrically graded radii in
// [r_inner, r_outer]; far-field companion to sample_plane_disk.
PointCloud sample_plane_annulus(const Eigen::VectorXd& center, const Eigen::VectorXd& normal,
                                double r_inner, double r_outer, int resolution,
                                std::uint64_t seed);

}  // namespace condlab
