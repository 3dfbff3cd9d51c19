#pragma once

#include "condlab/point_cloud.hpp"

namespace condlab {

// Diagonal handling for kernel matrices: discrete atoms have infinite
// self-interaction, so coincident points either get 0 (exclude) or the
// self-energy of a uniform ball of radius h (mollify).
struct DiagonalPolicy {
  enum class Kind { exclude, mollify, patch };
  Kind kind = Kind::mollify;
  double h = 0.0;  // 0 = auto: half the minimum pairwise separation

  static DiagonalPolicy exclude() { return {Kind::exclude, 0.0}; }
  static DiagonalPolicy mollify(double h = 0.0) { return {Kind::mollify, h}; }
  // per-atom mollifier radii from the quadrature weights
  static DiagonalPolicy patch() { return {Kind::patch, 0.0}; }
};

// Per-atom mollifier radii matched to the atom's quadrature cell. Area
// weights (spacing ~ sqrt(w)) get the lattice-calibrated disk radius,
// volume weights the exact cell-ball radius.
Eigen::VectorXd patch_radii(const PointCloud& cloud);

// h actually used for a given cloud under the policy (mean radius for
// the patch policy)
double resolve_mollifier(const DiagonalPolicy& policy, const PointCloud& cloud);

Eigen::MatrixXd assemble_kernel_matrix(const KernelSpec& spec, const PointCloud& rows,
                                       const PointCloud& cols, const DiagonalPolicy& policy);

inline Eigen::MatrixXd assemble_kernel_matrix(const KernelSpec& spec, const PointCloud& cloud,
                                              const DiagonalPolicy& policy) {
  return assemble_kernel_matrix(spec, cloud, cloud, policy);
}

}  // namespace condlab
