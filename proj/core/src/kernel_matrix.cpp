#include "condlab/kernel_matrix.hpp"

#include <cmath>

namespace condlab {

Eigen::VectorXd patch_radii(const PointCloud& cloud) {
  const int m = cloud.size();
  if (m < 3 || cloud.weights.minCoeff() <= 0.0) {
    const double h = m < 2 ? kMinSeparationFactor : 0.5 * cloud.min_separation();
    return Eigen::VectorXd::Constant(m, std::max(h, kMinSeparationFactor));
  }
  const double mean_w = cloud.total_weight() / m;

  // mean nearest-neighbor spacing tells area weights (spacing ~ sqrt(w))
  // from volume weights (spacing ~ cbrt(w))
  Eigen::VectorXd nn(m);
  for (int i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j)
      if (j != i) best = std::min(best, (cloud.point(i) - cloud.point(j)).norm());
    nn[i] = best;
  }
  const double spacing = nn.mean();
  const bool surface = spacing < 1.2 * std::sqrt(mean_w);

  Eigen::VectorXd r(m);
  for (int i = 0; i < m; ++i) {
    // calibrated so that the lattice sum plus the mollified diagonal
    // reproduces the continuum energy of a uniform layer
    if (surface)
      r[i] = 0.5461 * std::sqrt(cloud.weights[i] / M_PI);
    else
      r[i] = std::cbrt(3.0 * cloud.weights[i] / (4.0 * M_PI));
    // keep the smeared balls disjoint so the Newtonian quadratic form
    // stays a true Gram matrix (positive semidefinite)
    r[i] = std::min(r[i], 0.45 * nn[i]);
    r[i] = std::max(r[i], kMinSeparationFactor);
  }
  return r;
}

double resolve_mollifier(const DiagonalPolicy& policy, const PointCloud& cloud) {
  if (policy.h > 0.0) return policy.h;
  if (policy.kind == DiagonalPolicy::Kind::patch) return patch_radii(cloud).mean();
  if (cloud.size() < 2) return kMinSeparationFactor;
  return 0.5 * cloud.min_separation();
}

Eigen::MatrixXd assemble_kernel_matrix(const KernelSpec& spec, const PointCloud& rows,
                                       const PointCloud& cols, const DiagonalPolicy& policy) {
  if (rows.size() == 0 || cols.size() == 0)
    throw input_error("assemble_kernel_matrix: empty cloud");
  if (rows.dim() != spec.n || cols.dim() != spec.n)
    throw input_error("assemble_kernel_matrix: cloud dimension does not match kernel spec");
  if (!rows.points.allFinite() || !cols.points.allFinite())
    throw input_error("assemble_kernel_matrix: non-finite coordinates");

  const bool square = rows.points.rows() == cols.points.rows() && rows.points == cols.points;

  Eigen::VectorXd diag;
  Eigen::VectorXd tiny;
  if (policy.kind == DiagonalPolicy::Kind::mollify) {
    const double h = resolve_mollifier(policy, rows);
    diag = Eigen::VectorXd::Constant(rows.size(), mollified_self_interaction(spec, h));
    tiny = Eigen::VectorXd::Constant(rows.size(), 0.25 * h);
  } else if (policy.kind == DiagonalPolicy::Kind::patch) {
    const Eigen::VectorXd r = patch_radii(rows);
    diag.resize(rows.size());
    for (int i = 0; i < rows.size(); ++i) diag[i] = mollified_self_interaction(spec, r[i]);
    tiny = 0.25 * r;
  } else {
    diag = Eigen::VectorXd::Zero(rows.size());
    tiny = Eigen::VectorXd::Zero(rows.size());
  }

  Eigen::MatrixXd k(rows.size(), cols.size());
  for (int i = 0; i < rows.size(); ++i) {
    const int j0 = square ? i : 0;
    for (int j = j0; j < cols.size(); ++j) {
      const double r = (rows.points.row(i) - cols.points.row(j)).norm();
      double v;
      if (r <= tiny[i])
        v = diag[i];  // coincident up to the mollification radius
      else
        v = riesz_kernel_distance(spec, r);
      k(i, j) = v;
      if (square) k(j, i) = v;
    }
  }
  return k;
}

}  // namespace condlab
