#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "condlab/kernel_matrix.hpp"
#include "condlab/measures.hpp"

namespace condlab {

struct singular_evaluation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnergyReport {
  double value = 0.0;
  double estimated_error = 0.0;
  std::string method;
};

// Mollifier matched to surface quadrature: the diagonal reproduces the
// self-energy of a uniform disk patch of the atom's quadrature area.
DiagonalPolicy surface_mollifier(const PointCloud& cloud);

// Quadrature over a truncation ball: radial shells (geometric, with
// refinement bands around the given feature radii) times a direction set
// per shell. Cell volumes sum exactly to the ball volume.
struct GridQuadrature {
  Eigen::MatrixXd points;   // M x n
  Eigen::VectorXd volumes;  // M
  Eigen::VectorXd center;
  double r_trunc = 0.0;
  int directions = 0;
  std::vector<int> shell_start;  // shells + 1 offsets into the cell arrays
  std::vector<double> shell_radius;

  int cells() const { return static_cast<int>(points.rows()); }
  int shells() const { return static_cast<int>(shell_start.size()) - 1; }
};

GridQuadrature make_grid_quadrature(int n, const Eigen::VectorXd& center, double r_trunc,
                                    int radial, int angular,
                                    const std::vector<double>& feature_radii, double feature_h,
                                    std::uint64_t seed);

// grid sized for the given measures: center at the joint centroid,
// truncation at trunc_factor times the support circumradius
GridQuadrature grid_for_measures(const KernelSpec& spec,
                                 const std::vector<const DiscreteMeasure*>& measures, int radial,
                                 int angular, double trunc_factor, std::uint64_t seed);

double potential_at(const KernelSpec& spec, const DiscreteMeasure& m,
                    const Eigen::VectorXd& x);
double potential_at(const KernelSpec& spec, const SignedCondenserMeasure& m,
                    const Eigen::VectorXd& x);
// capped evaluation: distances below h are replaced by h
double potential_at_mollified(const KernelSpec& spec, const DiscreteMeasure& m,
                              const Eigen::VectorXd& x, double h);

// half-order potential with per-atom distance caps (patch smearing)
double half_order_potential_at(const KernelSpec& spec, const SignedCondenserMeasure& m,
                               const Eigen::VectorXd& x, const Eigen::VectorXd& caps_plus,
                               const Eigen::VectorXd& caps_minus);

EnergyReport standard_energy(const KernelSpec& spec, const DiscreteMeasure& mu,
                             const DiagonalPolicy& policy = DiagonalPolicy::mollify());
EnergyReport standard_energy(const KernelSpec& spec, const SignedCondenserMeasure& mu,
                             const DiagonalPolicy& policy = DiagonalPolicy::mollify());

double mutual_energy(const KernelSpec& spec, const DiscreteMeasure& mu,
                     const DiscreteMeasure& nu);
// bilinear form against a signed pair: <mu, theta.plus - theta.minus>
double mutual_energy(const KernelSpec& spec, const SignedCondenserMeasure& mu,
                     const SignedCondenserMeasure& theta);

EnergyReport weak_energy(const KernelSpec& spec, const SignedCondenserMeasure& mu,
                         const GridQuadrature& grid);
inline EnergyReport weak_energy(const KernelSpec& spec, const DiscreteMeasure& mu,
                                const GridQuadrature& grid) {
  return weak_energy(spec, SignedCondenserMeasure{mu, DiscreteMeasure{}}, grid);
}

// weak norm squared plus twice the L2 inner product of half-order
// potentials against the field pair
double gauss_integral_weak(const KernelSpec& spec, const SignedCondenserMeasure& mu,
                           const SignedCondenserMeasure& theta, const GridQuadrature& grid);
double gauss_integral_standard(const KernelSpec& spec, const SignedCondenserMeasure& mu,
                               const SignedCondenserMeasure& theta);

}  // namespace condlab
