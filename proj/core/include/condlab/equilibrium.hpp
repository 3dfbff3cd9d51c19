#pragma once

#include <optional>

#include "condlab/green.hpp"

namespace condlab {

struct EquilibriumResult {
  DiscreteMeasure gamma;
  double capacity = 0.0;
  double energy = 0.0;
  double potential_min = 0.0;  // over support atoms
  double potential_max = 0.0;
  int iterations = 0;
  bool converged = false;
};

// min energy - 2 mass over nonnegative measures on the cloud; at the
// optimum the potential is 1 on the support and energy = mass = capacity
EquilibriumResult riesz_equilibrium(const KernelSpec& spec, const PointCloud& cloud,
                                    const std::optional<DiagonalPolicy>& policy = {});
double riesz_capacity(const KernelSpec& spec, const PointCloud& cloud,
                      const std::optional<DiagonalPolicy>& policy = {});

EquilibriumResult green_equilibrium(const GreenKernelEngine& engine, const PointCloud& q_cloud,
                                    const std::optional<DiagonalPolicy>& policy = {});

struct WienerRow {
  int k = 0;
  double capacity = 0.0;
  double wiener_term = 0.0;
  double cumulative = 0.0;  // partial sum of the raw capacities
};

struct ThinnessVerdict {
  ThinnessClass classification = ThinnessClass::not_thin;
  bool classified = false;  // verdict asserted only for alpha=2, n=3
  std::vector<WienerRow> rows;
  double q = 2.0;
  double wiener_slope = 0.0;    // fitted log wiener_term per k
  double capacity_slope = 0.0;  // fitted log capacity per k
};

// capacity of one axial slice of the rotation body, over x1 in
// [q^k, q^(k+1)); thin slices use a charged-wire model in log space
double slice_capacity(const KernelSpec& spec, const RotationProfile& profile, int k, double q,
                      int resolution, std::uint64_t seed);

ThinnessVerdict wiener_thinness_diagnostic(const KernelSpec& spec, const RotationProfile& profile,
                                           double q = 2.0, int k_max = 10, int resolution = 200,
                                           std::uint64_t seed = 77, int jobs = 1);

}  // namespace condlab
