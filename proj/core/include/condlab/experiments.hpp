#pragma once

#include <functional>

#include "condlab/solver.hpp"

namespace condlab {

// Receding-cylinder construction in a half-space: probability equilibrium
// measures on ever longer far slices whose Green energies fall below 1/k,
// driving the constrained infimum to zero.
struct UnsolvabilityStep {
  int k = 0;
  double start = 0.0;
  double length = 0.0;
  double capacity = 0.0;
  double green_norm_sq = 0.0;   // 1/capacity route
  double weak_objective = 0.0;  // standard energy of nu_k - nu_k' route
};

struct UnsolvabilityRecord {
  std::vector<UnsolvabilityStep> steps;
  bool bound_satisfied = false;  // green_norm_sq <= 1/k for every step
  bool monotone = false;         // weak objectives nonincreasing
};

UnsolvabilityRecord unsolvability_demo(const KernelSpec& spec, const DomainGeometry& half_space,
                                       double depth, double radius, int k_max,
                                       int resolution = 240, std::uint64_t seed = 5);

struct ContinuityStep {
  int k = 0;
  double objective = 0.0;
  double gap = 0.0;              // |objective_k - limit objective|
  double lambda_distance = 0.0;  // Green-energy distance to the limit minimizer
  bool converged = false;
};

struct ContinuityRecord {
  double limit_objective = 0.0;
  double limit_norm = 0.0;  // Green norm of the limit minimizer
  std::vector<ContinuityStep> steps;
  bool monotone = false;       // objectives nondecreasing toward the limit
  bool all_converged = false;  // every family solve plus the limit solve
};

// Family of shrinking plates / loosening constraints against the limit
// problem; clouds may coincide with the limit A-cloud.
ContinuityRecord continuity_experiment(const CondenserProblem& limit_problem,
                                       const std::vector<PointCloud>& a_clouds,
                                       const std::vector<Constraint>& sigmas);

struct RefinementRow {
  int resolution = 0;
  double e_green = 0.0;       // E_g(lambda_plus)
  double e_alpha_plus = 0.0;  // standard energy of lambda_plus
  double e_alpha_dot = 0.0;   // standard energy of the signed pair
};

struct RefinementRecord {
  std::vector<RefinementRow> rows;
};

RefinementRecord weak_vs_standard_refinement_study(
    const std::function<CondenserProblem(int)>& make_problem,
    const std::vector<int>& resolutions);

}  // namespace condlab
