#pragma once

#include "condlab/equilibrium.hpp"

namespace condlab {

struct CondenserProblem {
  KernelSpec spec{2.0, 3};
  DomainGeometry geometry;
  PointCloud a_cloud;               // carried by D, closure may touch the boundary
  Constraint sigma = Constraint::unconstrained();
  SignedCondenserMeasure theta;     // external field charge, carried by D
  double tol = 1e-6;
  int f_resolution = 400;
  std::uint64_t seed = 1;

  void validate() const;
  // the mass-preservation hypothesis fails when F is thin at infinity
  bool f_thin_warning() const { return geometry.f_thin_at_infinity(); }
};

struct SolveReport {
  DiscreteMeasure lambda_plus;
  DiscreteMeasure lambda_minus;
  double objective_green = 0.0;
  double objective_weak = 0.0;
  double w = 0.0;
  double kkt_lower_violation = 0.0;
  double kkt_upper_violation = 0.0;
  int iterations = 0;
  bool qp_converged = false;  // inner QP reached its stationarity tolerance
  bool converged = false;     // QP converged and KKT violations within tol
};

// minimize the Green-kernel Gauss functional over probability measures on
// the A-cloud under the box constraint
SolveReport solve_green_gauss(const CondenserProblem& p, const GreenKernelEngine& engine);
SolveReport solve_green_gauss(const CondenserProblem& p);

// sweep the minimizer onto F and fill lambda_minus / objective_weak
SignedCondenserMeasure assemble_condenser_solution(const CondenserProblem& p,
                                                   const GreenKernelEngine& engine,
                                                   SolveReport& report);

struct OptimalityCertificate {
  double w = 0.0;
  double lower_violation = 0.0;  // relative, where the constraint is slack
  double upper_violation = 0.0;  // relative, on the carrier
  double exterior_violation = 0.0;  // field-free global potential bound
  bool sufficient = false;          // plates separated: conditions are sharp
  bool passed = false;
};

OptimalityCertificate verify_optimality(const CondenserProblem& p,
                                        const GreenKernelEngine& engine,
                                        const SolveReport& report, int exterior_checks = 100);

enum class SupportCheckStatus { passed, failed, not_applicable };

struct SupportCheckResult {
  SupportCheckStatus status = SupportCheckStatus::not_applicable;
  std::vector<int> offending;  // sigma atoms carrying no minimizer mass
};

SupportCheckResult support_identity_check(const CondenserProblem& p, const SolveReport& report);

// field potential g(theta) at the given points
Eigen::VectorXd green_field_vector(const CondenserProblem& p, const GreenKernelEngine& engine,
                                   const PointCloud& at);

}  // namespace condlab
