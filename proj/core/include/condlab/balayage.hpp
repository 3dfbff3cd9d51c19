#pragma once

#include "condlab/energy.hpp"
#include "condlab/geometry.hpp"

namespace condlab {

struct convergence_error : std::runtime_error {
  double residual;
  convergence_error(const std::string& what, double r) : std::runtime_error(what), residual(r) {}
};

struct BalayageResult {
  DiscreteMeasure swept;          // carried by F samples
  double potential_residual = 0;  // relative, over F check points
  double mass_in = 0;
  double mass_out = 0;
};

// Points in the interior of F where the sweep's defining potential match
// is verified.
PointCloud f_check_points(const DomainGeometry& geometry, const Eigen::VectorXd& focus,
                          int count, std::uint64_t seed);

// Classical swept density of a point charge for ball, half-space and
// ball-exterior domains, sampled on the given F-cloud and normalized to
// the analytic swept mass where one is known.
BalayageResult balayage_closed_form(const KernelSpec& spec, const DomainGeometry& geometry,
                                    const Eigen::VectorXd& y, double mass,
                                    const PointCloud& f_cloud, std::uint64_t check_seed = 9001);

struct BalayageOptions {
  double tol = 1e-10;
  int max_iter = 200;
  std::uint64_t check_seed = 9001;
};

// Energy projection onto positive measures on the F-cloud: minimizes the
// mollified energy norm of (nu - eta) over eta >= 0.
BalayageResult balayage_numeric(const KernelSpec& spec, const DomainGeometry& geometry,
                                const DiscreteMeasure& nu, const PointCloud& f_cloud,
                                const BalayageOptions& options = {});

enum class MassVerdict { preserved, deficient };

struct MassDiagnostic {
  MassVerdict verdict = MassVerdict::preserved;
  double deficit = 0.0;
  // a deficit contradicts a geometry whose complement is not thin at
  // infinity
  bool consistent_with_geometry = true;
};

MassDiagnostic mass_diagnostic(const BalayageResult& result, const DomainGeometry& geometry,
                               double tol = 0.01);

}  // namespace condlab
