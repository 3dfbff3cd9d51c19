#include <cmath>

#include "condlab/solver.hpp"
#include "doctest.h"

using namespace condlab;

namespace {
Eigen::Vector3d v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }

CondenserProblem sphere_in_ball_problem(int resolution) {
  CondenserProblem p;
  p.spec = KernelSpec(2.0, 3);
  p.geometry = DomainGeometry::make_ball(v3(0, 0, 0), 1.0);
  p.a_cloud = sample_sphere_surface(3, v3(0, 0, 0), 0.5, resolution, 3);
  p.f_resolution = 220;
  p.seed = 21;
  return p;
}
}  // namespace

TEST_CASE("problem validation rejects malformed inputs") {
  CondenserProblem p = sphere_in_ball_problem(60);
  CHECK_NOTHROW(p.validate());

  CondenserProblem empty = p;
  empty.a_cloud = PointCloud{};
  CHECK_THROWS_AS(empty.validate(), input_error);

  CondenserProblem outside = p;
  outside.a_cloud.points.row(0) = Eigen::RowVector3d(5, 0, 0);
  CHECK_THROWS_AS(outside.validate(), input_error);

  CondenserProblem bad_tol = p;
  bad_tol.tol = 0.0;
  CHECK_THROWS_AS(bad_tol.validate(), input_error);
}

TEST_CASE("unconstrained minimizer is the Green equilibrium of the plate") {
  CondenserProblem p = sphere_in_ball_problem(200);
  GreenKernelEngine engine(p.spec, p.geometry, p.f_resolution, p.seed);
  SolveReport report = solve_green_gauss(p, engine);
  CHECK(report.qp_converged);
  CHECK(report.converged);
  CHECK(report.lambda_plus.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
  // objective equals 1 / Green capacity of the plate, which is 1 here
  CHECK(report.objective_green == doctest::Approx(1.0).epsilon(0.02));
  // cross-check with the equilibrium routine
  EquilibriumResult eq = green_equilibrium(engine, p.a_cloud);
  CHECK(report.objective_green == doctest::Approx(1.0 / eq.capacity).epsilon(1e-3));

  OptimalityCertificate cert = verify_optimality(p, engine, report);
  CHECK(cert.passed);
  CHECK(cert.sufficient);  // plate closure stays away from the boundary
  CHECK(cert.w == doctest::Approx(report.objective_green).epsilon(1e-6));

  // infinite constraint: the support identity has nothing to check
  CHECK(support_identity_check(p, report).status == SupportCheckStatus::not_applicable);
}

TEST_CASE("assembled condenser solution sweeps the full mass onto the boundary") {
  CondenserProblem p = sphere_in_ball_problem(200);
  GreenKernelEngine engine(p.spec, p.geometry, p.f_resolution, p.seed);
  SolveReport report = solve_green_gauss(p, engine);
  SignedCondenserMeasure nu = assemble_condenser_solution(p, engine, report);
  // ball geometry preserves swept mass, so the pair is a unit condenser charge
  CHECK(nu.plus.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(nu.minus.total_mass() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(nu.normalized(2e-3));
  // Green objective and the standard energy of the signed pair agree
  CHECK(report.objective_weak == doctest::Approx(report.objective_green).epsilon(0.02));
}

TEST_CASE("binding uniform constraint is respected and certified") {
  CondenserProblem p;
  p.spec = KernelSpec(2.0, 3);
  p.geometry = DomainGeometry::make_ball(v3(0, 0, 0), 1.0);
  p.a_cloud = sample_ball_volume(3, v3(0, 0, 0), 1.0, 150, 4);
  p.f_resolution = 220;
  p.seed = 23;
  p.sigma = Constraint::from_measure(
      DiscreteMeasure::from_weights(p.a_cloud, 1.5));
  GreenKernelEngine engine(p.spec, p.geometry, p.f_resolution, p.seed);
  SolveReport report = solve_green_gauss(p, engine);
  CHECK(report.qp_converged);
  CHECK(is_dominated(report.lambda_plus, p.sigma, 1e-9));
  // the bound actually binds somewhere
  const DiscreteMeasure& sigma = p.sigma.sigma();
  bool binds = false;
  for (int i = 0; i < report.lambda_plus.size(); ++i)
    binds = binds || report.lambda_plus.masses[i] > sigma.masses[i] - 1e-9;
  CHECK(binds);
  OptimalityCertificate cert = verify_optimality(p, engine, report);
  CHECK(cert.passed);
}

TEST_CASE("external field shifts the minimizer away from the charge") {
  CondenserProblem p = sphere_in_ball_problem(180);
  p.theta = SignedCondenserMeasure{DiscreteMeasure::unit_atom(v3(0.75, 0, 0)),
                                   DiscreteMeasure{}};
  GreenKernelEngine engine(p.spec, p.geometry, p.f_resolution, p.seed);

  // the field vector is the Green potential of theta on the plate
  Eigen::VectorXd field = green_field_vector(p, engine, p.a_cloud);
  for (int i = 0; i < p.a_cloud.size(); ++i)
    CHECK(field[i] ==
          doctest::Approx(engine.eval(p.a_cloud.point(i), v3(0.75, 0, 0))).epsilon(1e-9));

  SolveReport report = solve_green_gauss(p, engine);
  CHECK(report.qp_converged);
  // atoms facing the positive charge should carry less mass
  double near = 0.0, far = 0.0;
  for (int i = 0; i < report.lambda_plus.size(); ++i) {
    if (p.a_cloud.points(i, 0) > 0.25)
      near += report.lambda_plus.masses[i];
    else if (p.a_cloud.points(i, 0) < -0.25)
      far += report.lambda_plus.masses[i];
  }
  CHECK(far > near);
}
