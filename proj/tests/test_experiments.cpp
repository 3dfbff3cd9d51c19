#include <cmath>

#include "condlab/experiments.hpp"
#include "doctest.h"

using namespace condlab;

namespace {
Eigen::Vector3d v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }
}  // namespace

TEST_CASE("receding cylinders drive the constrained objective toward zero") {
  KernelSpec spec(2.0, 3);
  DomainGeometry hs = DomainGeometry::make_half_space(v3(0, 0, 1), 0.0);
  UnsolvabilityRecord rec = unsolvability_demo(spec, hs, 1.0, 0.3, 4, 160, 5);
  REQUIRE((int)rec.steps.size() == 4);
  CHECK(rec.bound_satisfied);
  CHECK(rec.monotone);
  for (const UnsolvabilityStep& s : rec.steps) {
    CHECK(s.capacity > 0.0);
    CHECK(s.green_norm_sq <= 1.0 / s.k + 1e-9);
    CHECK(s.weak_objective > 0.0);
    // slices recede and lengthen
    CHECK(s.start >= 0.0);
    CHECK(s.length >= rec.steps.front().length);
  }
  CHECK(rec.steps.back().weak_objective < rec.steps.front().weak_objective);
  // each cylinder starts strictly beyond the previous one
  for (std::size_t i = 1; i < rec.steps.size(); ++i)
    CHECK(rec.steps[i].start > rec.steps[i - 1].start);
}

TEST_CASE("loosening a binding constraint converges to the limit problem") {
  CondenserProblem limit;
  limit.spec = KernelSpec(2.0, 3);
  limit.geometry = DomainGeometry::make_ball(v3(0, 0, 0), 1.0);
  limit.a_cloud = sample_ball_volume(3, v3(0, 0, 0), 1.0, 130, 4);
  limit.f_resolution = 200;
  limit.seed = 23;
  limit.sigma = Constraint::from_measure(DiscreteMeasure::from_weights(limit.a_cloud, 3.0));

  std::vector<PointCloud> clouds;
  std::vector<Constraint> sigmas;
  for (int k = 1; k <= 4; ++k) {
    clouds.push_back(limit.a_cloud);
    sigmas.push_back(Constraint::from_measure(
        DiscreteMeasure::from_weights(limit.a_cloud, 3.0 * (1.0 + 1.0 / k))));
  }
  ContinuityRecord rec = continuity_experiment(limit, clouds, sigmas);
  REQUIRE((int)rec.steps.size() == 4);
  CHECK(rec.all_converged);
  CHECK(rec.monotone);
  CHECK(rec.limit_objective > 0.0);
  // looser constraints give smaller objectives, approaching from below
  for (const ContinuityStep& s : rec.steps)
    CHECK(s.objective <= rec.limit_objective + 1e-9);
  CHECK(rec.steps.back().gap < rec.steps.front().gap + 1e-12);
  CHECK(rec.steps.back().gap / rec.limit_objective < 0.05);
  CHECK(rec.steps.back().lambda_distance / rec.limit_norm < 0.15);
}

TEST_CASE("refinement study tracks the Green objective with the standard energy") {
  auto make_problem = [](int resolution) {
    CondenserProblem p;
    p.spec = KernelSpec(2.0, 3);
    p.geometry = DomainGeometry::make_ball(v3(0, 0, 0), 1.0);
    p.a_cloud = sample_sphere_surface(3, v3(0, 0, 0), 0.5, resolution, 3);
    p.f_resolution = 200;
    p.seed = 21;
    return p;
  };
  RefinementRecord rec = weak_vs_standard_refinement_study(make_problem, {80, 120, 160});
  REQUIRE((int)rec.rows.size() == 3);
  for (const RefinementRow& row : rec.rows) {
    CHECK(row.e_green > 0.0);
    CHECK(row.e_alpha_plus > row.e_green);  // free-space energy exceeds the Green energy
    CHECK(row.e_alpha_dot > 0.0);
  }
  // at the finest level the signed-pair energy matches the Green objective
  const RefinementRow& fine = rec.rows.back();
  CHECK(fine.e_alpha_dot == doctest::Approx(fine.e_green).epsilon(0.05));
  // and the discrepancy shrinks under refinement
  const double gap0 = std::abs(rec.rows.front().e_alpha_dot - rec.rows.front().e_green);
  const double gap2 = std::abs(fine.e_alpha_dot - fine.e_green);
  CHECK(gap2 <= gap0 + 1e-3);
}
