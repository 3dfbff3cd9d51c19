#include <cmath>

#include "condlab/equilibrium.hpp"
#include "doctest.h"

using namespace condlab;

namespace {
Eigen::Vector3d v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }
}  // namespace

TEST_CASE("Newtonian capacity of the unit sphere is one") {
  KernelSpec spec(2.0, 3);
  PointCloud c = sample_sphere_surface(3, v3(0, 0, 0), 1.0, 260, 3);
  EquilibriumResult r = riesz_equilibrium(spec, c);
  CHECK(r.converged);
  CHECK(r.capacity == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.energy == doctest::Approx(r.gamma.total_mass()).epsilon(1e-6));
  // equilibrium potential is 1 across the support
  CHECK(r.potential_min == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.potential_max == doctest::Approx(1.0).epsilon(0.02));
  CHECK(riesz_capacity(spec, c) == doctest::Approx(r.capacity));
  // symmetry: equilibrium measure close to uniform
  const double mean = r.gamma.masses.mean();
  CHECK(r.gamma.masses.minCoeff() > 0.5 * mean);
  CHECK(r.gamma.masses.maxCoeff() < 1.5 * mean);
}

TEST_CASE("Newtonian capacity scales linearly with the radius") {
  KernelSpec spec(2.0, 3);
  for (double radius : {0.5, 2.0}) {
    PointCloud c = sample_sphere_surface(3, v3(1, -1, 0), radius, 240, 3);
    CHECK(riesz_capacity(spec, c) == doctest::Approx(radius).epsilon(0.02));
  }
}

TEST_CASE("capacity of a solid ball sample approaches its sphere from below") {
  KernelSpec spec(2.0, 3);
  // volume sampling resolves the boundary layer slowly; capacity converges
  // to the sphere value from below as the cloud refines
  const double coarse = riesz_capacity(spec, sample_ball_volume(3, v3(0, 0, 0), 1.0, 350, 3));
  const double fine = riesz_capacity(spec, sample_ball_volume(3, v3(0, 0, 0), 1.0, 700, 3));
  CHECK(coarse > 0.9);
  CHECK(fine < 1.02);
  CHECK(fine > coarse);
}

TEST_CASE("Green capacity of a concentric sphere in the unit ball") {
  KernelSpec spec(2.0, 3);
  GreenKernelEngine engine(spec, DomainGeometry::make_ball(v3(0, 0, 0), 1.0));
  PointCloud c = sample_sphere_surface(3, v3(0, 0, 0), 0.5, 240, 3);
  EquilibriumResult r = green_equilibrium(engine, c);
  CHECK(r.converged);
  // oracle a/(1-a) from the radial Green potential, equals 1 at a = 1/2
  CHECK(r.capacity == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.potential_min == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("slice capacities of rotation bodies are positive and decay as expected") {
  KernelSpec spec(2.0, 3);
  const double q = 2.0;
  RotationProfile power{false, 1.0};
  RotationProfile exp2{true, 2.0};
  for (int k = 1; k <= 4; ++k) {
    CHECK(slice_capacity(spec, power, k, q, 150, 7) > 0.0);
    // severely pinched slices stay finite through the log-space wire model
    const double thin = slice_capacity(spec, exp2, k, q, 150, 7);
    CHECK(std::isfinite(thin));
    CHECK(thin > 0.0);
  }
  // a power-law horn slice has capacity comparable to its length scale q^k
  const double c2 = slice_capacity(spec, power, 2, q, 150, 7);
  const double c3 = slice_capacity(spec, power, 3, q, 150, 7);
  CHECK(c3 > c2);
}

TEST_CASE("Wiener diagnostic separates the three decay regimes") {
  KernelSpec spec(2.0, 3);
  ThinnessVerdict power =
      wiener_thinness_diagnostic(spec, RotationProfile{false, 1.0}, 2.0, 8, 140, 77, 2);
  CHECK(power.classified);
  CHECK(power.classification == ThinnessClass::not_thin);

  ThinnessVerdict exp1 =
      wiener_thinness_diagnostic(spec, RotationProfile{true, 1.0}, 2.0, 8, 140, 77, 2);
  CHECK(exp1.classified);
  CHECK(exp1.classification == ThinnessClass::thin_infinite_capacity);

  ThinnessVerdict exp2 =
      wiener_thinness_diagnostic(spec, RotationProfile{true, 2.0}, 2.0, 8, 140, 77, 2);
  CHECK(exp2.classified);
  CHECK(exp2.classification == ThinnessClass::finite_capacity);

  // geometric decay rates are ordered: faster pinch, faster decay
  CHECK(power.wiener_slope > exp1.wiener_slope);
  CHECK(exp1.capacity_slope > exp2.capacity_slope);
  CHECK((int)power.rows.size() == 9);  // slices k = 0 .. k_max
}
