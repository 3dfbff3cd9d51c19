#include <cmath>
#include <random>

#include "condlab/green.hpp"
#include "doctest.h"

using namespace condlab;

namespace {
Eigen::Vector3d v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }

Eigen::Vector3d random_in_ball(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    Eigen::Vector3d x(u(rng), u(rng), u(rng));
    if (x.norm() < 1.0) return radius * x;
  }
}
}  // namespace

TEST_CASE("ball Green kernel from the center matches 1/|y| - 1") {
  KernelSpec spec(2.0, 3);
  DomainGeometry ball = DomainGeometry::make_ball(v3(0, 0, 0), 1.0);
  for (double r : {0.2, 0.5, 0.8, 0.95})
    CHECK(green_kernel_eval(spec, ball, v3(0, 0, 0), v3(r, 0, 0)) ==
          doctest::Approx(1.0 / r - 1.0).epsilon(1e-10));
}

TEST_CASE("ball Green kernel matches the image-charge formula off center") {
  KernelSpec spec(2.0, 3);
  const double R = 2.0;
  DomainGeometry ball = DomainGeometry::make_ball(v3(0, 0, 0), R);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::Vector3d x = random_in_ball(rng, R);
    Eigen::Vector3d y = random_in_ball(rng, R);
    if ((x - y).norm() < 1e-3 || y.norm() < 1e-3) continue;
    const Eigen::Vector3d y_star = (R * R / y.squaredNorm()) * y;
    const double oracle = 1.0 / (x - y).norm() - (R / y.norm()) / (x - y_star).norm();
    CHECK(green_kernel_eval(spec, ball, x, y) == doctest::Approx(oracle).epsilon(1e-10));
    // symmetry
    CHECK(green_kernel_eval(spec, ball, y, x) ==
          doctest::Approx(green_kernel_eval(spec, ball, x, y)).epsilon(1e-9));
  }
}

TEST_CASE("half-space Green kernel is the reflection difference") {
  KernelSpec spec(2.0, 3);
  DomainGeometry hs = DomainGeometry::make_half_space(v3(0, 0, 1), 0.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> h(0.1, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::Vector3d x(u(rng), u(rng), h(rng));
    Eigen::Vector3d y(u(rng), u(rng), h(rng));
    if ((x - y).norm() < 1e-3) continue;
    Eigen::Vector3d y_ref(y[0], y[1], -y[2]);
    const double oracle = 1.0 / (x - y).norm() - 1.0 / (x - y_ref).norm();
    CHECK(green_kernel_eval(spec, hs, x, y) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("Green matrices on interior clouds are positive semidefinite") {
  KernelSpec spec(2.0, 3);
  GreenKernelEngine engine(spec, DomainGeometry::make_ball(v3(0, 0, 0), 1.0));
  CHECK(engine.closed_form());
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 40;
    PointCloud cloud;
    cloud.points.resize(m, 3);
    for (int i = 0; i < m; ++i)
      cloud.points.row(i) = random_in_ball(rng, 0.98).transpose();
    cloud.weights = Eigen::VectorXd::Ones(m);
    Eigen::MatrixXd g = engine.matrix(cloud, DiagonalPolicy::patch());
    CHECK((g - g.transpose()).lpNorm<Eigen::Infinity>() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
    CHECK(eig.eigenvalues().minCoeff() > -1e-9);
  }
}

TEST_CASE("Green energy of a concentric sphere in the unit ball is 1/a - 1") {
  KernelSpec spec(2.0, 3);
  GreenKernelEngine engine(spec, DomainGeometry::make_ball(v3(0, 0, 0), 1.0));
  PointCloud c = sample_sphere_surface(3, v3(0, 0, 0), 0.5, 260, 13);
  DiscreteMeasure mu = DiscreteMeasure::from_weights(c, 1.0);
  EnergyReport e = green_energy(engine, mu, DiagonalPolicy::patch());
  CHECK(e.value == doctest::Approx(1.0).epsilon(0.02));
  // decomposition oracle: Green energy = standard energy minus the image part,
  // and the image part of a uniform sphere of radius a in the unit ball is 1
  EnergyReport std_e = standard_energy(spec, mu, surface_mollifier(c));
  CHECK(std_e.value - e.value == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("engine sweep agrees with the per-atom closed form") {
  KernelSpec spec(2.0, 3);
  GreenKernelEngine engine(spec, DomainGeometry::make_ball(v3(0, 0, 0), 1.0));
  DiscreteMeasure nu = DiscreteMeasure::unit_atom(v3(0.3, -0.2, 0.4));
  BalayageResult swept = engine.sweep(nu);
  CHECK(swept.swept.total_mass() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(swept.potential_residual < 0.02);
}

TEST_CASE("numeric engine for a rotation body stays symmetric and positive") {
  KernelSpec spec(2.0, 3);
  DomainGeometry g = DomainGeometry::make_rotation_body_complement(RotationProfile{false, 1.0});
  GreenKernelEngine engine(spec, g, 220, 101);
  CHECK_FALSE(engine.closed_form());
  const Eigen::Vector3d x = v3(2.0, 2.0, 0.0);
  const Eigen::Vector3d y = v3(3.0, 1.5, 0.5);
  const double gxy = engine.eval(x, y);
  const double gyx = engine.eval(y, x);
  CHECK(gxy > 0.0);
  CHECK(gxy == doctest::Approx(gyx).epsilon(0.05));
  // dominated by the free-space kernel
  CHECK(gxy < 1.0 / (x - y).norm());
}
