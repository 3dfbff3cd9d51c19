#include "condlab/measures.hpp"
#include "doctest.h"

using namespace condlab;

namespace {
PointCloud two_atoms() {
  PointCloud c;
  c.points.resize(2, 3);
  c.points << 0, 0, 0, 1, 0, 0;
  c.weights = Eigen::Vector2d(1.0, 1.0);
  return c;
}
}  // namespace

TEST_CASE("measure construction validates masses") {
  PointCloud c = two_atoms();
  CHECK_THROWS_AS(DiscreteMeasure(c, Eigen::Vector2d(-0.1, 0.5)), input_error);
  CHECK_THROWS_AS(DiscreteMeasure(c, Eigen::Vector3d(1, 1, 1)), input_error);
  DiscreteMeasure m(c, Eigen::Vector2d(0.25, 0.75));
  CHECK(m.total_mass() == doctest::Approx(1.0));
  CHECK_FALSE(m.is_zero());
  CHECK(m.support() == std::vector<int>{0, 1});
  DiscreteMeasure z(c, Eigen::Vector2d(0.0, 0.0));
  CHECK(z.is_zero());
  CHECK(z.support().empty());
}

TEST_CASE("unit atom and weighted construction") {
  DiscreteMeasure a = DiscreteMeasure::unit_atom(Eigen::Vector3d(1, 2, 3));
  CHECK(a.size() == 1);
  CHECK(a.total_mass() == doctest::Approx(1.0));

  PointCloud c = two_atoms();
  c.weights = Eigen::Vector2d(1.0, 3.0);
  DiscreteMeasure m = DiscreteMeasure::from_weights(c, 2.0);
  CHECK(m.total_mass() == doctest::Approx(2.0));
  CHECK(m.masses[1] == doctest::Approx(1.5));
}

TEST_CASE("restriction and concatenation") {
  PointCloud c = two_atoms();
  DiscreteMeasure m(c, Eigen::Vector2d(0.3, 0.7));
  DiscreteMeasure left =
      restrict_measure(m, [](const Eigen::VectorXd& x) { return x[0] < 0.5; });
  CHECK(left.size() == 1);
  CHECK(left.total_mass() == doctest::Approx(0.3));

  DiscreteMeasure both = concat_measures(left, m);
  CHECK(both.size() == 3);
  CHECK(both.total_mass() == doctest::Approx(1.3));
}

TEST_CASE("signed condenser measure normalization") {
  PointCloud c = two_atoms();
  SignedCondenserMeasure s{DiscreteMeasure(c, Eigen::Vector2d(0.5, 0.5)),
                           DiscreteMeasure(c, Eigen::Vector2d(0.9, 0.1))};
  CHECK(s.normalized());
  s.minus.masses[0] = 0.5;
  CHECK_FALSE(s.normalized());
}

TEST_CASE("constraint gate and domination") {
  PointCloud c = two_atoms();
  CHECK_THROWS_AS(Constraint::from_measure(DiscreteMeasure(c, Eigen::Vector2d(0.4, 0.4))),
                  input_error);
  Constraint sigma = Constraint::from_measure(DiscreteMeasure(c, Eigen::Vector2d(0.6, 0.6)));
  CHECK_FALSE(sigma.is_infinite());
  CHECK(Constraint::unconstrained().is_infinite());

  DiscreteMeasure nu(c, Eigen::Vector2d(0.5, 0.5));
  CHECK(is_dominated(nu, sigma));
  DiscreteMeasure heavy(c, Eigen::Vector2d(0.7, 0.3));
  CHECK_FALSE(is_dominated(heavy, sigma));
  CHECK(is_dominated(heavy, Constraint::unconstrained()));
}
