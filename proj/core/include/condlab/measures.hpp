#pragma once

#include <functional>
#include <optional>

#include "condlab/point_cloud.hpp"

namespace condlab {

// Positive discrete measure: one nonnegative mass per atom of a cloud.
struct DiscreteMeasure {
  PointCloud cloud;
  Eigen::VectorXd masses;

  DiscreteMeasure() = default;
  DiscreteMeasure(PointCloud c, Eigen::VectorXd m);

  int size() const { return cloud.size(); }
  double total_mass() const { return masses.sum(); }
  bool is_zero() const { return size() == 0 || masses.maxCoeff() <= 0.0; }

  // atoms carrying positive mass
  std::vector<int> support() const;

  static DiscreteMeasure unit_atom(const Eigen::VectorXd& x);
  // masses proportional to quadrature weights, normalized to `total`
  static DiscreteMeasure from_weights(const PointCloud& cloud, double total);
};

using Region = std::function<bool(const Eigen::VectorXd&)>;

double total_mass(const DiscreteMeasure& m);
DiscreteMeasure restrict_measure(const DiscreteMeasure& m, const Region& region);
DiscreteMeasure concat_measures(const DiscreteMeasure& a, const DiscreteMeasure& b);

// Signed condenser measure: plus-part carried by the A-plate, minus-part
// by F. Never collapsed into one signed vector.
struct SignedCondenserMeasure {
  DiscreteMeasure plus;
  DiscreteMeasure minus;

  bool normalized(double tol = 1e-9) const {
    return std::abs(plus.total_mass() - 1.0) <= tol && std::abs(minus.total_mass() - 1.0) <= tol;
  }
};

// Upper constraint: either none (sigma = infinity) or a measure on the
// shared A-cloud with total mass > 1.
class Constraint {
 public:
  static Constraint unconstrained() { return Constraint(); }
  static Constraint from_measure(DiscreteMeasure sigma);

  bool is_infinite() const { return !sigma_.has_value(); }
  const DiscreteMeasure& sigma() const;

 private:
  Constraint() = default;
  std::optional<DiscreteMeasure> sigma_;
};

// atomwise nu <= sigma (with a small slack for solver rounding);
// always true against the infinite constraint
bool is_dominated(const DiscreteMeasure& nu, const Constraint& c, double slack = 1e-12);

}  // namespace condlab
