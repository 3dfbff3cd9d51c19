#include "condlab/measures.hpp"

namespace condlab {

DiscreteMeasure::DiscreteMeasure(PointCloud c, Eigen::VectorXd m)
    : cloud(std::move(c)), masses(std::move(m)) {
  if (cloud.size() != masses.size())
    throw input_error("DiscreteMeasure: mass vector length does not match cloud");
  if (masses.size() > 0 && (!masses.allFinite() || masses.minCoeff() < 0.0))
    throw input_error("DiscreteMeasure: masses must be finite and nonnegative");
}

std::vector<int> DiscreteMeasure::support() const {
  std::vector<int> idx;
  for (int i = 0; i < size(); ++i)
    if (masses[i] > 0.0) idx.push_back(i);
  return idx;
}

DiscreteMeasure DiscreteMeasure::unit_atom(const Eigen::VectorXd& x) {
  PointCloud c;
  c.points = x.transpose();
  c.weights = Eigen::VectorXd::Ones(1);
  return DiscreteMeasure(c, Eigen::VectorXd::Ones(1));
}

DiscreteMeasure DiscreteMeasure::from_weights(const PointCloud& cloud, double total) {
  if (cloud.size() == 0) throw input_error("from_weights: empty cloud");
  const double w = cloud.total_weight();
  if (!(w > 0.0)) throw input_error("from_weights: cloud has no positive weight");
  return DiscreteMeasure(cloud, cloud.weights * (total / w));
}

double total_mass(const DiscreteMeasure& m) { return m.total_mass(); }

DiscreteMeasure restrict_measure(const DiscreteMeasure& m, const Region& region) {
  std::vector<int> keep;
  for (int i = 0; i < m.size(); ++i)
    if (region(m.cloud.point(i))) keep.push_back(i);
  PointCloud c;
  c.points.resize(static_cast<int>(keep.size()), m.cloud.dim());
  c.weights.resize(static_cast<int>(keep.size()));
  Eigen::VectorXd masses(static_cast<int>(keep.size()));
  for (int r = 0; r < static_cast<int>(keep.size()); ++r) {
    c.points.row(r) = m.cloud.points.row(keep[r]);
    c.weights[r] = m.cloud.weights[keep[r]];
    masses[r] = m.masses[keep[r]];
  }
  return DiscreteMeasure(std::move(c), std::move(masses));
}

DiscreteMeasure concat_measures(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.size() == 0) return b;
  if (b.size() == 0) return a;
  Eigen::VectorXd masses(a.size() + b.size());
  masses << a.masses, b.masses;
  return DiscreteMeasure(PointCloud::concat(a.cloud, b.cloud), std::move(masses));
}

Constraint Constraint::from_measure(DiscreteMeasure sigma) {
  if (!(sigma.total_mass() > 1.0))
    throw input_error("Constraint: sigma must have total mass exceeding 1");
  Constraint c;
  c.sigma_ = std::move(sigma);
  return c;
}

const DiscreteMeasure& Constraint::sigma() const {
  if (!sigma_) throw input_error("Constraint: no finite sigma present");
  return *sigma_;
}

bool is_dominated(const DiscreteMeasure& nu, const Constraint& c, double slack) {
  if (c.is_infinite()) return true;
  const DiscreteMeasure& s = c.sigma();
  if (nu.size() != s.size() || nu.cloud.points != s.cloud.points)
    throw input_error("is_dominated: measures live on different clouds");
  for (int i = 0; i < nu.size(); ++i)
    if (nu.masses[i] > s.masses[i] + slack) return false;
  return true;
}

}  // namespace condlab
