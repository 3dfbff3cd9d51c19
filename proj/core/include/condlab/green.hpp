#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "condlab/balayage.hpp"

namespace condlab {

// closed-form Green kernel (reflection / image charge), Newtonian only
double green_kernel_eval(const KernelSpec& spec, const DomainGeometry& geometry,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Green kernel of a domain: Riesz kernel minus the potential of the swept
// Dirac. Closed forms for Newtonian ball / half-space / ball-exterior;
// otherwise numeric Dirac sweeps on a fixed F-cloud, cached per source.
class GreenKernelEngine {
 public:
  GreenKernelEngine(const KernelSpec& spec, const DomainGeometry& geometry,
                    int f_resolution = 400, std::uint64_t seed = 40961);

  const KernelSpec& spec() const { return spec_; }
  const DomainGeometry& geometry() const { return geometry_; }
  bool closed_form() const { return closed_form_; }
  const PointCloud& f_cloud() const { return f_cloud_; }

  double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  // potential of the swept Dirac at y, evaluated at x (the image term)
  double image_potential(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  // symmetric Green matrix with mollified Riesz diagonal
  Eigen::MatrixXd matrix(const PointCloud& cloud, const DiagonalPolicy& policy) const;
  // cross matrix between distinct clouds
  Eigen::MatrixXd matrix(const PointCloud& rows, const PointCloud& cols) const;

  // balayage of a measure in D onto F (closed form per atom or one
  // numeric projection)
  BalayageResult sweep(const DiscreteMeasure& nu) const;

 private:
  const DiscreteMeasure& swept_dirac(const Eigen::VectorXd& y) const;

  KernelSpec spec_;
  DomainGeometry geometry_;
  bool closed_form_ = false;
  PointCloud f_cloud_;
  double f_mollifier_ = 0.0;
  std::uint64_t seed_ = 0;
  Eigen::LDLT<Eigen::MatrixXd> f_factor_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::vector<double>, std::unique_ptr<DiscreteMeasure>> cache_;
};

EnergyReport green_energy(const GreenKernelEngine& engine, const DiscreteMeasure& nu,
                          const DiagonalPolicy& policy = DiagonalPolicy::mollify());
EnergyReport green_energy(const GreenKernelEngine& engine, const SignedCondenserMeasure& nu,
                          const DiagonalPolicy& policy = DiagonalPolicy::mollify());
EnergyReport green_energy(const KernelSpec& spec, const DomainGeometry& geometry,
                          const DiscreteMeasure& nu,
                          const DiagonalPolicy& policy = DiagonalPolicy::mollify());

}  // namespace condlab
