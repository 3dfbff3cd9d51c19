#pragma once

#include <optional>

#include "condlab/serialize.hpp"

namespace condlab {

// input error with a machine-readable code for report.json
struct scenario_error : input_error {
  std::string code;
  scenario_error(std::string c, const std::string& what) : input_error(what), code(std::move(c)) {}
};

struct Scenario {
  std::string name = "scenario";
  double alpha = 2.0;
  int n = 3;
  std::uint64_t seed = 1;
  double tol = 1e-6;

  // geometry
  std::string geometry_kind = "ball";  // ball | half_space | ball_exterior | rotation_body
  Eigen::VectorXd center;
  double radius = 1.0;
  Eigen::VectorXd normal;
  double offset = 0.0;
  std::string profile_family = "power";  // power | exp
  double profile_s = 1.0;

  // plate A
  std::string plate_sampler = "sphere";  // sphere | ball
  Eigen::VectorXd plate_center;
  double plate_radius = 0.5;
  int plate_resolution = 220;

  // constraint
  std::string constraint_kind = "infinite";  // infinite | uniform | lebesgue
  double constraint_total = 2.0;

  // external field: atoms with signed masses
  std::vector<std::pair<Eigen::VectorXd, double>> field_atoms;

  // experiment
  std::string experiment = "solve";  // solve | thinness | continuity | unsolvability | refinement
  double q = 2.0;
  int k_max = 10;
  int slice_resolution = 200;
  int continuity_steps = 8;
  std::vector<int> resolutions;
  double depth = 1.0;
  double cylinder_radius = 0.3;
  int f_resolution = 400;

  KernelSpec kernel() const { return KernelSpec(alpha, n); }
  DomainGeometry build_geometry() const;
  RotationProfile build_profile() const;
  PointCloud build_plate(int resolution) const;
  Constraint build_constraint(const PointCloud& plate) const;
  SignedCondenserMeasure build_field() const;
  CondenserProblem build_problem() const;
  CondenserProblem build_problem(int resolution) const;
};

Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_json(const nlohmann::json& j);
Scenario parse_scenario_file(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& s);

struct RunOptions {
  bool check_only = false;
  int jobs = 1;
  std::string out_dir;  // default out/<name>
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCertificateFailure = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitInputError = 4;

int run_scenario(Scenario scenario, const RunOptions& options);

}  // namespace condlab
