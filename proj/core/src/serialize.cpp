#include "condlab/serialize.hpp"

#include <cstdio>
#include <fstream>

namespace condlab {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open output file: " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_measure_csv(const std::filesystem::path& path, const DiscreteMeasure& m) {
  std::ofstream out = open_out(path);
  const int dim = m.size() > 0 ? m.cloud.dim() : 0;
  for (int d = 0; d < dim; ++d) out << "x" << (d + 1) << ",";
  if (dim == 0) out << "x1,x2,x3,";
  out << "mass\n";
  for (int i = 0; i < m.size(); ++i) {
    for (int d = 0; d < dim; ++d) out << format_double(m.cloud.points(i, d)) << ",";
    out << format_double(m.masses[i]) << "\n";
  }
}

nlohmann::json measure_to_json(const DiscreteMeasure& m) {
  nlohmann::json points = nlohmann::json::array();
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json masses = nlohmann::json::array();
  for (int i = 0; i < m.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int d = 0; d < m.cloud.dim(); ++d) row.push_back(m.cloud.points(i, d));
    points.push_back(row);
    weights.push_back(m.cloud.weights[i]);
    masses.push_back(m.masses[i]);
  }
  return {{"points", points}, {"weights", weights}, {"masses", masses},
          {"total_mass", m.size() > 0 ? m.total_mass() : 0.0}};
}

nlohmann::json energy_report_to_json(const EnergyReport& rep) {
  return {{"value", rep.value},
          {"estimated_error", rep.estimated_error},
          {"method", rep.method}};
}

nlohmann::json solve_report_to_json(const SolveReport& rep) {
  return {{"objective_green", rep.objective_green},
          {"objective_weak", rep.objective_weak},
          {"w", rep.w},
          {"kkt_lower_violation", rep.kkt_lower_violation},
          {"kkt_upper_violation", rep.kkt_upper_violation},
          {"iterations", rep.iterations},
          {"qp_converged", rep.qp_converged},
          {"converged", rep.converged},
          {"lambda_plus_mass", rep.lambda_plus.size() > 0 ? rep.lambda_plus.total_mass() : 0.0},
          {"lambda_minus_mass",
           rep.lambda_minus.size() > 0 ? rep.lambda_minus.total_mass() : 0.0}};
}

nlohmann::json certificate_to_json(const OptimalityCertificate& cert) {
  return {{"w", cert.w},
          {"lower_violation", cert.lower_violation},
          {"upper_violation", cert.upper_violation},
          {"exterior_violation", cert.exterior_violation},
          {"sufficient", cert.sufficient},
          {"passed", cert.passed}};
}

nlohmann::json balayage_result_to_json(const BalayageResult& res) {
  return {{"potential_residual", res.potential_residual},
          {"mass_in", res.mass_in},
          {"mass_out", res.mass_out}};
}

const char* thinness_class_name(ThinnessClass c) {
  switch (c) {
    case ThinnessClass::not_thin:
      return "not_thin";
    case ThinnessClass::thin_infinite_capacity:
      return "thin_infinite_capacity";
    case ThinnessClass::finite_capacity:
      return "finite_capacity";
  }
  return "unknown";
}

nlohmann::json thinness_to_json(const ThinnessVerdict& verdict) {
  nlohmann::json rows = nlohmann::json::array();
  for (const WienerRow& r : verdict.rows)
    rows.push_back({{"k", r.k},
                    {"capacity", r.capacity},
                    {"wiener_term", r.wiener_term},
                    {"cumulative", r.cumulative}});
  return {{"classification", thinness_class_name(verdict.classification)},
          {"classified", verdict.classified},
          {"q", verdict.q},
          {"wiener_slope", verdict.wiener_slope},
          {"capacity_slope", verdict.capacity_slope},
          {"rows", rows}};
}

nlohmann::json continuity_to_json(const ContinuityRecord& rec) {
  nlohmann::json steps = nlohmann::json::array();
  for (const ContinuityStep& s : rec.steps)
    steps.push_back({{"k", s.k},
                     {"objective", s.objective},
                     {"gap", s.gap},
                     {"lambda_distance", s.lambda_distance},
                     {"converged", s.converged}});
  return {{"limit_objective", rec.limit_objective},
          {"limit_norm", rec.limit_norm},
          {"monotone", rec.monotone},
          {"all_converged", rec.all_converged},
          {"steps", steps}};
}

nlohmann::json unsolvability_to_json(const UnsolvabilityRecord& rec) {
  nlohmann::json steps = nlohmann::json::array();
  for (const UnsolvabilityStep& s : rec.steps)
    steps.push_back({{"k", s.k},
                     {"start", s.start},
                     {"length", s.length},
                     {"capacity", s.capacity},
                     {"green_norm_sq", s.green_norm_sq},
                     {"weak_objective", s.weak_objective}});
  return {{"bound_satisfied", rec.bound_satisfied}, {"monotone", rec.monotone},
          {"steps", steps}};
}

nlohmann::json refinement_to_json(const RefinementRecord& rec) {
  nlohmann::json rows = nlohmann::json::array();
  for (const RefinementRow& r : rec.rows)
    rows.push_back({{"resolution", r.resolution},
                    {"e_green", r.e_green},
                    {"e_alpha_plus", r.e_alpha_plus},
                    {"e_alpha_dot", r.e_alpha_dot}});
  return {{"rows", rows}};
}

void write_wiener_series_csv(const std::filesystem::path& path, const ThinnessVerdict& verdict) {
  std::ofstream out = open_out(path);
  out << "k,capacity,wiener_term,cumulative\n";
  for (const WienerRow& r : verdict.rows)
    out << r.k << "," << format_double(r.capacity) << "," << format_double(r.wiener_term) << ","
        << format_double(r.cumulative) << "\n";
}

void write_continuity_trace_csv(const std::filesystem::path& path, const ContinuityRecord& rec) {
  std::ofstream out = open_out(path);
  out << "k,objective,gap,lambda_distance\n";
  for (const ContinuityStep& s : rec.steps)
    out << s.k << "," << format_double(s.objective) << "," << format_double(s.gap) << ","
        << format_double(s.lambda_distance) << "\n";
}

void write_unsolvability_csv(const std::filesystem::path& path, const UnsolvabilityRecord& rec) {
  std::ofstream out = open_out(path);
  out << "k,start,length,capacity,green_norm_sq,weak_objective\n";
  for (const UnsolvabilityStep& s : rec.steps)
    out << s.k << "," << format_double(s.start) << "," << format_double(s.length) << ","
        << format_double(s.capacity) << "," << format_double(s.green_norm_sq) << ","
        << format_double(s.weak_objective) << "\n";
}

void write_refinement_trend_csv(const std::filesystem::path& path, const RefinementRecord& rec) {
  std::ofstream out = open_out(path);
  out << "resolution,e_green,e_alpha_plus,e_alpha_dot\n";
  for (const RefinementRow& r : rec.rows)
    out << r.resolution << "," << format_double(r.e_green) << ","
        << format_double(r.e_alpha_plus) << "," << format_double(r.e_alpha_dot) << "\n";
}

void write_potential_profile_csv(const std::filesystem::path& path,
                                 const std::vector<PotentialProfileRow>& rows) {
  std::ofstream out = open_out(path);
  out << "t,kappa_potential,green_potential,level_w\n";
  for (const PotentialProfileRow& r : rows)
    out << format_double(r.t) << "," << format_double(r.kappa_potential) << ","
        << format_double(r.green_potential) << "," << format_double(r.level_w) << "\n";
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace condlab
