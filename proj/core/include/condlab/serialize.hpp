#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>

#include "condlab/experiments.hpp"

namespace condlab {

// deterministic shortest round-trip formatting, for byte-identical reruns
std::string format_double(double v);

void write_measure_csv(const std::filesystem::path& path, const DiscreteMeasure& m);

nlohmann::json measure_to_json(const DiscreteMeasure& m);
nlohmann::json energy_report_to_json(const EnergyReport& rep);
nlohmann::json solve_report_to_json(const SolveReport& rep);
nlohmann::json certificate_to_json(const OptimalityCertificate& cert);
nlohmann::json balayage_result_to_json(const BalayageResult& res);
nlohmann::json thinness_to_json(const ThinnessVerdict& verdict);
nlohmann::json continuity_to_json(const ContinuityRecord& rec);
nlohmann::json unsolvability_to_json(const UnsolvabilityRecord& rec);
nlohmann::json refinement_to_json(const RefinementRecord& rec);

const char* thinness_class_name(ThinnessClass c);

void write_wiener_series_csv(const std::filesystem::path& path, const ThinnessVerdict& verdict);
void write_continuity_trace_csv(const std::filesystem::path& path, const ContinuityRecord& rec);
void write_unsolvability_csv(const std::filesystem::path& path, const UnsolvabilityRecord& rec);
void write_refinement_trend_csv(const std::filesystem::path& path, const RefinementRecord& rec);

struct PotentialProfileRow {
  double t = 0.0;
  double kappa_potential = 0.0;
  double green_potential = 0.0;
  double level_w = 0.0;
};

void write_potential_profile_csv(const std::filesystem::path& path,
                                 const std::vector<PotentialProfileRow>& rows);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace condlab
