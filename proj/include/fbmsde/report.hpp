#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbmsde/fbm.hpp"
#include "fbmsde/harness.hpp"
#include "fbmsde/sde.hpp"

namespace fbmsde::io {

using Json = nlohmann::ordered_json;

/// 17 significant digits, enough to round-trip a double exactly.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// CSV emission (header + one row per record, doubles at full precision)
std::string path_csv(const fbm::FbmPath& path);                 // t,value
std::string solution_csv(const sde::SolutionPath& solution);    // t,x
std::string rate_csv(const mc::RateEstimate& rate);             // n,l2_error,std_error,discards
std::string barrier_csv(const mc::BarrierReport& report);       // h,n,l2_error,std_error,discards
std::string power_sum_csv(const mc::PowerSumStudy& study);      // n,mean,variance,std_error
std::string ito_csv(const mc::ItoFormulaReport& report);        // n,l2_error,std_error,discards
std::string law_csv(const mc::LawReport& report);               // index,scaled_error

// Report JSON; every document carries schema_version, the experiment's
// (base_seed, n_grid, paths_per_n) and an echo of the resolved settings.

/// Common header fields for report documents.
struct ExperimentEcho {
  std::string experiment;
  std::uint64_t base_seed = 0;
  std::vector<std::int64_t> n_grid;
  int paths_per_n = 0;
  std::map<std::string, std::string> config;
};

Json report_header(const ExperimentEcho& echo);
Json rate_report(const mc::RateEstimate& rate, const ExperimentEcho& echo);
Json euler_limit_report(const mc::RateEstimate& rate,
                        const std::vector<mc::EulerLimitPoint>& limit,
                        const ExperimentEcho& echo);
Json barrier_report(const mc::BarrierReport& report, const ExperimentEcho& echo);
Json power_sum_report(const mc::PowerSumStudy& study, const ExperimentEcho& echo);
Json ito_report(const mc::ItoFormulaReport& report, const ExperimentEcho& echo);
Json law_report(const mc::LawReport& report, const ExperimentEcho& echo);

/// Serialized alongside every output; re-running from a manifest reproduces
/// the outputs byte-identically (the duration field aside).
struct RunManifest {
  std::string command;
  std::string experiment; // empty unless command == "experiment"
  std::map<std::string, std::string> config;
  std::uint64_t base_seed = 0;
  std::string artifact_version;
  std::string simd_backend;
  std::vector<std::string> outputs;
  double duration_seconds = 0.0;
};

Json manifest_json(const RunManifest& manifest);
RunManifest manifest_from_json(const Json& j);

} // namespace fbmsde::io
