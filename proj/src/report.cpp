#include "fbmsde/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fbmsde/version.hpp"

namespace fbmsde::io {
namespace {

Json per_n_json(const std::vector<mc::PerNError>& per_n) {
  Json arr = Json::array();
  for (const auto& e : per_n) {
    Json row;
    row["n"] = e.n;
    row["l2_error"] = e.l2_error;
    row["std_error"] = e.std_error;
    row["discards"] = e.discards;
    arr.push_back(row);
  }
  return arr;
}

Json distance_json(const std::vector<mc::DistanceEntry>& per_n) {
  Json arr = Json::array();
  for (const auto& e : per_n) {
    Json row;
    row["n"] = e.n;
    row["l2_error"] = e.l2_error;
    row["std_error"] = e.std_error;
    row["discards"] = e.discards;
    arr.push_back(row);
  }
  return arr;
}

double json_finite(double v) {
  // JSON has no NaN; degenerate slopes are emitted as null via this sentinel
  return v;
}

} // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out.flush()) throw Error("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string path_csv(const fbm::FbmPath& path) {
  std::string out = "t,value\n";
  for (std::int64_t k = 0; k <= path.steps; ++k) {
    out += format_double(path.time_at(k));
    out += ',';
    out += format_double(path.values[static_cast<std::size_t>(k)]);
    out += '\n';
  }
  return out;
}

std::string solution_csv(const sde::SolutionPath& solution) {
  std::string out = "t,x\n";
  const double dt = solution.horizon / static_cast<double>(solution.steps());
  for (std::int64_t k = 0; k <= solution.steps(); ++k) {
    out += format_double(dt * static_cast<double>(k));
    out += ',';
    out += format_double(solution.values[static_cast<std::size_t>(k)]);
    out += '\n';
  }
  return out;
}

std::string rate_csv(const mc::RateEstimate& rate) {
  std::string out = "n,l2_error,std_error,discards\n";
  for (const auto& e : rate.per_n) {
    out += std::to_string(e.n) + ',' + format_double(e.l2_error) + ',' +
           format_double(e.std_error) + ',' + std::to_string(e.discards) + '\n';
  }
  return out;
}

std::string barrier_csv(const mc::BarrierReport& report) {
  std::string out = "h,n,l2_error,std_error,discards\n";
  for (const auto& per_h : report.per_h) {
    for (const auto& e : per_h.per_n) {
      out += format_double(per_h.hurst) + ',' + std::to_string(e.n) + ',' +
             format_double(e.l2_error) + ',' + format_double(e.std_error) + ',' +
             std::to_string(e.discards) + '\n';
    }
  }
  return out;
}

std::string power_sum_csv(const mc::PowerSumStudy& study) {
  std::string out = "n,mean,variance,std_error\n";
  for (const auto& e : study.per_n) {
    out += std::to_string(e.n) + ',' + format_double(e.mean) + ',' +
           format_double(e.variance) + ',' + format_double(e.std_error) + '\n';
  }
  return out;
}

std::string ito_csv(const mc::ItoFormulaReport& report) {
  std::string out = "n,l2_error,std_error,discards\n";
  for (const auto& e : report.per_n) {
    out += std::to_string(e.n) + ',' + format_double(e.l2_error) + ',' +
           format_double(e.std_error) + ',' + std::to_string(e.discards) + '\n';
  }
  return out;
}

std::string law_csv(const mc::LawReport& report) {
  std::string out = "index,scaled_error\n";
  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    out += std::to_string(i) + ',' + format_double(report.samples[i]) + '\n';
  }
  return out;
}

Json report_header(const ExperimentEcho& echo) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = echo.experiment;
  j["base_seed"] = echo.base_seed;
  j["n_grid"] = echo.n_grid;
  j["paths_per_n"] = echo.paths_per_n;
  j["config"] = echo.config;
  return j;
}

Json rate_report(const mc::RateEstimate& rate, const ExperimentEcho& echo) {
  Json j = report_header(echo);
  j["per_n"] = per_n_json(rate.per_n);
  if (rate.degenerate) {
    j["slope"] = nullptr;
    j["slope_halfwidth"] = nullptr;
  } else {
    j["slope"] = json_finite(rate.slope);
    j["slope_halfwidth"] = json_finite(rate.slope_halfwidth);
  }
  j["degenerate"] = rate.degenerate;
  j["discard_fraction"] = rate.discard_fraction;
  j["self_referential_reference"] = rate.self_referential;
  return j;
}

Json euler_limit_report(const mc::RateEstimate& rate,
                        const std::vector<mc::EulerLimitPoint>& limit,
                        const ExperimentEcho& echo) {
  Json j = rate_report(rate, echo);
  Json arr = Json::array();
  for (const auto& p : limit) {
    Json row;
    row["n"] = p.n;
    row["distance"] = p.distance;
    row["prediction_norm"] = p.prediction_norm;
    arr.push_back(row);
  }
  j["limit_check"] = arr;
  return j;
}

Json barrier_report(const mc::BarrierReport& report, const ExperimentEcho& echo) {
  Json j = report_header(echo);
  Json arr = Json::array();
  for (const auto& per_h : report.per_h) {
    Json row;
    row["h"] = per_h.hurst;
    row["verdict"] = mc::verdict_name(per_h.verdict);
    row["per_n"] = distance_json(per_h.per_n);
    arr.push_back(row);
  }
  j["x0"] = report.x0;
  j["per_h"] = arr;
  return j;
}

Json power_sum_report(const mc::PowerSumStudy& study, const ExperimentEcho& echo) {
  Json j = report_header(echo);
  j["p"] = study.p;
  j["h"] = study.hurst;
  Json arr = Json::array();
  for (const auto& e : study.per_n) {
    Json row;
    row["n"] = e.n;
    row["mean"] = e.mean;
    row["variance"] = e.variance;
    row["std_error"] = e.std_error;
    arr.push_back(row);
  }
  j["per_n"] = arr;
  j["verdict"] = mc::verdict_name(study.verdict);
  j["limit_estimate"] = study.limit_estimate;
  return j;
}

Json ito_report(const mc::ItoFormulaReport& report, const ExperimentEcho& echo) {
  Json j = report_header(echo);
  j["h"] = report.hurst;
  j["order"] = report.order;
  j["per_n"] = distance_json(report.per_n);
  j["verdict"] = mc::verdict_name(report.verdict);
  return j;
}

Json law_report(const mc::LawReport& report, const ExperimentEcho& echo) {
  Json j = report_header(echo);
  j["alpha"] = report.alpha;
  j["h"] = report.hurst;
  j["n"] = report.n;
  j["paths"] = report.paths;
  j["degenerate"] = report.degenerate;
  j["skewness"] = report.skewness;
  j["excess_kurtosis"] = report.excess_kurtosis;
  j["ks_p_value"] = report.ks_p_value;
  j["variance"] = report.variance;
  j["correlation_abs_vs_limit"] = report.correlation_abs_vs_limit;
  j["skipped_samples"] = report.skipped;
  return j;
}

Json manifest_json(const RunManifest& manifest) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["artifact_version"] = manifest.artifact_version;
  j["command"] = manifest.command;
  if (!manifest.experiment.empty()) j["experiment"] = manifest.experiment;
  j["base_seed"] = manifest.base_seed;
  j["simd"] = manifest.simd_backend;
  j["config"] = manifest.config;
  j["outputs"] = manifest.outputs;
  j["duration_seconds"] = manifest.duration_seconds;
  return j;
}

RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  if (j.contains("experiment")) m.experiment = j.at("experiment").get<std::string>();
  m.base_seed = j.at("base_seed").get<std::uint64_t>();
  m.simd_backend = j.value("simd", std::string("auto"));
  m.artifact_version = j.value("artifact_version", std::string());
  m.config = j.at("config").get<std::map<std::string, std::string>>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.duration_seconds = j.value("duration_seconds", 0.0);
  return m;
}

} // namespace fbmsde::io
