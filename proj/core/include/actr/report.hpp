#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>

#include "actr/calibration.hpp"
#include "actr/evaluator.hpp"

namespace actr {

// `algorithm,R_prec,Next_HR,num_queries`, rows sorted by R-precision
// ascending (ties by label).
std::string metrics_csv(const MetricsReport& report);

// Run report: config echo, seed, corpus stats, per-algorithm and per-user
// metrics.
nlohmann::json run_report_json(const MetricsReport& report, const CorpusStats& stats,
                               const nlohmann::json& config);

nlohmann::json power_law_json(const PowerLawFit& fit, const GapHistogram& hist);
std::string histogram_csv(const GapHistogram& hist);

nlohmann::json weights_json(const WeightFit& fit, const WeightFitOptions& opts);
WeightFitOptions weights_from_json(const nlohmann::json& j, WeightFit& fit);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string format_double(double value);

}  // namespace actr
