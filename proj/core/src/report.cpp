#include "actr/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace actr {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

std::string metrics_csv(const MetricsReport& report) {
  std::vector<const AlgorithmMetrics*> rows;
  rows.reserve(report.algorithms.size());
  for (const auto& m : report.algorithms) rows.push_back(&m);
  std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    if (a->r_precision != b->r_precision) return a->r_precision < b->r_precision;
    return a->label < b->label;
  });

  std::ostringstream out;
  out << "algorithm,R_prec,Next_HR,num_queries\n";
  for (const auto* m : rows) {
    out << m->label << ',' << format_double(m->r_precision) << ',' << format_double(m->next_hr)
        << ',' << m->num_queries << '\n';
  }
  return out.str();
}

nlohmann::json run_report_json(const MetricsReport& report, const CorpusStats& stats,
                               const nlohmann::json& config) {
  nlohmann::json j;
  j["config"] = config;
  j["seed"] = report.seed;
  j["window_days"] = report.window_days;
  j["num_queries"] = report.num_queries;
  j["corpus"] = {{"users", stats.users},
                 {"events", stats.events},
                 {"tracks", stats.tracks},
                 {"sessions", stats.sessions},
                 {"malformed_rows", stats.malformed_rows}};
  j["warnings"] = report.warnings;

  auto& algorithms = j["algorithms"] = nlohmann::json::array();
  for (const auto& m : report.algorithms) {
    algorithms.push_back({{"label", m.label},
                          {"R_prec", m.r_precision},
                          {"Next_HR", m.next_hr},
                          {"num_queries", m.num_queries}});
  }
  auto& users = j["per_user"] = nlohmann::json::array();
  for (const auto& u : report.per_user) {
    nlohmann::json ju;
    ju["user"] = u.user;
    ju["num_queries"] = u.num_queries;
    for (std::size_t a = 0; a < report.algorithms.size(); ++a) {
      ju["R_prec"][report.algorithms[a].label] = u.r_precision[a];
      ju["Next_HR"][report.algorithms[a].label] = u.next_hr[a];
    }
    users.push_back(std::move(ju));
  }
  return j;
}

nlohmann::json power_law_json(const PowerLawFit& fit, const GapHistogram& hist) {
  nlohmann::json j;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["implied_decay"] = fit.implied_decay();
  j["total_gaps"] = hist.total();
  if (hist.max_hours) j["max_hours"] = *hist.max_hours;
  return j;
}

std::string histogram_csv(const GapHistogram& hist) {
  std::ostringstream out;
  out << "hours,count\n";
  for (const auto& [hours, count] : hist.bins) out << hours << ',' << count << '\n';
  return out.str();
}

nlohmann::json weights_json(const WeightFit& fit, const WeightFitOptions& opts) {
  nlohmann::json j;
  j["b"] = fit.b;
  j["s"] = fit.s;
  j["v"] = fit.v;
  if (fit.intercept) j["intercept"] = *fit.intercept;
  j["user_fraction"] = fit.user_fraction;
  j["rows"] = fit.rows;
  j["degenerate"] = fit.degenerate;
  j["base_decay"] = opts.base.decay;
  j["alpha"] = opts.value.alpha;
  return j;
}

WeightFitOptions weights_from_json(const nlohmann::json& j, WeightFit& fit) {
  WeightFitOptions opts;
  fit.b = j.at("b").get<double>();
  fit.s = j.at("s").get<double>();
  fit.v = j.at("v").get<double>();
  if (j.contains("intercept")) fit.intercept = j["intercept"].get<double>();
  if (j.contains("base_decay")) opts.base.decay = j["base_decay"].get<double>();
  if (j.contains("alpha")) opts.value.alpha = j["alpha"].get<double>();
  return opts;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace actr
