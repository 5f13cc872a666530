#ifndef IMPUTEGP_REPORT_HPP
#define IMPUTEGP_REPORT_HPP

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "imputegp/evolution.hpp"

namespace imputegp {

nlohmann::ordered_json to_json(const EvolutionConfig& config);
nlohmann::ordered_json to_json(const EvolutionReport& report);

void write_report(const EvolutionReport& report, const std::filesystem::path& path);

/// `evaluation,best_accuracy`, one row per execution.
void write_curve_csv(const std::vector<CurvePoint>& curve, const std::filesystem::path& path);

/// Pointwise mean of best-so-far curves, truncated to the shortest one.
std::vector<double> mean_curve(const std::vector<std::vector<CurvePoint>>& curves);
void write_mean_curve_csv(const std::vector<double>& mean, const std::filesystem::path& path);

} // namespace imputegp

#endif // IMPUTEGP_REPORT_HPP
