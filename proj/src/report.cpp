#include "imputegp/report.hpp"

#include <algorithm>
#include <fstream>

#include "imputegp/format.hpp"
#include "imputegp/pipeline_io.hpp"

namespace imputegp {

namespace {

nlohmann::ordered_json individual_json(const Individual& ind)
{
    nlohmann::ordered_json j;
    j["pipeline"] = ind.key;
    j["accuracy"] = ind.fitness ? ind.fit().accuracy : kPenaltyAccuracy;
    j["length"] = ind.fitness ? ind.fit().length : ind.pipeline.size();
    j["birth_generation"] = ind.birth_generation;
    j["stages"] = to_json(ind.pipeline);
    return j;
}

std::ofstream open_for_write(const std::filesystem::path& path)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    return out;
}

} // namespace

nlohmann::ordered_json to_json(const EvolutionConfig& config)
{
    nlohmann::ordered_json j;
    j["mode"] = to_string(config.mode);
    j["population_size"] = config.population_size;
    j["generations"] = config.generations;
    j["crossover_rate"] = config.crossover_rate;
    j["mutation_rate"] = config.mutation_rate;
    j["min_ops"] = config.bounds.min_ops;
    j["max_ops"] = config.bounds.max_ops;
    j["cv_folds"] = config.cv_folds;
    j["seed"] = config.seed;
    j["time_limit_secs"] = config.time_limit_secs;
    j["max_evaluations"] = config.max_evaluations ? nlohmann::ordered_json(*config.max_evaluations) : nlohmann::ordered_json();
    return j;
}

nlohmann::ordered_json to_json(const EvolutionReport& report)
{
    nlohmann::ordered_json j;
    j["dataset"] = report.dataset;
    j["config"] = to_json(report.config);
    j["counters"] = {
        {"executions", report.counters.executions},
        {"cache_hits", report.counters.cache_hits},
        {"requests", report.counters.requests},
        {"invalid_count", report.counters.invalid_count},
        {"failed_count", report.counters.failed_count},
        {"generations_completed", report.counters.generations_completed},
    };
    j["champion"] = individual_json(report.champion);
    auto front = nlohmann::ordered_json::array();
    for (const auto& ind : report.final_front) {
        front.push_back(individual_json(ind));
    }
    j["front"] = std::move(front);
    j["generation_best"] = report.generation_best;
    auto curve = nlohmann::ordered_json::array();
    for (const auto& p : report.curve) {
        curve.push_back({{"evaluation", p.evaluation}, {"requests", p.requests}, {"best_accuracy", p.best_accuracy}});
    }
    j["curve"] = std::move(curve);
    return j;
}

void write_report(const EvolutionReport& report, const std::filesystem::path& path)
{
    auto out = open_for_write(path);
    out << to_json(report).dump(2) << '\n';
}

void write_curve_csv(const std::vector<CurvePoint>& curve, const std::filesystem::path& path)
{
    auto out = open_for_write(path);
    out << "evaluation,best_accuracy\n";
    for (const auto& p : curve) {
        out << p.evaluation << ',' << format_double(p.best_accuracy) << '\n';
    }
}

std::vector<double> mean_curve(const std::vector<std::vector<CurvePoint>>& curves)
{
    if (curves.empty()) {
        return {};
    }
    std::size_t len = curves.front().size();
    for (const auto& c : curves) {
        len = std::min(len, c.size());
    }
    std::vector<double> mean(len, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
        for (const auto& c : curves) {
            mean[i] += c[i].best_accuracy;
        }
        mean[i] /= static_cast<double>(curves.size());
    }
    return mean;
}

void write_mean_curve_csv(const std::vector<double>& mean, const std::filesystem::path& path)
{
    auto out = open_for_write(path);
    out << "evaluation,best_accuracy\n";
    for (std::size_t i = 0; i < mean.size(); ++i) {
        out << i + 1 << ',' << format_double(mean[i]) << '\n';
    }
}

} // namespace imputegp
