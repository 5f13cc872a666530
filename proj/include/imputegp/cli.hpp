#ifndef IMPUTEGP_CLI_HPP
#define IMPUTEGP_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "imputegp/evolution.hpp"

namespace imputegp {

/// Paired comparison of both grammar modes: run i uses seed base+i in each mode.
struct ExperimentConfig {
    EvolutionConfig evolution; // mode is overridden per arm; seed is the base seed
    std::size_t runs = 10;
    double mdp = 30.0;
};

struct ModeSummary {
    GrammarMode mode = GrammarMode::Typed;
    std::vector<double> initial_best; // per run, end of generation 0
    std::vector<double> final_best;   // per run, champion accuracy
    std::vector<std::size_t> curve_lengths;
    std::vector<double> mean_curve;
    bool all_curves_monotone = true;

    double mean_initial_best() const;
    double mean_final_best() const;
};

struct ComparisonResult {
    ModeSummary typed;
    ModeSummary penalty;
};

/// Runs both arms on `data` (already carrying its missing cells) and, when
/// `out_dir` is non-empty, writes `<mode>/run_NNN/{report.json,curve.csv}` and
/// `<mode>/mean_curve.csv`.
ComparisonResult run_comparison(const ExperimentConfig& config, const Dataset& data, const std::filesystem::path& out_dir);

namespace cli {

/// Exit codes: 0 success, 1 usage or I/O error, 2 validation failure.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cli

} // namespace imputegp

#endif // IMPUTEGP_CLI_HPP
