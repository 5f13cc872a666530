#include "imputegp/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "imputegp/dataset.hpp"
#include "imputegp/format.hpp"
#include "imputegp/pipeline_io.hpp"
#include "imputegp/report.hpp"

namespace imputegp {

namespace {

double mean_of(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool monotone(const std::vector<CurvePoint>& curve)
{
    return std::adjacent_find(curve.begin(), curve.end(),
                              [](const CurvePoint& a, const CurvePoint& b) { return b.best_accuracy < a.best_accuracy; }) == curve.end();
}

std::string run_dir_name(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "run_%03zu", i);
    return buf;
}

} // namespace

double ModeSummary::mean_initial_best() const { return mean_of(initial_best); }
double ModeSummary::mean_final_best() const { return mean_of(final_best); }

ComparisonResult run_comparison(const ExperimentConfig& config, const Dataset& data, const std::filesystem::path& out_dir)
{
    if (config.runs < 1) {
        throw Error("runs must be at least 1");
    }
    ComparisonResult result;
    for (GrammarMode mode : {GrammarMode::Typed, GrammarMode::Penalty}) {
        ModeSummary& summary = mode == GrammarMode::Typed ? result.typed : result.penalty;
        summary.mode = mode;
        std::vector<std::vector<CurvePoint>> curves;
        for (std::size_t i = 0; i < config.runs; ++i) {
            EvolutionConfig ec = config.evolution;
            ec.mode = mode;
            ec.seed = config.evolution.seed + i;
            const EvolutionReport report = run(ec, data);
            summary.initial_best.push_back(report.generation_best.front());
            summary.final_best.push_back(report.champion.fitness ? report.champion.fit().accuracy : kPenaltyAccuracy);
            summary.curve_lengths.push_back(report.curve.size());
            summary.all_curves_monotone = summary.all_curves_monotone && monotone(report.curve);
            if (!out_dir.empty()) {
                const auto dir = out_dir / to_string(mode) / run_dir_name(i);
                write_report(report, dir / "report.json");
                write_curve_csv(report.curve, dir / "curve.csv");
            }
            curves.push_back(report.curve);
        }
        summary.mean_curve = mean_curve(curves);
        if (!out_dir.empty()) {
            write_mean_curve_csv(summary.mean_curve, out_dir / to_string(mode) / "mean_curve.csv");
        }
    }
    return result;
}

namespace cli {

namespace {

struct DataFlags {
    std::string data;
    std::string label_col = "class";
    std::string missing_token = "NaN";
};

struct EvolutionFlags {
    std::string mode = "typed";
    std::size_t pop = 100;
    std::size_t gens = 100;
    double xo_rate = 0.9;
    double mut_rate = 0.1;
    std::size_t min_ops = 2;
    std::size_t max_ops = 6;
    int cv = 3;
    double time_limit_secs = 60.0;
    std::size_t max_evals = 0;
    std::uint64_t seed = 0;
    std::size_t threads = 1;

    EvolutionConfig config() const
    {
        EvolutionConfig c;
        c.mode = parse_mode(mode);
        c.population_size = pop;
        c.generations = gens;
        c.crossover_rate = xo_rate;
        c.mutation_rate = mut_rate;
        c.bounds = LengthBounds{min_ops, max_ops};
        c.cv_folds = cv;
        c.time_limit_secs = time_limit_secs;
        if (max_evals > 0) {
            c.max_evaluations = max_evals;
        }
        c.seed = seed;
        c.threads = threads;
        return c;
    }
};

void add_data_flags(CLI::App* cmd, DataFlags& f, bool required = true)
{
    auto* opt = cmd->add_option("--data", f.data, "CSV file (header row, one label column)");
    if (required) {
        opt->required();
    }
    cmd->add_option("--label-col", f.label_col, "Label column name or zero-based index")->capture_default_str();
    cmd->add_option("--missing-token", f.missing_token, "Cell text that marks a missing value")->capture_default_str();
}

void add_evolution_flags(CLI::App* cmd, EvolutionFlags& f, bool with_mode)
{
    if (with_mode) {
        cmd->add_option("--mode", f.mode, "Grammar mode")->check(CLI::IsMember({"typed", "penalty"}))->capture_default_str();
    }
    cmd->add_option("--pop", f.pop, "Population size")->capture_default_str();
    cmd->add_option("--gens", f.gens, "Generations")->capture_default_str();
    cmd->add_option("--xo-rate", f.xo_rate, "Crossover rate")->capture_default_str();
    cmd->add_option("--mut-rate", f.mut_rate, "Mutation rate")->capture_default_str();
    cmd->add_option("--min-ops", f.min_ops, "Minimum pipeline length")->capture_default_str();
    cmd->add_option("--max-ops", f.max_ops, "Maximum pipeline length")->capture_default_str();
    cmd->add_option("--cv", f.cv, "Cross-validation folds")->capture_default_str();
    cmd->add_option("--time-limit-secs", f.time_limit_secs, "Per-evaluation time limit")->capture_default_str();
    cmd->add_option("--max-evals", f.max_evals, "Cap on pipeline executions (0 = none)")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
    cmd->add_option("--threads", f.threads, "Evaluation worker threads")->capture_default_str();
}

Dataset load(const DataFlags& f, std::size_t min_classes = 2)
{
    CsvOptions opts;
    opts.label_column = f.label_col;
    opts.missing_token = f.missing_token;
    opts.min_classes = min_classes;
    return load_csv(f.data, opts);
}

int cmd_inject(const DataFlags& data_flags, double mdp, std::uint64_t seed, const std::string& out_path, std::ostream& out)
{
    const Dataset data = load(data_flags, 1);
    const Dataset masked = inject_mcar(data, mdp, seed);
    write_csv(masked, out_path);
    out << "masked " << count_missing(masked.features) - count_missing(data.features) << " of "
        << data.n_cases() * data.n_feats() << " cells -> " << out_path << '\n';
    return 0;
}

int cmd_describe(const DataFlags& data_flags, std::ostream& out)
{
    const Dataset data = load(data_flags, 1);
    const DatasetSummary s = summarize(data);
    out << std::fixed << std::setprecision(4);
    out << data.name << ": n_feats=" << s.n_feats << " n_cases=" << s.n_cases << " disc=" << s.per_kind_counts[1]
        << " bin=" << s.per_kind_counts[2] << " cont=" << s.per_kind_counts[0] << " n=" << s.n_classes
        << " Hn=" << s.normalized_entropy << " missing_fraction=" << s.missing_fraction << '\n';
    return 0;
}

int cmd_validate(const std::string& pipeline_path, const std::string& mode, const DataFlags& data_flags, std::size_t min_ops,
                 std::size_t max_ops, std::ostream& out)
{
    const Registry& registry = Registry::builtin(parse_mode(mode));
    const PipelineTree p = load_pipeline(pipeline_path, registry);
    // Without data the pipeline is judged against incomplete input.
    const bool has_missing = data_flags.data.empty() ? true : load(data_flags, 1).has_missing();
    const auto violations = validate(p, registry, has_missing, LengthBounds{min_ops, max_ops});
    out << canonical_string(p) << '\n';
    if (violations.empty()) {
        out << "OK\n";
        return 0;
    }
    for (const auto& v : violations) {
        out << "violation: " << to_string(v.kind);
        if (!v.detail.empty()) {
            out << " (stage " << v.stage + 1 << ": " << v.detail << ")";
        }
        out << '\n';
    }
    return 2;
}

int cmd_evolve(const DataFlags& data_flags, double mdp, const EvolutionFlags& flags, const std::string& out_dir, std::ostream& out)
{
    const EvolutionConfig config = flags.config();
    Dataset data = load(data_flags);
    if (mdp > 0.0) {
        data = inject_mcar(data, mdp, config.seed);
    }
    const EvolutionReport report = run(config, data);
    const std::filesystem::path dir(out_dir);
    write_report(report, dir / "report.json");
    write_curve_csv(report.curve, dir / "curve.csv");
    out << "champion: " << report.champion.key << '\n';
    out << "accuracy: " << format_double(report.champion.fit().accuracy) << '\n';
    out << "executions=" << report.counters.executions << " cache_hits=" << report.counters.cache_hits
        << " invalid=" << report.counters.invalid_count << '\n';
    return 0;
}

int cmd_compare(const std::vector<std::string>& paths, const DataFlags& data_flags, double mdp, std::size_t runs,
                const EvolutionFlags& flags, const std::string& out_dir, std::ostream& out)
{
    ExperimentConfig config;
    config.evolution = flags.config();
    config.runs = runs;
    config.mdp = mdp;
    for (const auto& path : paths) {
        DataFlags f = data_flags;
        f.data = path;
        Dataset data = inject_mcar(load(f), mdp, config.evolution.seed);
        const std::filesystem::path dir =
            paths.size() > 1 ? std::filesystem::path(out_dir) / data.name : std::filesystem::path(out_dir);
        const ComparisonResult result = run_comparison(config, data, dir);
        out << std::fixed << std::setprecision(4);
        for (const ModeSummary* s : {&result.typed, &result.penalty}) {
            out << data.name << ' ' << to_string(s->mode) << ": mean_final_accuracy=" << s->mean_final_best()
                << " mean_initial_best=" << s->mean_initial_best() << " runs=" << s->final_best.size() << '\n';
        }
    }
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Grammar-guided evolution of classification pipelines over incomplete data", "imputegp"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Optional key=value config file; command-line flags take precedence");

    DataFlags data_flags;
    EvolutionFlags evo;
    double mdp = 30.0;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string out_dir = ".";
    std::string pipeline_path;
    std::size_t runs = 10;
    std::vector<std::string> compare_paths;

    auto* inject = app.add_subcommand("inject", "Mask a percentage of feature cells completely at random");
    add_data_flags(inject, data_flags);
    inject->add_option("--mdp", mdp, "Missing-data percentage in [0, 100]")->capture_default_str();
    inject->add_option("--seed", seed, "Random seed")->capture_default_str();
    inject->add_option("--out", out_path, "Output CSV")->required();

    auto* describe = app.add_subcommand("describe", "Print dataset descriptors");
    add_data_flags(describe, data_flags);

    auto* validate_cmd = app.add_subcommand("validate", "Check a pipeline file against the grammar");
    validate_cmd->add_option("--pipeline", pipeline_path, "Pipeline file (canonical string or JSON stages)")->required();
    validate_cmd->add_option("--mode", evo.mode, "Grammar mode")->check(CLI::IsMember({"typed", "penalty"}))->capture_default_str();
    validate_cmd->add_option("--min-ops", evo.min_ops, "Minimum pipeline length")->capture_default_str();
    validate_cmd->add_option("--max-ops", evo.max_ops, "Maximum pipeline length")->capture_default_str();
    add_data_flags(validate_cmd, data_flags, false);

    auto* evolve = app.add_subcommand("evolve", "Run one evolution");
    add_data_flags(evolve, data_flags);
    add_evolution_flags(evolve, evo, true);
    double evolve_mdp = 0.0;
    evolve->add_option("--mdp", evolve_mdp, "Inject this percentage of MCAR cells first")->capture_default_str();
    evolve->add_option("--out-dir", out_dir, "Directory for report.json and curve.csv")->capture_default_str();

    auto* compare = app.add_subcommand("compare", "Paired typed-vs-penalty experiment");
    compare->add_option("--data", compare_paths, "CSV file(s)")->required();
    compare->add_option("--label-col", data_flags.label_col, "Label column name or index")->capture_default_str();
    compare->add_option("--missing-token", data_flags.missing_token, "Cell text that marks a missing value")->capture_default_str();
    compare->add_option("--mdp", mdp, "Missing-data percentage injected before the runs")->capture_default_str();
    compare->add_option("--runs", runs, "Runs per mode")->capture_default_str();
    compare->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    add_evolution_flags(compare, evo, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (inject->parsed()) {
            return cmd_inject(data_flags, mdp, seed, out_path, out);
        }
        if (describe->parsed()) {
            return cmd_describe(data_flags, out);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(pipeline_path, evo.mode, data_flags, evo.min_ops, evo.max_ops, out);
        }
        if (evolve->parsed()) {
            return cmd_evolve(data_flags, evolve_mdp, evo, out_dir, out);
        }
        if (compare->parsed()) {
            return cmd_compare(compare_paths, data_flags, mdp, runs, evo, out_dir, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

int run(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace cli

} // namespace imputegp
