#ifndef IMPUTEGP_EVOLUTION_HPP
#define IMPUTEGP_EVOLUTION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "imputegp/evaluation.hpp"

namespace imputegp {

struct Individual {
    PipelineTree pipeline;
    std::optional<Fitness> fitness;
    std::size_t birth_generation = 0;
    std::string key; // canonical_string(pipeline)

    const Fitness& fit() const { return *fitness; }
};

Individual make_individual(PipelineTree pipeline, std::size_t generation);

struct EvolutionConfig {
    GrammarMode mode = GrammarMode::Typed;
    std::size_t population_size = 100;
    std::size_t generations = 100;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    LengthBounds bounds{};
    int cv_folds = 3;
    std::uint64_t seed = 0;
    double time_limit_secs = 60.0;
    std::optional<std::size_t> max_evaluations;
    // Worker threads for offspring evaluation; results do not depend on it.
    std::size_t threads = 1;
    // Observer called once per fitness request, in request order, after the
    // fitness is known. Not part of the experiment definition.
    std::function<void(const Individual&, bool cache_hit)> on_request;

    /// Throws Error when the configuration is unusable.
    void check() const;
};

struct CurvePoint {
    std::size_t evaluation = 0; // executions so far (1-based)
    std::size_t requests = 0;   // executions + cache hits so far
    double best_accuracy = kPenaltyAccuracy;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct EvolutionCounters {
    std::size_t executions = 0;
    std::size_t cache_hits = 0;
    std::size_t requests = 0;
    // Executed pipelines rejected by the grammar validator for this data.
    std::size_t invalid_count = 0;
    // Executed pipelines that ended with penalty fitness.
    std::size_t failed_count = 0;
    std::size_t generations_completed = 0;
};

struct EvolutionReport {
    EvolutionConfig config;
    std::string dataset;
    std::vector<CurvePoint> curve;
    // Best accuracy so far at the end of each generation; [0] is the initial population.
    std::vector<double> generation_best;
    std::vector<Individual> final_front;
    Individual champion;
    EvolutionCounters counters;
};

/// Maximize accuracy, minimize length. A valid fitness also dominates any
/// penalized one, so penalized pipelines never share a front with valid ones.
bool dominates(const Fitness& a, const Fitness& b);

/// Sort order for fronts and archives: accuracy desc, length asc, key asc.
bool front_order(const Individual& a, const Individual& b);

/// The non-dominated subset, in front_order.
std::vector<Individual> pareto_front(const std::vector<Individual>& pop);

/// Fronts by non-dominated sorting, each as indices into `pop`.
std::vector<std::vector<std::size_t>> non_dominated_sort(const std::vector<Individual>& pop);

/// Crowding distance of each member of one front (same order as `front`).
/// Boundary points get +infinity.
std::vector<double> crowding_distance(const std::vector<Individual>& pop, const std::vector<std::size_t>& front);

/// NSGA-II survivor selection: whole fronts by rank, the last front cut by
/// crowding distance (larger first, then key).
std::vector<Individual> nsga2_select(const std::vector<Individual>& pop, std::size_t n);

EvolutionReport run(const EvolutionConfig& config, const Dataset& data);
EvolutionReport run(const EvolutionConfig& config, const Dataset& data, const Registry& registry);

} // namespace imputegp

#endif // IMPUTEGP_EVOLUTION_HPP
