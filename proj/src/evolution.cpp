#include "imputegp/evolution.hpp"

#include <algorithm>
#include <limits>
#include <thread>
#include <unordered_set>

namespace imputegp {

namespace {

template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn)
{
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += threads) {
                fn(i);
            }
        });
    }
}

class Evolver {
public:
    Evolver(const EvolutionConfig& config, const Dataset& data, const Registry& registry)
        : config_(config), data_(data), registry_(registry), rng_(config.seed),
          cv_(data, EvalOptions{config.cv_folds, config.seed, std::chrono::duration<double>(config.time_limit_secs), {}}),
          has_missing_(data.has_missing())
    {
    }

    EvolutionReport run();

private:
    bool evaluate_batch(std::vector<Individual>& batch);
    std::size_t tournament(const std::vector<Individual>& pop, const std::vector<double>& crowding);

    const EvolutionConfig& config_;
    const Dataset& data_;
    const Registry& registry_;
    Rng rng_;
    CrossValidator cv_;
    bool has_missing_;
    EvaluationCache cache_;
    EvolutionCounters counters_;
    std::vector<CurvePoint> curve_;
    double best_ = kPenaltyAccuracy;
};

// Returns true when the evaluation cap truncated the batch.
bool Evolver::evaluate_batch(std::vector<Individual>& batch)
{
    // Plan in request order so the outcome does not depend on worker count.
    std::vector<std::size_t> to_execute;
    std::unordered_set<std::string> scheduled;
    std::size_t cutoff = batch.size();
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& key = batch[i].key;
        if (cache_.peek(key) || scheduled.count(key) > 0) {
            continue;
        }
        if (config_.max_evaluations && counters_.executions + to_execute.size() >= *config_.max_evaluations) {
            cutoff = i;
            break;
        }
        scheduled.insert(key);
        to_execute.push_back(i);
    }
    const bool truncated = cutoff < batch.size();
    batch.resize(cutoff);

    std::vector<Fitness> results(to_execute.size());
    parallel_for(to_execute.size(), config_.threads, [&](std::size_t k) { results[k] = cv_(batch[to_execute[k]].pipeline, registry_); });

    std::size_t next = 0;
    for (auto& ind : batch) {
        ++counters_.requests;
        if (auto hit = cache_.lookup(ind.key)) {
            ++counters_.cache_hits;
            ind.fitness = *hit;
            if (config_.on_request) {
                config_.on_request(ind, true);
            }
            continue;
        }
        const Fitness f = results[next++];
        cache_.insert(ind.key, f);
        ind.fitness = f;
        ++counters_.executions;
        if (!f.valid()) {
            ++counters_.failed_count;
        }
        if (!validate(ind.pipeline, registry_, has_missing_, config_.bounds).empty()) {
            ++counters_.invalid_count;
        }
        best_ = std::max(best_, f.accuracy);
        curve_.push_back(CurvePoint{counters_.executions, counters_.requests, best_});
        if (config_.on_request) {
            config_.on_request(ind, false);
        }
    }
    return truncated;
}

std::size_t Evolver::tournament(const std::vector<Individual>& pop, const std::vector<double>& crowding)
{
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const std::size_t a = pick(rng_);
    const std::size_t b = pick(rng_);
    if (dominates(pop[a].fit(), pop[b].fit())) {
        return a;
    }
    if (dominates(pop[b].fit(), pop[a].fit())) {
        return b;
    }
    if (crowding[a] != crowding[b]) {
        return crowding[a] > crowding[b] ? a : b;
    }
    return std::bernoulli_distribution(0.5)(rng_) ? a : b;
}

EvolutionReport Evolver::run()
{
    EvolutionReport report;
    report.config = config_;
    report.dataset = data_.name;

    std::vector<Individual> pop;
    pop.reserve(config_.population_size);
    for (std::size_t i = 0; i < config_.population_size; ++i) {
        pop.push_back(make_individual(generate(registry_, config_.bounds, rng_), 0));
    }
    bool capped = evaluate_batch(pop);
    std::vector<Individual> hall;
    {
        std::unordered_set<std::string> seen;
        for (const auto& ind : pop) {
            if (seen.insert(ind.key).second) {
                hall.push_back(ind);
            }
        }
        hall = pareto_front(hall);
    }
    report.generation_best.push_back(best_);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t gen = 1; gen <= config_.generations && !capped && !pop.empty(); ++gen) {
        std::vector<double> crowding(pop.size(), 0.0);
        for (const auto& front : non_dominated_sort(pop)) {
            const auto d = crowding_distance(pop, front);
            for (std::size_t k = 0; k < front.size(); ++k) {
                crowding[front[k]] = d[k];
            }
        }

        std::vector<Individual> offspring;
        offspring.reserve(config_.population_size);
        for (std::size_t i = 0; i < config_.population_size; ++i) {
            const double u = unit(rng_);
            PipelineTree child;
            if (u < config_.crossover_rate) {
                const auto& a = pop[tournament(pop, crowding)].pipeline;
                const auto& b = pop[tournament(pop, crowding)].pipeline;
                child = crossover(a, b, registry_, config_.bounds, rng_).first;
            } else if (u < config_.crossover_rate + config_.mutation_rate) {
                child = mutate(pop[tournament(pop, crowding)].pipeline, registry_, config_.bounds, rng_);
            } else {
                child = pop[tournament(pop, crowding)].pipeline;
            }
            offspring.push_back(make_individual(std::move(child), gen));
        }
        capped = evaluate_batch(offspring);

        std::vector<Individual> pool = std::move(pop);
        pool.insert(pool.end(), std::make_move_iterator(offspring.begin()), std::make_move_iterator(offspring.end()));
        pop = nsga2_select(pool, std::min(config_.population_size, pool.size()));

        std::unordered_set<std::string> archived;
        for (const auto& h : hall) {
            archived.insert(h.key);
        }
        for (const auto& ind : pop) {
            if (archived.insert(ind.key).second) {
                hall.push_back(ind);
            }
        }
        hall = pareto_front(hall);
        ++counters_.generations_completed;
        report.generation_best.push_back(best_);
    }

    report.final_front = hall;
    if (!hall.empty()) {
        report.champion = hall.front();
    }
    report.curve = std::move(curve_);
    report.counters = counters_;
    return report;
}

} // namespace

void EvolutionConfig::check() const
{
    if (population_size < 2) {
        throw Error("population size must be at least 2");
    }
    if (crossover_rate < 0.0 || mutation_rate < 0.0 || crossover_rate + mutation_rate > 1.0 + 1e-12) {
        throw Error("crossover and mutation rates must be non-negative and sum to at most 1");
    }
    if (bounds.min_ops < 2 || bounds.min_ops > bounds.max_ops) {
        throw Error("length bounds need 2 <= min_ops <= max_ops");
    }
    if (cv_folds < 2) {
        throw Error("at least 2 folds are needed");
    }
    if (!(time_limit_secs > 0.0)) {
        throw Error("time limit must be positive");
    }
    if (max_evaluations && *max_evaluations == 0) {
        throw Error("max evaluations must be positive");
    }
}

Individual make_individual(PipelineTree pipeline, std::size_t generation)
{
    Individual ind;
    ind.key = canonical_string(pipeline);
    ind.pipeline = std::move(pipeline);
    ind.birth_generation = generation;
    return ind;
}

bool dominates(const Fitness& a, const Fitness& b)
{
    if (a.valid() != b.valid()) {
        return a.valid();
    }
    return a.accuracy >= b.accuracy && a.length <= b.length && (a.accuracy > b.accuracy || a.length < b.length);
}

bool front_order(const Individual& a, const Individual& b)
{
    if (a.fit().accuracy != b.fit().accuracy) {
        return a.fit().accuracy > b.fit().accuracy;
    }
    if (a.fit().length != b.fit().length) {
        return a.fit().length < b.fit().length;
    }
    return a.key < b.key;
}

std::vector<std::vector<std::size_t>> non_dominated_sort(const std::vector<Individual>& pop)
{
    const std::size_t n = pop.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> dominators(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dominates(pop[i].fit(), pop[j].fit())) {
                dominated[i].push_back(j);
            } else if (i != j && dominates(pop[j].fit(), pop[i].fit())) {
                ++dominators[i];
            }
        }
        if (dominators[i] == 0) {
            fronts[0].push_back(i);
        }
    }
    while (!fronts.back().empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : fronts.back()) {
            for (std::size_t j : dominated[i]) {
                if (--dominators[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Individual>& pop, const std::vector<std::size_t>& front)
{
    const std::size_t m = front.size();
    std::vector<double> distance(m, 0.0);
    if (m == 0) {
        return distance;
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto objective = [&](int obj, std::size_t k) {
        const Fitness& f = pop[front[k]].fit();
        return obj == 0 ? f.accuracy : static_cast<double>(f.length);
    };
    for (int obj = 0; obj < 2; ++obj) {
        std::vector<std::size_t> order(m);
        for (std::size_t k = 0; k < m; ++k) {
            order[k] = k;
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (objective(obj, a) != objective(obj, b)) {
                return objective(obj, a) < objective(obj, b);
            }
            return pop[front[a]].key < pop[front[b]].key;
        });
        const double lo = objective(obj, order.front());
        const double hi = objective(obj, order.back());
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        if (hi <= lo) {
            continue;
        }
        for (std::size_t r = 1; r + 1 < m; ++r) {
            distance[order[r]] += (objective(obj, order[r + 1]) - objective(obj, order[r - 1])) / (hi - lo);
        }
    }
    return distance;
}

std::vector<Individual> pareto_front(const std::vector<Individual>& pop)
{
    std::vector<Individual> out;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pop.size() && !dominated; ++j) {
            dominated = j != i && dominates(pop[j].fit(), pop[i].fit());
        }
        if (!dominated) {
            out.push_back(pop[i]);
        }
    }
    std::stable_sort(out.begin(), out.end(), front_order);
    return out;
}

std::vector<Individual> nsga2_select(const std::vector<Individual>& pop, std::size_t n)
{
    n = std::min(n, pop.size());
    std::vector<Individual> out;
    out.reserve(n);
    for (const auto& front : non_dominated_sort(pop)) {
        if (out.size() == n) {
            break;
        }
        if (out.size() + front.size() <= n) {
            std::vector<Individual> members;
            for (std::size_t i : front) {
                members.push_back(pop[i]);
            }
            std::stable_sort(members.begin(), members.end(), front_order);
            out.insert(out.end(), members.begin(), members.end());
            continue;
        }
        const auto distance = crowding_distance(pop, front);
        std::vector<std::size_t> order(front.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            order[k] = k;
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (distance[a] != distance[b]) {
                return distance[a] > distance[b];
            }
            return pop[front[a]].key < pop[front[b]].key;
        });
        for (std::size_t r = 0; out.size() < n; ++r) {
            out.push_back(pop[front[order[r]]]);
        }
    }
    return out;
}

EvolutionReport run(const EvolutionConfig& config, const Dataset& data)
{
    return run(config, data, Registry::builtin(config.mode));
}

EvolutionReport run(const EvolutionConfig& config, const Dataset& data, const Registry& registry)
{
    config.check();
    data.check();
    return Evolver(config, data, registry).run();
}

} // namespace imputegp
