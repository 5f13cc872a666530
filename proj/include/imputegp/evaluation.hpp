#ifndef IMPUTEGP_EVALUATION_HPP
#define IMPUTEGP_EVALUATION_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "imputegp/dataset.hpp"
#include "imputegp/grammar.hpp"

namespace imputegp {

inline constexpr double kPenaltyAccuracy = -1.0;

/// Bi-objective fitness: cross-validated accuracy (maximize) and stage count
/// (minimize). Failed executions carry accuracy -1.
struct Fitness {
    double accuracy = kPenaltyAccuracy;
    std::size_t length = 0;

    bool valid() const { return accuracy >= 0.0; }
    friend bool operator==(const Fitness&, const Fitness&) = default;
};

/// Canonical-string keyed memo of evaluated pipelines. Entries are never
/// overwritten. All members are safe to call concurrently.
class EvaluationCache {
public:
    /// Counts a hit or a miss.
    std::optional<Fitness> lookup(const std::string& key);
    /// Does not touch the counters.
    std::optional<Fitness> peek(const std::string& key) const;
    /// False if the key was already present; the stored value is kept.
    bool insert(const std::string& key, const Fitness& fitness);

    std::size_t size() const;
    std::size_t hits() const;
    std::size_t misses() const;

private:
    mutable std::mutex mutex_;
    std::unordered_map<std::string, Fitness> entries_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

/// k disjoint folds covering every index. Each class is shuffled with the seed
/// and dealt round-robin, continuing where the previous class stopped, so
/// per-class fold counts differ by at most one.
std::vector<IndexList> stratified_folds(const Labels& labels, int k, std::uint64_t seed);

struct FittedPipeline {
    std::vector<FittedOperator> steps;

    Labels predict(const Matrix& x) const;
};

using Clock = std::chrono::steady_clock;

/// Fits every stage in application order; each stage is fitted on the previous
/// stage's transformed training matrix. Throws on any execution failure.
FittedPipeline fit_pipeline(const PipelineTree& p, const Registry& registry, const Matrix& x, const Labels& y,
                            std::optional<Clock::time_point> deadline = std::nullopt);

struct EvalOptions {
    int folds = 3;
    std::uint64_t seed = 0;
    std::chrono::duration<double> time_limit{60.0};
    // Called once per fold after fitting on the training split.
    std::function<void(std::size_t fold, const FittedPipeline&, const IndexList& train, const IndexList& test)> on_fold;
};

/// Stratified k-fold scorer. Folds are drawn once at construction so every
/// pipeline sees the same splits.
class CrossValidator {
public:
    CrossValidator(const Dataset& data, EvalOptions options);

    /// Never throws for execution problems: failures and time-outs map to
    /// Fitness{-1, length}.
    Fitness operator()(const PipelineTree& p, const Registry& registry) const;

    const std::vector<IndexList>& folds() const { return folds_; }

private:
    const Dataset* data_;
    EvalOptions options_;
    std::vector<IndexList> folds_;
};

/// Cache-aware single evaluation.
Fitness evaluate(const PipelineTree& p, const Registry& registry, const Dataset& data, const EvalOptions& options,
                 EvaluationCache& cache);

} // namespace imputegp

#endif // IMPUTEGP_EVALUATION_HPP
