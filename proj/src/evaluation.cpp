#include "imputegp/evaluation.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace imputegp {

namespace {

struct TimeLimitExceeded : Error {
    TimeLimitExceeded() : Error("time limit exceeded") {}
};

void check_deadline(const std::optional<Clock::time_point>& deadline)
{
    if (deadline && Clock::now() > *deadline) {
        throw TimeLimitExceeded();
    }
}

} // namespace

std::optional<Fitness> EvaluationCache::lookup(const std::string& key)
{
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    return it->second;
}

std::optional<Fitness> EvaluationCache::peek(const std::string& key) const
{
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    return it == entries_.end() ? std::nullopt : std::optional<Fitness>(it->second);
}

bool EvaluationCache::insert(const std::string& key, const Fitness& fitness)
{
    std::lock_guard lock(mutex_);
    return entries_.emplace(key, fitness).second;
}

std::size_t EvaluationCache::size() const
{
    std::lock_guard lock(mutex_);
    return entries_.size();
}

std::size_t EvaluationCache::hits() const
{
    std::lock_guard lock(mutex_);
    return hits_;
}

std::size_t EvaluationCache::misses() const
{
    std::lock_guard lock(mutex_);
    return misses_;
}

std::vector<IndexList> stratified_folds(const Labels& labels, int k, std::uint64_t seed)
{
    if (k < 2) {
        throw Error("fold count must be at least 2");
    }
    if (k > labels.size()) {
        throw Error("fold count " + std::to_string(k) + " exceeds " + std::to_string(labels.size()) + " cases");
    }
    std::map<int, IndexList> by_class;
    for (Index i = 0; i < labels.size(); ++i) {
        by_class[labels(i)].push_back(i);
    }
    std::mt19937_64 rng(seed);
    std::vector<IndexList> folds(static_cast<std::size_t>(k));
    std::size_t next = 0;
    for (auto& [cls, members] : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (Index idx : members) {
            folds[next].push_back(idx);
            next = (next + 1) % folds.size();
        }
    }
    for (auto& f : folds) {
        std::sort(f.begin(), f.end());
    }
    return folds;
}

Labels FittedPipeline::predict(const Matrix& x) const
{
    Matrix current = x;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        current = transform(steps[i], current);
    }
    return imputegp::predict(steps.back(), current);
}

FittedPipeline fit_pipeline(const PipelineTree& p, const Registry& registry, const Matrix& x, const Labels& y,
                            std::optional<Clock::time_point> deadline)
{
    if (p.stages.empty()) {
        throw Error("empty pipeline");
    }
    FittedPipeline fitted;
    Matrix current = x;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& spec = registry.at(p.stages[i].name);
        fitted.steps.push_back(fit(spec, p.stages[i].values(), current, y));
        check_deadline(deadline);
        if (i + 1 < p.size()) {
            current = transform(fitted.steps.back(), current);
            check_deadline(deadline);
        }
    }
    return fitted;
}

CrossValidator::CrossValidator(const Dataset& data, EvalOptions options)
    : data_(&data), options_(std::move(options)), folds_(stratified_folds(data.labels, options_.folds, options_.seed))
{
}

Fitness CrossValidator::operator()(const PipelineTree& p, const Registry& registry) const
{
    const Fitness penalty{kPenaltyAccuracy, p.size()};
    const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(options_.time_limit);
    double total = 0.0;
    try {
        for (std::size_t f = 0; f < folds_.size(); ++f) {
            const IndexList& test = folds_[f];
            IndexList train;
            for (std::size_t g = 0; g < folds_.size(); ++g) {
                if (g != f) {
                    train.insert(train.end(), folds_[g].begin(), folds_[g].end());
                }
            }
            std::sort(train.begin(), train.end());

            const Matrix x_train = take_rows(data_->features, train);
            const Labels y_train = take_rows(data_->labels, train);
            const FittedPipeline fitted = fit_pipeline(p, registry, x_train, y_train, deadline);
            if (options_.on_fold) {
                options_.on_fold(f, fitted, train, test);
            }
            const Labels predicted = fitted.predict(take_rows(data_->features, test));
            check_deadline(deadline);

            Index correct = 0;
            for (std::size_t i = 0; i < test.size(); ++i) {
                correct += predicted(static_cast<Index>(i)) == data_->labels(test[i]) ? 1 : 0;
            }
            total += static_cast<double>(correct) / static_cast<double>(test.size());
        }
    } catch (const Error&) {
        return penalty;
    } catch (const std::exception&) {
        return penalty;
    }
    return Fitness{total / static_cast<double>(folds_.size()), p.size()};
}

Fitness evaluate(const PipelineTree& p, const Registry& registry, const Dataset& data, const EvalOptions& options,
                 EvaluationCache& cache)
{
    const std::string key = canonical_string(p);
    if (auto hit = cache.lookup(key)) {
        return *hit;
    }
    const Fitness fitness = CrossValidator(data, options)(p, registry);
    cache.insert(key, fitness);
    return fitness;
}

} // namespace imputegp
