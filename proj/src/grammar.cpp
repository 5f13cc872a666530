#include "imputegp/grammar.hpp"

#include <algorithm>

namespace imputegp {

namespace {

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> dist(0, items.size() - 1);
    return items[dist(rng)];
}

std::size_t pick_index(std::size_t lo, std::size_t hi, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> dist(lo, hi);
    return dist(rng);
}

std::vector<const PrimitiveSpec*> non_classifiers(const Registry& registry)
{
    auto out = registry.with_role(Role::Imputer);
    auto preps = registry.with_role(Role::Preprocessor);
    out.insert(out.end(), preps.begin(), preps.end());
    return out;
}

GrammarType terminal_type(GrammarMode mode)
{
    return mode == GrammarMode::Typed ? GrammarType::Raw : GrammarType::NdArray;
}

// Stage indices a shrink may remove.
std::vector<std::size_t> removable_stages(const PipelineTree& p, const Registry& registry)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const auto& spec = registry.at(p.stages[i].name);
        if (registry.mode() == GrammarMode::Penalty ? spec.role != Role::Classifier : spec.role == Role::Preprocessor) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<const PrimitiveSpec*> replacements(const PrimitiveSpec& current, const Registry& registry)
{
    std::vector<const PrimitiveSpec*> out;
    for (const auto& s : registry.specs()) {
        if (s.name != current.name && s.same_signature(current)) {
            out.push_back(&s);
        }
    }
    return out;
}

// (stage, param) pairs with more than one admissible value.
std::vector<std::pair<std::size_t, std::size_t>> mutable_params(const PipelineTree& p, const Registry& registry)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& spec = registry.at(p.stages[i].name);
        for (std::size_t k = 0; k < spec.hyperparams.size() && k < p.stages[i].params.size(); ++k) {
            if (spec.hyperparams[k].domain.size() > 1) {
                out.emplace_back(i, k);
            }
        }
    }
    return out;
}

void recut(PipelineTree& child, std::size_t cut, std::size_t max_ops)
{
    while (child.size() > max_ops) {
        const std::size_t at = std::clamp<std::size_t>(cut, 1, child.size() - 2);
        child.stages.erase(child.stages.begin() + static_cast<std::ptrdiff_t>(at));
    }
}

} // namespace

ParamList Stage::values() const
{
    ParamList out;
    out.reserve(params.size());
    for (const auto& p : params) {
        out.push_back(p.value);
    }
    return out;
}

const char* to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::UnknownPrimitive: return "unknown primitive";
    case ViolationKind::LengthOutOfBounds: return "length out of bounds";
    case ViolationKind::MissingClassifier: return "classifier missing";
    case ViolationKind::ClassifierNotLast: return "classifier not last";
    case ViolationKind::FirstStageNotImputer: return "stage-1 not imputer";
    case ViolationKind::ImputerMisplaced: return "imputer misplaced";
    case ViolationKind::TypeMismatch: return "type mismatch";
    case ViolationKind::ParamOutOfDomain: return "hyperparameter out of domain";
    case ViolationKind::NoInitialImputer: return "no initial imputer";
    }
    return "?";
}

const char* to_string(MutationKind kind)
{
    switch (kind) {
    case MutationKind::PointReplace: return "point-replace";
    case MutationKind::ParamMutate: return "param-mutate";
    case MutationKind::Insert: return "insert";
    case MutationKind::Shrink: return "shrink";
    }
    return "?";
}

std::vector<BoundParam> sample_params(const PrimitiveSpec& spec, Rng& rng)
{
    std::vector<BoundParam> out;
    out.reserve(spec.hyperparams.size());
    for (const auto& hp : spec.hyperparams) {
        out.push_back(BoundParam{hp.name, pick(hp.domain, rng)});
    }
    return out;
}

Stage random_stage(const PrimitiveSpec& spec, Rng& rng)
{
    // Parameters are drawn after the primitive so the draw order is fixed.
    return Stage{spec.name, sample_params(spec, rng)};
}

PipelineTree generate(const Registry& registry, LengthBounds bounds, Rng& rng)
{
    const std::size_t target = pick_index(bounds.min_ops, bounds.max_ops, rng);
    const auto classifiers = registry.with_role(Role::Classifier);
    const auto imputers = registry.with_role(Role::Imputer);
    const auto preprocessors = registry.with_role(Role::Preprocessor);

    // Built root first, reversed into application order at the end.
    std::vector<Stage> chain;
    chain.push_back(random_stage(*pick(classifiers, rng), rng));

    if (registry.mode() == GrammarMode::Typed) {
        while (true) {
            if (target - chain.size() == 1) {
                chain.push_back(random_stage(*pick(imputers, rng), rng));
                break;
            }
            std::vector<const PrimitiveSpec*> admissible = preprocessors;
            if (chain.size() + 1 >= bounds.min_ops) {
                admissible.insert(admissible.end(), imputers.begin(), imputers.end());
            }
            const PrimitiveSpec* chosen = pick(admissible, rng);
            chain.push_back(random_stage(*chosen, rng));
            if (chosen->role == Role::Imputer) {
                break;
            }
        }
    } else {
        const auto fillers = non_classifiers(registry);
        while (chain.size() < target) {
            chain.push_back(random_stage(*pick(fillers, rng), rng));
        }
    }
    std::reverse(chain.begin(), chain.end());
    return PipelineTree{std::move(chain)};
}

std::vector<Violation> validate(const PipelineTree& p, const Registry& registry, bool data_has_missing, LengthBounds bounds)
{
    std::vector<Violation> out;
    const std::size_t n = p.size();
    auto flag = [&](ViolationKind kind, std::size_t stage, std::string detail = {}) {
        out.push_back(Violation{kind, stage, std::move(detail)});
    };

    if (n < bounds.min_ops || n > bounds.max_ops) {
        flag(ViolationKind::LengthOutOfBounds, n,
             std::to_string(n) + " stage(s), bounds [" + std::to_string(bounds.min_ops) + ", " + std::to_string(bounds.max_ops) + "]");
    }

    std::vector<const PrimitiveSpec*> specs(n, nullptr);
    for (std::size_t i = 0; i < n; ++i) {
        specs[i] = registry.find(p.stages[i].name);
        if (!specs[i]) {
            flag(ViolationKind::UnknownPrimitive, i, p.stages[i].name);
        }
    }

    bool any_classifier = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (specs[i] && specs[i]->role == Role::Classifier) {
            any_classifier = true;
            if (i + 1 != n) {
                flag(ViolationKind::ClassifierNotLast, i, p.stages[i].name);
            }
        }
    }
    if (n == 0 || !specs[n - 1] || specs[n - 1]->role != Role::Classifier) {
        if (!any_classifier) {
            flag(ViolationKind::MissingClassifier, n);
        }
    }

    if (registry.mode() == GrammarMode::Typed) {
        if (n > 0 && specs[0] && specs[0]->role != Role::Imputer) {
            flag(ViolationKind::FirstStageNotImputer, 0, p.stages[0].name);
        }
        for (std::size_t i = 1; i < n; ++i) {
            if (specs[i] && specs[i]->role == Role::Imputer) {
                flag(ViolationKind::ImputerMisplaced, i, p.stages[i].name);
            }
        }
    } else if (data_has_missing && n > 0 && specs[0] && specs[0]->role != Role::Imputer) {
        flag(ViolationKind::NoInitialImputer, 0, p.stages[0].name);
    }

    GrammarType carried = terminal_type(registry.mode());
    for (std::size_t i = 0; i < n; ++i) {
        if (!specs[i]) {
            break;
        }
        if (specs[i]->input != carried) {
            flag(ViolationKind::TypeMismatch, i,
                 std::string(to_string(carried)) + " into " + p.stages[i].name + " expecting " + to_string(specs[i]->input));
        }
        carried = specs[i]->output;
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!specs[i]) {
            continue;
        }
        const auto& hps = specs[i]->hyperparams;
        const auto& bound = p.stages[i].params;
        if (bound.size() != hps.size()) {
            flag(ViolationKind::ParamOutOfDomain, i, p.stages[i].name + ": expected " + std::to_string(hps.size()) + " parameter(s)");
            continue;
        }
        for (std::size_t k = 0; k < hps.size(); ++k) {
            if (bound[k].name != hps[k].name || !hps[k].admits(bound[k].value)) {
                flag(ViolationKind::ParamOutOfDomain, i, p.stages[i].name + "." + bound[k].name + "=" + format_param(bound[k].value));
            }
        }
    }
    return out;
}

std::pair<PipelineTree, PipelineTree> crossover(const PipelineTree& a, const PipelineTree& b, const Registry& registry,
                                                LengthBounds bounds, Rng& rng)
{
    if (a == b) {
        return {a, b};
    }
    // Edge i sits between stage i-1 and stage i and carries stage i-1's output.
    std::vector<std::pair<std::size_t, std::size_t>> cuts;
    for (std::size_t i = 1; i < a.size(); ++i) {
        const GrammarType ta = registry.at(a.stages[i - 1].name).output;
        for (std::size_t j = 1; j < b.size(); ++j) {
            if (registry.at(b.stages[j - 1].name).output != ta) {
                continue;
            }
            if (i + (b.size() - j) < bounds.min_ops || j + (a.size() - i) < bounds.min_ops) {
                continue;
            }
            cuts.emplace_back(i, j);
        }
    }
    if (cuts.empty()) {
        return {a, b};
    }
    const auto [i, j] = pick(cuts, rng);
    const auto ai = a.stages.begin() + static_cast<std::ptrdiff_t>(i);
    const auto bj = b.stages.begin() + static_cast<std::ptrdiff_t>(j);

    PipelineTree first;
    first.stages.assign(a.stages.begin(), ai);
    first.stages.insert(first.stages.end(), bj, b.stages.end());
    PipelineTree second;
    second.stages.assign(b.stages.begin(), bj);
    second.stages.insert(second.stages.end(), ai, a.stages.end());

    recut(first, i, bounds.max_ops);
    recut(second, j, bounds.max_ops);
    return {std::move(first), std::move(second)};
}

std::vector<MutationKind> applicable_mutations(const PipelineTree& p, const Registry& registry, LengthBounds bounds)
{
    std::vector<MutationKind> out;
    for (const auto& stage : p.stages) {
        if (!replacements(registry.at(stage.name), registry).empty()) {
            out.push_back(MutationKind::PointReplace);
            break;
        }
    }
    if (!mutable_params(p, registry).empty()) {
        out.push_back(MutationKind::ParamMutate);
    }
    if (p.size() < bounds.max_ops && !registry.with_role(Role::Preprocessor).empty() && !p.stages.empty()) {
        out.push_back(MutationKind::Insert);
    }
    if (p.size() > bounds.min_ops && !removable_stages(p, registry).empty()) {
        out.push_back(MutationKind::Shrink);
    }
    return out;
}

PipelineTree mutate(const PipelineTree& p, const Registry& registry, LengthBounds bounds, Rng& rng)
{
    const auto kinds = applicable_mutations(p, registry, bounds);
    if (kinds.empty()) {
        return p;
    }
    return mutate(p, pick(kinds, rng), registry, bounds, rng);
}

PipelineTree mutate(const PipelineTree& p, MutationKind kind, const Registry& registry, LengthBounds bounds, Rng& rng)
{
    PipelineTree out = p;
    switch (kind) {
    case MutationKind::PointReplace: {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!replacements(registry.at(p.stages[i].name), registry).empty()) {
                candidates.push_back(i);
            }
        }
        if (candidates.empty()) {
            break;
        }
        const std::size_t i = pick(candidates, rng);
        const auto options = replacements(registry.at(p.stages[i].name), registry);
        out.stages[i] = random_stage(*pick(options, rng), rng);
        break;
    }
    case MutationKind::ParamMutate: {
        const auto slots = mutable_params(p, registry);
        if (slots.empty()) {
            break;
        }
        const auto [i, k] = pick(slots, rng);
        const auto& domain = registry.at(p.stages[i].name).hyperparams[k].domain;
        std::vector<ParamValue> others;
        std::copy_if(domain.begin(), domain.end(), std::back_inserter(others),
                     [&](const ParamValue& v) { return v != p.stages[i].params[k].value; });
        out.stages[i].params[k].value = pick(others, rng);
        break;
    }
    case MutationKind::Insert: {
        if (p.size() >= bounds.max_ops || p.stages.empty()) {
            break;
        }
        const bool typed = registry.mode() == GrammarMode::Typed;
        const std::size_t at = pick_index(typed ? 1 : 0, p.size() - 1, rng);
        const auto pool = typed ? registry.with_role(Role::Preprocessor) : non_classifiers(registry);
        const Stage stage = random_stage(*pick(pool, rng), rng);
        out.stages.insert(out.stages.begin() + static_cast<std::ptrdiff_t>(at), stage);
        break;
    }
    case MutationKind::Shrink: {
        const auto removable = removable_stages(p, registry);
        if (p.size() <= bounds.min_ops || removable.empty()) {
            break;
        }
        out.stages.erase(out.stages.begin() + static_cast<std::ptrdiff_t>(pick(removable, rng)));
        break;
    }
    }
    return out;
}

std::string canonical_string(const PipelineTree& p)
{
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i > 0) {
            out += "→";
        }
        const Stage& s = p.stages[i];
        out += s.name;
        out += '(';
        for (std::size_t k = 0; k < s.params.size(); ++k) {
            if (k > 0) {
                out += ',';
            }
            out += s.params[k].name;
            out += '=';
            out += format_param(s.params[k].value);
        }
        out += ')';
    }
    return out;
}

} // namespace imputegp
