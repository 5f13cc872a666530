#ifndef IMPUTEGP_GRAMMAR_HPP
#define IMPUTEGP_GRAMMAR_HPP

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "imputegp/primitives.hpp"

namespace imputegp {

using Rng = std::mt19937_64;

struct BoundParam {
    std::string name;
    ParamValue value;

    friend bool operator==(const BoundParam&, const BoundParam&) = default;
};

/// One pipeline step: a primitive name plus its bound hyperparameters in
/// registry order.
struct Stage {
    std::string name;
    std::vector<BoundParam> params;

    ParamList values() const;
    friend bool operator==(const Stage&, const Stage&) = default;
};

/// A linear chain from the raw-data terminal to the classifier root. Stages
/// are stored in application order: stages.front() touches the data first,
/// stages.back() is the root.
struct PipelineTree {
    std::vector<Stage> stages;

    std::size_t size() const { return stages.size(); }
    friend bool operator==(const PipelineTree&, const PipelineTree&) = default;
};

struct LengthBounds {
    std::size_t min_ops = 2;
    std::size_t max_ops = 6;
};

enum class ViolationKind {
    UnknownPrimitive,
    LengthOutOfBounds,
    MissingClassifier,
    ClassifierNotLast,
    FirstStageNotImputer,
    ImputerMisplaced,
    TypeMismatch,
    ParamOutOfDomain,
    NoInitialImputer,
};

const char* to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::size_t stage; // zero-based; stage count for whole-pipeline violations
    std::string detail;
};

/// Random tree from the grammar. Typed mode always yields a valid chain; penalty
/// mode fills every non-root slot uniformly from imputers and preprocessors.
PipelineTree generate(const Registry& registry, LengthBounds bounds, Rng& rng);

/// Empty result means the pipeline is valid.
std::vector<Violation> validate(const PipelineTree& p, const Registry& registry, bool data_has_missing, LengthBounds bounds = {});

/// One-point crossover at a pair of internal edges of equal grammar type. Returns
/// the parents unchanged when no admissible pair exists.
std::pair<PipelineTree, PipelineTree> crossover(const PipelineTree& a, const PipelineTree& b, const Registry& registry,
                                                LengthBounds bounds, Rng& rng);

enum class MutationKind { PointReplace, ParamMutate, Insert, Shrink };

const char* to_string(MutationKind kind);

/// Variants that can act on `p` under the bounds.
std::vector<MutationKind> applicable_mutations(const PipelineTree& p, const Registry& registry, LengthBounds bounds);

PipelineTree mutate(const PipelineTree& p, const Registry& registry, LengthBounds bounds, Rng& rng);
PipelineTree mutate(const PipelineTree& p, MutationKind kind, const Registry& registry, LengthBounds bounds, Rng& rng);

/// `Name(param=value,...)` per stage in application order, joined by "→".
std::string canonical_string(const PipelineTree& p);

std::vector<BoundParam> sample_params(const PrimitiveSpec& spec, Rng& rng);
Stage random_stage(const PrimitiveSpec& spec, Rng& rng);

} // namespace imputegp

#endif // IMPUTEGP_GRAMMAR_HPP
