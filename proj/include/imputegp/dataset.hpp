#ifndef IMPUTEGP_DATASET_HPP
#define IMPUTEGP_DATASET_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "imputegp/types.hpp"

namespace imputegp {

enum class FeatureKind { Continuous, Discrete, Binary };

const char* to_string(FeatureKind kind);

/// Tabular classification data. Missing feature cells are NaN; labels are
/// dense class ids 0..n_classes-1 that index `class_names`.
struct Dataset {
    Matrix features;
    Labels labels;
    std::vector<FeatureKind> kinds;
    std::string name;

    // Layout needed to write the table back out unchanged.
    std::vector<std::string> feature_names;
    std::string label_name = "class";
    std::size_t label_position = 0;
    std::vector<std::string> class_names;

    Index n_cases() const { return features.rows(); }
    Index n_feats() const { return features.cols(); }
    bool has_missing() const { return imputegp::has_missing(features); }

    /// Throws DataError if any structural invariant is broken.
    void check() const;
};

struct DatasetSummary {
    Index n_feats = 0;
    Index n_cases = 0;
    Index n_classes = 0;
    double normalized_entropy = 0.0;
    double missing_fraction = 0.0;
    // continuous, discrete, binary
    std::array<Index, 3> per_kind_counts{};
};

struct CsvOptions {
    // Header name, or a zero-based column index when no header matches.
    std::string label_column = "class";
    std::string missing_token = "NaN";
    std::size_t discrete_cap = 10;
    std::size_t min_classes = 2;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Same layout as the input; missing cells are written as "NaN".
void write_csv(const Dataset& data, const std::filesystem::path& path);

FeatureKind infer_kind(const Eigen::Ref<const Vector>& column, std::size_t discrete_cap = 10);

/// Masks exactly floor(n_cases * n_feats * mdp / 100) distinct feature cells,
/// drawn uniformly without replacement. Labels are never touched.
Dataset inject_mcar(const Dataset& data, double mdp, std::uint64_t seed);

/// Natural-log class entropy divided by log(n_classes). Zero for one class.
template <typename Derived>
double normalized_entropy(const Eigen::DenseBase<Derived>& labels)
{
    if (labels.size() == 0) {
        throw DataError("normalized_entropy: empty label vector");
    }
    std::map<typename Derived::Scalar, Index> counts;
    for (Index i = 0; i < labels.size(); ++i) {
        ++counts[labels.derived()(i)];
    }
    if (counts.size() < 2) {
        return 0.0;
    }
    const double n = static_cast<double>(labels.size());
    double h = 0.0;
    for (const auto& [cls, count] : counts) {
        const double p = static_cast<double>(count) / n;
        h -= p * std::log(p);
    }
    return h / std::log(static_cast<double>(counts.size()));
}

DatasetSummary summarize(const Dataset& data);

/// Wraps an in-memory matrix and class-id vector (ids >= 0) as a Dataset,
/// inferring feature kinds and generating column names f0, f1, ...
Dataset make_dataset(Matrix features, const Labels& labels, std::string name = "data");

/// Isotropic Gaussian blobs: class c has mean `separation * c` on every
/// feature and unit variance. Classes are assigned round-robin.
Dataset synthetic_blobs(Index n_cases, Index n_feats, int n_classes, double separation, std::uint64_t seed);

} // namespace imputegp

#endif // IMPUTEGP_DATASET_HPP
