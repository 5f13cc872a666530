#ifndef IMPUTEGP_OPERATORS_HPP
#define IMPUTEGP_OPERATORS_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <vector>

#include "imputegp/primitives.hpp"

namespace imputegp {

// Column statistics over observed (non-NaN) cells. A column with no observed
// cells yields 0.

template <typename Derived>
double observed_mean(const Eigen::DenseBase<Derived>& col)
{
    double sum = 0.0;
    Index n = 0;
    for (Index i = 0; i < col.size(); ++i) {
        if (!is_missing(col.derived()(i))) {
            sum += col.derived()(i);
            ++n;
        }
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

template <typename Derived>
std::vector<double> observed_values(const Eigen::DenseBase<Derived>& col)
{
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(col.size()));
    for (Index i = 0; i < col.size(); ++i) {
        if (!is_missing(col.derived()(i))) {
            v.push_back(col.derived()(i));
        }
    }
    return v;
}

template <typename Derived>
double observed_median(const Eigen::DenseBase<Derived>& col)
{
    auto v = observed_values(col);
    if (v.empty()) {
        return 0.0;
    }
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Most frequent observed value, smallest on ties.
template <typename Derived>
double observed_mode(const Eigen::DenseBase<Derived>& col)
{
    std::map<double, Index> counts;
    for (double x : observed_values(col)) {
        ++counts[x];
    }
    double best = 0.0;
    Index best_count = 0;
    for (const auto& [value, count] : counts) {
        if (count > best_count) {
            best = value;
            best_count = count;
        }
    }
    return best;
}

// Population variance of a complete column.
template <typename Derived>
double population_variance(const Eigen::DenseBase<Derived>& col)
{
    if (col.size() == 0) {
        return 0.0;
    }
    const double mean = col.mean();
    return (col.derived().array() - mean).square().mean();
}

/// Imputers: one fill value per column.
class ColumnFill final : public Model {
public:
    explicit ColumnFill(Vector fill) : fill_(std::move(fill)) {}
    Index n_features_in() const override { return fill_.size(); }
    Matrix transform(const Matrix& x) const override;
    const Vector& fill_values() const { return fill_; }

private:
    Vector fill_;
};

class Standardizer final : public Model {
public:
    Standardizer(Vector mean, Vector stddev) : mean_(std::move(mean)), stddev_(std::move(stddev)) {}
    Index n_features_in() const override { return mean_.size(); }
    Matrix transform(const Matrix& x) const override;

private:
    Vector mean_;
    Vector stddev_;
};

class MinMaxScaler final : public Model {
public:
    MinMaxScaler(Vector min, Vector max) : min_(std::move(min)), max_(std::move(max)) {}
    Index n_features_in() const override { return min_.size(); }
    Matrix transform(const Matrix& x) const override;

private:
    Vector min_;
    Vector max_;
};

class VarianceSelector final : public Model {
public:
    VarianceSelector(Index n_in, std::vector<Index> kept) : n_in_(n_in), kept_(std::move(kept)) {}
    Index n_features_in() const override { return n_in_; }
    Matrix transform(const Matrix& x) const override;
    const std::vector<Index>& kept() const { return kept_; }

private:
    Index n_in_;
    std::vector<Index> kept_;
};

class Binarizer final : public Model {
public:
    Binarizer(Index n_in, double threshold) : n_in_(n_in), threshold_(threshold) {}
    Index n_features_in() const override { return n_in_; }
    Matrix transform(const Matrix& x) const override;

private:
    Index n_in_;
    double threshold_;
};

class KNearestNeighbors final : public Model {
public:
    enum class Weights { Uniform, Distance };
    KNearestNeighbors(Matrix train, Labels labels, Index k, Weights weights, int p);
    Index n_features_in() const override { return train_.cols(); }
    Labels predict(const Matrix& x) const override;

private:
    Matrix train_;
    Labels labels_;
    Index k_;
    Weights weights_;
    int p_;
};

class GaussianNaiveBayes final : public Model {
public:
    GaussianNaiveBayes(const Matrix& x, const Labels& y, double var_smoothing);
    Index n_features_in() const override { return means_.cols(); }
    Labels predict(const Matrix& x) const override;

private:
    std::vector<int> classes_;
    Vector log_priors_;
    Matrix means_;     // classes x features
    Matrix variances_; // classes x features
};

/// Binary tree grown greedily on Gini impurity. Splits send x <= threshold left.
class DecisionTree final : public Model {
public:
    struct Node {
        Index feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        int label = 0;
        std::size_t left = 0;
        std::size_t right = 0;
    };

    DecisionTree(const Matrix& x, const Labels& y, int max_depth, Index min_split);
    Index n_features_in() const override { return n_in_; }
    Labels predict(const Matrix& x) const override;
    const std::vector<Node>& nodes() const { return nodes_; }

private:
    std::size_t grow(const Matrix& x, const Labels& y, const IndexList& rows, int depth);

    Index n_in_;
    int max_depth_;
    Index min_split_;
    std::vector<Node> nodes_;
};

} // namespace imputegp

#endif // IMPUTEGP_OPERATORS_HPP
