#include "imputegp/operators.hpp"

#include <cmath>
#include <numeric>

namespace imputegp {

namespace {

constexpr double kStdFloor = 1e-12;

// Majority label with the smallest id winning ties.
int majority(const Labels& y, const IndexList& rows)
{
    std::map<int, Index> counts;
    for (Index r : rows) {
        ++counts[y(r)];
    }
    int best = 0;
    Index best_count = -1;
    for (const auto& [label, count] : counts) {
        if (count > best_count) {
            best = label;
            best_count = count;
        }
    }
    return best;
}

double gini(const std::map<int, Index>& counts, Index total)
{
    if (total == 0) {
        return 0.0;
    }
    double g = 1.0;
    for (const auto& [label, count] : counts) {
        const double p = static_cast<double>(count) / static_cast<double>(total);
        g -= p * p;
    }
    return g;
}

} // namespace

Matrix Model::transform(const Matrix&) const
{
    throw Error("operator does not transform");
}

Labels Model::predict(const Matrix&) const
{
    throw Error("operator does not predict");
}

Matrix ColumnFill::transform(const Matrix& x) const
{
    Matrix out = x;
    for (Index j = 0; j < out.cols(); ++j) {
        for (Index i = 0; i < out.rows(); ++i) {
            if (is_missing(out(i, j))) {
                out(i, j) = fill_(j);
            }
        }
    }
    return out;
}

Matrix Standardizer::transform(const Matrix& x) const
{
    Matrix out(x.rows(), x.cols());
    for (Index j = 0; j < x.cols(); ++j) {
        if (stddev_(j) <= kStdFloor) {
            out.col(j).setZero();
        } else {
            out.col(j) = (x.col(j).array() - mean_(j)) / stddev_(j);
        }
    }
    return out;
}

Matrix MinMaxScaler::transform(const Matrix& x) const
{
    Matrix out(x.rows(), x.cols());
    for (Index j = 0; j < x.cols(); ++j) {
        const double range = max_(j) - min_(j);
        if (range <= 0.0) {
            out.col(j).setZero();
        } else {
            out.col(j) = (x.col(j).array() - min_(j)) / range;
        }
    }
    return out;
}

Matrix VarianceSelector::transform(const Matrix& x) const
{
    Matrix out(x.rows(), static_cast<Index>(kept_.size()));
    for (std::size_t k = 0; k < kept_.size(); ++k) {
        out.col(static_cast<Index>(k)) = x.col(kept_[k]);
    }
    return out;
}

Matrix Binarizer::transform(const Matrix& x) const
{
    return (x.array() > threshold_).cast<double>().matrix();
}

KNearestNeighbors::KNearestNeighbors(Matrix train, Labels labels, Index k, Weights weights, int p)
    : train_(std::move(train)), labels_(std::move(labels)), k_(std::clamp<Index>(k, 1, std::max<Index>(1, train_.rows()))),
      weights_(weights), p_(p)
{
}

Labels KNearestNeighbors::predict(const Matrix& x) const
{
    Labels out(x.rows());
    const Index n = train_.rows();
    std::vector<std::pair<double, Index>> dist(static_cast<std::size_t>(n));
    for (Index i = 0; i < x.rows(); ++i) {
        for (Index t = 0; t < n; ++t) {
            const auto diff = (train_.row(t) - x.row(i)).array().abs();
            const double d = p_ == 1 ? diff.sum() : std::pow(diff.pow(p_).sum(), 1.0 / p_);
            dist[static_cast<std::size_t>(t)] = {d, t};
        }
        // Equal distances fall back to training order.
        std::partial_sort(dist.begin(), dist.begin() + k_, dist.end());
        std::map<int, double> votes;
        for (Index r = 0; r < k_; ++r) {
            const auto& [d, t] = dist[static_cast<std::size_t>(r)];
            votes[labels_(t)] += weights_ == Weights::Uniform ? 1.0 : 1.0 / (d + 1e-9);
        }
        int best = votes.begin()->first;
        double best_vote = -1.0;
        for (const auto& [label, vote] : votes) {
            if (vote > best_vote) {
                best = label;
                best_vote = vote;
            }
        }
        out(i) = best;
    }
    return out;
}

GaussianNaiveBayes::GaussianNaiveBayes(const Matrix& x, const Labels& y, double var_smoothing)
{
    classes_.assign(y.begin(), y.end());
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());

    const auto n_classes = static_cast<Index>(classes_.size());
    log_priors_.resize(n_classes);
    means_.setZero(n_classes, x.cols());
    variances_.setZero(n_classes, x.cols());

    double max_var = 0.0;
    for (Index j = 0; j < x.cols(); ++j) {
        max_var = std::max(max_var, population_variance(x.col(j)));
    }
    const double epsilon = var_smoothing * max_var;

    for (Index c = 0; c < n_classes; ++c) {
        IndexList rows;
        for (Index i = 0; i < y.size(); ++i) {
            if (y(i) == classes_[static_cast<std::size_t>(c)]) {
                rows.push_back(i);
            }
        }
        const Matrix xc = take_rows(x, rows);
        log_priors_(c) = std::log(static_cast<double>(rows.size()) / static_cast<double>(y.size()));
        for (Index j = 0; j < x.cols(); ++j) {
            means_(c, j) = xc.col(j).mean();
            variances_(c, j) = std::max(population_variance(xc.col(j)) + epsilon, kStdFloor);
        }
    }
}

Labels GaussianNaiveBayes::predict(const Matrix& x) const
{
    Labels out(x.rows());
    constexpr double kLog2Pi = 1.8378770664093453;
    for (Index i = 0; i < x.rows(); ++i) {
        Index best = 0;
        double best_ll = -std::numeric_limits<double>::infinity();
        for (Index c = 0; c < means_.rows(); ++c) {
            const auto diff = (x.row(i) - means_.row(c)).array();
            const double ll = log_priors_(c) -
                              0.5 * (variances_.row(c).array().log() + kLog2Pi + diff.square() / variances_.row(c).array()).sum();
            if (ll > best_ll) {
                best = c;
                best_ll = ll;
            }
        }
        out(i) = classes_[static_cast<std::size_t>(best)];
    }
    return out;
}

DecisionTree::DecisionTree(const Matrix& x, const Labels& y, int max_depth, Index min_split)
    : n_in_(x.cols()), max_depth_(max_depth), min_split_(min_split)
{
    IndexList rows(static_cast<std::size_t>(x.rows()));
    std::iota(rows.begin(), rows.end(), Index{0});
    grow(x, y, rows, 0);
}

std::size_t DecisionTree::grow(const Matrix& x, const Labels& y, const IndexList& rows, int depth)
{
    const std::size_t id = nodes_.size();
    nodes_.push_back(Node{-1, 0.0, majority(y, rows), 0, 0});

    std::map<int, Index> counts;
    for (Index r : rows) {
        ++counts[y(r)];
    }
    const auto n = static_cast<Index>(rows.size());
    if (depth >= max_depth_ || n < min_split_ || counts.size() < 2) {
        return id;
    }

    // Exhaustive search over midpoints between consecutive distinct values.
    double best_impurity = std::numeric_limits<double>::infinity();
    Index best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, int>> column(rows.size());
    for (Index j = 0; j < x.cols(); ++j) {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            column[k] = {x(rows[k], j), y(rows[k])};
        }
        std::sort(column.begin(), column.end());
        std::map<int, Index> left;
        std::map<int, Index> right = counts;
        for (std::size_t k = 0; k + 1 < column.size(); ++k) {
            ++left[column[k].second];
            if (--right[column[k].second] == 0) {
                right.erase(column[k].second);
            }
            if (column[k].first == column[k + 1].first) {
                continue;
            }
            const auto nl = static_cast<Index>(k + 1);
            const Index nr = n - nl;
            const double impurity =
                (static_cast<double>(nl) * gini(left, nl) + static_cast<double>(nr) * gini(right, nr)) / static_cast<double>(n);
            if (impurity < best_impurity) {
                best_impurity = impurity;
                best_feature = j;
                best_threshold = 0.5 * (column[k].first + column[k + 1].first);
            }
        }
    }
    if (best_feature < 0) {
        return id;
    }

    IndexList left_rows;
    IndexList right_rows;
    for (Index r : rows) {
        (x(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    const std::size_t l = grow(x, y, left_rows, depth + 1);
    const std::size_t r = grow(x, y, right_rows, depth + 1);
    nodes_[id].feature = best_feature;
    nodes_[id].threshold = best_threshold;
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
}

Labels DecisionTree::predict(const Matrix& x) const
{
    Labels out(x.rows());
    for (Index i = 0; i < x.rows(); ++i) {
        std::size_t node = 0;
        while (nodes_[node].feature >= 0) {
            node = x(i, nodes_[node].feature) <= nodes_[node].threshold ? nodes_[node].left : nodes_[node].right;
        }
        out(i) = nodes_[node].label;
    }
    return out;
}

} // namespace imputegp
