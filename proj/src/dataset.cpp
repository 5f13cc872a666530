#include "imputegp/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "imputegp/format.hpp"

namespace imputegp {

namespace {

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> cells;
    std::string_view rest(line);
    while (true) {
        const auto comma = rest.find(',');
        cells.emplace_back(trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    return cells;
}

std::size_t resolve_label_column(const std::vector<std::string>& header, const std::string& label_column)
{
    auto it = std::find(header.begin(), header.end(), label_column);
    if (it != header.end()) {
        return static_cast<std::size_t>(it - header.begin());
    }
    if (auto idx = parse_integer(label_column); idx && *idx >= 0 && static_cast<std::size_t>(*idx) < header.size()) {
        return static_cast<std::size_t>(*idx);
    }
    throw DataError("label column '" + label_column + "' not found");
}

// Integer-looking class names sort numerically, anything else lexicographically.
std::vector<std::string> order_class_names(std::set<std::string> names)
{
    std::vector<std::string> out(names.begin(), names.end());
    const bool numeric = std::all_of(out.begin(), out.end(), [](const std::string& s) { return parse_integer(s).has_value(); });
    if (numeric) {
        std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) { return *parse_integer(a) < *parse_integer(b); });
    }
    return out;
}

} // namespace

const char* to_string(FeatureKind kind)
{
    switch (kind) {
    case FeatureKind::Continuous: return "continuous";
    case FeatureKind::Discrete: return "discrete";
    case FeatureKind::Binary: return "binary";
    }
    return "?";
}

void Dataset::check() const
{
    if (labels.size() != features.rows()) {
        throw DataError("label count does not match feature rows");
    }
    if (features.rows() < 2) {
        throw DataError("dataset needs at least 2 rows");
    }
    if (features.cols() < 1) {
        throw DataError("dataset needs at least 1 feature");
    }
    if (static_cast<Index>(kinds.size()) != features.cols()) {
        throw DataError("feature kind count does not match feature columns");
    }
    if (labels.minCoeff() < 0 || (!class_names.empty() && labels.maxCoeff() >= static_cast<int>(class_names.size()))) {
        throw DataError("label id out of range");
    }
}

FeatureKind infer_kind(const Eigen::Ref<const Vector>& column, std::size_t discrete_cap)
{
    std::set<double> distinct;
    bool integral = true;
    for (Index i = 0; i < column.size(); ++i) {
        const double v = column(i);
        if (is_missing(v)) {
            continue;
        }
        distinct.insert(v);
        integral = integral && std::floor(v) == v;
    }
    if (integral && distinct.size() <= 2) {
        return FeatureKind::Binary;
    }
    if (integral && distinct.size() <= discrete_cap) {
        return FeatureKind::Discrete;
    }
    return FeatureKind::Continuous;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(path.string() + ": empty file");
    }
    const auto header = split_row(line);
    const std::size_t label_col = resolve_label_column(header, options.label_column);

    std::vector<std::vector<double>> rows;
    std::vector<std::string> raw_labels;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_row(line);
        if (cells.size() != header.size()) {
            throw DataError(path.string() + ": row " + std::to_string(row_no) + " has " + std::to_string(cells.size()) +
                            " columns, expected " + std::to_string(header.size()));
        }
        std::vector<double> values;
        values.reserve(header.size() - 1);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string& cell = cells[c];
            const bool missing = cell.empty() || cell == options.missing_token;
            if (c == label_col) {
                if (missing) {
                    throw DataError(path.string() + ": row " + std::to_string(row_no) + " has a missing label");
                }
                raw_labels.push_back(cell);
                continue;
            }
            if (missing) {
                values.push_back(kMissing);
            } else if (auto v = parse_double(cell)) {
                values.push_back(*v);
            } else {
                throw DataError(path.string() + ": cannot parse '" + cell + "' at row " + std::to_string(row_no) +
                                ", column " + std::to_string(c + 1));
            }
        }
        rows.push_back(std::move(values));
    }

    Dataset data;
    data.name = path.stem().string();
    data.label_name = header[label_col];
    data.label_position = label_col;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_col) {
            data.feature_names.push_back(header[c]);
        }
    }
    data.class_names = order_class_names(std::set<std::string>(raw_labels.begin(), raw_labels.end()));
    if (data.class_names.size() < options.min_classes) {
        throw DataError(path.string() + ": found " + std::to_string(data.class_names.size()) + " class(es), need at least " +
                        std::to_string(options.min_classes));
    }

    const auto n = static_cast<Index>(rows.size());
    const auto m = static_cast<Index>(data.feature_names.size());
    data.features.resize(n, m);
    data.labels.resize(n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < m; ++j) {
            data.features(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        const auto& lbl = raw_labels[static_cast<std::size_t>(i)];
        data.labels(i) = static_cast<int>(std::find(data.class_names.begin(), data.class_names.end(), lbl) - data.class_names.begin());
    }
    for (Index j = 0; j < m; ++j) {
        data.kinds.push_back(infer_kind(data.features.col(j), options.discrete_cap));
    }
    data.check();
    return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    const std::size_t n_cols = data.feature_names.size() + 1;
    auto write_row = [&](auto&& cell) {
        std::size_t feat = 0;
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (c > 0) {
                out << ',';
            }
            if (c == data.label_position) {
                out << cell(-1);
            } else {
                out << cell(static_cast<Index>(feat++));
            }
        }
        out << '\n';
    };
    write_row([&](Index j) { return j < 0 ? data.label_name : data.feature_names[static_cast<std::size_t>(j)]; });
    for (Index i = 0; i < data.n_cases(); ++i) {
        write_row([&](Index j) -> std::string {
            if (j < 0) {
                return data.class_names[static_cast<std::size_t>(data.labels(i))];
            }
            const double v = data.features(i, j);
            return is_missing(v) ? "NaN" : format_double(v);
        });
    }
    if (!out) {
        throw DataError("write failed: " + path.string());
    }
}

Dataset inject_mcar(const Dataset& data, double mdp, std::uint64_t seed)
{
    if (!(mdp >= 0.0 && mdp <= 100.0)) {
        throw DataError("mdp out of range");
    }
    const Index cells = data.n_cases() * data.n_feats();
    const auto n_masked = static_cast<Index>(std::floor(static_cast<double>(cells) * mdp / 100.0));

    Dataset out = data;
    std::vector<Index> order(static_cast<std::size_t>(cells));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates: the first n_masked slots are a uniform sample.
    for (Index i = 0; i < n_masked; ++i) {
        std::uniform_int_distribution<Index> pick(i, cells - 1);
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
        const Index cell = order[static_cast<std::size_t>(i)];
        out.features(cell / data.n_feats(), cell % data.n_feats()) = kMissing;
    }
    return out;
}

DatasetSummary summarize(const Dataset& data)
{
    data.check();
    DatasetSummary s;
    s.n_feats = data.n_feats();
    s.n_cases = data.n_cases();
    s.n_classes = static_cast<Index>(std::set<int>(data.labels.begin(), data.labels.end()).size());
    s.normalized_entropy = normalized_entropy(data.labels);
    s.missing_fraction = static_cast<double>(count_missing(data.features)) / static_cast<double>(s.n_feats * s.n_cases);
    for (auto kind : data.kinds) {
        ++s.per_kind_counts[static_cast<std::size_t>(kind)];
    }
    return s;
}

Dataset make_dataset(Matrix features, const Labels& labels, std::string name)
{
    Dataset data;
    data.name = std::move(name);
    std::vector<int> distinct(labels.begin(), labels.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    data.labels.resize(labels.size());
    for (Index i = 0; i < labels.size(); ++i) {
        data.labels(i) = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), labels(i)) - distinct.begin());
    }
    for (int c : distinct) {
        data.class_names.push_back(std::to_string(c));
    }
    data.features = std::move(features);
    for (Index j = 0; j < data.features.cols(); ++j) {
        data.feature_names.push_back("f" + std::to_string(j));
        data.kinds.push_back(infer_kind(data.features.col(j)));
    }
    data.label_position = data.feature_names.size();
    data.check();
    return data;
}

Dataset synthetic_blobs(Index n_cases, Index n_feats, int n_classes, double separation, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    Matrix x(n_cases, n_feats);
    Labels y(n_cases);
    for (Index i = 0; i < n_cases; ++i) {
        y(i) = static_cast<int>(i % n_classes);
        for (Index j = 0; j < n_feats; ++j) {
            x(i, j) = separation * y(i) + noise(rng);
        }
    }
    return make_dataset(std::move(x), y, "blobs");
}

} // namespace imputegp
