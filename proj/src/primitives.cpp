#include "imputegp/primitives.hpp"

#include <algorithm>

#include "imputegp/format.hpp"
#include "imputegp/operators.hpp"

namespace imputegp {

namespace {

std::int64_t as_int(const ParamValue& v) { return std::get<std::int64_t>(v); }
double as_double(const ParamValue& v) { return std::get<double>(v); }

std::vector<ParamValue> ints(std::initializer_list<std::int64_t> values) { return {values.begin(), values.end()}; }
std::vector<ParamValue> doubles(std::initializer_list<double> values) { return {values.begin(), values.end()}; }

template <typename Stat>
FitFunction column_fill(Stat stat)
{
    return [stat](const ParamList&, const Matrix& x, const Labels&) -> std::shared_ptr<const Model> {
        Vector fill(x.cols());
        for (Index j = 0; j < x.cols(); ++j) {
            fill(j) = stat(x.col(j));
        }
        return std::make_shared<ColumnFill>(std::move(fill));
    };
}

std::vector<PrimitiveSpec> catalog()
{
    using R = Role;
    std::vector<PrimitiveSpec> specs;
    auto add = [&](std::string name, Role role, std::vector<HyperParam> params, FitFunction fn) {
        specs.push_back(PrimitiveSpec{std::move(name), role, GrammarType::Raw, GrammarType::Raw, std::move(params), std::move(fn)});
    };

    add("MeanImpute", R::Imputer, {}, column_fill([](const auto& c) { return observed_mean(c); }));
    add("MedianImpute", R::Imputer, {}, column_fill([](const auto& c) { return observed_median(c); }));
    add("ModeImpute", R::Imputer, {}, column_fill([](const auto& c) { return observed_mode(c); }));
    add("ConstantImpute", R::Imputer, {{"fill", doubles({0.0})}},
        [](const ParamList& p, const Matrix& x, const Labels&) -> std::shared_ptr<const Model> {
            return std::make_shared<ColumnFill>(Vector::Constant(x.cols(), as_double(p[0])));
        });

    add("Standardize", R::Preprocessor, {}, [](const ParamList&, const Matrix& x, const Labels&) -> std::shared_ptr<const Model> {
        Vector mean(x.cols());
        Vector sd(x.cols());
        for (Index j = 0; j < x.cols(); ++j) {
            mean(j) = x.col(j).mean();
            sd(j) = std::sqrt(population_variance(x.col(j)));
        }
        return std::make_shared<Standardizer>(std::move(mean), std::move(sd));
    });
    add("MinMaxScale", R::Preprocessor, {}, [](const ParamList&, const Matrix& x, const Labels&) -> std::shared_ptr<const Model> {
        return std::make_shared<MinMaxScaler>(x.colwise().minCoeff().transpose(), x.colwise().maxCoeff().transpose());
    });
    add("VarianceThreshold", R::Preprocessor, {{"threshold", doubles({0.0, 0.05, 0.1, 0.2})}},
        [](const ParamList& p, const Matrix& x, const Labels&) -> std::shared_ptr<const Model> {
            const double threshold = as_double(p[0]);
            std::vector<Index> kept;
            Index widest = 0;
            double widest_var = -1.0;
            for (Index j = 0; j < x.cols(); ++j) {
                const double v = population_variance(x.col(j));
                if (v > threshold) {
                    kept.push_back(j);
                }
                if (v > widest_var) {
                    widest = j;
                    widest_var = v;
                }
            }
            if (kept.empty()) {
                kept.push_back(widest);
            }
            return std::make_shared<VarianceSelector>(x.cols(), std::move(kept));
        });
    add("Binarize", R::Preprocessor, {{"threshold", doubles({0.0, 0.5, 1.0})}},
        [](const ParamList& p, const Matrix& x, const Labels&) -> std::shared_ptr<const Model> {
            return std::make_shared<Binarizer>(x.cols(), as_double(p[0]));
        });

    add("KNearestNeighbors", R::Classifier,
        {{"n_neighbors", ints({1, 3, 5, 11, 21, 45})}, {"weights", {std::string("uniform"), std::string("distance")}}, {"p", ints({1, 2})}},
        [](const ParamList& p, const Matrix& x, const Labels& y) -> std::shared_ptr<const Model> {
            const auto weights = std::get<std::string>(p[1]) == "distance" ? KNearestNeighbors::Weights::Distance
                                                                           : KNearestNeighbors::Weights::Uniform;
            return std::make_shared<KNearestNeighbors>(x, y, static_cast<Index>(as_int(p[0])), weights, static_cast<int>(as_int(p[2])));
        });
    add("GaussianNB", R::Classifier, {{"var_smoothing", doubles({1e-9, 1e-6, 1e-3})}},
        [](const ParamList& p, const Matrix& x, const Labels& y) -> std::shared_ptr<const Model> {
            return std::make_shared<GaussianNaiveBayes>(x, y, as_double(p[0]));
        });
    add("DecisionTree", R::Classifier, {{"max_depth", ints({1, 2, 3, 4, 5, 6})}, {"min_split", ints({2, 5, 10})}},
        [](const ParamList& p, const Matrix& x, const Labels& y) -> std::shared_ptr<const Model> {
            return std::make_shared<DecisionTree>(x, y, static_cast<int>(as_int(p[0])), static_cast<Index>(as_int(p[1])));
        });
    return specs;
}

} // namespace

const char* to_string(GrammarMode mode)
{
    return mode == GrammarMode::Typed ? "typed" : "penalty";
}

const char* to_string(GrammarType type)
{
    switch (type) {
    case GrammarType::Raw: return "RAW";
    case GrammarType::Imputed: return "IMPUTED";
    case GrammarType::NdArray: return "NDARRAY";
    case GrammarType::Predictions: return "PREDICTIONS";
    }
    return "?";
}

const char* to_string(Role role)
{
    switch (role) {
    case Role::Imputer: return "imputer";
    case Role::Preprocessor: return "preprocessor";
    case Role::Classifier: return "classifier";
    }
    return "?";
}

GrammarMode parse_mode(std::string_view text)
{
    if (text == "typed") {
        return GrammarMode::Typed;
    }
    if (text == "penalty") {
        return GrammarMode::Penalty;
    }
    throw ParseError("unknown grammar mode '" + std::string(text) + "'");
}

std::string format_param(const ParamValue& value)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else if constexpr (std::is_same_v<T, double>) {
                return format_double(v);
            } else {
                return std::to_string(v);
            }
        },
        value);
}

bool HyperParam::admits(const ParamValue& value) const
{
    return std::find(domain.begin(), domain.end(), value) != domain.end();
}

std::pair<GrammarType, GrammarType> Registry::signature(GrammarMode mode, Role role)
{
    if (mode == GrammarMode::Typed) {
        switch (role) {
        case Role::Imputer: return {GrammarType::Raw, GrammarType::Imputed};
        case Role::Preprocessor: return {GrammarType::Imputed, GrammarType::Imputed};
        case Role::Classifier: return {GrammarType::Imputed, GrammarType::Predictions};
        }
    }
    if (role == Role::Classifier) {
        return {GrammarType::NdArray, GrammarType::Predictions};
    }
    return {GrammarType::NdArray, GrammarType::NdArray};
}

std::vector<PrimitiveSpec> builtin_specs(GrammarMode mode)
{
    auto specs = catalog();
    for (auto& s : specs) {
        std::tie(s.input, s.output) = Registry::signature(mode, s.role);
    }
    return specs;
}

Registry::Registry(GrammarMode mode, std::vector<PrimitiveSpec> specs) : mode_(mode), specs_(std::move(specs))
{
    for (const auto& s : specs_) {
        for (const auto& hp : s.hyperparams) {
            if (hp.domain.empty()) {
                throw Error(s.name + "." + hp.name + ": empty hyperparameter domain");
            }
        }
    }
}

const Registry& Registry::builtin(GrammarMode mode)
{
    static const Registry typed(GrammarMode::Typed, builtin_specs(GrammarMode::Typed));
    static const Registry penalty(GrammarMode::Penalty, builtin_specs(GrammarMode::Penalty));
    return mode == GrammarMode::Typed ? typed : penalty;
}

const PrimitiveSpec* Registry::find(std::string_view name) const
{
    auto it = std::find_if(specs_.begin(), specs_.end(), [&](const PrimitiveSpec& s) { return s.name == name; });
    return it == specs_.end() ? nullptr : &*it;
}

const PrimitiveSpec& Registry::at(std::string_view name) const
{
    if (const auto* s = find(name)) {
        return *s;
    }
    throw ParseError("unknown primitive '" + std::string(name) + "'");
}

std::vector<const PrimitiveSpec*> Registry::with_role(Role role) const
{
    std::vector<const PrimitiveSpec*> out;
    for (const auto& s : specs_) {
        if (s.role == role) {
            out.push_back(&s);
        }
    }
    return out;
}

FittedOperator fit(const PrimitiveSpec& spec, const ParamList& params, const Matrix& train, const Labels& train_labels)
{
    if (params.size() != spec.hyperparams.size()) {
        throw Error(spec.name + ": expected " + std::to_string(spec.hyperparams.size()) + " parameter(s)");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!spec.hyperparams[i].admits(params[i])) {
            throw Error(spec.name + ": " + spec.hyperparams[i].name + "=" + format_param(params[i]) + " outside its domain");
        }
    }
    if (spec.role != Role::Imputer && has_missing(train)) {
        throw IncompleteInputError(spec.name + " received missing values");
    }
    if (spec.role == Role::Classifier && train_labels.size() != train.rows()) {
        throw DimensionError(spec.name + ": label count does not match rows");
    }
    if (train.rows() == 0) {
        throw DimensionError(spec.name + ": empty training matrix");
    }
    return FittedOperator(spec, params, spec.fit_fn(params, train, train_labels));
}

namespace {

void check_input(const FittedOperator& op, const Matrix& data)
{
    if (data.cols() != op.model().n_features_in()) {
        throw DimensionError(op.spec().name + ": fitted on " + std::to_string(op.model().n_features_in()) + " column(s), got " +
                             std::to_string(data.cols()));
    }
    if (op.spec().role != Role::Imputer && has_missing(data)) {
        throw IncompleteInputError(op.spec().name + " received missing values");
    }
}

} // namespace

Matrix transform(const FittedOperator& op, const Matrix& data)
{
    if (op.spec().role == Role::Classifier) {
        throw Error(op.spec().name + " is a classifier");
    }
    check_input(op, data);
    return op.model().transform(data);
}

Labels predict(const FittedOperator& op, const Matrix& data)
{
    if (op.spec().role != Role::Classifier) {
        throw Error(op.spec().name + " is not a classifier");
    }
    check_input(op, data);
    return op.model().predict(data);
}

} // namespace imputegp
