#ifndef IMPUTEGP_PRIMITIVES_HPP
#define IMPUTEGP_PRIMITIVES_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "imputegp/types.hpp"

namespace imputegp {

enum class GrammarMode { Typed, Penalty };

/// Edge types of the pipeline grammar. Typed mode uses Raw/Imputed/Predictions;
/// penalty mode uses NdArray/Predictions.
enum class GrammarType { Raw, Imputed, NdArray, Predictions };

enum class Role { Imputer, Preprocessor, Classifier };

const char* to_string(GrammarMode mode);
const char* to_string(GrammarType type);
const char* to_string(Role role);
GrammarMode parse_mode(std::string_view text);

using ParamValue = std::variant<std::int64_t, double, std::string>;
using ParamList = std::vector<ParamValue>;

std::string format_param(const ParamValue& value);

struct HyperParam {
    std::string name;
    std::vector<ParamValue> domain;

    bool admits(const ParamValue& value) const;
};

/// Learned operator state. Imputers and preprocessors implement transform,
/// classifiers implement predict.
class Model {
public:
    virtual ~Model() = default;
    virtual Index n_features_in() const = 0;
    virtual Matrix transform(const Matrix& x) const;
    virtual Labels predict(const Matrix& x) const;
};

using FitFunction = std::function<std::shared_ptr<const Model>(const ParamList&, const Matrix&, const Labels&)>;

struct PrimitiveSpec {
    std::string name;
    Role role = Role::Preprocessor;
    GrammarType input = GrammarType::Imputed;
    GrammarType output = GrammarType::Imputed;
    std::vector<HyperParam> hyperparams;
    FitFunction fit_fn;

    bool same_signature(const PrimitiveSpec& other) const { return input == other.input && output == other.output; }
};

/// An ordered primitive catalog under one grammar mode.
class Registry {
public:
    Registry(GrammarMode mode, std::vector<PrimitiveSpec> specs);

    /// The built-in catalog: four imputers, four preprocessors, three classifiers.
    static const Registry& builtin(GrammarMode mode);

    GrammarMode mode() const { return mode_; }
    std::span<const PrimitiveSpec> specs() const { return specs_; }
    const PrimitiveSpec* find(std::string_view name) const;
    // Throws ParseError for unknown names.
    const PrimitiveSpec& at(std::string_view name) const;
    std::vector<const PrimitiveSpec*> with_role(Role role) const;

    /// Signature a role carries in a given mode.
    static std::pair<GrammarType, GrammarType> signature(GrammarMode mode, Role role);

private:
    GrammarMode mode_;
    std::vector<PrimitiveSpec> specs_;
};

inline const Registry& registry(GrammarMode mode) { return Registry::builtin(mode); }

/// The specs in the catalog hold only fit functions; this builds the
/// mode-specific signature list.
std::vector<PrimitiveSpec> builtin_specs(GrammarMode mode);

class FittedOperator {
public:
    FittedOperator(const PrimitiveSpec& spec, ParamList params, std::shared_ptr<const Model> model)
        : spec_(&spec), params_(std::move(params)), model_(std::move(model))
    {
    }

    const PrimitiveSpec& spec() const { return *spec_; }
    const ParamList& params() const { return params_; }
    const Model& model() const { return *model_; }

    template <typename M>
    const M* as() const
    {
        return dynamic_cast<const M*>(model_.get());
    }

private:
    const PrimitiveSpec* spec_;
    ParamList params_;
    std::shared_ptr<const Model> model_;
};

FittedOperator fit(const PrimitiveSpec& spec, const ParamList& params, const Matrix& train, const Labels& train_labels);
Matrix transform(const FittedOperator& op, const Matrix& data);
Labels predict(const FittedOperator& op, const Matrix& data);

} // namespace imputegp

#endif // IMPUTEGP_PRIMITIVES_HPP
