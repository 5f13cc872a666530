#ifndef IMPUTEGP_TESTS_FIXTURES_HPP
#define IMPUTEGP_TESTS_FIXTURES_HPP

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "imputegp/evaluation.hpp"
#include "imputegp/operators.hpp"

namespace fixtures {

using namespace imputegp;

inline std::filesystem::path temp_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("imputegp_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::filesystem::path write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream(path) << text;
    return path;
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Random matrix with roughly `missing_rate` of its cells NaN.
inline Matrix random_matrix(Index rows, Index cols, double missing_rate, std::mt19937_64& rng)
{
    std::normal_distribution<double> value(0.0, 3.0);
    std::bernoulli_distribution missing(missing_rate);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = missing(rng) ? kMissing : value(rng);
        }
    }
    return m;
}

// Test-only classifier: predicts the training majority class (smallest id on ties).
class MajorityModel final : public Model {
public:
    MajorityModel(Index n_in, int label) : n_in_(n_in), label_(label) {}
    Index n_features_in() const override { return n_in_; }
    Labels predict(const Matrix& x) const override { return Labels::Constant(x.rows(), label_); }

private:
    Index n_in_;
    int label_;
};

inline PrimitiveSpec majority_stub(GrammarMode mode)
{
    PrimitiveSpec spec;
    spec.name = "MajorityStub";
    spec.role = Role::Classifier;
    std::tie(spec.input, spec.output) = Registry::signature(mode, Role::Classifier);
    spec.fit_fn = [](const ParamList&, const Matrix& x, const Labels& y) -> std::shared_ptr<const Model> {
        std::map<int, Index> counts;
        for (Index i = 0; i < y.size(); ++i) {
            ++counts[y(i)];
        }
        int best = 0;
        Index best_count = -1;
        for (auto [label, count] : counts) {
            if (count > best_count) {
                best = label;
                best_count = count;
            }
        }
        return std::make_shared<MajorityModel>(x.cols(), best);
    };
    return spec;
}

inline Registry registry_with_stub(GrammarMode mode)
{
    auto specs = builtin_specs(mode);
    specs.push_back(majority_stub(mode));
    return Registry(mode, std::move(specs));
}

inline PipelineTree chain(std::initializer_list<Stage> stages)
{
    return PipelineTree{std::vector<Stage>(stages)};
}

inline Stage knn(std::int64_t k = 5, const std::string& weights = "uniform", std::int64_t p = 2)
{
    return Stage{"KNearestNeighbors", {{"n_neighbors", k}, {"weights", weights}, {"p", p}}};
}

inline Stage plain(const std::string& name) { return Stage{name, {}}; }
inline Stage gnb(double smoothing = 1e-9) { return Stage{"GaussianNB", {{"var_smoothing", smoothing}}}; }

} // namespace fixtures

#endif
