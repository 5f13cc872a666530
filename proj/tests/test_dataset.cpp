#include <doctest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "imputegp/dataset.hpp"

using namespace imputegp;

namespace {

std::string balanced_binary_csv(int rows, int feats)
{
    std::string text;
    for (int j = 0; j < feats; ++j) {
        text += "x" + std::to_string(j) + ",";
    }
    text += "class\n";
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < feats; ++j) {
            text += std::to_string(i * 0.5 + j) + ",";
        }
        text += std::to_string(i % 2) + "\n";
    }
    return text;
}

std::set<std::pair<Index, Index>> missing_cells(const Matrix& m)
{
    std::set<std::pair<Index, Index>> out;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (is_missing(m(i, j))) {
                out.emplace(i, j);
            }
        }
    }
    return out;
}

} // namespace

TEST_CASE("load_csv reads a 50x4 binary-label file")
{
    auto dir = fixtures::temp_dir("load");
    auto path = fixtures::write_file(dir / "aids.csv", balanced_binary_csv(50, 4));
    const Dataset d = load_csv(path);
    CHECK(d.n_cases() == 50);
    CHECK(d.n_feats() == 4);
    CHECK(d.class_names.size() == 2);
    CHECK(d.name == "aids");
    CHECK_FALSE(d.has_missing());
}

TEST_CASE("load_csv treats NaN and empty cells as missing")
{
    auto dir = fixtures::temp_dir("load_nan");
    auto path = fixtures::write_file(dir / "m.csv", "a,b,class\nNaN,NaN,0\n,NaN,1\nNaN,,1\n");
    const Dataset d = load_csv(path);
    CHECK(summarize(d).missing_fraction == 1.0);

    auto custom = fixtures::write_file(dir / "q.csv", "a,class\n?,0\n1.5,1\n");
    CsvOptions opts;
    opts.missing_token = "?";
    CHECK(is_missing(load_csv(custom, opts).features(0, 0)));
}

TEST_CASE("load_csv infers feature kinds")
{
    auto dir = fixtures::temp_dir("kinds");
    auto path = fixtures::write_file(dir / "k.csv",
                                     "bin,cont,disc,class\n"
                                     "0,1.5,1,a\n"
                                     "1,2.7,2,b\n"
                                     "1,1.5,3,a\n"
                                     "0,2.7,7,b\n");
    const Dataset d = load_csv(path);
    REQUIRE(d.kinds.size() == 3);
    CHECK(d.kinds[0] == FeatureKind::Binary);
    CHECK(d.kinds[1] == FeatureKind::Continuous);
    CHECK(d.kinds[2] == FeatureKind::Discrete);
    // String labels map to ids in lexicographic order.
    CHECK(d.class_names == std::vector<std::string>{"a", "b"});
    CHECK(d.labels(1) == 1);
}

TEST_CASE("load_csv reports errors")
{
    auto dir = fixtures::temp_dir("errors");
    CHECK_THROWS_AS(load_csv(dir / "nope.csv"), DataError);

    auto bad = fixtures::write_file(dir / "bad.csv", "a,class\n1,0\nabc,1\n");
    CHECK_THROWS_WITH_AS(load_csv(bad), doctest::Contains("row 3"), DataError);

    auto nolabel = fixtures::write_file(dir / "nolabel.csv", "a,class\n1,0\n2,\n");
    CHECK_THROWS_WITH_AS(load_csv(nolabel), doctest::Contains("missing label"), DataError);

    auto one = fixtures::write_file(dir / "one.csv", "a,class\n1,0\n2,0\n");
    CHECK_THROWS_AS(load_csv(one), DataError);
    CsvOptions relaxed;
    relaxed.min_classes = 1;
    CHECK(load_csv(one, relaxed).n_cases() == 2);

    CsvOptions missing_col;
    missing_col.label_column = "target";
    CHECK_THROWS_WITH_AS(load_csv(one, missing_col), doctest::Contains("not found"), DataError);
}

TEST_CASE("label column may be given by index")
{
    auto dir = fixtures::temp_dir("label_index");
    auto path = fixtures::write_file(dir / "i.csv", "y,a,b\n1,0.5,2\n0,1.5,3\n");
    CsvOptions opts;
    opts.label_column = "0";
    const Dataset d = load_csv(path, opts);
    CHECK(d.n_feats() == 2);
    CHECK(d.label_position == 0);
    CHECK(d.features(1, 0) == doctest::Approx(1.5));
}

TEST_CASE("write_csv round-trips through load_csv")
{
    auto dir = fixtures::temp_dir("roundtrip");
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        Dataset d = synthetic_blobs(30, 5, 3, 2.0, 100 + trial);
        d = inject_mcar(d, 20.0, trial);
        d.label_position = static_cast<std::size_t>(trial % 6);
        write_csv(d, dir / "rt.csv");
        CsvOptions opts;
        opts.label_column = d.label_name;
        const Dataset back = load_csv(dir / "rt.csv", opts);
        CHECK(back.labels == d.labels);
        CHECK(back.class_names == d.class_names);
        CHECK(back.feature_names == d.feature_names);
        CHECK(back.label_position == d.label_position);
        CHECK(missing_cells(back.features) == missing_cells(d.features));
        bool equal = true;
        for (Index i = 0; i < d.n_cases(); ++i) {
            for (Index j = 0; j < d.n_feats(); ++j) {
                const double a = d.features(i, j);
                const double b = back.features(i, j);
                equal = equal && ((is_missing(a) && is_missing(b)) || a == b);
            }
        }
        CHECK(equal);
    }
    CHECK(fixtures::read_file(dir / "rt.csv").find("NaN") != std::string::npos);
}

TEST_CASE("inject_mcar masks exactly floor(cells * mdp / 100) cells")
{
    const Dataset d50 = synthetic_blobs(50, 4, 2, 3.0, 1);
    const Dataset masked = inject_mcar(d50, 30, 7);
    CHECK(count_missing(masked.features) == 60);
    CHECK(masked.labels == d50.labels);

    const Dataset d20 = synthetic_blobs(4, 5, 2, 3.0, 2);
    const Dataset a = inject_mcar(d20, 25, 99);
    const Dataset b = inject_mcar(d20, 25, 99);
    CHECK(count_missing(a.features) == 5);
    CHECK(missing_cells(a.features) == missing_cells(b.features));

    const Dataset zero = inject_mcar(d50, 0, 3);
    CHECK(zero.features == d50.features);

    CHECK(count_missing(inject_mcar(d20, 100, 5).features) == 20);
}

TEST_CASE("inject_mcar rejects mdp outside [0, 100]")
{
    const Dataset d = synthetic_blobs(10, 2, 2, 1.0, 1);
    CHECK_THROWS_WITH_AS(inject_mcar(d, 101, 0), "mdp out of range", DataError);
    CHECK_THROWS_AS(inject_mcar(d, -1, 0), DataError);
}

TEST_CASE("inject_mcar property: exact count, labels and observed cells untouched")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rows = std::uniform_int_distribution<Index>(2, 40)(rng);
        const auto cols = std::uniform_int_distribution<Index>(1, 9)(rng);
        const double mdp = std::uniform_int_distribution<int>(0, 100)(rng);
        const Dataset d = synthetic_blobs(rows, cols, 2, 1.0, static_cast<std::uint64_t>(trial));
        const Dataset m = inject_mcar(d, mdp, static_cast<std::uint64_t>(trial) * 31);
        const Index expected = static_cast<Index>(std::floor(static_cast<double>(rows * cols) * mdp / 100.0));
        CHECK(count_missing(m.features) == expected);
        CHECK(m.labels == d.labels);
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) {
                if (!is_missing(m.features(i, j))) {
                    CHECK(m.features(i, j) == d.features(i, j));
                }
            }
        }
    }
}

TEST_CASE("normalized_entropy values")
{
    Labels balanced(4);
    balanced << 0, 1, 0, 1;
    CHECK(normalized_entropy(balanced) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(normalized_entropy(Labels::Constant(7, 3)) == 0.0);

    Labels skewed(4);
    skewed << 1, 0, 0, 0;
    // -(0.25 log2 0.25 + 0.75 log2 0.75), evaluated independently.
    CHECK(normalized_entropy(skewed) == doctest::Approx(0.8112781244591328).epsilon(1e-12));

    CHECK_THROWS_AS(normalized_entropy(Labels(0)), DataError);
}

TEST_CASE("normalized_entropy is invariant to permutation and renaming")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto n = std::uniform_int_distribution<Index>(1, 60)(rng);
        Labels y(n);
        for (Index i = 0; i < n; ++i) {
            y(i) = std::uniform_int_distribution<int>(0, 4)(rng);
        }
        const double h = normalized_entropy(y);
        CHECK(h >= 0.0);
        CHECK(h <= 1.0 + 1e-12);

        Labels shuffled = y;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(normalized_entropy(shuffled) == doctest::Approx(h).epsilon(1e-12));

        Labels renamed = (y.array() * 7 + 100).matrix();
        CHECK(normalized_entropy(renamed) == doctest::Approx(h).epsilon(1e-12));
    }
    for (int n_classes = 2; n_classes <= 9; ++n_classes) {
        Labels uniform(n_classes * 5);
        for (Index i = 0; i < uniform.size(); ++i) {
            uniform(i) = static_cast<int>(i % n_classes);
        }
        CHECK(std::abs(normalized_entropy(uniform) - 1.0) < 1e-12);
    }
}

TEST_CASE("summarize")
{
    const Dataset d = synthetic_blobs(50, 4, 2, 3.0, 9);
    const DatasetSummary s = summarize(d);
    CHECK(s.n_classes == 2);
    CHECK(s.normalized_entropy == doctest::Approx(1.0));
    CHECK(s.n_cases == 50);
    CHECK(s.n_feats == 4);
    CHECK(s.missing_fraction == 0.0);
    CHECK(s.per_kind_counts[0] + s.per_kind_counts[1] + s.per_kind_counts[2] == 4);

    const DatasetSummary m = summarize(inject_mcar(d, 30, 4));
    CHECK(m.missing_fraction == doctest::Approx(60.0 / 200.0));
}
