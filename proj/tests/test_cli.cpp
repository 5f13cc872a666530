#include <doctest.h>

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "imputegp/cli.hpp"
#include "imputegp/dataset.hpp"

using namespace imputegp;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli_run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

fs::path blobs_csv(const fs::path& dir, const std::string& name, Index rows = 50, Index feats = 4)
{
    Dataset d = synthetic_blobs(rows, feats, 2, 2.0, 3);
    d.name = name;
    write_csv(d, dir / (name + ".csv"));
    return dir / (name + ".csv");
}

} // namespace

TEST_CASE("cli inject masks the requested share")
{
    auto dir = fixtures::temp_dir("cli_inject");
    const auto in = blobs_csv(dir, "aids");
    const auto r = cli_run({"inject", "--data", in.string(), "--mdp", "30", "--seed", "1", "--out", (dir / "m.csv").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("masked 60 of 200 cells") != std::string::npos);
    CHECK(count_missing(load_csv(dir / "m.csv").features) == 60);

    const auto again = cli_run({"inject", "--data", in.string(), "--mdp", "30", "--seed", "1", "--out", (dir / "m2.csv").string()});
    CHECK(fixtures::read_file(dir / "m.csv") == fixtures::read_file(dir / "m2.csv"));

    const auto bad = cli_run({"inject", "--data", in.string(), "--mdp", "101", "--out", (dir / "x.csv").string()});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("mdp out of range") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "x.csv"));
}

TEST_CASE("cli describe")
{
    auto dir = fixtures::temp_dir("cli_describe");
    const auto in = blobs_csv(dir, "aids");
    const auto r = cli_run({"describe", "--data", in.string()});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("aids: n_feats=4 n_cases=50", 0) == 0);
    CHECK(r.out.find("n=2 Hn=1.0000") != std::string::npos);
    CHECK(r.out.find("missing_fraction=0.0000") != std::string::npos);

    fixtures::write_file(dir / "allnan.csv", "a,class\nNaN,0\nNaN,0\n");
    const auto empty = cli_run({"describe", "--data", (dir / "allnan.csv").string()});
    CHECK(empty.code == 0);
    CHECK(empty.out.find("n=1 Hn=0.0000 missing_fraction=1.0000") != std::string::npos);

    CHECK(cli_run({"describe", "--data", (dir / "nope.csv").string()}).code == 1);
    CHECK(cli_run({"describe"}).code == 1);
    CHECK(cli_run({}).code == 1);
    CHECK(cli_run({"--help"}).code == 0);
}

TEST_CASE("cli validate exit codes")
{
    auto dir = fixtures::temp_dir("cli_validate");
    fixtures::write_file(dir / "ok.txt", "MedianImpute()→KNearestNeighbors(n_neighbors=5,weights=uniform,p=2)\n");
    const auto ok = cli_run({"validate", "--pipeline", (dir / "ok.txt").string()});
    CHECK(ok.code == 0);
    CHECK(ok.out == "MedianImpute()→KNearestNeighbors(n_neighbors=5,weights=uniform,p=2)\nOK\n");

    fixtures::write_file(dir / "two.txt", "MeanImpute()->MedianImpute()->GaussianNB(var_smoothing=1e-09)");
    const auto two = cli_run({"validate", "--pipeline", (dir / "two.txt").string()});
    CHECK(two.code == 2);
    CHECK(two.out.find("violation: imputer misplaced") != std::string::npos);

    // The same chain is fine for the penalty grammar.
    CHECK(cli_run({"validate", "--pipeline", (dir / "two.txt").string(), "--mode", "penalty"}).code == 0);

    fixtures::write_file(dir / "bad.txt", "MeanImpute()→Wat()");
    const auto bad = cli_run({"validate", "--pipeline", (dir / "bad.txt").string()});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("unknown primitive") != std::string::npos);

    fixtures::write_file(dir / "p.json",
                         R"([{"name":"Standardize","params":{}},{"name":"GaussianNB","params":{"var_smoothing":1e-9}}])");
    const auto pen = cli_run({"validate", "--pipeline", (dir / "p.json").string(), "--mode", "penalty"});
    CHECK(pen.code == 2);
    CHECK(pen.out.find("no initial imputer") != std::string::npos);
    const auto complete = blobs_csv(dir, "complete");
    CHECK(cli_run({"validate", "--pipeline", (dir / "p.json").string(), "--mode", "penalty", "--data", complete.string()}).code == 0);

    CHECK(cli_run({"validate", "--pipeline", (dir / "ok.txt").string(), "--mode", "loose"}).code == 1);
}

TEST_CASE("cli evolve writes reproducible reports")
{
    auto dir = fixtures::temp_dir("cli_evolve");
    const auto in = blobs_csv(dir, "blobs");
    const std::vector<std::string> base = {"evolve", "--data", in.string(), "--mode", "penalty", "--pop", "8", "--gens", "3",
                                           "--mdp", "20", "--seed", "4"};
    auto a = base;
    a.insert(a.end(), {"--out-dir", (dir / "a").string()});
    auto b = base;
    b.insert(b.end(), {"--out-dir", (dir / "b").string()});
    const auto ra = cli_run(a);
    const auto rb = cli_run(b);
    CHECK(ra.code == 0);
    CHECK(ra.out.find("champion: ") == 0);
    CHECK(ra.out == rb.out);
    CHECK(fixtures::read_file(dir / "a" / "report.json") == fixtures::read_file(dir / "b" / "report.json"));
    CHECK(fixtures::read_file(dir / "a" / "curve.csv") == fixtures::read_file(dir / "b" / "curve.csv"));

    const auto report = nlohmann::json::parse(fixtures::read_file(dir / "a" / "report.json"));
    CHECK(report["config"]["mode"] == "penalty");
    CHECK(report["curve"].size() == report["counters"]["executions"].get<std::size_t>());
    CHECK(report["generation_best"].size() == 4);

    const std::vector<std::string> capped = {"evolve", "--data", in.string(), "--pop", "8", "--gens", "40", "--max-evals", "12",
                                             "--out-dir", (dir / "c").string()};
    const auto rc = cli_run(capped);
    CHECK(rc.code == 0);
    CHECK(rc.out.find("executions=12 ") != std::string::npos);
    CHECK(line_count(fixtures::read_file(dir / "c" / "curve.csv")) == 13);

    const auto broken = cli_run({"evolve", "--data", in.string(), "--pop", "1", "--out-dir", (dir / "d").string()});
    CHECK(broken.code == 1);
    CHECK(broken.err.find("population size") != std::string::npos);
}

TEST_CASE("cli compare writes per-run and mean curves")
{
    auto dir = fixtures::temp_dir("cli_compare");
    const auto in = blobs_csv(dir, "blobs", 40, 3);
    const auto r = cli_run({"compare", "--data", in.string(), "--runs", "2", "--pop", "6", "--gens", "2", "--mdp", "30", "--seed",
                            "9", "--out-dir", (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("blobs typed: mean_final_accuracy=") != std::string::npos);
    CHECK(r.out.find("blobs penalty: mean_final_accuracy=") != std::string::npos);
    for (std::string mode : {"typed", "penalty"}) {
        std::size_t shortest = SIZE_MAX;
        for (std::string run : {"run_000", "run_001"}) {
            const auto run_dir = dir / "out" / mode / run;
            CHECK(fs::exists(run_dir / "report.json"));
            shortest = std::min(shortest, line_count(fixtures::read_file(run_dir / "curve.csv")));
        }
        CHECK(line_count(fixtures::read_file(dir / "out" / mode / "mean_curve.csv")) == shortest);
    }

    const auto second = blobs_csv(dir, "other", 40, 3);
    const auto multi = cli_run({"compare", "--data", in.string(), second.string(), "--runs", "1", "--pop", "4", "--gens", "1",
                                "--out-dir", (dir / "multi").string()});
    CHECK(multi.code == 0);
    CHECK(fs::exists(dir / "multi" / "blobs" / "typed" / "mean_curve.csv"));
    CHECK(fs::exists(dir / "multi" / "other" / "penalty" / "run_000" / "curve.csv"));
}

TEST_CASE("cli reads a config file")
{
    auto dir = fixtures::temp_dir("cli_config");
    const auto in = blobs_csv(dir, "blobs", 30, 3);
    fixtures::write_file(dir / "run.ini", "[evolve]\npop=5\ngens=1\nseed=2\n");
    const auto r = cli_run({"--config", (dir / "run.ini").string(), "evolve", "--data", in.string(), "--out-dir", (dir / "o").string()});
    CHECK(r.code == 0);
    const auto report = nlohmann::json::parse(fixtures::read_file(dir / "o" / "report.json"));
    CHECK(report["config"]["population_size"] == 5);
    CHECK(report["config"]["seed"] == 2);
}
