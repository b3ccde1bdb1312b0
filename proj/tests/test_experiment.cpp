#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <wcebridge/experiment.hpp>

using namespace wce;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("wcebridge_test_" + name);
    fs::remove_all(p);
    return p;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(WCEBRIDGE_CLI) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

ExperimentConfig small()
{
    ExperimentConfig c;
    c.L = 10;
    c.grid = 100;
    c.n_paths = 50;
    c.seed = 17;
    return c;
}

} // namespace

TEST(Config, Defaults)
{
    const ExperimentConfig c;
    EXPECT_EQ(c.p, 12u);
    EXPECT_EQ(c.grid, 1000u);
    EXPECT_EQ(c.n_paths, 1000u);
    EXPECT_EQ(c.effective_eval_time(), 0.5);
    EXPECT_EQ(c.scheme, IndexScheme::TableA);
    EXPECT_EQ(c.effective_baselines(), std::vector<BaselineKind>{BaselineKind::ExactOu});
}

TEST(Config, ParsesJson)
{
    const auto j = nlohmann::json::parse(R"({
        "model": "GBM", "params": {"a": 0.2, "sigma": 0.3}, "eta": 1, "theta": 1.5, "T": 2,
        "p": 4, "L": 7, "grid": 200, "paths": 10, "seed": 99, "index_scheme": "FullUpToOrder",
        "eval_time": 0.25, "baselines": ["DoobH"], "out": "x", "threads": 2, "x0": 0.9})");
    const auto c = config_from_json(j);
    EXPECT_EQ(c.model, ModelKind::GBM);
    EXPECT_EQ(c.rate, 0.2);
    EXPECT_EQ(c.sigma, 0.3);
    EXPECT_EQ(c.theta, 1.5);
    EXPECT_EQ(c.T, 2.0);
    EXPECT_EQ(c.p, 4u);
    EXPECT_EQ(c.L, 7u);
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(c.scheme, IndexScheme::FullUpToOrder);
    EXPECT_EQ(c.effective_eval_time(), 0.25);
    EXPECT_EQ(c.effective_x0(), 0.9);
    EXPECT_EQ(c.out_dir, "x");
    EXPECT_EQ(c.baselines, std::vector<BaselineKind>{BaselineKind::DoobH});
    EXPECT_NO_THROW(c.validate());
    EXPECT_NO_THROW(c.validate_baselines());
}

TEST(Config, ErrorsNameTheField)
{
    auto field_of = [](const char* text) {
        try {
            auto c = config_from_json(nlohmann::json::parse(text));
            c.validate();
            c.validate_baselines();
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    EXPECT_EQ(field_of(R"({"modle": "OU"})"), "modle");
    EXPECT_EQ(field_of(R"({"model": "Heston"})"), "model");
    EXPECT_EQ(field_of(R"({"grid": 1})"), "grid");
    EXPECT_EQ(field_of(R"({"T": -1})"), "T");
    EXPECT_EQ(field_of(R"({"eval_time": 3})"), "eval_time");
    EXPECT_EQ(field_of(R"({"paths": 0})"), "paths");
    EXPECT_EQ(field_of(R"({"L": "ten"})"), "L");
    EXPECT_EQ(field_of(R"({"params": {"beta": 1}})"), "params.beta");
    EXPECT_EQ(field_of(R"({"model": "GBM", "eta": 1, "theta": 1, "baselines": ["BladtSorensen"]})"), "baseline");
    EXPECT_EQ(field_of(R"({"model": "Logistic"})"), "baseline");
    EXPECT_EQ(field_of(R"({"ladder": [10, 5]})"), "ladder");
}

TEST(Config, HashTracksResultFields)
{
    auto c = small();
    const auto h = config_hash(c);
    EXPECT_EQ(h.size(), 16u);
    EXPECT_EQ(h, config_hash(c));
    c.threads = 4;
    c.out_dir = "elsewhere";
    EXPECT_EQ(h, config_hash(c));
    c.seed = 18;
    EXPECT_NE(h, config_hash(c));
    EXPECT_EQ(config_to_json(config_from_json(config_to_json(c))), config_to_json(c));
}

TEST(Simulate, SinglePathAtLZeroIsDeterministicPart)
{
    auto c = small();
    c.L = 0;
    c.n_paths = 1;
    c.theta = 1.0;
    const auto s = simulate(c);
    ASSERT_EQ(s.paths.size(), 1u);
    const auto coeffs = wce_coefficients(c, 0);
    EXPECT_EQ(s.paths[0].values, std::vector<double>(coeffs.row(0).begin(), coeffs.row(0).end()));
}

TEST(Simulate, FilesAreReproducible)
{
    auto c = small();
    const auto d1 = scratch("sim1"), d2 = scratch("sim2");
    c.out_dir = d1.string();
    write_simulation(c, simulate(c));
    c.out_dir = d2.string();
    c.threads = 3;
    write_simulation(c, simulate(c));
    EXPECT_EQ(slurp(d1 / "paths.csv"), slurp(d2 / "paths.csv"));
    auto j1 = nlohmann::json::parse(slurp(d1 / "summary.json"));
    auto j2 = nlohmann::json::parse(slurp(d2 / "summary.json"));
    j1.erase("timing");
    j2.erase("timing");
    EXPECT_EQ(j1, j2);
    const auto csv = slurp(d1 / "paths.csv");
    EXPECT_EQ(csv.rfind("# wcebridge ", 0), 0u);
    EXPECT_NE(csv.find("# config_hash=" + config_hash(c) + "\n"), std::string::npos);
    EXPECT_NE(csv.find("\npath_id,t,y\n"), std::string::npos);
    EXPECT_EQ(j1["meta"]["config_hash"], config_hash(c));
    EXPECT_EQ(j1["meta"]["seed"], 17);
    EXPECT_EQ(j1["meta"]["version"], std::string(kVersion));
}

TEST(Validate, RecordsAndFiles)
{
    auto c = small();
    c.baselines = {BaselineKind::ExactOu, BaselineKind::DoobH, BaselineKind::BladtSorensen};
    const auto recs = validate(c);
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[0].comparison, "WCE vs ExactOU");
    for (const auto& r : recs) {
        EXPECT_EQ(r.ks.n, 50u);
        EXPECT_EQ(r.ks.m, 50u);
        EXPECT_EQ(r.L, 10u);
        EXPECT_EQ(r.qq.size(), c.qq_points);
    }
    const auto dir = scratch("val");
    c.out_dir = dir.string();
    write_validation(c, recs);
    const auto ks = nlohmann::json::parse(slurp(dir / "ks.json"));
    ASSERT_EQ(ks["records"].size(), 3u);
    for (const char* k : {"comparison", "endpoint_pair", "L", "d", "p_value", "n", "m", "seed"})
        EXPECT_TRUE(ks["records"][0].contains(k)) << k;
    const auto qq = nlohmann::json::parse(slurp(dir / "qq_ExactOU.json"));
    EXPECT_EQ(qq["q_wce"].size(), qq["q_baseline"].size());
    EXPECT_TRUE(fs::exists(dir / "qq_BladtSorensen.csv"));
}

TEST(Validate, WceAgainstItselfIsNull)
{
    // Two WCE samples with different seeds come from the same law.
    auto c = small();
    c.n_paths = 300;
    int rejected = 0;
    for (std::uint64_t r = 0; r < 40; ++r) {
        const auto a = run_wce(c, c.L, 1000 + r, c.n_paths);
        const auto b = run_wce(c, c.L, 5000 + r, c.n_paths);
        rejected += ks_two_sample(marginal_at(a.paths, 0.5), marginal_at(b.paths, 0.5)).p_value < 0.05;
    }
    EXPECT_LE(rejected, 7);
}

TEST(MinL, ZeroNeverPasses)
{
    auto c = small();
    c.ladder = {0};
    c.repetitions = 3;
    const auto r = min_l(c);
    ASSERT_EQ(r.ladder.size(), 1u);
    EXPECT_FALSE(r.ladder[0].pass);
    EXPECT_FALSE(r.min_L);
    const auto dir = scratch("minl");
    c.out_dir = dir.string();
    write_min_l(c, r);
    const auto j = nlohmann::json::parse(slurp(dir / "min_l.json"));
    EXPECT_EQ(j["result"], "none found");
    EXPECT_TRUE(j["min_L"].is_null());
}

TEST(Benchmark, CsvFormat)
{
    auto c = small();
    c.l_list = {5, 20};
    const auto rows = benchmark(c);
    ASSERT_EQ(rows.size(), 2u);
    const auto dir = scratch("bench");
    c.out_dir = dir.string();
    write_benchmark(c, rows);
    const auto text = slurp(dir / "benchmark.csv");
    EXPECT_NE(text.find("\nL,rows,propagator_seconds,per_bridge_seconds,n_paths\n5,"), std::string::npos);
    EXPECT_EQ(fixed_seconds(1.5e-6), "0.000001500");
}

TEST(LinearFit, Exact)
{
    const std::vector<double> x = {1, 2, 3}, y = {3, 5, 7};
    const auto [a, b, r2] = linear_fit(x, y);
    EXPECT_NEAR(a, 1.0, 1e-12);
    EXPECT_NEAR(b, 2.0, 1e-12);
    EXPECT_NEAR(r2, 1.0, 1e-12);
}

TEST(Cli, ExitCodes)
{
    const auto dir = scratch("cli");
    const std::string out = " --out " + dir.string();
    EXPECT_EQ(run_cli("simulate --L 5 --grid 50 --paths 3" + out), 0);
    EXPECT_TRUE(fs::exists(dir / "paths.csv"));
    EXPECT_EQ(run_cli("simulate --grid 1" + out), 2);
    EXPECT_EQ(run_cli("validate --model GBM --eta 1 --theta 1 --a 0.2 --sigma 0.3 --baseline BladtSorensen" + out), 2);
    EXPECT_EQ(run_cli("simulate --model Logistic --a 200 --x0 -1 --L 2 --grid 100 --paths 1" + out), 3);
    EXPECT_EQ(run_cli("simulate --config /nonexistent.json" + out), 2);
    EXPECT_EQ(run_cli("table-a --p 2 --L 3"), 0);
    EXPECT_EQ(run_cli("dump-propagator --L 3 --grid 20" + out), 0);
    EXPECT_TRUE(fs::exists(dir / "propagator.csv"));
}

TEST(Cli, ConfigFileWithOverrides)
{
    const auto dir = scratch("cli_cfg");
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "c.json");
        os << R"({"model": "OU", "params": {"a": 0.5, "sigma": 1.0}, "theta": 1.0, "L": 3, "grid": 40, "paths": 4})";
    }
    EXPECT_EQ(run_cli("simulate --config " + (dir / "c.json").string() + " --seed 5 --out " + dir.string()), 0);
    const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
    EXPECT_EQ(j["config"]["seed"], 5);
    EXPECT_EQ(j["config"]["L"], 3);
    EXPECT_EQ(j["n_paths"], 4);
}
