// Command-line front end: simulate, validate, min-l, benchmark, table-a, dump-propagator.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <wcebridge/wcebridge.hpp>

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitDivergence = 3;

struct Overrides {
    std::string config_path;
    std::optional<std::string> model;
    std::optional<double> a, sigma, lambda, x0, eta, theta, T, eval_time, threshold;
    std::optional<std::uint32_t> p, L, reps;
    std::optional<std::size_t> grid, paths, threads;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> baselines;
    std::vector<std::uint32_t> ladder, l_list;
    std::optional<std::string> out, scheme, integrator;
};

void add_common(CLI::App* app, Overrides& o)
{
    app->add_option("--config", o.config_path, "JSON configuration file");
    app->add_option("--model", o.model, "OU | GBM | Logistic | ProteinKinetic");
    app->add_option("--a", o.a, "drift rate a");
    app->add_option("--sigma", o.sigma, "diffusion coefficient");
    app->add_option("--lambda", o.lambda, "protein kinetic rate");
    app->add_option("--x0", o.x0, "propagator initial value (default: eta)");
    app->add_option("--eta", o.eta, "left endpoint value");
    app->add_option("--theta", o.theta, "right endpoint value");
    app->add_option("--T", o.T, "horizon");
    app->add_option("--p", o.p, "maximal chaos order");
    app->add_option("--L", o.L, "number of basis functions");
    app->add_option("--grid", o.grid, "time steps N");
    app->add_option("--paths", o.paths, "Monte Carlo paths");
    app->add_option("--seed", o.seed, "master seed");
    app->add_option("--baseline", o.baselines, "ExactOU | DoobH | BladtSorensen (repeatable)");
    app->add_option("--eval-time", o.eval_time, "time of the marginal comparison");
    app->add_option("--threads", o.threads, "worker threads");
    app->add_option("--out", o.out, "output directory");
    app->add_option("--index-scheme", o.scheme, "TableA | FullUpToOrder");
    app->add_option("--integrator", o.integrator, "rk4 | dopri45");
}

wce::ExperimentConfig resolve(const Overrides& o)
{
    nlohmann::json j = nlohmann::json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in)
            throw wce::ConfigError("config", "cannot read " + o.config_path);
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw wce::ConfigError("config", e.what());
        }
    }
    if (!j.is_object())
        throw wce::ConfigError("config", "top level must be a JSON object");
    if (o.model) j["model"] = *o.model;
    auto param = [&](const char* k, const std::optional<double>& v) {
        if (v) j["params"][k] = *v;
    };
    param("a", o.a);
    param("sigma", o.sigma);
    param("lambda", o.lambda);
    if (o.x0) j["x0"] = *o.x0;
    if (o.eta) j["eta"] = *o.eta;
    if (o.theta) j["theta"] = *o.theta;
    if (o.T) j["T"] = *o.T;
    if (o.p) j["p"] = *o.p;
    if (o.L) j["L"] = *o.L;
    if (o.grid) j["grid"] = *o.grid;
    if (o.paths) j["paths"] = *o.paths;
    if (o.seed) j["seed"] = *o.seed;
    if (o.eval_time) j["eval_time"] = *o.eval_time;
    if (o.threads) j["threads"] = *o.threads;
    if (o.out) j["out"] = *o.out;
    if (o.scheme) j["index_scheme"] = *o.scheme;
    if (o.integrator) j["integrator"] = *o.integrator;
    if (o.reps) j["repetitions"] = *o.reps;
    if (o.threshold) j["threshold"] = *o.threshold;
    if (!o.baselines.empty()) {
        j.erase("baseline");
        j["baselines"] = o.baselines;
    }
    if (!o.ladder.empty()) j["ladder"] = o.ladder;
    if (!o.l_list.empty()) j["L_list"] = o.l_list;
    auto c = wce::config_from_json(j);
    c.validate();
    return c;
}

void print_ks(const wce::ExperimentConfig& c, const std::vector<wce::ValidationRecord>& recs)
{
    for (const auto& r : recs)
        std::printf("%s  t=%s  D=%.6f  p=%.6g  (n=%zu, m=%zu)\n", r.comparison.c_str(),
                    wce::format_double(c.effective_eval_time()).c_str(), r.ks.d, r.ks.p_value, r.ks.n, r.ks.m);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Diffusion bridges from truncated Wiener chaos expansions"};
    app.set_version_flag("--version", std::string(wce::kVersion));
    app.require_subcommand(1);

    Overrides o;
    auto* sim = app.add_subcommand("simulate", "sample bridge paths; writes paths.csv and summary.json");
    add_common(sim, o);
    bool binary = false;
    sim->add_flag("--binary", binary, "also write paths.bin");

    auto* val = app.add_subcommand("validate", "KS test and QQ data against reference samplers");
    add_common(val, o);

    auto* minl = app.add_subcommand("min-l", "smallest L whose median KS p-value exceeds the threshold");
    add_common(minl, o);
    minl->add_option("--ladder", o.ladder, "candidate L values");
    minl->add_option("--reps", o.reps, "repetitions per L");
    minl->add_option("--threshold", o.threshold, "p-value threshold");

    auto* bench = app.add_subcommand("benchmark", "propagator and per-bridge timings over L");
    add_common(bench, o);
    bench->add_option("--L-list", o.l_list, "truncation levels to time");

    auto* table = app.add_subcommand("table-a", "print the index list used for the experiments as CSV");
    std::uint32_t table_p = 12, table_L = 16;
    table->add_option("--p", table_p, "maximal order");
    table->add_option("--L", table_L, "number of basis functions");
    std::string table_scheme = "TableA";
    table->add_option("--index-scheme", table_scheme, "TableA | FullUpToOrder");

    auto* dump = app.add_subcommand("dump-propagator", "write the propagator coefficients X_m(t_j) as CSV");
    add_common(dump, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (table->parsed()) {
            wce::IndexScheme scheme;
            if (table_scheme == "TableA") scheme = wce::IndexScheme::TableA;
            else if (table_scheme == "FullUpToOrder") scheme = wce::IndexScheme::FullUpToOrder;
            else throw wce::ConfigError("index_scheme", "expected 'TableA' or 'FullUpToOrder'");
            const auto set = wce::enumerate(scheme, table_p, table_L);
            const std::uint32_t cols = std::min<std::uint32_t>(table_L, 16);
            std::string line = "index";
            for (std::uint32_t k = 1; k <= cols; ++k)
                line += ",m_" + std::to_string(k);
            std::cout << line << ",order\n";
            for (std::size_t i = 0; i < set.size(); ++i) {
                line = std::to_string(i);
                for (auto v : set[i].dense(cols))
                    line += "," + std::to_string(v);
                std::cout << line << "," << wce::order(set[i]) << "\n";
            }
            return 0;
        }

        const auto c = resolve(o);
        const std::filesystem::path dir(c.out_dir);

        if (sim->parsed()) {
            const auto s = wce::simulate(c);
            wce::write_simulation(c, s);
            if (binary) {
                auto os = wce::open_output(dir / "paths.bin");
                wce::write_paths_binary(os, s.paths);
            }
            std::printf("mean=%.6f var=%.6f at t=%s; propagator %.4fs, %.3es per bridge\n", s.mean, s.variance,
                        wce::format_double(c.effective_eval_time()).c_str(), s.propagator_seconds,
                        s.per_bridge_seconds);
        } else if (val->parsed()) {
            const auto recs = wce::validate(c);
            wce::write_validation(c, recs);
            print_ks(c, recs);
        } else if (minl->parsed()) {
            const auto r = wce::min_l(c);
            wce::write_min_l(c, r);
            for (const auto& e : r.ladder)
                std::printf("L=%u  median p=%.4f  %s\n", e.L, e.median_p, e.pass ? "pass" : "fail");
            if (r.min_L)
                std::printf("min L = %u\n", *r.min_L);
            else
                std::printf("none found\n");
        } else if (bench->parsed()) {
            const auto rows = wce::benchmark(c);
            wce::write_benchmark(c, rows);
            for (const auto& r : rows)
                std::printf("L=%u rows=%zu propagator=%.6fs per_bridge=%.3es\n", r.L, r.rows,
                            r.propagator_seconds, r.per_bridge_seconds);
        } else if (dump->parsed()) {
            const wce::TimeGrid grid(c.T, c.grid);
            const wce::SineBasis basis(c.T, std::max<std::uint32_t>(c.L, 1));
            const auto sol = wce::solve_propagator(c.sde(), wce::build_index_set(c, c.L), basis, grid, c.solver);
            auto os = wce::open_output(dir / "propagator.csv");
            os << wce::csv_meta(c, "dump-propagator");
            wce::write_propagator_csv(os, sol);
        }
    } catch (const wce::ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const wce::SizeError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const wce::DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
