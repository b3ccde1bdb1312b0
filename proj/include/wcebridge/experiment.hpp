#pragma once

// Experiment configuration and the end-to-end runs behind the CLI subcommands:
// simulate, validate, min-l and benchmark.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "baselines.hpp"
#include "bridge.hpp"
#include "io.hpp"
#include "multiindex.hpp"
#include "propagator.hpp"
#include "stats.hpp"

namespace wce {

/// Invalid configuration; `field` names the offending entry.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field))
    {
    }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct ExperimentConfig {
    ModelKind model = ModelKind::OU;
    double rate = 0.5; // a, or lambda for the protein model
    double sigma = 1.0;
    std::optional<double> x0; // propagator initial value; defaults to eta
    ItoCorrection ito = ItoCorrection::Paper;

    double eta = 0.0;
    double theta = 0.0;
    double T = 1.0;

    std::uint32_t p = 12;
    std::uint32_t L = 100;
    std::size_t grid = 1000;
    std::size_t n_paths = 1000;
    std::uint64_t seed = 1;
    IndexScheme scheme = IndexScheme::TableA;
    std::optional<double> eval_time; // defaults to T/2
    std::vector<BaselineKind> baselines;
    std::string out_dir = "out";
    std::size_t threads = 1;

    SolverOptions solver{};
    BaselineOptions baseline{};

    // validate / min-l
    std::size_t qq_points = 99;
    std::vector<std::uint32_t> ladder = {5, 10, 25, 50, 100};
    std::uint32_t repetitions = 5;
    double threshold = 0.05;

    // benchmark
    std::vector<std::uint32_t> l_list = {100, 1000, 10000};

    [[nodiscard]] double effective_eval_time() const { return eval_time.value_or(0.5 * T); }
    [[nodiscard]] double effective_x0() const { return x0.value_or(eta); }

    [[nodiscard]] SdeModel sde() const
    {
        SdeModel m;
        m.kind = model;
        m.rate = rate;
        m.sigma = sigma;
        m.x0 = effective_x0();
        m.ito = ito;
        return m;
    }

    [[nodiscard]] BridgeSpec bridge() const { return {eta, theta, T}; }

    /// Baselines to compare against, falling back to the model's natural reference.
    [[nodiscard]] std::vector<BaselineKind> effective_baselines() const
    {
        if (!baselines.empty())
            return baselines;
        if (model == ModelKind::OU)
            return {BaselineKind::ExactOu};
        if (model == ModelKind::GBM)
            return {BaselineKind::DoobH};
        return {};
    }

    void validate() const
    {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(rate)) throw ConfigError("params", "rate parameter must be finite");
        if (!finite(sigma) || sigma < 0) throw ConfigError("sigma", "must be finite and >= 0");
        if (x0 && !finite(*x0)) throw ConfigError("x0", "must be finite");
        if (!finite(eta)) throw ConfigError("eta", "must be finite");
        if (!finite(theta)) throw ConfigError("theta", "must be finite");
        if (!(T > 0) || !finite(T)) throw ConfigError("T", "must be positive");
        if (grid < 2) throw ConfigError("grid", "must be >= 2");
        if (n_paths < 1) throw ConfigError("paths", "must be >= 1");
        if (threads < 1) throw ConfigError("threads", "must be >= 1");
        const double te = effective_eval_time();
        if (!(te >= 0 && te <= T)) throw ConfigError("eval_time", "must lie in [0, T]");
        if (solver.substeps < 1) throw ConfigError("substeps", "must be >= 1");
        if (qq_points < 2) throw ConfigError("qq_points", "must be >= 2");
        if (repetitions < 1) throw ConfigError("repetitions", "must be >= 1");
        if (!(threshold > 0 && threshold < 1)) throw ConfigError("threshold", "must lie in (0, 1)");
        if (!std::is_sorted(ladder.begin(), ladder.end()) ||
            std::adjacent_find(ladder.begin(), ladder.end()) != ladder.end())
            throw ConfigError("ladder", "must be strictly increasing");
        if (baseline.max_attempts < 1) throw ConfigError("max_attempts", "must be >= 1");
        if (baseline.euler_substeps < 1) throw ConfigError("euler_substeps", "must be >= 1");
    }

    /// Checks that every requested baseline applies to the model.
    void validate_baselines() const
    {
        const auto bl = effective_baselines();
        if (bl.empty())
            throw ConfigError("baseline", "no reference sampler exists for model " + std::string(to_string(model)));
        for (auto b : bl)
            if (!baseline_supports(b, model))
                throw ConfigError("baseline", std::string(to_string(b)) + " cannot be applied to model " +
                                                  std::string(to_string(model)));
        if (model == ModelKind::GBM && !(eta > 0 && theta > 0))
            throw ConfigError("eta", "GBM bridges need positive endpoints");
    }
};

// --- JSON ------------------------------------------------------------------

inline ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig c = {})
{
    using nlohmann::json;
    static const std::set<std::string> known = {
        "model", "params", "x0", "ito_correction", "eta", "theta", "T", "p", "L", "grid", "paths",
        "seed", "index_scheme", "eval_time", "baselines", "baseline", "out", "threads", "integrator",
        "substeps", "rtol", "atol", "euler_substeps", "max_attempts", "bs_transitions", "qq_points",
        "ladder", "repetitions", "threshold", "L_list"};
    if (!j.is_object())
        throw ConfigError("config", "top level must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!known.count(k))
            throw ConfigError(k, "unknown configuration field");

    auto num = [&](const char* key, auto& dst) {
        if (!j.contains(key))
            return;
        const auto& v = j.at(key);
        if (!v.is_number())
            throw ConfigError(key, "expected a number");
        using T = std::remove_reference_t<decltype(dst)>;
        if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0 && !v.is_number_unsigned()))
                throw ConfigError(key, "expected a nonnegative integer");
            dst = v.get<T>();
        } else {
            dst = v.get<T>();
        }
    };
    auto str = [&](const char* key) -> std::optional<std::string> {
        if (!j.contains(key))
            return std::nullopt;
        if (!j.at(key).is_string())
            throw ConfigError(key, "expected a string");
        return j.at(key).get<std::string>();
    };

    if (auto s = str("model")) {
        auto k = parse_model_kind(*s);
        if (!k)
            throw ConfigError("model", "unknown model '" + *s + "' (OU, GBM, Logistic, ProteinKinetic)");
        c.model = *k;
    }
    if (j.contains("params")) {
        const auto& p = j.at("params");
        if (!p.is_object())
            throw ConfigError("params", "expected an object");
        for (const auto& [k, v] : p.items()) {
            if (!v.is_number())
                throw ConfigError("params." + k, "expected a number");
            if (k == "a" || k == "lambda" || k == "rate")
                c.rate = v.get<double>();
            else if (k == "sigma")
                c.sigma = v.get<double>();
            else
                throw ConfigError("params." + k, "unknown parameter");
        }
    }
    if (j.contains("x0")) {
        double x0 = 0;
        num("x0", x0);
        c.x0 = x0;
    }
    if (auto s = str("ito_correction")) {
        if (*s == "paper") c.ito = ItoCorrection::Paper;
        else if (*s == "half_sigma_squared") c.ito = ItoCorrection::HalfSigmaSquared;
        else throw ConfigError("ito_correction", "expected 'paper' or 'half_sigma_squared'");
    }
    num("eta", c.eta);
    num("theta", c.theta);
    num("T", c.T);
    num("p", c.p);
    num("L", c.L);
    num("grid", c.grid);
    num("paths", c.n_paths);
    num("seed", c.seed);
    num("threads", c.threads);
    num("substeps", c.solver.substeps);
    num("rtol", c.solver.adaptive.rtol);
    num("atol", c.solver.adaptive.atol);
    num("euler_substeps", c.baseline.euler_substeps);
    num("max_attempts", c.baseline.max_attempts);
    num("qq_points", c.qq_points);
    num("repetitions", c.repetitions);
    num("threshold", c.threshold);
    if (j.contains("eval_time")) {
        double t = 0;
        num("eval_time", t);
        c.eval_time = t;
    }
    if (auto s = str("index_scheme")) {
        if (*s == "TableA") c.scheme = IndexScheme::TableA;
        else if (*s == "FullUpToOrder") c.scheme = IndexScheme::FullUpToOrder;
        else throw ConfigError("index_scheme", "expected 'TableA' or 'FullUpToOrder'");
    }
    if (auto s = str("integrator")) {
        if (*s == "rk4") c.solver.integrator = Integrator::Rk4;
        else if (*s == "dopri45") c.solver.integrator = Integrator::DormandPrince45;
        else throw ConfigError("integrator", "expected 'rk4' or 'dopri45'");
    }
    if (auto s = str("bs_transitions")) {
        if (*s == "exact") c.baseline.exact_transitions = true;
        else if (*s == "euler") c.baseline.exact_transitions = false;
        else throw ConfigError("bs_transitions", "expected 'exact' or 'euler'");
    }
    if (auto s = str("out"))
        c.out_dir = *s;

    auto parse_baselines = [&](const json& v, const char* key) {
        std::vector<BaselineKind> out;
        auto one = [&](const json& e) {
            if (!e.is_string())
                throw ConfigError(key, "expected baseline names");
            auto b = parse_baseline_kind(e.get<std::string>());
            if (!b)
                throw ConfigError(key, "unknown baseline '" + e.get<std::string>() + "'");
            out.push_back(*b);
        };
        if (v.is_array())
            for (const auto& e : v)
                one(e);
        else
            one(v);
        return out;
    };
    if (j.contains("baselines"))
        c.baselines = parse_baselines(j.at("baselines"), "baselines");
    if (j.contains("baseline"))
        c.baselines = parse_baselines(j.at("baseline"), "baseline");

    auto uint_list = [&](const char* key, std::vector<std::uint32_t>& dst) {
        if (!j.contains(key))
            return;
        const auto& v = j.at(key);
        if (!v.is_array())
            throw ConfigError(key, "expected an array of integers");
        dst.clear();
        for (const auto& e : v) {
            if (!e.is_number_integer() || e.get<std::int64_t>() < 0)
                throw ConfigError(key, "expected nonnegative integers");
            dst.push_back(e.get<std::uint32_t>());
        }
    };
    uint_list("ladder", c.ladder);
    uint_list("L_list", c.l_list);
    return c;
}

/// Canonical JSON of everything that influences non-timing output.
inline nlohmann::json config_to_json(const ExperimentConfig& c)
{
    nlohmann::json j;
    j["model"] = std::string(to_string(c.model));
    j["params"] = {{c.model == ModelKind::ProteinKinetic ? "lambda" : "a", c.rate}, {"sigma", c.sigma}};
    j["x0"] = c.effective_x0();
    j["ito_correction"] = c.ito == ItoCorrection::Paper ? "paper" : "half_sigma_squared";
    j["eta"] = c.eta;
    j["theta"] = c.theta;
    j["T"] = c.T;
    j["p"] = c.p;
    j["L"] = c.L;
    j["grid"] = c.grid;
    j["paths"] = c.n_paths;
    j["seed"] = c.seed;
    j["index_scheme"] = to_string(c.scheme);
    j["eval_time"] = c.effective_eval_time();
    j["integrator"] = c.solver.integrator == Integrator::Rk4 ? "rk4" : "dopri45";
    j["substeps"] = c.solver.substeps;
    j["rtol"] = c.solver.adaptive.rtol;
    j["atol"] = c.solver.adaptive.atol;
    std::vector<std::string> bl;
    for (auto b : c.baselines)
        bl.emplace_back(to_string(b));
    j["baselines"] = bl;
    j["euler_substeps"] = c.baseline.euler_substeps;
    j["max_attempts"] = c.baseline.max_attempts;
    j["bs_transitions"] = c.baseline.exact_transitions ? "exact" : "euler";
    j["qq_points"] = c.qq_points;
    j["ladder"] = c.ladder;
    j["repetitions"] = c.repetitions;
    j["threshold"] = c.threshold;
    j["L_list"] = c.l_list;
    return j;
}

[[nodiscard]] inline std::string config_hash(const ExperimentConfig& c)
{
    return hex64(fnv1a64(config_to_json(c).dump()));
}

inline nlohmann::json meta_block(const ExperimentConfig& c, std::string_view command)
{
    return {{"artifact", "wcebridge"},
            {"version", std::string(kVersion)},
            {"command", std::string(command)},
            {"config_hash", config_hash(c)},
            {"seed", c.seed}};
}

/// Comment lines prefixed to every CSV output.
inline std::string csv_meta(const ExperimentConfig& c, std::string_view command)
{
    std::string s = "# wcebridge " + std::string(kVersion) + " " + std::string(command) + "\n";
    s += "# config_hash=" + config_hash(c) + "\n";
    s += "# seed=" + std::to_string(c.seed) + "\n";
    return s;
}

// --- runs ------------------------------------------------------------------

/// Seed lanes inside one experiment, so the WCE and reference samplers never share noise.
inline constexpr std::uint64_t kWceSeedTag = 0x57434531;      // "WCE1"
inline constexpr std::uint64_t kBaselineSeedTag = 0x42415345; // "BASE"

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct WceRun {
    BridgeCoefficients coefficients;
    std::vector<BridgePath> paths;
    double propagator_seconds = 0;
    double per_bridge_seconds = 0;
};

/// Builds the index set for truncation (p, L) with the configured scheme.
inline IndexSet build_index_set(const ExperimentConfig& c, std::uint32_t L)
{
    return enumerate(c.scheme, c.p, L);
}

/// Propagator solve and bridge map for truncation level L.
inline BridgeCoefficients wce_coefficients(const ExperimentConfig& c, std::uint32_t L)
{
    const TimeGrid grid(c.T, c.grid);
    const SineBasis basis(c.T, std::max<std::uint32_t>(L, 1));
    const auto sol = solve_propagator(c.sde(), build_index_set(c, L), basis, grid, c.solver);
    return transform_to_bridge(sol, c.bridge());
}

/// Algorithm end to end: coefficients once, then n_paths bridges from `seed`.
inline WceRun run_wce(const ExperimentConfig& c, std::uint32_t L, std::uint64_t seed, std::size_t n_paths)
{
    auto t0 = Clock::now();
    auto coeffs = wce_coefficients(c, L);
    const double prop = seconds_since(t0);
    t0 = Clock::now();
    auto paths = sample_bridges(coeffs, seed, n_paths, c.threads);
    const double per = seconds_since(t0) / static_cast<double>(n_paths);
    return {std::move(coeffs), std::move(paths), prop, per};
}

inline std::vector<BridgePath> run_baseline(const ExperimentConfig& c, BaselineKind kind, std::uint64_t seed,
                                            std::size_t n_paths)
{
    const TimeGrid grid(c.T, c.grid);
    const auto model = c.sde();
    std::vector<BridgePath> out(n_paths, BridgePath{grid, {}, c.bridge()});
    parallel_for(n_paths, c.threads, [&](std::size_t k) {
        out[k] = sample_baseline(kind, model, c.bridge(), grid, seed, k, c.baseline);
    });
    return out;
}

struct SimulationSummary {
    double mean = 0;
    double variance = 0;
    double propagator_seconds = 0;
    double per_bridge_seconds = 0;
    std::vector<BridgePath> paths;
};

inline SimulationSummary simulate(const ExperimentConfig& c)
{
    c.validate();
    auto run = run_wce(c, c.L, derive_seed(c.seed, kWceSeedTag), c.n_paths);
    const auto s = marginal_at(run.paths, c.effective_eval_time());
    SimulationSummary out;
    if (s.values.size() >= 2) {
        const auto m = moments(s.values);
        out.mean = m.mean;
        out.variance = m.variance;
    } else {
        out.mean = s.values.front();
    }
    out.propagator_seconds = run.propagator_seconds;
    out.per_bridge_seconds = run.per_bridge_seconds;
    out.paths = std::move(run.paths);
    return out;
}

struct ValidationRecord {
    std::string comparison;
    BaselineKind baseline;
    KsResult ks;
    std::vector<std::pair<double, double>> qq;
    std::uint64_t seed = 0;
    std::uint32_t L = 0;
};

/// WCE against each reference sampler at eval_time, with independent seed lanes.
/// The WCE sample is shared by all comparisons in one call.
inline std::vector<ValidationRecord> validate_run(const ExperimentConfig& c, std::uint64_t seed, std::uint32_t L)
{
    c.validate();
    c.validate_baselines();
    const double te = c.effective_eval_time();
    const auto wce = run_wce(c, L, derive_seed(seed, kWceSeedTag), c.n_paths);
    const auto a = marginal_at(wce.paths, te, "WCE");
    std::vector<ValidationRecord> out;
    for (auto kind : c.effective_baselines()) {
        const auto ref = run_baseline(c, kind, derive_seed(seed, kBaselineSeedTag), c.n_paths);
        const auto b = marginal_at(ref, te, std::string(to_string(kind)));
        ValidationRecord r;
        r.comparison = "WCE vs " + std::string(to_string(kind));
        r.baseline = kind;
        r.ks = ks_two_sample(a, b);
        r.qq = qq_pairs(a, b, c.qq_points);
        r.seed = seed;
        r.L = L;
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<ValidationRecord> validate(const ExperimentConfig& c)
{
    return validate_run(c, c.seed, c.L);
}

inline nlohmann::json ks_record_json(const ExperimentConfig& c, const ValidationRecord& r)
{
    return {{"comparison", r.comparison},
            {"endpoint_pair", {{"t0", 0.0}, {"eta", c.eta}, {"T", c.T}, {"theta", c.theta}}},
            {"L", r.L},
            {"d", r.ks.d},
            {"p_value", r.ks.p_value},
            {"n", r.ks.n},
            {"m", r.ks.m},
            {"seed", r.seed}};
}

struct MinLEntry {
    std::uint32_t L = 0;
    std::vector<double> p_values;
    double median_p = 0;
    bool pass = false;
};

struct MinLReport {
    std::vector<MinLEntry> ladder;
    std::optional<std::uint32_t> min_L;
};

inline double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Seed of repetition r in min-l and repeated validation studies.
[[nodiscard]] inline std::uint64_t repetition_seed(std::uint64_t master, std::uint32_t r)
{
    return derive_seed(master, 0x5245500000000000ull + r); // "REP" + r
}

/// For each L in the ladder: `repetitions` validations against the first
/// baseline with fresh seeds; the smallest L whose median p-value exceeds the
/// threshold is reported. Every rung is evaluated so the report is complete.
inline MinLReport min_l(const ExperimentConfig& c)
{
    c.validate();
    c.validate_baselines();
    ExperimentConfig one = c;
    one.baselines = {c.effective_baselines().front()};
    MinLReport rep;
    for (auto L : c.ladder) {
        MinLEntry e;
        e.L = L;
        for (std::uint32_t r = 0; r < c.repetitions; ++r)
            e.p_values.push_back(validate_run(one, repetition_seed(c.seed, r), L).front().ks.p_value);
        e.median_p = median(e.p_values);
        e.pass = e.median_p > c.threshold;
        if (e.pass && !rep.min_L)
            rep.min_L = L;
        rep.ladder.push_back(std::move(e));
    }
    return rep;
}

struct BenchmarkRow {
    std::uint32_t L = 0;
    std::size_t rows = 0;
    double propagator_seconds = 0;
    double per_bridge_seconds = 0;
    std::size_t n_paths = 0;
};

inline std::vector<BenchmarkRow> benchmark(const ExperimentConfig& c)
{
    c.validate();
    std::vector<BenchmarkRow> out;
    for (auto L : c.l_list) {
        auto run = run_wce(c, L, derive_seed(c.seed, kWceSeedTag), c.n_paths);
        out.push_back({L, run.coefficients.rows(), run.propagator_seconds, run.per_bridge_seconds, c.n_paths});
    }
    return out;
}

/// Least-squares line y = a + b x; returns (a, b, R^2).
inline std::tuple<double, double, double> linear_fit(std::span<const double> x, std::span<const double> y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double b = sxy / sxx;
    const double a = my - b * mx;
    const double r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return {a, b, r2};
}

// --- writers ---------------------------------------------------------------

inline std::string fixed_seconds(double s)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", s);
    return buf;
}

inline std::ofstream open_output(const std::filesystem::path& p)
{
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + p.string() + " for writing");
    return os;
}

inline void write_simulation(const ExperimentConfig& c, const SimulationSummary& s)
{
    const std::filesystem::path dir(c.out_dir);
    {
        auto os = open_output(dir / "paths.csv");
        os << csv_meta(c, "simulate");
        write_paths_csv(os, s.paths);
    }
    nlohmann::json j;
    j["meta"] = meta_block(c, "simulate");
    j["config"] = config_to_json(c);
    j["eval_time"] = c.effective_eval_time();
    j["mean"] = s.mean;
    j["variance"] = s.variance;
    j["n_paths"] = s.paths.size();
    j["timing"] = {{"propagator_seconds", s.propagator_seconds}, {"per_bridge_seconds", s.per_bridge_seconds}};
    auto os = open_output(dir / "summary.json");
    os << j.dump(2) << '\n';
}

inline void write_validation(const ExperimentConfig& c, const std::vector<ValidationRecord>& recs)
{
    const std::filesystem::path dir(c.out_dir);
    nlohmann::json ks = nlohmann::json::array();
    for (const auto& r : recs)
        ks.push_back(ks_record_json(c, r));
    {
        auto os = open_output(dir / "ks.json");
        os << nlohmann::json{{"meta", meta_block(c, "validate")}, {"records", ks}}.dump(2) << '\n';
    }
    for (const auto& r : recs) {
        const std::string tag(to_string(r.baseline));
        std::vector<double> qa, qb;
        for (auto [x, y] : r.qq) {
            qa.push_back(x);
            qb.push_back(y);
        }
        {
            auto os = open_output(dir / ("qq_" + tag + ".json"));
            os << nlohmann::json{{"meta", meta_block(c, "validate")},
                                 {"comparison", r.comparison},
                                 {"eval_time", c.effective_eval_time()},
                                 {"q_wce", qa},
                                 {"q_baseline", qb}}
                      .dump(2)
               << '\n';
        }
        auto os = open_output(dir / ("qq_" + tag + ".csv"));
        os << csv_meta(c, "validate") << "q_wce,q_baseline\n";
        std::string line;
        for (auto [x, y] : r.qq) {
            line.clear();
            append_double(line, x);
            line += ',';
            append_double(line, y);
            line += '\n';
            os << line;
        }
    }
}

inline void write_min_l(const ExperimentConfig& c, const MinLReport& r)
{
    nlohmann::json lad = nlohmann::json::array();
    for (const auto& e : r.ladder)
        lad.push_back({{"L", e.L}, {"p_values", e.p_values}, {"median_p", e.median_p}, {"pass", e.pass}});
    nlohmann::json j{{"meta", meta_block(c, "min-l")},
                     {"baseline", std::string(to_string(c.effective_baselines().front()))},
                     {"threshold", c.threshold},
                     {"repetitions", c.repetitions},
                     {"ladder", lad}};
    j["min_L"] = r.min_L ? nlohmann::json(*r.min_L) : nlohmann::json(nullptr);
    j["result"] = r.min_L ? "found" : "none found";
    auto os = open_output(std::filesystem::path(c.out_dir) / "min_l.json");
    os << j.dump(2) << '\n';
}

inline void write_benchmark(const ExperimentConfig& c, const std::vector<BenchmarkRow>& rows)
{
    auto os = open_output(std::filesystem::path(c.out_dir) / "benchmark.csv");
    os << csv_meta(c, "benchmark") << "L,rows,propagator_seconds,per_bridge_seconds,n_paths\n";
    for (const auto& r : rows)
        os << r.L << ',' << r.rows << ',' << fixed_seconds(r.propagator_seconds) << ','
           << fixed_seconds(r.per_bridge_seconds) << ',' << r.n_paths << '\n';
}

} // namespace wce
