// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run only criterion N

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <wcebridge/wcebridge.hpp>

using namespace wce;

namespace {

// Fixed before any run; never tuned against outcomes.
constexpr std::uint64_t kMasterSeed = 20240601;
constexpr int kRepetitions = 5;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_seconds; // 0: no runtime bound
    std::function<Outcome()> run;
};

struct Pair {
    double eta;
    double theta;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

std::string pair_name(Pair p)
{
    return "(0," + format_double(p.eta) + ")->(1," + format_double(p.theta) + ")";
}

const std::vector<Pair> kOuPairs = {{0.0, 0.0}, {0.0, 1.0}, {0.0, 2.0}, {0.8, 0.5}};

ExperimentConfig ou_config(Pair p, std::uint32_t L)
{
    ExperimentConfig c;
    c.model = ModelKind::OU;
    c.rate = 0.5;
    c.sigma = 1.0;
    c.x0 = 0.0;
    c.eta = p.eta;
    c.theta = p.theta;
    c.L = L;
    c.seed = kMasterSeed;
    return c;
}

// KS p-values of `kRepetitions` independently seeded validations.
std::vector<double> repeated_p_values(const ExperimentConfig& c)
{
    std::vector<double> out;
    for (int r = 0; r < kRepetitions; ++r)
        out.push_back(validate_run(c, repetition_seed(c.seed, static_cast<std::uint32_t>(r)), c.L).front().ks.p_value);
    return out;
}

// "p > 0.05 in at least 4 of 5 repetitions" for each configuration.
Outcome statistical(const std::vector<std::pair<std::string, ExperimentConfig>>& cases)
{
    Outcome o{true, ""};
    for (const auto& [name, c] : cases) {
        const auto ps = repeated_p_values(c);
        const auto ok = std::count_if(ps.begin(), ps.end(), [](double p) { return p > 0.05; });
        o.pass = o.pass && ok >= 4;
        o.detail += name + " " + std::to_string(ok) + "/5 [";
        for (std::size_t i = 0; i < ps.size(); ++i)
            o.detail += (i ? " " : "") + fmt("%.3f", ps[i]);
        o.detail += "]; ";
    }
    return o;
}

Outcome criterion_pinning()
{
    struct ModelCase {
        ModelKind kind;
        double rate, sigma;
        std::vector<Pair> pairs;
    };
    const std::vector<ModelCase> cases = {
        {ModelKind::OU, 0.5, 1.0, kOuPairs},
        {ModelKind::GBM, 0.2, 0.3, {{0.2, 0.3}, {1.0, 1.0}, {1.0, 1.5}, {0.5, 0.2}}},
        {ModelKind::Logistic, 0.5, 0.3, {{0.1, 0.9}, {0.5, 0.5}, {0.2, 0.4}, {0.8, 0.3}}},
        {ModelKind::ProteinKinetic, 0.5, 0.2, {{0.3, 0.8}, {0.5, 0.5}, {0.1, 0.6}, {0.9, 0.4}}},
    };
    std::size_t checked = 0, bad = 0;
    for (const auto& mc : cases)
        for (const auto& p : mc.pairs)
            for (std::uint32_t L : {0u, 10u, 100u, 1000u}) {
                ExperimentConfig c;
                c.model = mc.kind;
                c.rate = mc.rate;
                c.sigma = mc.sigma;
                c.eta = p.eta;
                c.theta = p.theta;
                c.L = L;
                c.seed = kMasterSeed;
                const auto run = run_wce(c, L, derive_seed(c.seed, kWceSeedTag), 1000);
                for (const auto& path : run.paths) {
                    ++checked;
                    bad += path.values.front() != p.eta || path.values.back() != p.theta;
                }
            }
    return {bad == 0, std::to_string(checked) + " paths over 4 models x 4 pairs x L{0,10,100,1000}, " +
                          std::to_string(bad) + " unpinned"};
}

Outcome criterion_ou_exact()
{
    std::vector<std::pair<std::string, ExperimentConfig>> cases;
    for (auto p : kOuPairs) {
        auto c = ou_config(p, 100);
        c.baselines = {BaselineKind::ExactOu};
        cases.emplace_back(pair_name(p), c);
    }
    return statistical(cases);
}

Outcome criterion_min_l()
{
    const std::vector<std::uint32_t> paper = {5, 10, 5, 25};
    Outcome o{true, ""};
    for (std::size_t i = 0; i < kOuPairs.size(); ++i) {
        auto c = ou_config(kOuPairs[i], 0);
        c.baselines = {BaselineKind::ExactOu};
        c.ladder = {5, 10, 25, 50, 100};
        c.repetitions = kRepetitions;
        const auto r = min_l(c);
        const bool ok = r.min_L && *r.min_L <= 2 * paper[i];
        o.pass = o.pass && ok;
        o.detail += pair_name(kOuPairs[i]) + " min L=" + (r.min_L ? std::to_string(*r.min_L) : "none") +
                    " (bound " + std::to_string(2 * paper[i]) + ", medians";
        for (const auto& e : r.ladder)
            o.detail += " " + fmt("%.3f", e.median_p);
        o.detail += "); ";
    }
    return o;
}

Outcome criterion_ou_structure()
{
    SdeModel m;
    m.kind = ModelKind::OU;
    m.rate = 0.5;
    m.sigma = 1.0;
    m.x0 = 0.8;
    const auto sol = solve_propagator(m, enumerate_table_a(12, 1000), SineBasis(1.0, 1000), TimeGrid(1.0, 1000));
    double worst = 0;
    std::size_t rows = 0;
    for (std::size_t i = 0; i < sol.index_set().size(); ++i) {
        if (order(sol.index_set()[i]) < 2)
            continue;
        ++rows;
        for (double v : sol.row(i))
            worst = std::max(worst, std::abs(v));
    }
    return {worst < 1e-10, std::to_string(rows) + " rows with |m|>=2, max |X_m| = " + fmt("%.3g", worst)};
}

Outcome criterion_parseval()
{
    SdeModel m;
    m.kind = ModelKind::OU;
    m.rate = 0.5;
    m.sigma = 1.0;
    m.x0 = 0.0;
    const double target = (1.0 - std::exp(-1.0)) / 1.0;
    double prev = -1;
    bool monotone = true;
    std::string d;
    for (std::uint32_t L : {5u, 10u, 100u, 1000u}) {
        const auto sol = solve_propagator(m, enumerate_table_a(12, L), SineBasis(1.0, L), TimeGrid(1.0, 1000));
        const double v = chaos_variance(sol, 1000);
        monotone = monotone && v >= prev;
        prev = v;
        d += "L=" + std::to_string(L) + ":" + fmt("%.6f", v) + " ";
    }
    const double rel = std::abs(prev / target - 1.0);
    return {monotone && rel < 0.01,
            d + "target " + fmt("%.6f", target) + ", rel err " + fmt("%.2e", rel) + (monotone ? "" : ", NOT monotone")};
}

Outcome criterion_gbm()
{
    std::vector<std::pair<std::string, ExperimentConfig>> cases;
    for (Pair p : {Pair{0.2, 0.3}, Pair{1.0, 1.0}}) {
        ExperimentConfig c;
        c.model = ModelKind::GBM;
        c.rate = 0.2;
        c.sigma = 0.3;
        c.eta = p.eta;
        c.theta = p.theta;
        c.L = 100;
        c.seed = kMasterSeed;
        c.baselines = {BaselineKind::DoobH};
        cases.emplace_back(pair_name(p), c);
    }
    return statistical(cases);
}

Outcome criterion_ou_doob()
{
    std::vector<std::pair<std::string, ExperimentConfig>> cases;
    for (auto p : kOuPairs) {
        auto c = ou_config(p, 100);
        c.baselines = {BaselineKind::DoobH};
        cases.emplace_back(pair_name(p), c);
    }
    return statistical(cases);
}

Outcome criterion_nonlinear()
{
    Outcome o{true, ""};
    struct Case {
        ModelKind kind;
        double rate, sigma, x0;
    };
    for (const auto& mc : {Case{ModelKind::Logistic, 0.5, 0.3, 0.1}, Case{ModelKind::ProteinKinetic, 0.5, 0.2, 0.3}}) {
        SdeModel m;
        m.kind = mc.kind;
        m.rate = mc.rate;
        m.sigma = mc.sigma;
        m.x0 = mc.x0;
        const auto set = enumerate_table_a(12, 100);
        const SineBasis basis(1.0, 100);
        const auto coarse = solve_propagator(m, set, basis, TimeGrid(1.0, 1000));
        const auto fine = solve_propagator(m, set, basis, TimeGrid(1.0, 100000));
        double worst = 0;
        for (std::size_t i = 0; i < set.size(); ++i) {
            double s = 0;
            for (std::size_t j = 0; j <= 1000; ++j) {
                const double d = coarse(i, j) - fine(i, j * 100);
                s += d * d;
            }
            worst = std::max(worst, std::sqrt(s / 1001.0));
        }
        o.pass = o.pass && worst < 1e-6;
        o.detail += std::string(to_string(mc.kind)) + " max per-coefficient RMS " + fmt("%.3g", worst) + "; ";
    }
    return o;
}

Outcome criterion_timing()
{
    ExperimentConfig c = ou_config({0.0, 1.0}, 0);
    c.n_paths = 200;
    std::vector<double> xs, ys;
    std::string d;
    for (std::uint32_t L : {100u, 1000u, 10000u}) {
        const auto run = run_wce(c, L, derive_seed(c.seed, kWceSeedTag), c.n_paths);
        xs.push_back(L);
        ys.push_back(run.per_bridge_seconds);
        d += "L=" + std::to_string(L) + ":" + fmt("%.3e", run.per_bridge_seconds) + "s ";
    }
    const auto [a, b, r2] = linear_fit(xs, ys);
    (void)a;
    (void)b;
    return {r2 > 0.9, d + "R^2=" + fmt("%.4f", r2)};
}

Outcome criterion_bladt_sorensen()
{
    auto c = ou_config({0.0, 0.0}, 0);
    c.baselines = {BaselineKind::BladtSorensen};
    // KS of the B&S sampler against the exact OU bridge.
    const TimeGrid grid(c.T, c.grid);
    std::vector<double> ps;
    for (int r = 0; r < kRepetitions; ++r) {
        const auto seed = repetition_seed(c.seed, static_cast<std::uint32_t>(r));
        const auto bs = run_baseline(c, BaselineKind::BladtSorensen, derive_seed(seed, kWceSeedTag), c.n_paths);
        const auto ex = run_baseline(c, BaselineKind::ExactOu, derive_seed(seed, kBaselineSeedTag), c.n_paths);
        ps.push_back(ks_two_sample(marginal_at(bs, 0.5), marginal_at(ex, 0.5)).p_value);
    }
    const auto ok = std::count_if(ps.begin(), ps.end(), [](double p) { return p > 0.05; });
    const auto model = c.sde();
    const double near = bladt_sorensen_acceptance_rate(model, {0.0, 0.0, 1.0}, grid, c.seed, 10000);
    const double far = bladt_sorensen_acceptance_rate(model, {0.0, 2.0, 1.0}, grid, c.seed, 10000);
    std::string d = "KS vs exact " + std::to_string(ok) + "/5 [";
    for (std::size_t i = 0; i < ps.size(); ++i)
        d += (i ? " " : "") + fmt("%.3f", ps[i]);
    d += "]; acceptance (1,0)=" + fmt("%.4f", near) + " (1,2)=" + fmt("%.4f", far);
    return {ok >= 4 && far < near, d};
}

} // namespace

int main(int argc, char** argv)
{
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);

    const std::vector<Criterion> all = {
        {1, "endpoint pinning", 30, criterion_pinning},
        {2, "OU WCE vs exact OU bridge, KS", 120, criterion_ou_exact},
        {3, "minimal L reproduction", 300, criterion_min_l},
        {4, "OU coefficients with |m|>=2 vanish", 0, criterion_ou_structure},
        {5, "Parseval variance convergence", 0, criterion_parseval},
        {6, "GBM WCE vs Doob h-transform, KS", 120, criterion_gbm},
        {7, "OU WCE vs Doob h-transform, KS", 120, criterion_ou_doob},
        {8, "nonlinear propagators vs N=1e5 reference", 0, criterion_nonlinear},
        {9, "per-bridge time linear in L", 0, criterion_timing},
        {10, "Bladt-Sorensen sanity", 0, criterion_bladt_sorensen},
    };

    int failed = 0, ran = 0;
    for (const auto& c : all) {
        if (only && c.id != only)
            continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string timing = fmt("%.1fs", secs);
        if (c.budget_seconds > 0) {
            timing += fmt(" of %.0fs budget", c.budget_seconds);
            if (secs > c.budget_seconds) {
                o.pass = false;
                timing += " EXCEEDED";
            }
        }
        while (!o.detail.empty() && (o.detail.back() == ' ' || o.detail.back() == ';'))
            o.detail.pop_back();
        failed += !o.pass;
        std::printf("criterion %2d %s: %s | %s | %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                    timing.c_str());
        std::fflush(stdout);
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    std::printf("%d/%d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
