// elgsim command line: reproduces the lattice experiments (toy3, lattice100,
// sweep-p), numerically verifies the no-delay maximality theorem, and runs
// the tick-data pipeline on arbitrary tapes. Reports are deterministic for a
// fixed seed, so rerunning a report's embedded config reproduces it byte for
// byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "elgsim/account_dynamics.hpp"
#include "elgsim/elg.hpp"
#include "elgsim/optimizer.hpp"
#include "elgsim/returns_model.hpp"
#include "elgsim/tick_ingest.hpp"

using nlohmann::json;
using namespace elgsim;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitTheoremFailure = 2;

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::filesystem::create_directories(path.parent_path().empty()
                                            ? "."
                                            : path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
}

void emit_report(const std::filesystem::path& out_dir, const std::string& name,
                 const json& report) {
    const std::filesystem::path path = out_dir / name;
    write_file(path, report.dump(2) + "\n");
    std::cout << "wrote " << path.string() << "\n";
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::ostringstream out;
    write_curve_csv(curve, out);
    return out.str();
}

json curve_json(const std::vector<CurvePoint>& curve) {
    json arr = json::array();
    for (const CurvePoint& pt : curve)
        arr.push_back({{"K", pt.k}, {"g", pt.g}, {"std_err", pt.std_error}});
    return arr;
}

json lattice_json(const BinaryLattice& lat) {
    return {{"x_max", lat.x_max}, {"x_min", lat.x_min}, {"p", lat.p}};
}

json optimum_json(const OptimizationResult& res) {
    return {{"k_star", res.k_star},
            {"g_star", res.g_star},
            {"at_boundary", res.at_boundary},
            {"method", to_string(res.method)}};
}

TradeConfig make_cfg(Strategy s, DelayMode d, Financing f, double k, int n) {
    TradeConfig cfg;
    cfg.strategy = s;
    cfg.delay = d;
    cfg.financing = f;
    cfg.kelly_fraction = k;
    cfg.horizon = n;
    return cfg;
}

const std::map<std::string, Strategy> kStrategyNames{
    {"hf", Strategy::high_frequency},
    {"high-frequency", Strategy::high_frequency},
    {"bh", Strategy::buy_and_hold},
    {"buy-and-hold", Strategy::buy_and_hold}};
const std::map<std::string, DelayMode> kDelayNames{
    {"none", DelayMode::none}, {"one-step", DelayMode::one_step}};
const std::map<std::string, Financing> kFinancingNames{
    {"self", Financing::self_financed}, {"leveraged", Financing::leveraged}};

// ---------------------------------------------------------------------------
// toy3: n=3 lattice with X_max=0.8, X_min=-0.2, p=1/2, one-step delay,
// exact enumeration for both traders and both financing modes.
int cmd_toy3(const std::string& out_dir) {
    const BinaryLattice lattice(0.8, -0.2, 0.5);
    const int n = 3;

    json report;
    report["command"] = "toy3";
    report["config"] = {{"model", lattice_json(lattice)},
                        {"n", n},
                        {"delay", "one_step"},
                        {"method", "exact"}};

    std::cout << "toy3: n=3 lattice, one-step execution delay, exact ELG\n";
    for (Financing fin : {Financing::self_financed, Financing::leveraged}) {
        const Interval bounds =
            admissible_interval(ReturnModel{lattice}, DelayMode::one_step, fin);
        const auto eval = [&](Strategy s) {
            return ElgEvaluator([&lattice, s, fin](double k) {
                return elg_exact(lattice, make_cfg(s, DelayMode::one_step, fin, k, 3));
            });
        };
        const OptimizationResult hf = maximize(eval(Strategy::high_frequency), bounds);
        const OptimizationResult bh = maximize(eval(Strategy::buy_and_hold), bounds);
        const double margin_pct = (bh.g_star - hf.g_star) / hf.g_star * 100.0;

        json section;
        section["admissible_K"] = {bounds.lo, bounds.hi};
        section["high_frequency"] = optimum_json(hf);
        section["buy_and_hold"] = optimum_json(bh);
        section["margin_pct"] = margin_pct;
        section["hf_curve"] = curve_json(hf.curve);
        section["bh_curve"] = curve_json(bh.curve);
        report["results"][to_string(fin)] = section;

        std::cout << "  " << to_string(fin) << ": K*_hf=" << hf.k_star
                  << " g1*=" << hf.g_star << " | K*_bh=" << bh.k_star
                  << " gn*=" << bh.g_star << " | margin=" << margin_pct << "%\n";

        const std::string tag =
            fin == Financing::self_financed ? "self" : "leveraged";
        write_file(std::filesystem::path(out_dir) / ("toy3_hf_" + tag + ".csv"),
                   curve_csv(hf.curve));
        write_file(std::filesystem::path(out_dir) / ("toy3_bh_" + tag + ".csv"),
                   curve_csv(bh.curve));
    }
    emit_report(out_dir, "toy3_report.json", report);
    return 0;
}

// ---------------------------------------------------------------------------
// lattice100: the main binary-lattice experiment. Buy and hold through the
// closed form, high frequency through Monte-Carlo, plus a paired-difference
// significance check at the optimum.
int cmd_lattice100(std::int64_t paths, std::int64_t curve_paths,
                   std::uint64_t seed, int curve_points, int workers,
                   const std::string& out_dir) {
    if (paths < 10000)
        throw CLI::ValidationError("--paths", "lattice100 needs at least 10^4 paths");
    const BinaryLattice lattice(0.02, -0.01, 0.6);
    const ReturnModel model{lattice};
    const int n = 100;
    if (curve_paths <= 0) curve_paths = paths;

    json report;
    report["command"] = "lattice100";
    report["config"] = {{"model", lattice_json(lattice)},
                        {"n", n},
                        {"paths", paths},
                        {"curve_paths", curve_paths},
                        {"curve_points", curve_points},
                        {"seed", seed}};

    std::cout << "lattice100: n=100, X_max=0.02, X_min=-0.01, p=0.6, delay\n";
    for (Financing fin : {Financing::self_financed, Financing::leveraged}) {
        const Interval bounds =
            admissible_interval(model, DelayMode::one_step, fin);
        const std::string tag =
            fin == Financing::self_financed ? "self" : "leveraged";

        const ElgEvaluator bh_eval = [&](double k) {
            return elg_closed_form_bh_delay(lattice, n, k);
        };
        const OptimizationResult bh = maximize(bh_eval, bounds, curve_points);

        const ElgEvaluator hf_eval = [&](double k) {
            return elg_monte_carlo(
                model,
                make_cfg(Strategy::high_frequency, DelayMode::one_step, fin, k, n),
                curve_paths, seed, workers);
        };
        const OptimizationResult hf = maximize(hf_eval, bounds, curve_points);

        // full-budget re-estimate at the claimed optimum plus a paired
        // common-random-numbers comparison at the same fraction
        const ElgEstimate hf_at_bound = elg_monte_carlo(
            model,
            make_cfg(Strategy::high_frequency, DelayMode::one_step, fin, bounds.hi, n),
            paths, seed, workers);
        const PairedDifference diff = elg_paired_difference(
            model,
            make_cfg(Strategy::buy_and_hold, DelayMode::one_step, fin, bounds.hi, n),
            make_cfg(Strategy::high_frequency, DelayMode::one_step, fin, bounds.hi, n),
            paths, seed, workers);
        const double margin_pct =
            (bh.g_star - hf_at_bound.value) / hf_at_bound.value * 100.0;

        json section;
        section["admissible_K"] = {bounds.lo, bounds.hi};
        section["buy_and_hold"] = optimum_json(bh);
        section["high_frequency"] = optimum_json(hf);
        section["hf_at_bound"] = {{"K", bounds.hi},
                                  {"g", hf_at_bound.value},
                                  {"std_err", hf_at_bound.std_error},
                                  {"paths", hf_at_bound.num_paths}};
        section["paired_difference"] = {{"value", diff.value},
                                        {"std_err", diff.std_error},
                                        {"sig", diff.std_error > 0.0
                                                    ? diff.value / diff.std_error
                                                    : 0.0}};
        section["margin_pct"] = margin_pct;
        report["results"][to_string(fin)] = section;

        write_file(std::filesystem::path(out_dir) / ("lattice100_bh_" + tag + ".csv"),
                   curve_csv(bh.curve));
        write_file(std::filesystem::path(out_dir) / ("lattice100_hf_" + tag + ".csv"),
                   curve_csv(hf.curve));

        std::cout << "  " << to_string(fin) << ": K*_bh=" << bh.k_star
                  << " gn*=" << bh.g_star << " | g1(K_hi)=" << hf_at_bound.value
                  << " (se " << hf_at_bound.std_error << ")"
                  << " | diff=" << diff.value << " (" << diff.value / diff.std_error
                  << " se) | margin=" << margin_pct << "%\n";
    }
    emit_report(out_dir, "lattice100_report.json", report);
    return 0;
}

// ---------------------------------------------------------------------------
int cmd_sweep_p(std::vector<double> p_values, int n, std::int64_t paths,
                std::uint64_t seed, Financing fin, const std::string& out_dir) {
    if (p_values.empty())
        for (int i = 8; i <= 19; ++i) p_values.push_back(i * 0.05);
    const BinaryLattice base(0.02, -0.01, 0.5);

    const auto rows = sweep_probability(base, p_values, n, DelayMode::one_step,
                                        fin, paths, seed);

    json report;
    report["command"] = "sweep-p";
    report["config"] = {{"x_max", base.x_max},
                        {"x_min", base.x_min},
                        {"n", n},
                        {"paths", paths},
                        {"seed", seed},
                        {"financing", to_string(fin)},
                        {"p_grid", p_values}};
    json table = json::array();
    std::cout << "sweep-p (" << to_string(fin) << ", n=" << n << ")\n";
    std::cout << "  p      g_bh*        g_hf*        margin%\n";
    for (const SweepRow& row : rows) {
        table.push_back({{"p", row.p},
                         {"g_bh", row.g_bh},
                         {"g_hf", row.g_hf},
                         {"k_bh", row.k_bh},
                         {"k_hf", row.k_hf},
                         {"margin_pct", row.margin_pct}});
        std::cout << "  " << row.p << "  " << row.g_bh << "  " << row.g_hf
                  << "  " << row.margin_pct << "\n";
    }
    report["results"] = table;

    std::ostringstream csv;
    write_sweep_csv(rows, csv);
    const std::string tag = fin == Financing::self_financed ? "self" : "leveraged";
    write_file(std::filesystem::path(out_dir) / ("sweep_p_" + tag + ".csv"),
               csv.str());
    emit_report(out_dir, "sweep_p_report.json", report);
    return 0;
}

// ---------------------------------------------------------------------------
// verify-maximality: exact no-delay check of g_m^* <= g_1^* for m = 1..n_max,
// with the equality refinement for sufficiently attractive models.
struct MaximalityOutcome {
    bool passed = true;
    json detail = json::array();
};

MaximalityOutcome verify_one(const BinaryLattice& lattice, int n_max,
                             int grid_points) {
    MaximalityOutcome out;
    const double margin = sufficient_attractiveness_margin(ReturnModel{lattice});
    const bool attractive = margin <= 1.0;
    const Interval unit{0.0, 1.0};

    const ElgEvaluator hf_eval = [&](double k) {
        return elg_closed_form_hf_no_delay(lattice, k);
    };
    const double g1 = maximize(hf_eval, unit, grid_points).g_star;

    for (int m = 1; m <= n_max; ++m) {
        const ElgEvaluator bh_eval = [&, m](double k) {
            return elg_exact(lattice, make_cfg(Strategy::buy_and_hold,
                                               DelayMode::none,
                                               Financing::self_financed, k, m));
        };
        const OptimizationResult res = maximize(bh_eval, unit, grid_points);
        const double gap = res.g_star - g1;
        const bool le_ok = gap <= 1e-9;
        const bool eq_ok = !attractive || std::fabs(gap) <= 1e-9;
        if (!(le_ok && eq_ok)) out.passed = false;
        out.detail.push_back({{"m", m},
                              {"g_m_star", res.g_star},
                              {"k_m_star", res.k_star},
                              {"gap", gap},
                              {"le_ok", le_ok},
                              {"eq_ok", eq_ok}});
    }
    return out;
}

int cmd_verify_maximality(const BinaryLattice& lattice, int n_max,
                          int grid_points, int suite, std::uint64_t seed,
                          const std::string& out_dir) {
    json report;
    report["command"] = "verify-maximality";
    report["config"] = {{"n_max", n_max},
                        {"grid_points", grid_points},
                        {"suite", suite},
                        {"seed", seed}};
    bool all_passed = true;

    if (suite <= 0) {
        const MaximalityOutcome out = verify_one(lattice, n_max, grid_points);
        all_passed = out.passed;
        report["config"]["model"] = lattice_json(lattice);
        report["results"] = {{"passed", out.passed},
                             {"attractive",
                              sufficient_attractiveness_margin(ReturnModel{lattice}) <= 1.0},
                             {"detail", out.detail}};
        std::cout << "verify-maximality: g_m* <= g_1* for m=1.." << n_max << ": "
                  << (out.passed ? "PASS" : "FAIL") << "\n";
    } else {
        std::mt19937_64 gen(seed);
        std::uniform_real_distribution<double> up(0.05, 1.2);
        std::uniform_real_distribution<double> dn(-0.6, -0.02);
        std::uniform_real_distribution<double> pp(0.02, 0.98);
        json models = json::array();
        for (int i = 0; i < suite; ++i) {
            const BinaryLattice lat(up(gen), dn(gen), pp(gen));
            const MaximalityOutcome out = verify_one(lat, n_max, grid_points);
            if (!out.passed) all_passed = false;
            models.push_back({{"model", lattice_json(lat)},
                              {"passed", out.passed},
                              {"detail", out.passed ? json::array() : out.detail}});
            std::cout << "  lattice " << i << " (x_max=" << lat.x_max
                      << ", x_min=" << lat.x_min << ", p=" << lat.p
                      << "): " << (out.passed ? "pass" : "FAIL") << "\n";
        }
        report["results"] = {{"passed", all_passed}, {"models", models}};
        std::cout << "verify-maximality suite of " << suite << ": "
                  << (all_passed ? "PASS" : "FAIL") << "\n";
    }
    emit_report(out_dir, "verify_maximality_report.json", report);
    return all_passed ? 0 : kExitTheoremFailure;
}

// ---------------------------------------------------------------------------
// tickdata: historical-tape pipeline. Subsample at the execution delay,
// build the empirical PMF, then compare delayed buy-and-hold vs
// high-frequency by Monte-Carlo with a conclusiveness verdict.
int cmd_tickdata(const std::string& file, double delta_t, int n,
                 std::int64_t paths, std::uint64_t seed, Financing fin,
                 int grid_points, int workers, const std::string& out_dir) {
    std::ifstream in(file);
    if (!in) throw CLI::ValidationError("--file", "cannot open " + file);
    const TickSeries series = parse_ticks(in);
    const SubsampledSeries sub = subsample(series, delta_t);
    const EmpiricalPmf pmf = build_pmf(sub);
    const ReturnModel model{pmf};

    const Interval bounds = admissible_interval(model, DelayMode::one_step, fin);
    const auto mc_eval = [&](Strategy s) {
        return ElgEvaluator([&model, s, fin, n, paths, seed, workers](double k) {
            return elg_monte_carlo(
                model, make_cfg(s, DelayMode::one_step, fin, k, n), paths, seed,
                workers);
        });
    };
    const OptimizationResult bh =
        maximize(mc_eval(Strategy::buy_and_hold), bounds, grid_points);
    const OptimizationResult hf =
        maximize(mc_eval(Strategy::high_frequency), bounds, grid_points);
    const PairedDifference diff = elg_paired_difference(
        model,
        make_cfg(Strategy::buy_and_hold, DelayMode::one_step, fin, bh.k_star, n),
        make_cfg(Strategy::high_frequency, DelayMode::one_step, fin, hf.k_star, n),
        paths, seed, workers);

    std::string verdict = "inconclusive";
    if (std::fabs(diff.value) >= 3.0 * diff.std_error && diff.std_error > 0.0)
        verdict = diff.value > 0.0 ? "buy_and_hold_wins" : "high_frequency_wins";

    json report;
    report["command"] = "tickdata";
    report["config"] = {{"file", file},     {"delta_t", delta_t},
                        {"n", n},           {"paths", paths},
                        {"seed", seed},     {"financing", to_string(fin)},
                        {"grid_points", grid_points}};
    report["results"] = {
        {"ticks", series.timestamps.size()},
        {"selected", sub.indices.size()},
        {"returns", sub.returns.size()},
        {"pmf_atoms", pmf.atoms().size()},
        {"buy_and_hold", optimum_json(bh)},
        {"high_frequency", optimum_json(hf)},
        {"paired_difference",
         {{"value", diff.value}, {"std_err", diff.std_error}}},
        {"verdict", verdict}};

    std::ostringstream pmf_text;
    save_model(model, pmf_text);
    write_file(std::filesystem::path(out_dir) / "tickdata_pmf.txt", pmf_text.str());
    emit_report(out_dir, "tickdata_report.json", report);

    std::cout << "tickdata: " << series.timestamps.size() << " ticks -> "
              << sub.returns.size() << " returns at dt=" << delta_t << "\n"
              << "  K*_bh=" << bh.k_star << " gn*=" << bh.g_star
              << " | K*_hf=" << hf.k_star << " g1*=" << hf.g_star << "\n"
              << "  paired diff=" << diff.value << " (se " << diff.std_error
              << ") verdict: " << verdict << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
int cmd_elg(const ReturnModel& model, Strategy strategy, DelayMode delay,
            Financing fin, double k, int n, const std::string& method,
            std::int64_t paths, std::uint64_t seed, int workers) {
    ElgEstimate est;
    const auto* lattice = std::get_if<BinaryLattice>(&model);
    std::string how = method;
    if (how == "auto") {
        if (lattice && n <= kDefaultEnumCap) how = "exact";
        else if (lattice && strategy == Strategy::buy_and_hold) how = "closed-form";
        else if (lattice && strategy == Strategy::high_frequency &&
                 delay == DelayMode::none) how = "closed-form";
        else how = "mc";
    }
    if (how == "exact") {
        if (!lattice)
            throw CLI::ValidationError("--method", "exact needs a lattice model");
        est = elg_exact(*lattice, make_cfg(strategy, delay, fin, k, n));
    } else if (how == "closed-form") {
        if (!lattice)
            throw CLI::ValidationError("--method", "closed-form needs a lattice model");
        validate_config(make_cfg(strategy, delay, fin, k, n), model);
        if (strategy == Strategy::buy_and_hold)
            est = delay == DelayMode::one_step
                      ? elg_closed_form_bh_delay(*lattice, n, k)
                      : elg_closed_form_bh_no_delay(*lattice, n, k);
        else if (delay == DelayMode::none)
            est = elg_closed_form_hf_no_delay(*lattice, k);
        else
            throw CLI::ValidationError(
                "--method", "no closed form for delayed high-frequency trading");
    } else if (how == "mc") {
        est = elg_monte_carlo(model, make_cfg(strategy, delay, fin, k, n), paths,
                              seed, workers);
    } else {
        throw CLI::ValidationError("--method", "unknown method " + how);
    }

    json out = {{"strategy", to_string(strategy)},
                {"delay", to_string(delay)},
                {"financing", to_string(fin)},
                {"K", k},
                {"n", n},
                {"method", to_string(est.method)},
                {"value", est.ruined ? json("-inf") : json(est.value)},
                {"std_err", est.std_error},
                {"num_paths", est.num_paths},
                {"ruined", est.ruined},
                {"seed", seed}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
int cmd_optimize(const ReturnModel& model, Strategy strategy, DelayMode delay,
                 Financing fin, int n, int grid_points, std::int64_t paths,
                 std::uint64_t seed, int workers, const std::string& out_dir) {
    const Interval bounds = admissible_interval(model, delay, fin);
    const auto* lattice = std::get_if<BinaryLattice>(&model);

    const ElgEvaluator eval = [&](double k) {
        if (lattice) {
            if (strategy == Strategy::buy_and_hold)
                return delay == DelayMode::one_step
                           ? elg_closed_form_bh_delay(*lattice, n, k)
                           : elg_closed_form_bh_no_delay(*lattice, n, k);
            if (delay == DelayMode::none)
                return elg_closed_form_hf_no_delay(*lattice, k);
            if (n <= kDefaultEnumCap)
                return elg_exact(*lattice, make_cfg(strategy, delay, fin, k, n));
        }
        return elg_monte_carlo(model, make_cfg(strategy, delay, fin, k, n), paths,
                               seed, workers);
    };
    const OptimizationResult res = maximize(eval, bounds, grid_points);

    json report;
    report["command"] = "optimize";
    report["config"] = {{"strategy", to_string(strategy)},
                        {"delay", to_string(delay)},
                        {"financing", to_string(fin)},
                        {"n", n},
                        {"grid_points", grid_points},
                        {"paths", paths},
                        {"seed", seed}};
    report["results"] = optimum_json(res);
    std::cout << "optimize: K*=" << res.k_star << " g*=" << res.g_star
              << (res.at_boundary ? " (at boundary)" : "") << "\n";

    std::ostringstream csv;
    write_curve_csv(res.curve, csv);
    write_file(std::filesystem::path(out_dir) / "optimize_curve.csv", csv.str());
    emit_report(out_dir, "optimize_report.json", report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Kelly expected log-growth toolkit: buy-and-hold vs high-frequency "
        "trading with one-step execution delay"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --out-dir appear after the subcommand

    std::string out_dir = ".";
    app.add_option("--out-dir", out_dir, "directory for reports and CSV files")
        ->capture_default_str();

    // shared knobs, registered per subcommand below
    std::string model_file;
    int n = 100;
    std::int64_t paths = 500000;
    std::uint64_t seed = 1;
    int workers = 0;
    int grid_points = 101;
    Strategy strategy = Strategy::high_frequency;
    DelayMode delay = DelayMode::one_step;
    Financing financing = Financing::self_financed;
    double kelly = 0.0;

    const auto add_model = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--model-file", model_file,
                                    "lattice or PMF model file");
        if (required) opt->required();
    };
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n", n, "stage count")->capture_default_str();
        sub->add_option("--paths", paths, "Monte-Carlo path budget")
            ->capture_default_str();
        sub->add_option("--seed", seed, "reproducibility seed")
            ->capture_default_str();
        sub->add_option("--workers", workers,
                        "worker threads (0 = hardware default)")
            ->capture_default_str();
    };
    const auto add_modes = [&](CLI::App* sub) {
        sub->add_option("--delay", delay, "execution delay mode")
            ->transform(CLI::CheckedTransformer(kDelayNames, CLI::ignore_case))
            ->capture_default_str();
        sub->add_option("--financing", financing, "self-financing or leverage")
            ->transform(CLI::CheckedTransformer(kFinancingNames, CLI::ignore_case))
            ->capture_default_str();
    };

    // toy3
    auto* toy = app.add_subcommand("toy3", "exact n=3 delayed toy experiment");

    // lattice100
    auto* lat100 = app.add_subcommand(
        "lattice100", "n=100 binary lattice: closed form vs Monte-Carlo");
    std::int64_t curve_paths = 0;
    int curve_points = 101;
    add_common(lat100);
    lat100->add_option("--curve-paths", curve_paths,
                       "paths per curve point (default: --paths)");
    lat100->add_option("--curve-points", curve_points, "points per curve")
        ->capture_default_str();

    // sweep-p
    auto* sweep = app.add_subcommand("sweep-p",
                                     "margin of victory vs lattice probability");
    std::vector<double> p_values;
    sweep->add_option("--p", p_values, "probability grid (default 0.40..0.95)");
    add_common(sweep);
    sweep->add_option("--financing", financing, "self-financing or leverage")
        ->transform(CLI::CheckedTransformer(kFinancingNames, CLI::ignore_case))
        ->capture_default_str();

    // verify-maximality
    auto* verify = app.add_subcommand(
        "verify-maximality", "exact no-delay check that g_n* <= g_1*");
    double vx_max = 0.02, vx_min = -0.01, vp = 0.6;
    int n_max = 10, suite = 0;
    verify->add_option("--x-max", vx_max, "lattice up-return")->capture_default_str();
    verify->add_option("--x-min", vx_min, "lattice down-return")->capture_default_str();
    verify->add_option("--p", vp, "up-probability")->capture_default_str();
    add_model(verify, false);
    verify->add_option("--n-max", n_max, "largest horizon to verify")
        ->capture_default_str();
    verify->add_option("--grid-points", grid_points, "K grid resolution")
        ->capture_default_str();
    verify->add_option("--suite", suite,
                       "verify this many random lattices instead of one model")
        ->capture_default_str();
    verify->add_option("--seed", seed, "suite seed")->capture_default_str();

    // tickdata
    auto* tick = app.add_subcommand("tickdata",
                                    "empirical-PMF experiment from a tick file");
    std::string tick_file;
    double delta_t = 1.0;
    tick->add_option("--file", tick_file, "CSV tick file: timestamp,price")
        ->required();
    tick->add_option("--delta-t", delta_t, "execution delay in seconds")
        ->capture_default_str();
    add_common(tick);
    tick->add_option("--financing", financing, "self-financing or leverage")
        ->transform(CLI::CheckedTransformer(kFinancingNames, CLI::ignore_case))
        ->capture_default_str();
    tick->add_option("--grid-points", grid_points, "K grid resolution")
        ->capture_default_str();

    // elg
    auto* elg_cmd = app.add_subcommand("elg", "evaluate one ELG value");
    std::string method = "auto";
    add_model(elg_cmd, true);
    elg_cmd->add_option("--strategy", strategy, "hf or bh")
        ->transform(CLI::CheckedTransformer(kStrategyNames, CLI::ignore_case))
        ->required();
    add_modes(elg_cmd);
    elg_cmd->add_option("--k", kelly, "Kelly fraction")->required();
    add_common(elg_cmd);
    elg_cmd->add_option("--method", method, "auto|exact|closed-form|mc")
        ->capture_default_str();

    // optimize
    auto* opt_cmd = app.add_subcommand("optimize", "maximize ELG over K");
    add_model(opt_cmd, true);
    opt_cmd->add_option("--strategy", strategy, "hf or bh")
        ->transform(CLI::CheckedTransformer(kStrategyNames, CLI::ignore_case))
        ->required();
    add_modes(opt_cmd);
    add_common(opt_cmd);
    opt_cmd->add_option("--grid-points", grid_points, "K grid resolution")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    // per-command default path budgets; explicit --paths always wins
    if (sweep->parsed() && sweep->count("--paths") == 0) paths = 50000;
    if (tick->parsed() && tick->count("--paths") == 0) paths = 50000;

    try {
        if (toy->parsed()) return cmd_toy3(out_dir);
        if (lat100->parsed())
            return cmd_lattice100(paths, curve_paths, seed, curve_points, workers,
                                  out_dir);
        if (sweep->parsed())
            return cmd_sweep_p(p_values, n, paths, seed, financing, out_dir);
        if (verify->parsed()) {
            const BinaryLattice lattice =
                model_file.empty()
                    ? BinaryLattice(vx_max, vx_min, vp)
                    : std::get<BinaryLattice>(load_model_file(model_file));
            return cmd_verify_maximality(lattice, n_max, grid_points, suite, seed,
                                         out_dir);
        }
        if (tick->parsed())
            return cmd_tickdata(tick_file, delta_t, n, paths, seed, financing,
                                grid_points, workers, out_dir);
        if (elg_cmd->parsed())
            return cmd_elg(load_model_file(model_file), strategy, delay, financing,
                           kelly, n, method, paths, seed, workers);
        if (opt_cmd->parsed())
            return cmd_optimize(load_model_file(model_file), strategy, delay,
                                financing, n, grid_points, paths, seed, workers,
                                out_dir);
    } catch (const NoAdmissibleFraction& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
