#include "elgsim/optimizer.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace elgsim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double estimate_value(const ElgEstimate& est) {
    return est.ruined ? kNegInf : est.value;
}

// golden-section ascent on [lo, hi]; returns the best (K, g) seen
std::pair<double, double> golden_refine(const ElgEvaluator& evaluate, double lo,
                                        double hi, double tol,
                                        double best_k, double best_g) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double gc = estimate_value(evaluate(c));
    double gd = estimate_value(evaluate(d));
    const auto consider = [&](double k, double g) {
        if (g > best_g || (g == best_g && k < best_k)) {
            best_g = g;
            best_k = k;
        }
    };
    consider(c, gc);
    consider(d, gd);
    while (b - a > tol) {
        if (gc >= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = estimate_value(evaluate(c));
            consider(c, gc);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = estimate_value(evaluate(d));
            consider(d, gd);
        }
    }
    return {best_k, best_g};
}

}  // namespace

OptimizationResult maximize(const ElgEvaluator& evaluate, Interval interval,
                            int grid_points, double refine_tol) {
    if (!(interval.hi >= interval.lo))
        throw std::invalid_argument("maximize: empty interval");
    if (grid_points < 3)
        throw std::invalid_argument("maximize: need at least 3 grid points");

    OptimizationResult result;
    result.curve.reserve(static_cast<std::size_t>(grid_points));

    const double span = interval.hi - interval.lo;
    int best = -1;
    for (int i = 0; i < grid_points; ++i) {
        const double k = grid_points == 1
                             ? interval.lo
                             : interval.lo + span * i / (grid_points - 1);
        const ElgEstimate est = evaluate(k);
        if (i == 0) result.method = est.method;
        result.curve.push_back({k, estimate_value(est), est.std_error});
        // strict improvement only: ties resolve toward smaller K
        if (result.curve.back().g != kNegInf &&
            (best < 0 || result.curve.back().g > result.curve[static_cast<std::size_t>(best)].g))
            best = i;
    }
    if (best < 0)
        throw NoAdmissibleFraction(
            "maximize: every grid point is ruined; no admissible fraction");

    result.k_star = result.curve[static_cast<std::size_t>(best)].k;
    result.g_star = result.curve[static_cast<std::size_t>(best)].g;

    if (result.method != ElgMethod::monte_carlo && span > 0.0) {
        const double lo =
            best > 0 ? result.curve[static_cast<std::size_t>(best) - 1].k : interval.lo;
        const double hi = best + 1 < grid_points
                              ? result.curve[static_cast<std::size_t>(best) + 1].k
                              : interval.hi;
        const auto [k_ref, g_ref] =
            golden_refine(evaluate, lo, hi, refine_tol, result.k_star, result.g_star);
        result.k_star = k_ref;
        result.g_star = g_ref;
    }
    result.at_boundary = result.k_star >= interval.hi - refine_tol;
    return result;
}

std::vector<CurvePoint> elg_curve(const ElgEvaluator& evaluate, Interval interval,
                                  int num_points) {
    if (num_points < 2)
        throw std::invalid_argument("elg_curve: need at least 2 points");
    std::vector<CurvePoint> curve;
    curve.reserve(static_cast<std::size_t>(num_points));
    const double span = interval.hi - interval.lo;
    for (int i = 0; i < num_points; ++i) {
        const double k = interval.lo + span * i / (num_points - 1);
        const ElgEstimate est = evaluate(k);
        curve.push_back({k, estimate_value(est), est.std_error});
    }
    return curve;
}

std::vector<SweepRow> sweep_probability(const BinaryLattice& lattice_template,
                                        const std::vector<double>& p_values,
                                        int n, DelayMode delay,
                                        Financing financing,
                                        std::int64_t mc_paths,
                                        std::uint64_t seed,
                                        int grid_points, int enum_cap) {
    std::vector<SweepRow> rows;
    rows.reserve(p_values.size());
    for (std::size_t idx = 0; idx < p_values.size(); ++idx) {
        const double p = p_values[idx];
        const BinaryLattice lattice(lattice_template.x_max, lattice_template.x_min, p);
        if (!(p > attractiveness_threshold(lattice) && p < 1.0))
            throw std::invalid_argument(
                "sweep_probability: p must lie in (threshold, 1)");
        const Interval bounds =
            admissible_interval(ReturnModel{lattice}, delay, financing);

        const ElgEvaluator eval_bh = [&](double k) {
            return delay == DelayMode::one_step
                       ? elg_closed_form_bh_delay(lattice, n, k)
                       : elg_closed_form_bh_no_delay(lattice, n, k);
        };
        TradeConfig hf_cfg;
        hf_cfg.strategy = Strategy::high_frequency;
        hf_cfg.delay = delay;
        hf_cfg.financing = financing;
        hf_cfg.horizon = n;
        const ElgEvaluator eval_hf = [&, idx](double k) {
            TradeConfig cfg = hf_cfg;
            cfg.kelly_fraction = k;
            if (delay == DelayMode::none)
                return elg_closed_form_hf_no_delay(lattice, k);
            if (n <= enum_cap) return elg_exact(lattice, cfg, enum_cap);
            // decorrelate seeds across sweep entries
            return elg_monte_carlo(ReturnModel{lattice}, cfg, mc_paths,
                                   seed + idx, 0);
        };

        const OptimizationResult bh = maximize(eval_bh, bounds, grid_points);
        const OptimizationResult hf = maximize(eval_hf, bounds, grid_points);

        SweepRow row;
        row.p = p;
        row.g_bh = bh.g_star;
        row.g_hf = hf.g_star;
        row.k_bh = bh.k_star;
        row.k_hf = hf.k_star;
        row.margin_pct = (bh.g_star - hf.g_star) / hf.g_star * 100.0;
        rows.push_back(row);
    }
    return rows;
}

void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out) {
    out.precision(17);
    out << "K,g,std_err\n";
    for (const CurvePoint& pt : curve)
        out << pt.k << ',' << pt.g << ',' << pt.std_error << '\n';
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out.precision(17);
    out << "p,g_bh,g_hf,margin_pct\n";
    for (const SweepRow& row : rows)
        out << row.p << ',' << row.g_bh << ',' << row.g_hf << ','
            << row.margin_pct << '\n';
}

}  // namespace elgsim
