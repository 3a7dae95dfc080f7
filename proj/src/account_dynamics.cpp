#include "elgsim/account_dynamics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace elgsim {

const char* to_string(Strategy s) {
    return s == Strategy::high_frequency ? "high_frequency" : "buy_and_hold";
}
const char* to_string(DelayMode d) {
    return d == DelayMode::none ? "none" : "one_step";
}
const char* to_string(Financing f) {
    return f == Financing::self_financed ? "self_financed" : "leveraged";
}

Interval admissible_interval(const ReturnModel& model, DelayMode delay,
                             Financing financing) {
    if (financing == Financing::self_financed && delay == DelayMode::one_step)
        return {0.0, 1.0 / (1.0 + model_x_max(model))};
    return {0.0, 1.0};
}

void validate_config(const TradeConfig& cfg, const ReturnModel& model) {
    if (cfg.horizon < 1)
        throw std::invalid_argument("horizon must be >= 1");
    if (!(cfg.initial_capital > 0.0))
        throw std::invalid_argument("initial capital must be positive");
    if (!std::isfinite(cfg.kelly_fraction) || cfg.kelly_fraction < 0.0)
        throw std::invalid_argument("kelly fraction must be finite and >= 0 (long only)");
    const Interval bounds = admissible_interval(model, cfg.delay, cfg.financing);
    // tiny slack so K computed as 1/(1+x_max) by a caller compares clean
    if (cfg.kelly_fraction > bounds.hi * (1.0 + 1e-12))
        throw std::invalid_argument("kelly fraction exceeds admissible bound");
}

namespace {

Trajectory make_base(std::span<const double> returns, double initial_capital) {
    if (!(initial_capital > 0.0))
        throw std::invalid_argument("initial capital must be positive");
    const std::size_t n = returns.size();
    Trajectory traj;
    traj.values.assign(n + 1, 0.0);
    traj.prices.assign(n + 1, 0.0);
    traj.orders.assign(n == 0 ? 0 : n, 0.0);
    traj.investments.assign(n + 1, 0.0);
    traj.prices[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        traj.prices[k + 1] = traj.prices[k] * (1.0 + returns[k]);
    traj.values[0] = initial_capital;
    return traj;
}

void flag_ruin(Trajectory& traj) {
    for (double v : traj.values)
        if (v <= 0.0) { traj.ruined = true; return; }
}

}  // namespace

Trajectory hf_no_delay(std::span<const double> returns, double kelly_fraction,
                       double initial_capital) {
    Trajectory traj = make_base(returns, initial_capital);
    const std::size_t n = returns.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double invested = kelly_fraction * traj.values[k];
        traj.investments[k] = invested;
        traj.orders[k] = invested / traj.prices[k];
        traj.values[k + 1] = traj.values[k] * (1.0 + kelly_fraction * returns[k]);
    }
    flag_ruin(traj);
    return traj;
}

Trajectory bh_no_delay(std::span<const double> returns, double kelly_fraction,
                       double initial_capital) {
    Trajectory traj = make_base(returns, initial_capital);
    const std::size_t n = returns.size();
    if (n == 0) return traj;
    const double invested = kelly_fraction * initial_capital;
    const double shares = invested / traj.prices[0];
    traj.investments[0] = invested;
    traj.orders[0] = shares;
    for (std::size_t k = 0; k < n; ++k)
        traj.values[k + 1] =
            traj.values[k] + shares * (traj.prices[k + 1] - traj.prices[k]);
    flag_ruin(traj);
    return traj;
}

Trajectory hf_with_delay(std::span<const double> returns, double kelly_fraction,
                         double initial_capital) {
    Trajectory traj = make_base(returns, initial_capital);
    const std::size_t n = returns.size();
    if (n == 0) return traj;
    traj.values[1] = initial_capital;  // first fill happens at stage 1
    traj.orders[0] = kelly_fraction * traj.values[0] / traj.prices[0];
    for (std::size_t k = 1; k <= n; ++k) {
        // order from stage k-1 fills at stage k at price S(k)
        traj.investments[k] =
            kelly_fraction * (1.0 + returns[k - 1]) * traj.values[k - 1];
        if (k < n) {
            traj.values[k + 1] =
                traj.values[k] +
                kelly_fraction * (1.0 + returns[k - 1]) * traj.values[k - 1] * returns[k];
            traj.orders[k] = kelly_fraction * traj.values[k] / traj.prices[k];
        }
    }
    flag_ruin(traj);
    return traj;
}

Trajectory bh_with_delay(std::span<const double> returns, double kelly_fraction,
                         double initial_capital) {
    Trajectory traj = make_base(returns, initial_capital);
    const std::size_t n = returns.size();
    if (n == 0) return traj;
    traj.values[1] = initial_capital;
    const double shares = kelly_fraction * initial_capital / traj.prices[0];
    traj.orders[0] = shares;
    traj.investments[1] = shares * traj.prices[1];
    for (std::size_t k = 1; k < n; ++k)
        traj.values[k + 1] =
            traj.values[k] + shares * (traj.prices[k + 1] - traj.prices[k]);
    flag_ruin(traj);
    return traj;
}

double bh_delay_final_closed_form(std::span<const double> returns,
                                  double kelly_fraction, double initial_capital) {
    const std::size_t n = returns.size();
    if (n == 0) return initial_capital;
    double compound = 1.0;
    for (std::size_t k = 1; k < n; ++k) compound *= (1.0 + returns[k]);
    return (1.0 + kelly_fraction * (1.0 + returns[0]) * (compound - 1.0)) *
           initial_capital;
}

Trajectory simulate(const TradeConfig& cfg, std::span<const double> returns) {
    if (static_cast<int>(returns.size()) != cfg.horizon)
        throw std::invalid_argument("return path length differs from configured horizon");
    const bool hf = cfg.strategy == Strategy::high_frequency;
    if (cfg.delay == DelayMode::none)
        return hf ? hf_no_delay(returns, cfg.kelly_fraction, cfg.initial_capital)
                  : bh_no_delay(returns, cfg.kelly_fraction, cfg.initial_capital);
    return hf ? hf_with_delay(returns, cfg.kelly_fraction, cfg.initial_capital)
              : bh_with_delay(returns, cfg.kelly_fraction, cfg.initial_capital);
}

std::vector<ConstraintViolation> check_constraints(const Trajectory& traj) {
    std::vector<ConstraintViolation> report;
    const auto slack = [](double a, double b) {
        return 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
    };
    for (std::size_t k = 0; k < traj.values.size(); ++k) {
        const double v = traj.values[k];
        const double inv = k < traj.investments.size() ? traj.investments[k] : 0.0;
        const int stage = static_cast<int>(k);
        if (inv < -slack(inv, v))
            report.push_back({stage, "negative_investment", inv, v});
        if (inv > v + slack(inv, v))
            report.push_back({stage, "exceeds_value", inv, v});
        if (v < -slack(inv, v))
            report.push_back({stage, "negative_value", inv, v});
    }
    return report;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out.precision(17);
    out << "stage,V,N,I\n";
    for (std::size_t k = 0; k < traj.values.size(); ++k) {
        const double order = k < traj.orders.size() ? traj.orders[k] : 0.0;
        out << k << ',' << traj.values[k] << ',' << order << ','
            << traj.investments[k] << '\n';
    }
}

}  // namespace elgsim
