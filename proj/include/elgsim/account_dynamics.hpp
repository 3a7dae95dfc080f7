#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "elgsim/returns_model.hpp"

namespace elgsim {

enum class Strategy { high_frequency, buy_and_hold };
enum class DelayMode { none, one_step };
enum class Financing { self_financed, leveraged };

const char* to_string(Strategy s);
const char* to_string(DelayMode d);
const char* to_string(Financing f);

struct TradeConfig {
    Strategy strategy = Strategy::high_frequency;
    DelayMode delay = DelayMode::none;
    Financing financing = Financing::self_financed;
    double kelly_fraction = 0.0;  // K
    int horizon = 1;              // n
    double initial_capital = 1.0; // V(0)
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Admissible K range: [0,1] without delay or in leveraged mode,
// [0, 1/(1+x_max)] for self-financed trading under one-step delay
// (the Self-Financing Lemma bound).
Interval admissible_interval(const ReturnModel& model, DelayMode delay,
                             Financing financing);

// Throws std::invalid_argument when cfg.kelly_fraction falls outside the
// admissible interval for (delay, financing) or the config is malformed.
void validate_config(const TradeConfig& cfg, const ReturnModel& model);

// Account history over one return path. Prices are normalized to S(0)=1;
// all dynamics are in returns, so the absolute level carries no information.
//
//   values:       V(0..n)
//   prices:       S(0..n)
//   orders:       N(k), shares ordered at stage k (k = 0..n-1; zero where the
//                 strategy places no order)
//   investments:  I(k), currency executed at stage k (k = 0..n). Under delay
//                 the order from stage k-1 fills at stage k, so I(0) = 0 and
//                 the stage-n fill is recorded even though it never enters a
//                 valuation step.
struct Trajectory {
    std::vector<double> values;
    std::vector<double> prices;
    std::vector<double> orders;
    std::vector<double> investments;
    bool ruined = false;  // some V(k) <= 0 (possible only when leveraged)
};

// V(k+1) = (1 + K X(k)) V(k)
Trajectory hf_no_delay(std::span<const double> returns, double kelly_fraction,
                       double initial_capital);

// V(k+1) = V(k) + K V(0) X(k);  V(n) = (1 + K (prod(1+X)-1)) V(0)
Trajectory bh_no_delay(std::span<const double> returns, double kelly_fraction,
                       double initial_capital);

// Orders in shares, one-step execution lag:
//   V(0) = V(1) = V0;  V(k+1) = V(k) + K (1+X(k-1)) V(k-1) X(k),  k >= 1
Trajectory hf_with_delay(std::span<const double> returns, double kelly_fraction,
                         double initial_capital);

// Single delayed order at stage 0, executed at stage 1:
//   V(0) = V(1) = V0;  V(k+1) = V(k) + N(0) (S(k+1) - S(k)),  k >= 1
Trajectory bh_with_delay(std::span<const double> returns, double kelly_fraction,
                         double initial_capital);

// Closed form for the trajectory above:
//   V(n) = (1 + K (1+X(0)) (prod_{k=1}^{n-1} (1+X(k)) - 1)) V0
double bh_delay_final_closed_form(std::span<const double> returns,
                                  double kelly_fraction, double initial_capital);

Trajectory simulate(const TradeConfig& cfg, std::span<const double> returns);

struct ConstraintViolation {
    int stage = 0;
    std::string kind;  // "negative_investment" | "exceeds_value" | "negative_value"
    double investment = 0.0;
    double value = 0.0;
};

// Long-only / self-financing audit: flags I(k) < 0, I(k) > V(k) beyond
// 1e-9 relative slack, and V(k) < 0.
std::vector<ConstraintViolation> check_constraints(const Trajectory& traj);

// CSV export, columns stage,V,N,I (plus price).
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace elgsim
