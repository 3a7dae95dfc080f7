#pragma once

#include <cstdint>

#include "elgsim/account_dynamics.hpp"
#include "elgsim/returns_model.hpp"

namespace elgsim {

enum class ElgMethod { exact, closed_form, monte_carlo };

const char* to_string(ElgMethod m);

// Expected log-growth per stage, (1/n) E[log V(n)/V(0)], in nats.
// `value` is -inf with `ruined` set when any contributing path drives the
// account to V <= 0 (leveraged delayed dynamics only).
struct ElgEstimate {
    double value = 0.0;
    ElgMethod method = ElgMethod::exact;
    double std_error = 0.0;  // zero for deterministic methods
    std::int64_t num_paths = 0;
    bool ruined = false;
};

// Exact expectation by enumerating all 2^n lattice paths.
ElgEstimate elg_exact(const BinaryLattice& lattice, const TradeConfig& cfg,
                      int enum_cap = kDefaultEnumCap);

// Delayed buy-and-hold on a lattice, evaluated as the pair of binomial sums
//   g_n(K) = (1/n) [ p sum_i p_i log(1 + K(1+x_max) z_i)
//                  + (1-p) sum_i p_i log(1 + K(1+x_min) z_i) ]
// with z_i = (1+x_max)^i (1+x_min)^(n-1-i) - 1 and binomial weights p_i over
// n-1 stages. Binomials are computed in log space via lgamma so n in the
// hundreds stays finite.
ElgEstimate elg_closed_form_bh_delay(const BinaryLattice& lattice, int n,
                                     double kelly_fraction);

// No-delay analogues (exact for any n on a lattice): buy-and-hold is the
// same binomial sum over n stages without the execution-price factor, and
// the high-frequency value is stage-wise i.i.d., g = E[log(1+KX)].
ElgEstimate elg_closed_form_bh_no_delay(const BinaryLattice& lattice, int n,
                                        double kelly_fraction);
ElgEstimate elg_closed_form_hf_no_delay(const BinaryLattice& lattice,
                                        double kelly_fraction);

// Monte-Carlo estimate over num_paths sampled paths. Deterministic given
// (seed, num_paths): path j is a pure function of (seed, j), per-path values
// are reduced in path order with compensated summation, so the result is
// bitwise identical at any worker count. std_error is the sample standard
// deviation divided by sqrt(num_paths).
ElgEstimate elg_monte_carlo(const ReturnModel& model, const TradeConfig& cfg,
                            std::int64_t num_paths, std::uint64_t seed,
                            int workers = 0);

struct PairedDifference {
    double value = 0.0;      // E[g_a - g_b], nats per stage
    double std_error = 0.0;  // standard error of the per-path differences
    std::int64_t num_paths = 0;
    bool ruined = false;     // value is NaN when set
};

// Common-random-numbers estimate of E[(1/n)(log V_a(n) - log V_b(n))]:
// both configurations see the same return path in every sample, which is
// what makes a ~1% ranking question answerable at practical path counts.
PairedDifference elg_paired_difference(const ReturnModel& model,
                                       const TradeConfig& cfg_a,
                                       const TradeConfig& cfg_b,
                                       std::int64_t num_paths,
                                       std::uint64_t seed, int workers = 0);

}  // namespace elgsim
