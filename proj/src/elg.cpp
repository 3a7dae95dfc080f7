#include "elgsim/elg.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "elgsim/rng.hpp"

namespace elgsim {

const char* to_string(ElgMethod m) {
    switch (m) {
        case ElgMethod::exact: return "exact";
        case ElgMethod::closed_form: return "closed_form";
        case ElgMethod::monte_carlo: return "monte_carlo";
    }
    return "?";
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Final V(n)/V(0) for one return path, provider x(k) -> X(k). The delayed
// recursions here mirror the trajectory builders expression for expression,
// so both routes agree bit for bit.
template <class Provider>
double final_value_ratio(Strategy strategy, DelayMode delay, double K, int n,
                         Provider&& x) {
    if (delay == DelayMode::none) {
        if (strategy == Strategy::high_frequency) {
            double v = 1.0;
            for (int k = 0; k < n; ++k) v *= 1.0 + K * x(k);
            return v;
        }
        double compound = 1.0;
        for (int k = 0; k < n; ++k) compound *= 1.0 + x(k);
        return 1.0 + K * (compound - 1.0);
    }
    if (strategy == Strategy::buy_and_hold) {
        const double x0 = x(0);
        double compound = 1.0;
        for (int k = 1; k < n; ++k) compound *= 1.0 + x(k);
        return 1.0 + K * (1.0 + x0) * (compound - 1.0);
    }
    // high frequency with one-step delay
    double v_prev = 1.0;  // V(k-1)
    double v_curr = 1.0;  // V(k), with V(0) = V(1)
    double x_prev = n > 0 ? x(0) : 0.0;
    for (int k = 1; k < n; ++k) {
        const double xk = x(k);
        const double v_next = v_curr + K * (1.0 + x_prev) * v_prev * xk;
        v_prev = v_curr;
        v_curr = v_next;
        x_prev = xk;
    }
    return v_curr;
}

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// mean / standard error of a frozen sample, reduced in index order
struct MeanSe {
    double mean = 0.0;
    double std_error = 0.0;
};

MeanSe reduce_sample(const std::vector<double>& ys) {
    KahanSum acc;
    for (double y : ys) acc.add(y);
    const double n = static_cast<double>(ys.size());
    const double mean = acc.sum / n;
    if (ys.size() < 2) return {mean, 0.0};
    KahanSum sq;
    for (double y : ys) {
        const double d = y - mean;
        sq.add(d * d);
    }
    const double sd = std::sqrt(sq.sum / (n - 1.0));
    return {mean, sd / std::sqrt(n)};
}

int resolve_workers(int workers, std::int64_t num_paths) {
    if (workers <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        workers = hc == 0 ? 1 : static_cast<int>(std::min(hc, 16u));
    }
    if (num_paths < 4096) workers = 1;
    return std::max(workers, 1);
}

// run fn(j) for j in [0, count) across a fixed block partition; each index
// is owned by exactly one thread, so output written per index is
// schedule-independent
template <class Fn>
void parallel_index_loop(std::int64_t count, int workers, Fn&& fn) {
    if (workers <= 1) {
        for (std::int64_t j = 0; j < count; ++j) fn(j);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t j = lo; j < hi; ++j) fn(j);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace

ElgEstimate elg_exact(const BinaryLattice& lattice, const TradeConfig& cfg,
                      int enum_cap) {
    validate_config(cfg, ReturnModel{lattice});
    const int n = cfg.horizon;
    if (n > enum_cap)
        throw std::invalid_argument("elg_exact: horizon " + std::to_string(n) +
                                    " exceeds enumeration cap " +
                                    std::to_string(enum_cap));
    std::vector<double> pow_p(static_cast<std::size_t>(n) + 1, 1.0);
    std::vector<double> pow_q(static_cast<std::size_t>(n) + 1, 1.0);
    for (int i = 1; i <= n; ++i) {
        pow_p[static_cast<std::size_t>(i)] = pow_p[static_cast<std::size_t>(i - 1)] * lattice.p;
        pow_q[static_cast<std::size_t>(i)] = pow_q[static_cast<std::size_t>(i - 1)] * (1.0 - lattice.p);
    }

    ElgEstimate est;
    est.method = ElgMethod::exact;
    est.num_paths = std::int64_t{1} << n;

    KahanSum acc;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        const int ups = std::popcount(mask);
        const double prob = pow_p[static_cast<std::size_t>(ups)] *
                            pow_q[static_cast<std::size_t>(n - ups)];
        const double ratio = final_value_ratio(
            cfg.strategy, cfg.delay, cfg.kelly_fraction, n, [&](int k) {
                return ((mask >> k) & 1u) ? lattice.x_max : lattice.x_min;
            });
        if (ratio <= 0.0) {
            if (prob > 0.0) {
                est.ruined = true;
                est.value = kNegInf;
                return est;
            }
            continue;  // impossible path (p = 0 or 1), no mass
        }
        acc.add(prob * std::log(ratio));
    }
    est.value = acc.sum / n;
    return est;
}

namespace {

// log binomial pmf over m trials, safe at p = 0 and p = 1
double log_binom_pmf(int m, int i, double p) {
    if (p == 0.0) return i == 0 ? 0.0 : kNegInf;
    if (p == 1.0) return i == m ? 0.0 : kNegInf;
    return std::lgamma(m + 1.0) - std::lgamma(i + 1.0) - std::lgamma(m - i + 1.0) +
           i * std::log(p) + (m - i) * std::log(1.0 - p);
}

}  // namespace

ElgEstimate elg_closed_form_bh_delay(const BinaryLattice& lattice, int n,
                                     double kelly_fraction) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    const double K = kelly_fraction;
    const double l1p_up = std::log1p(lattice.x_max);
    const double l1p_dn = std::log1p(lattice.x_min);

    ElgEstimate est;
    est.method = ElgMethod::closed_form;
    est.num_paths = 0;

    KahanSum acc;
    for (int i = 0; i <= n - 1; ++i) {
        const double log_pi = log_binom_pmf(n - 1, i, lattice.p);
        if (log_pi == kNegInf) continue;
        const double pi = std::exp(log_pi);
        // z_i = (1+x_max)^i (1+x_min)^(n-1-i) - 1, kept accurate for tiny
        // returns via expm1
        const double z = std::expm1(i * l1p_up + (n - 1 - i) * l1p_dn);
        const double arg_up = K * (1.0 + lattice.x_max) * z;
        const double arg_dn = K * (1.0 + lattice.x_min) * z;
        double term = 0.0;
        if (lattice.p > 0.0) {
            if (arg_up <= -1.0) {
                est.ruined = true;
                est.value = kNegInf;
                return est;
            }
            term += lattice.p * std::log1p(arg_up);
        }
        if (lattice.p < 1.0) {
            if (arg_dn <= -1.0) {
                est.ruined = true;
                est.value = kNegInf;
                return est;
            }
            term += (1.0 - lattice.p) * std::log1p(arg_dn);
        }
        acc.add(pi * term);
    }
    est.value = acc.sum / n;
    return est;
}

ElgEstimate elg_closed_form_bh_no_delay(const BinaryLattice& lattice, int n,
                                        double kelly_fraction) {
    if (n < 1) throw std::invalid_argument("horizon must be >= 1");
    const double K = kelly_fraction;
    const double l1p_up = std::log1p(lattice.x_max);
    const double l1p_dn = std::log1p(lattice.x_min);

    ElgEstimate est;
    est.method = ElgMethod::closed_form;
    est.num_paths = 0;

    KahanSum acc;
    for (int i = 0; i <= n; ++i) {
        const double log_pi = log_binom_pmf(n, i, lattice.p);
        if (log_pi == kNegInf) continue;
        const double z = std::expm1(i * l1p_up + (n - i) * l1p_dn);
        const double arg = K * z;
        if (arg <= -1.0) {
            est.ruined = true;
            est.value = kNegInf;
            return est;
        }
        acc.add(std::exp(log_pi) * std::log1p(arg));
    }
    est.value = acc.sum / n;
    return est;
}

ElgEstimate elg_closed_form_hf_no_delay(const BinaryLattice& lattice,
                                        double kelly_fraction) {
    const double K = kelly_fraction;
    ElgEstimate est;
    est.method = ElgMethod::closed_form;
    const double arg_up = K * lattice.x_max;
    const double arg_dn = K * lattice.x_min;
    if (arg_dn <= -1.0 && lattice.p < 1.0) {
        est.ruined = true;
        est.value = kNegInf;
        return est;
    }
    est.value = lattice.p * std::log1p(arg_up) +
                (1.0 - lattice.p) * std::log1p(arg_dn);
    return est;
}

ElgEstimate elg_monte_carlo(const ReturnModel& model, const TradeConfig& cfg,
                            std::int64_t num_paths, std::uint64_t seed,
                            int workers) {
    validate_config(cfg, model);
    if (num_paths < 2)
        throw std::invalid_argument("elg_monte_carlo needs num_paths >= 2");

    const int n = cfg.horizon;
    std::vector<double> ys(static_cast<std::size_t>(num_paths));
    parallel_index_loop(
        num_paths, resolve_workers(workers, num_paths), [&](std::int64_t j) {
            const double ratio = final_value_ratio(
                cfg.strategy, cfg.delay, cfg.kelly_fraction, n, [&](int k) {
                    return draw_return(model, seed, static_cast<std::uint64_t>(j),
                                       static_cast<std::uint64_t>(k));
                });
            ys[static_cast<std::size_t>(j)] =
                ratio > 0.0 ? std::log(ratio) / n : kNegInf;
        });

    ElgEstimate est;
    est.method = ElgMethod::monte_carlo;
    est.num_paths = num_paths;
    for (double y : ys) {
        if (y == kNegInf) {
            est.ruined = true;
            est.value = kNegInf;
            return est;
        }
    }
    const MeanSe ms = reduce_sample(ys);
    est.value = ms.mean;
    est.std_error = ms.std_error;
    return est;
}

PairedDifference elg_paired_difference(const ReturnModel& model,
                                       const TradeConfig& cfg_a,
                                       const TradeConfig& cfg_b,
                                       std::int64_t num_paths,
                                       std::uint64_t seed, int workers) {
    validate_config(cfg_a, model);
    validate_config(cfg_b, model);
    if (cfg_a.horizon != cfg_b.horizon)
        throw std::invalid_argument("paired difference requires equal horizons");
    if (num_paths < 2)
        throw std::invalid_argument("paired difference needs num_paths >= 2");

    const int n = cfg_a.horizon;
    std::vector<double> ds(static_cast<std::size_t>(num_paths));
    std::atomic<bool> any_ruin{false};
    parallel_index_loop(
        num_paths, resolve_workers(workers, num_paths), [&](std::int64_t j) {
            const auto x_at = [&](int k) {
                return draw_return(model, seed, static_cast<std::uint64_t>(j),
                                   static_cast<std::uint64_t>(k));
            };
            const double ra =
                final_value_ratio(cfg_a.strategy, cfg_a.delay, cfg_a.kelly_fraction, n, x_at);
            const double rb =
                final_value_ratio(cfg_b.strategy, cfg_b.delay, cfg_b.kelly_fraction, n, x_at);
            if (ra <= 0.0 || rb <= 0.0) {
                any_ruin.store(true, std::memory_order_relaxed);
                ds[static_cast<std::size_t>(j)] = std::numeric_limits<double>::quiet_NaN();
                return;
            }
            ds[static_cast<std::size_t>(j)] = (std::log(ra) - std::log(rb)) / n;
        });

    PairedDifference diff;
    diff.num_paths = num_paths;
    if (any_ruin.load()) {
        diff.ruined = true;
        diff.value = std::numeric_limits<double>::quiet_NaN();
        return diff;
    }
    const MeanSe ms = reduce_sample(ds);
    diff.value = ms.mean;
    diff.std_error = ms.std_error;
    return diff;
}

}  // namespace elgsim
