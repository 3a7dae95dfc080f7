#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "elgsim/elg.hpp"

namespace elgsim {

using ElgEvaluator = std::function<ElgEstimate(double kelly_fraction)>;

struct CurvePoint {
    double k = 0.0;
    double g = 0.0;
    double std_error = 0.0;
};

struct OptimizationResult {
    double k_star = 0.0;
    double g_star = 0.0;
    std::vector<CurvePoint> curve;  // the coarse grid scan
    bool at_boundary = false;       // k_star >= hi - refine_tol
    ElgMethod method = ElgMethod::exact;
};

// Every grid point evaluated to -inf: no admissible fraction exists.
struct NoAdmissibleFraction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coarse grid scan over [interval.lo, interval.hi] followed, for
// deterministic evaluators only, by golden-section refinement of the
// bracketing triple down to |dK| <= refine_tol. Monte-Carlo evaluators get
// the grid argmax as is; refining below the noise floor is meaningless.
// Ties break toward smaller K.
OptimizationResult maximize(const ElgEvaluator& evaluate, Interval interval,
                            int grid_points = 101, double refine_tol = 1e-6);

// num_points evenly spaced evaluations including both endpoints.
std::vector<CurvePoint> elg_curve(const ElgEvaluator& evaluate,
                                  Interval interval, int num_points);

struct SweepRow {
    double p = 0.0;
    double g_bh = 0.0;   // g_n^*
    double g_hf = 0.0;   // g_1^*
    double k_bh = 0.0;
    double k_hf = 0.0;
    double margin_pct = 0.0;  // (g_bh - g_hf) / g_hf * 100
};

// Re-optimizes both traders for each probability in p_values on the lattice
// template (x_max, x_min fixed). Buy-and-hold uses the closed form; the
// high-frequency side uses exact enumeration when n fits under the cap and
// Monte-Carlo otherwise. Every p must exceed the attractiveness threshold.
std::vector<SweepRow> sweep_probability(const BinaryLattice& lattice_template,
                                        const std::vector<double>& p_values,
                                        int n, DelayMode delay,
                                        Financing financing,
                                        std::int64_t mc_paths,
                                        std::uint64_t seed,
                                        int grid_points = 101,
                                        int enum_cap = kDefaultEnumCap);

void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out);
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace elgsim
