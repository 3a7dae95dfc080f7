#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "elgsim/returns_model.hpp"

namespace elgsim {

struct TickParseError : std::runtime_error {
    TickParseError(std::size_t line_, const std::string& what_);
    std::size_t line;
};

// Raw tick tape: nondecreasing timestamps (seconds), strictly positive prices.
struct TickSeries {
    std::vector<double> timestamps;
    std::vector<double> prices;
};

// One record per line, "timestamp,price". Blank lines and '#' comments are
// skipped. Malformed lines, time reversals and nonpositive prices throw a
// TickParseError carrying the 1-based line number.
TickSeries parse_ticks(std::istream& in);

// Chain of selected tick indices under an execution delay of delta_t seconds
// plus the returns between consecutive selections.
struct SubsampledSeries {
    std::vector<std::size_t> indices;  // k_0 = 0, then k' = min{i>k : t(i) >= t(k)+dt}
    std::vector<double> returns;       // x_j = (s(k_{j+1}) - s(k_j)) / s(k_j)
    double delta_t = 0.0;
};

SubsampledSeries subsample(const TickSeries& series, double delta_t);

// Empirical PMF with one exact 1/m weight per return occurrence; duplicate
// values aggregate. Requires at least one return.
EmpiricalPmf build_pmf(const SubsampledSeries& sub);

}  // namespace elgsim
