#include "elgsim/tick_ingest.hpp"

#include <istream>
#include <sstream>
#include <string>

namespace elgsim {

TickParseError::TickParseError(std::size_t line_, const std::string& what_)
    : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
      line(line_) {}

TickSeries parse_ticks(std::istream& in) {
    TickSeries series;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto begin = raw.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        if (raw[begin] == '#') continue;
        const auto comma = raw.find(',');
        if (comma == std::string::npos)
            throw TickParseError(line_no, "expected 'timestamp,price'");
        double ts = 0.0, price = 0.0;
        try {
            std::size_t used = 0;
            ts = std::stod(raw.substr(0, comma), &used);
            price = std::stod(raw.substr(comma + 1), &used);
        } catch (const std::exception&) {
            throw TickParseError(line_no, "malformed number in '" + raw + "'");
        }
        if (!series.timestamps.empty() && ts < series.timestamps.back())
            throw TickParseError(line_no, "timestamp reversal at index " +
                                              std::to_string(series.timestamps.size()));
        if (!(price > 0.0))
            throw TickParseError(line_no, "price must be positive");
        series.timestamps.push_back(ts);
        series.prices.push_back(price);
    }
    return series;
}

SubsampledSeries subsample(const TickSeries& series, double delta_t) {
    if (delta_t < 0.0)
        throw std::invalid_argument("subsample: delta_t must be >= 0");
    SubsampledSeries sub;
    sub.delta_t = delta_t;
    if (series.timestamps.empty()) return sub;

    std::size_t k = 0;
    sub.indices.push_back(k);
    while (true) {
        // k' = min{i > k : t(i) >= t(k) + delta_t}
        const double cutoff = series.timestamps[k] + delta_t;
        std::size_t next = k + 1;
        while (next < series.timestamps.size() && series.timestamps[next] < cutoff)
            ++next;
        if (next >= series.timestamps.size()) break;
        const double prev_price = series.prices[k];
        sub.returns.push_back((series.prices[next] - prev_price) / prev_price);
        sub.indices.push_back(next);
        k = next;
    }
    return sub;
}

EmpiricalPmf build_pmf(const SubsampledSeries& sub) {
    if (sub.returns.empty())
        throw std::invalid_argument("build_pmf: no returns in subsampled series");
    return EmpiricalPmf::from_returns(sub.returns);
}

}  // namespace elgsim
