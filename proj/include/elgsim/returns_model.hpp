#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace elgsim {

// Bounded i.i.d. binary return model: X = x_max with probability p,
// x_min with probability 1-p. Standing bound: -1 < x_min < 0 < x_max.
struct BinaryLattice {
    double x_max;
    double x_min;
    double p;

    BinaryLattice(double x_max_, double x_min_, double p_);
};

// One atom of an empirical return distribution. The weight is the exact
// rational count/total of the owning Pmf, never a bare double.
struct PmfAtom {
    double value = 0.0;
    std::int64_t count = 0;
};

// Discrete return distribution with exact rational weights count_i / m,
// so total mass is exactly 1 by construction. Atom values must be > -1.
class EmpiricalPmf {
public:
    static EmpiricalPmf from_returns(const std::vector<double>& returns);
    static EmpiricalPmf from_atoms(std::vector<PmfAtom> atoms);

    const std::vector<PmfAtom>& atoms() const { return atoms_; }
    std::int64_t total_count() const { return total_; }
    double weight(std::size_t i) const {
        return static_cast<double>(atoms_[i].count) / static_cast<double>(total_);
    }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }

    // value of the atom selected by an exact uniform draw in [0, total)
    double value_at_count(std::int64_t r) const;

private:
    EmpiricalPmf() = default;
    void finalize();

    std::vector<PmfAtom> atoms_;
    std::vector<std::int64_t> cum_;  // exclusive prefix sums of counts
    std::int64_t total_ = 0;
    double x_min_ = 0.0;
    double x_max_ = 0.0;
};

using ReturnModel = std::variant<BinaryLattice, EmpiricalPmf>;

double model_x_min(const ReturnModel& model);
double model_x_max(const ReturnModel& model);

// E[1/(1+X)]. Values <= 1 mean the stock is "sufficiently attractive":
// without execution delay a buy and holder can then match the
// high-frequency trader's optimal expected log-growth.
double sufficient_attractiveness_margin(const ReturnModel& model);

// The probability p* at which the margin above equals 1 for a lattice:
// p* = x_min (1+x_max) / (x_min - x_max).
double attractiveness_threshold(const BinaryLattice& lattice);

// One i.i.d. return path plus the token that reproduces it.
struct ReturnPath {
    std::vector<double> returns;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
};

// Single return draw, pure in (seed, path_index, stage).
double draw_return(const ReturnModel& model, std::uint64_t seed,
                   std::uint64_t path_index, std::uint64_t stage);

// n i.i.d. draws; deterministic function of (seed, path_index) alone.
ReturnPath sample_path(const ReturnModel& model, int n, std::uint64_t seed,
                       std::uint64_t path_index);

inline constexpr int kDefaultEnumCap = 22;

// Visits all 2^n up/down paths of a lattice together with their
// probabilities p^u (1-p)^(n-u). Throws when n exceeds the cap.
void enumerate_paths(
    const BinaryLattice& lattice, int n,
    const std::function<void(const std::vector<double>&, double)>& visit,
    int enum_cap = kDefaultEnumCap);

// --- model files -----------------------------------------------------------
// Lattices are key/value text ("x_max 0.02" per line); empirical PMFs are
// two-column "return,weight" lines with weights as exact rationals ("3/7")
// or terminating decimals.
ReturnModel load_model(std::istream& in);
ReturnModel load_model_file(const std::string& path);
void save_model(const ReturnModel& model, std::ostream& out);

}  // namespace elgsim
