#include "elgsim/returns_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "elgsim/rng.hpp"

namespace elgsim {

BinaryLattice::BinaryLattice(double x_max_, double x_min_, double p_)
    : x_max(x_max_), x_min(x_min_), p(p_) {
    if (!std::isfinite(x_max) || !std::isfinite(x_min) || !std::isfinite(p))
        throw std::invalid_argument("lattice parameters must be finite");
    if (!(x_min > -1.0 && x_min < 0.0))
        throw std::invalid_argument("lattice requires -1 < x_min < 0");
    if (!(x_max > 0.0))
        throw std::invalid_argument("lattice requires x_max > 0");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("lattice requires 0 <= p <= 1");
}

// --- EmpiricalPmf ------------------------------------------------------------

EmpiricalPmf EmpiricalPmf::from_returns(const std::vector<double>& returns) {
    if (returns.empty())
        throw std::invalid_argument("empirical PMF needs at least one return");
    std::map<double, std::int64_t> counts;
    for (double r : returns) {
        if (!(r > -1.0))
            throw std::invalid_argument("empirical PMF return <= -1");
        ++counts[r];
    }
    EmpiricalPmf pmf;
    pmf.atoms_.reserve(counts.size());
    for (const auto& [value, count] : counts) pmf.atoms_.push_back({value, count});
    pmf.finalize();
    return pmf;
}

EmpiricalPmf EmpiricalPmf::from_atoms(std::vector<PmfAtom> atoms) {
    if (atoms.empty())
        throw std::invalid_argument("empirical PMF needs at least one atom");
    std::sort(atoms.begin(), atoms.end(),
              [](const PmfAtom& a, const PmfAtom& b) { return a.value < b.value; });
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!(atoms[i].value > -1.0))
            throw std::invalid_argument("empirical PMF atom value <= -1");
        if (atoms[i].count <= 0)
            throw std::invalid_argument("empirical PMF atom count must be positive");
        if (i > 0 && atoms[i].value == atoms[i - 1].value)
            throw std::invalid_argument("duplicate atom value");
    }
    EmpiricalPmf pmf;
    pmf.atoms_ = std::move(atoms);
    pmf.finalize();
    return pmf;
}

void EmpiricalPmf::finalize() {
    cum_.resize(atoms_.size());
    std::int64_t running = 0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        cum_[i] = running;
        running += atoms_[i].count;
    }
    total_ = running;
    x_min_ = atoms_.front().value;
    x_max_ = atoms_.front().value;
    for (const PmfAtom& a : atoms_) {
        x_min_ = std::min(x_min_, a.value);
        x_max_ = std::max(x_max_, a.value);
    }
}

double EmpiricalPmf::value_at_count(std::int64_t r) const {
    // last atom whose exclusive prefix sum is <= r
    auto it = std::upper_bound(cum_.begin(), cum_.end(), r);
    return atoms_[static_cast<std::size_t>(it - cum_.begin()) - 1].value;
}

// --- model-wide helpers ------------------------------------------------------

namespace {
// the lattice stores bounds as fields, the pmf behind accessors
struct XMin {
    double operator()(const BinaryLattice& m) const { return m.x_min; }
    double operator()(const EmpiricalPmf& m) const { return m.x_min(); }
};
struct XMax {
    double operator()(const BinaryLattice& m) const { return m.x_max; }
    double operator()(const EmpiricalPmf& m) const { return m.x_max(); }
};
}  // namespace

double model_x_min(const ReturnModel& model) { return std::visit(XMin{}, model); }

double model_x_max(const ReturnModel& model) { return std::visit(XMax{}, model); }

double sufficient_attractiveness_margin(const ReturnModel& model) {
    if (const auto* lat = std::get_if<BinaryLattice>(&model)) {
        return lat->p / (1.0 + lat->x_max) + (1.0 - lat->p) / (1.0 + lat->x_min);
    }
    const auto& pmf = std::get<EmpiricalPmf>(model);
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf.atoms().size(); ++i)
        acc += pmf.weight(i) / (1.0 + pmf.atoms()[i].value);
    return acc;
}

double attractiveness_threshold(const BinaryLattice& lattice) {
    return lattice.x_min * (1.0 + lattice.x_max) / (lattice.x_min - lattice.x_max);
}

double draw_return(const ReturnModel& model, std::uint64_t seed,
                   std::uint64_t path_index, std::uint64_t stage) {
    const std::uint64_t word = counter_word(seed, path_index, stage);
    if (const auto* lat = std::get_if<BinaryLattice>(&model)) {
        return uniform01(word) < lat->p ? lat->x_max : lat->x_min;
    }
    const auto& pmf = std::get<EmpiricalPmf>(model);
    const std::int64_t r = static_cast<std::int64_t>(
        bounded_int(word, static_cast<std::uint64_t>(pmf.total_count())));
    return pmf.value_at_count(r);
}

ReturnPath sample_path(const ReturnModel& model, int n, std::uint64_t seed,
                       std::uint64_t path_index) {
    if (n < 1) throw std::invalid_argument("sample_path requires n >= 1");
    ReturnPath path;
    path.seed = seed;
    path.path_index = path_index;
    path.returns.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        path.returns[static_cast<std::size_t>(k)] =
            draw_return(model, seed, path_index, static_cast<std::uint64_t>(k));
    return path;
}

void enumerate_paths(
    const BinaryLattice& lattice, int n,
    const std::function<void(const std::vector<double>&, double)>& visit,
    int enum_cap) {
    if (n < 1) throw std::invalid_argument("enumerate_paths requires n >= 1");
    if (n > enum_cap)
        throw std::invalid_argument("enumerate_paths: n = " + std::to_string(n) +
                                    " exceeds enumeration cap " +
                                    std::to_string(enum_cap));
    // pow tables keep per-path probabilities to one multiply each
    std::vector<double> pow_p(static_cast<std::size_t>(n) + 1, 1.0);
    std::vector<double> pow_q(static_cast<std::size_t>(n) + 1, 1.0);
    for (int i = 1; i <= n; ++i) {
        pow_p[static_cast<std::size_t>(i)] = pow_p[static_cast<std::size_t>(i - 1)] * lattice.p;
        pow_q[static_cast<std::size_t>(i)] = pow_q[static_cast<std::size_t>(i - 1)] * (1.0 - lattice.p);
    }
    std::vector<double> xs(static_cast<std::size_t>(n));
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        int ups = 0;
        for (int k = 0; k < n; ++k) {
            const bool up = (mask >> k) & 1u;
            xs[static_cast<std::size_t>(k)] = up ? lattice.x_max : lattice.x_min;
            ups += up ? 1 : 0;
        }
        visit(xs, pow_p[static_cast<std::size_t>(ups)] *
                      pow_q[static_cast<std::size_t>(n - ups)]);
    }
}

// --- model files -------------------------------------------------------------

namespace {

// Exact rational: "3/7", "1", or a terminating decimal like "0.25".
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

Rational parse_rational(const std::string& text) {
    Rational r;
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        r.num = std::stoll(text.substr(0, slash));
        r.den = std::stoll(text.substr(slash + 1));
        if (r.den <= 0) throw std::invalid_argument("weight denominator must be > 0");
        return r;
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        r.num = std::stoll(text);
        return r;
    }
    const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_digits = text.size() - dot - 1;
    if (frac_digits > 15) throw std::invalid_argument("weight has too many digits");
    r.num = std::stoll(digits);
    r.den = 1;
    for (std::size_t i = 0; i < frac_digits; ++i) r.den *= 10;
    const std::int64_t g = std::gcd(r.num, r.den);
    if (g > 1) { r.num /= g; r.den /= g; }
    return r;
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    const std::int64_t g = std::gcd(a, b);
    const std::int64_t l = a / g;
    // cap the common denominator so counts stay exact in 64 bits
    if (l > 1000000000000000LL / b)
        throw std::invalid_argument("weight denominators overflow");
    return l * b;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

ReturnModel load_model(std::istream& in) {
    std::vector<std::string> lines;
    std::string raw;
    while (std::getline(in, raw)) {
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        lines.push_back(line);
    }
    if (lines.empty()) throw std::invalid_argument("empty model file");

    if (lines.front().find(',') == std::string::npos) {
        // key/value lattice
        double x_max = 0.0, x_min = 0.0, p = -1.0;
        bool saw_max = false, saw_min = false;
        for (const std::string& line : lines) {
            std::string key, value;
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                key = trim(line.substr(0, eq));
                value = trim(line.substr(eq + 1));
            } else {
                std::istringstream ls(line);
                ls >> key >> value;
            }
            if (key == "x_max") { x_max = std::stod(value); saw_max = true; }
            else if (key == "x_min") { x_min = std::stod(value); saw_min = true; }
            else if (key == "p") { p = std::stod(value); }
            else throw std::invalid_argument("unknown model key: " + key);
        }
        if (!saw_max || !saw_min || p < 0.0)
            throw std::invalid_argument("lattice model needs x_max, x_min and p");
        return BinaryLattice(x_max, x_min, p);
    }

    // return,weight atoms with exact rational weights
    std::vector<std::pair<double, Rational>> raw_atoms;
    std::int64_t common_den = 1;
    for (const std::string& line : lines) {
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("PMF line missing comma: " + line);
        const double value = std::stod(trim(line.substr(0, comma)));
        const Rational w = parse_rational(trim(line.substr(comma + 1)));
        if (w.num <= 0) throw std::invalid_argument("PMF weight must be positive");
        common_den = checked_lcm(common_den, w.den);
        raw_atoms.emplace_back(value, w);
    }
    std::vector<PmfAtom> atoms;
    std::int64_t mass = 0;
    for (const auto& [value, w] : raw_atoms) {
        const std::int64_t count = w.num * (common_den / w.den);
        mass += count;
        atoms.push_back({value, count});
    }
    if (mass != common_den)
        throw std::invalid_argument("PMF weights must sum to exactly 1");
    return EmpiricalPmf::from_atoms(std::move(atoms));
}

ReturnModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file: " + path);
    return load_model(in);
}

void save_model(const ReturnModel& model, std::ostream& out) {
    if (const auto* lat = std::get_if<BinaryLattice>(&model)) {
        out.precision(17);
        out << "x_max " << lat->x_max << "\n"
            << "x_min " << lat->x_min << "\n"
            << "p " << lat->p << "\n";
        return;
    }
    const auto& pmf = std::get<EmpiricalPmf>(model);
    out.precision(17);
    for (const PmfAtom& a : pmf.atoms())
        out << a.value << "," << a.count << "/" << pmf.total_count() << "\n";
}

}  // namespace elgsim
