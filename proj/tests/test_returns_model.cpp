#include "elgsim/returns_model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace elgsim;

namespace {

BinaryLattice random_lattice(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> up(0.05, 1.2);
    std::uniform_real_distribution<double> dn(-0.6, -0.02);
    std::uniform_real_distribution<double> pp(0.02, 0.98);
    return BinaryLattice(up(gen), dn(gen), pp(gen));
}

}  // namespace

TEST_SUITE_BEGIN("returns-model");

TEST_CASE("lattice invariants are enforced") {
    CHECK_NOTHROW(BinaryLattice(0.02, -0.01, 0.6));
    CHECK_THROWS_AS(BinaryLattice(0.02, 0.01, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(BinaryLattice(-0.02, -0.01, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(BinaryLattice(0.02, -1.0, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(BinaryLattice(0.02, -0.01, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(BinaryLattice(0.02, -0.01, -0.1), std::invalid_argument);
}

TEST_CASE("attractiveness margin on the reference lattices") {
    // p = 0.6 sits above the 0.34 threshold, so the margin is <= 1
    CHECK(sufficient_attractiveness_margin(BinaryLattice(0.02, -0.01, 0.6)) <= 1.0);

    // equality case: (2/3)(1/2) + (1/3)(2) = 1
    const double eq =
        sufficient_attractiveness_margin(BinaryLattice(1.0, -0.5, 2.0 / 3.0));
    CHECK(std::fabs(eq - 1.0) <= 1e-12);

    // all mass on the losing branch
    const double bad =
        sufficient_attractiveness_margin(BinaryLattice(0.02, -0.01, 0.0));
    CHECK(bad == doctest::Approx(1.0 / 0.99).epsilon(1e-12));
    CHECK(bad > 1.0);
}

TEST_CASE("attractiveness threshold values") {
    CHECK(attractiveness_threshold(BinaryLattice(0.02, -0.01, 0.5)) ==
          doctest::Approx(0.34).epsilon(1e-12));
    CHECK(attractiveness_threshold(BinaryLattice(1.0, -0.5, 0.5)) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // margin(0.36) = 0.36/1.8 + 0.64/0.8 = 0.2 + 0.8 = 1 by direct arithmetic
    CHECK(attractiveness_threshold(BinaryLattice(0.8, -0.2, 0.5)) ==
          doctest::Approx(0.36).epsilon(1e-12));
}

TEST_CASE("margin equals 1 at the threshold for random lattices") {
    std::mt19937_64 gen(20240817);
    for (int trial = 0; trial < 200; ++trial) {
        const BinaryLattice base = random_lattice(gen);
        const double p_star = attractiveness_threshold(base);
        REQUIRE(p_star > 0.0);
        REQUIRE(p_star < 1.0);
        const BinaryLattice at(base.x_max, base.x_min, p_star);
        CHECK(std::fabs(sufficient_attractiveness_margin(at) - 1.0) <= 1e-12);
    }
}

TEST_CASE("margin is strictly decreasing in p") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        const BinaryLattice base = random_lattice(gen);
        double prev = sufficient_attractiveness_margin(
            BinaryLattice(base.x_max, base.x_min, 0.0));
        for (int i = 1; i <= 10; ++i) {
            const double cur = sufficient_attractiveness_margin(
                BinaryLattice(base.x_max, base.x_min, i / 10.0));
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("sample_path degenerate lattices and determinism") {
    const ReturnModel sure_up{BinaryLattice(0.02, -0.01, 1.0)};
    const ReturnPath up = sample_path(sure_up, 5, 1, 0);
    for (double x : up.returns) CHECK(x == 0.02);

    const ReturnModel sure_dn{BinaryLattice(0.02, -0.01, 0.0)};
    const ReturnPath dn = sample_path(sure_dn, 5, 1, 0);
    for (double x : dn.returns) CHECK(x == -0.01);

    const ReturnModel mixed{BinaryLattice(0.02, -0.01, 0.5)};
    const ReturnPath a = sample_path(mixed, 64, 42, 7);
    const ReturnPath b = sample_path(mixed, 64, 42, 7);
    CHECK(a.returns == b.returns);
    const ReturnPath c = sample_path(mixed, 64, 42, 8);
    CHECK(a.returns != c.returns);
}

TEST_CASE("sampled up-frequency stays within 4 sigma of p") {
    const double p = 0.37;
    const ReturnModel model{BinaryLattice(0.05, -0.03, p)};
    const int draws = 100000;
    int ups = 0;
    for (int j = 0; j < draws; ++j)
        if (draw_return(model, 99, static_cast<std::uint64_t>(j), 0) == 0.05) ++ups;
    const double freq = static_cast<double>(ups) / draws;
    const double sigma = std::sqrt(p * (1.0 - p) / draws);
    CHECK(std::fabs(freq - p) <= 4.0 * sigma);
}

TEST_CASE("enumerate_paths basics") {
    const BinaryLattice lattice(0.8, -0.2, 0.3);

    SUBCASE("n=1 yields the two branches") {
        std::vector<std::pair<double, double>> seen;
        enumerate_paths(lattice, 1, [&](const std::vector<double>& xs, double prob) {
            REQUIRE(xs.size() == 1);
            seen.emplace_back(xs[0], prob);
        });
        REQUIRE(seen.size() == 2);
        CHECK(seen[0].first == -0.2);
        CHECK(seen[0].second == doctest::Approx(0.7));
        CHECK(seen[1].first == 0.8);
        CHECK(seen[1].second == doctest::Approx(0.3));
    }

    SUBCASE("n=3 with p=1/2 gives eight equal masses") {
        const BinaryLattice fair(0.8, -0.2, 0.5);
        int count = 0;
        enumerate_paths(fair, 3, [&](const std::vector<double>&, double prob) {
            ++count;
            CHECK(prob == doctest::Approx(0.125).epsilon(1e-15));
        });
        CHECK(count == 8);
    }

    SUBCASE("probabilities sum to 1") {
        const BinaryLattice skewed(0.8, -0.2, 0.6);
        double total = 0.0;
        enumerate_paths(skewed, 10, [&](const std::vector<double>&, double prob) {
            total += prob;
        });
        CHECK(std::fabs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("enumerate_paths total mass, random p up to n=16") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> pp(0.0, 1.0);
    for (int n : {2, 5, 9, 13, 16}) {
        const BinaryLattice lattice(0.4, -0.3, pp(gen));
        double total = 0.0;
        enumerate_paths(lattice, n, [&](const std::vector<double>&, double prob) {
            total += prob;
        });
        CHECK(std::fabs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("enumeration cap is enforced and named") {
    const BinaryLattice lattice(0.8, -0.2, 0.5);
    try {
        enumerate_paths(lattice, 23, [](const std::vector<double>&, double) {});
        FAIL("expected a cap error");
    } catch (const std::invalid_argument& err) {
        CHECK(std::string(err.what()).find("22") != std::string::npos);
    }
    // the cap is configurable
    CHECK_NOTHROW(enumerate_paths(lattice, 5, [](const std::vector<double>&, double) {}, 5));
    CHECK_THROWS(enumerate_paths(lattice, 6, [](const std::vector<double>&, double) {}, 5));
}

TEST_CASE("empirical pmf aggregates duplicates with exact weights") {
    const EmpiricalPmf pmf = EmpiricalPmf::from_returns({0.01, 0.01, -0.02});
    REQUIRE(pmf.atoms().size() == 2);
    CHECK(pmf.total_count() == 3);
    CHECK(pmf.atoms()[0].value == -0.02);
    CHECK(pmf.atoms()[0].count == 1);
    CHECK(pmf.atoms()[1].value == 0.01);
    CHECK(pmf.atoms()[1].count == 2);

    std::int64_t mass = 0;
    for (const PmfAtom& a : pmf.atoms()) mass += a.count;
    CHECK(mass == pmf.total_count());  // total mass exactly 1 by construction
}

TEST_CASE("empirical pmf rejects returns at or below -1") {
    CHECK_THROWS_AS(EmpiricalPmf::from_returns({0.01, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(EmpiricalPmf::from_returns({-1.5}), std::invalid_argument);
}

TEST_CASE("single return gives a point mass") {
    const EmpiricalPmf pmf = EmpiricalPmf::from_returns({0.004});
    REQUIRE(pmf.atoms().size() == 1);
    CHECK(pmf.weight(0) == 1.0);
    const ReturnModel model{pmf};
    for (int j = 0; j < 20; ++j)
        CHECK(draw_return(model, 5, static_cast<std::uint64_t>(j), 3) == 0.004);
}

TEST_CASE("empirical pmf sampling tracks the weights") {
    const EmpiricalPmf pmf = EmpiricalPmf::from_atoms({{-0.01, 1}, {0.02, 3}});
    const ReturnModel model{pmf};
    const int draws = 100000;
    int ups = 0;
    for (int j = 0; j < draws; ++j)
        if (draw_return(model, 123, static_cast<std::uint64_t>(j), 0) == 0.02) ++ups;
    const double freq = static_cast<double>(ups) / draws;
    const double sigma = std::sqrt(0.75 * 0.25 / draws);
    CHECK(std::fabs(freq - 0.75) <= 4.0 * sigma);
}

TEST_CASE("lattice model file round-trip") {
    const ReturnModel model{BinaryLattice(0.02, -0.01, 0.6)};
    std::stringstream buf;
    save_model(model, buf);
    const ReturnModel loaded = load_model(buf);
    const auto& lat = std::get<BinaryLattice>(loaded);
    CHECK(lat.x_max == 0.02);
    CHECK(lat.x_min == -0.01);
    CHECK(lat.p == 0.6);
}

TEST_CASE("pmf model file round-trip keeps rational weights exact") {
    const EmpiricalPmf pmf =
        EmpiricalPmf::from_atoms({{-0.003, 2}, {0.0, 1}, {0.011, 4}});
    std::stringstream buf;
    save_model(ReturnModel{pmf}, buf);
    const ReturnModel loaded = load_model(buf);
    const auto& got = std::get<EmpiricalPmf>(loaded);
    REQUIRE(got.atoms().size() == 3);
    CHECK(got.total_count() == 7);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(got.atoms()[i].value == pmf.atoms()[i].value);
        CHECK(got.atoms()[i].count == pmf.atoms()[i].count);
    }
}

TEST_CASE("pmf file weights must sum to one") {
    std::stringstream bad("0.01,1/2\n-0.02,1/3\n");
    CHECK_THROWS_AS(load_model(bad), std::invalid_argument);
    std::stringstream good("0.01,2/3\n-0.02,1/3\n");
    CHECK_NOTHROW(load_model(good));
    std::stringstream decimals("0.01,0.25\n-0.02,0.75\n");
    const auto& pmf = std::get<EmpiricalPmf>(load_model(decimals));
    CHECK(pmf.total_count() == 4);
}

TEST_SUITE_END();
