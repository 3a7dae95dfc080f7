#include "elgsim/account_dynamics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

using namespace elgsim;

namespace {

std::vector<double> random_path(std::mt19937_64& gen, const BinaryLattice& lat,
                                int n) {
    std::bernoulli_distribution up(lat.p);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (double& x : xs) x = up(gen) ? lat.x_max : lat.x_min;
    return xs;
}

}  // namespace

TEST_SUITE_BEGIN("account-dynamics");

TEST_CASE("hf_no_delay reference traces") {
    SUBCASE("K=0 leaves the account flat") {
        const std::vector<double> path{0.8, -0.2, 0.8};
        const Trajectory traj = hf_no_delay(path, 0.0, 2.5);
        for (double v : traj.values) CHECK(v == 2.5);
        for (double inv : traj.investments) CHECK(inv == 0.0);
    }
    SUBCASE("K=1 compounds the raw returns") {
        const std::vector<double> path{0.8, -0.2};
        const Trajectory traj = hf_no_delay(path, 1.0, 1.0);
        REQUIRE(traj.values.size() == 3);
        CHECK(traj.values[0] == 1.0);
        CHECK(traj.values[1] == doctest::Approx(1.8).epsilon(1e-15));
        CHECK(traj.values[2] == doctest::Approx(1.44).epsilon(1e-15));
    }
    SUBCASE("K=1/2 halves the exposure") {
        const std::vector<double> path{0.8, -0.2};
        const Trajectory traj = hf_no_delay(path, 0.5, 1.0);
        CHECK(traj.values[2] == doctest::Approx(1.4 * 0.9).epsilon(1e-15));
    }
}

TEST_CASE("bh_no_delay reference traces") {
    const std::vector<double> path{0.8, -0.2};
    SUBCASE("K=0") {
        const Trajectory traj = bh_no_delay(path, 0.0, 1.0);
        CHECK(traj.values.back() == 1.0);
    }
    SUBCASE("K=1 matches the high-frequency account") {
        const Trajectory bh = bh_no_delay(path, 1.0, 1.0);
        const Trajectory hf = hf_no_delay(path, 1.0, 1.0);
        CHECK(bh.values.back() ==
              doctest::Approx(hf.values.back()).epsilon(1e-12));
    }
    SUBCASE("K=1/2 closed form vs recursion") {
        const Trajectory traj = bh_no_delay(path, 0.5, 1.0);
        // V(2) = 1 + 0.5 (1.44 - 1)
        CHECK(traj.values[2] == doctest::Approx(1.22).epsilon(1e-14));
        // intermediate stage holds shares bought at S(0)=1
        CHECK(traj.values[1] == doctest::Approx(1.4).epsilon(1e-14));
    }
}

TEST_CASE("hf_with_delay hand trace") {
    const double K = 1.0 / 1.8;
    const std::vector<double> path{0.8, -0.2, 0.8};
    const Trajectory traj = hf_with_delay(path, K, 1.0);
    REQUIRE(traj.values.size() == 4);
    CHECK(traj.values[0] == 1.0);
    CHECK(traj.values[1] == 1.0);
    CHECK(traj.values[2] == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(traj.values[3] == doctest::Approx(0.8 + (1.0 / 1.8) * 0.8 * 0.8).epsilon(1e-14));
    CHECK_FALSE(traj.ruined);

    SUBCASE("K=0 freezes the account") {
        const Trajectory flat = hf_with_delay(path, 0.0, 1.0);
        for (double v : flat.values) CHECK(v == 1.0);
    }
    SUBCASE("n=1: no order settles inside the window") {
        const std::vector<double> one{0.8};
        const Trajectory t1 = hf_with_delay(one, K, 3.0);
        REQUIRE(t1.values.size() == 2);
        CHECK(t1.values[1] == 3.0);
    }
}

TEST_CASE("executed delayed investment equals K(1+X(k-1))V(k-1)") {
    std::mt19937_64 gen(31);
    const BinaryLattice lat(0.8, -0.2, 0.5);
    const double K = 1.0 / 1.8;
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<double> xs = random_path(gen, lat, 8);
        const Trajectory traj = hf_with_delay(xs, K, 1.0);
        for (std::size_t k = 1; k < traj.investments.size(); ++k)
            CHECK(traj.investments[k] ==
                  K * (1.0 + xs[k - 1]) * traj.values[k - 1]);
        CHECK(traj.investments[0] == 0.0);  // nothing executes at stage 0
    }
}

TEST_CASE("bh_with_delay trace and closed form") {
    SUBCASE("n=2 hand trace") {
        const std::vector<double> path{0.8, -0.2};
        const Trajectory traj = bh_with_delay(path, 1.0 / 1.8, 1.0);
        REQUIRE(traj.values.size() == 3);
        CHECK(traj.values[1] == 1.0);
        CHECK(traj.values[2] == doctest::Approx(0.8).epsilon(1e-14));
        CHECK(bh_delay_final_closed_form(path, 1.0 / 1.8, 1.0) ==
              doctest::Approx(0.8).epsilon(1e-14));
    }
    SUBCASE("K=0") {
        const std::vector<double> path{0.8, -0.2, 0.8};
        CHECK(bh_with_delay(path, 0.0, 1.0).values.back() == 1.0);
    }
    SUBCASE("step recursion equals closed form on 1000 random paths") {
        std::mt19937_64 gen(57);
        const BinaryLattice lat(0.05, -0.03, 0.55);
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = 2 + static_cast<int>(gen() % 99);
            const std::vector<double> xs = random_path(gen, lat, n);
            const double K = (gen() % 1000) / 1000.0 / (1.0 + lat.x_max);
            const Trajectory traj = bh_with_delay(xs, K, 1.0);
            const double closed = bh_delay_final_closed_form(xs, K, 1.0);
            CHECK(std::fabs(traj.values.back() - closed) <=
                  1e-12 * std::max(1.0, std::fabs(closed)));
        }
    }
}

TEST_CASE("n=1 delay-free strategies coincide for every K") {
    const std::vector<double> path{0.8};
    for (int i = 0; i <= 10; ++i) {
        const double K = i / 10.0;
        const double hf = hf_no_delay(path, K, 1.0).values.back();
        const double bh = bh_no_delay(path, K, 1.0).values.back();
        CHECK(std::fabs(hf - bh) <= 1e-15);
    }
}

TEST_CASE("admissible intervals") {
    const ReturnModel small{BinaryLattice(0.02, -0.01, 0.6)};
    const ReturnModel big{BinaryLattice(0.8, -0.2, 0.5)};

    const Interval delayed = admissible_interval(small, DelayMode::one_step,
                                                 Financing::self_financed);
    CHECK(delayed.lo == 0.0);
    CHECK(delayed.hi == doctest::Approx(1.0 / 1.02).epsilon(1e-15));
    CHECK(delayed.hi == doctest::Approx(0.98039).epsilon(1e-4));

    CHECK(admissible_interval(big, DelayMode::one_step, Financing::self_financed).hi ==
          doctest::Approx(1.0 / 1.8).epsilon(1e-15));

    const Interval plain =
        admissible_interval(small, DelayMode::none, Financing::self_financed);
    CHECK(plain.lo == 0.0);
    CHECK(plain.hi == 1.0);
    CHECK(admissible_interval(small, DelayMode::one_step, Financing::leveraged).hi == 1.0);
}

TEST_CASE("constraint checks around the self-financing bound") {
    const BinaryLattice lat(0.8, -0.2, 0.5);
    const double bound = 1.0 / 1.8;

    SUBCASE("admissible K yields an empty report on every path") {
        std::mt19937_64 gen(101);
        for (int trial = 0; trial < 50; ++trial) {
            const std::vector<double> xs = random_path(gen, lat, 10);
            const Trajectory traj = hf_with_delay(xs, bound, 1.0);
            CHECK(check_constraints(traj).empty());
        }
    }
    SUBCASE("K above the bound breaks on the all-up prefix") {
        const std::vector<double> all_up(6, lat.x_max);
        const Trajectory traj = hf_with_delay(all_up, bound + 0.01, 1.0);
        const auto report = check_constraints(traj);
        REQUIRE_FALSE(report.empty());
        CHECK(report.front().kind == "exceeds_value");
        CHECK(report.front().stage == 1);
    }
    SUBCASE("K=0 executes nothing") {
        const std::vector<double> xs{0.8, -0.2, 0.8};
        const Trajectory traj = hf_with_delay(xs, 0.0, 1.0);
        CHECK(check_constraints(traj).empty());
        for (double inv : traj.investments) CHECK(inv == 0.0);
    }
}

TEST_CASE("self-financing lemma over randomized lattices") {
    std::mt19937_64 gen(2718);
    std::uniform_real_distribution<double> up(0.05, 1.2);
    std::uniform_real_distribution<double> dn(-0.6, -0.02);
    std::uniform_real_distribution<double> pp(0.05, 0.95);
    for (int trial = 0; trial < 10; ++trial) {
        const BinaryLattice lat(up(gen), dn(gen), pp(gen));
        const double bound = 1.0 / (1.0 + lat.x_max);

        // sufficiency: every admissible K on the grid, all paths up to n=8
        for (int gi = 0; gi <= 8; ++gi) {
            const double K = bound * gi / 8.0;
            enumerate_paths(lat, 8, [&](const std::vector<double>& xs, double) {
                const Trajectory traj = hf_with_delay(xs, K, 1.0);
                CHECK(check_constraints(traj).empty());
                for (double v : traj.values) CHECK(v >= 0.0);
            });
        }
        // necessity: any overshoot breaks the all-up path at stage 1
        for (double delta : {1e-3, 1e-2}) {
            const std::vector<double> all_up(4, lat.x_max);
            const Trajectory traj = hf_with_delay(all_up, bound + delta, 1.0);
            CHECK(traj.investments[1] > traj.values[1]);
        }
    }
}

TEST_CASE("leveraged delayed trading can ruin the account") {
    // single-stage crash after a strong up-move
    const std::vector<double> path{3.0, -0.5};
    const Trajectory traj = bh_with_delay(path, 1.0, 1.0);
    CHECK(traj.values.back() < 0.0);
    CHECK(traj.ruined);
    const auto report = check_constraints(traj);
    CHECK_FALSE(report.empty());
}

TEST_CASE("simulate dispatches on strategy and delay") {
    const std::vector<double> path{0.8, -0.2, 0.8};
    TradeConfig cfg;
    cfg.horizon = 3;
    cfg.kelly_fraction = 0.5;

    cfg.strategy = Strategy::high_frequency;
    cfg.delay = DelayMode::none;
    CHECK(simulate(cfg, path).values ==
          hf_no_delay(path, 0.5, 1.0).values);

    cfg.strategy = Strategy::buy_and_hold;
    cfg.delay = DelayMode::one_step;
    CHECK(simulate(cfg, path).values ==
          bh_with_delay(path, 0.5, 1.0).values);

    cfg.horizon = 2;
    CHECK_THROWS_AS(simulate(cfg, path), std::invalid_argument);
}

TEST_CASE("config validation matches the admissible interval") {
    const ReturnModel model{BinaryLattice(0.02, -0.01, 0.6)};
    TradeConfig cfg;
    cfg.horizon = 10;
    cfg.delay = DelayMode::one_step;
    cfg.financing = Financing::self_financed;

    cfg.kelly_fraction = 1.0 / 1.02;
    CHECK_NOTHROW(validate_config(cfg, model));
    cfg.kelly_fraction = 1.0;
    CHECK_THROWS_AS(validate_config(cfg, model), std::invalid_argument);
    cfg.financing = Financing::leveraged;
    CHECK_NOTHROW(validate_config(cfg, model));
    cfg.kelly_fraction = -0.1;
    CHECK_THROWS_AS(validate_config(cfg, model), std::invalid_argument);
}

TEST_CASE("trajectory csv export") {
    const std::vector<double> path{0.8};
    const Trajectory traj = hf_no_delay(path, 1.0, 1.0);
    std::ostringstream out;
    write_trajectory_csv(traj, out);
    const std::string text = out.str();
    CHECK(text.find("stage,V,N,I") == 0);
    CHECK(text.find("0,1,1,1") != std::string::npos);
    CHECK(text.find("1,1.8") != std::string::npos);
}

TEST_SUITE_END();
