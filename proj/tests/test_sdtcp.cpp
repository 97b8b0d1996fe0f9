#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "opcrit/imc_exact.hpp"
#include "opcrit/rng.hpp"
#include "opcrit/sdtcp.hpp"

using namespace opcrit;

TEST_CASE("canonical initial configuration") {
    InfectionConfig cfg = initial_config_canonical();
    CHECK(cfg.time == 0);
    CHECK(cfg.occupancy(0) == 1);
    CHECK(cfg.occupancy(2) == 0);
    CHECK(cfg.occupancy(-2) == 1);
    CHECK(cfg.occupancy(-100) == 1);
    CHECK(cfg.edge() == 0);
    CHECK(imc_readout(cfg, 2).label() == 3);
    CHECK(imc_readout(cfg, 0).label() == 0);
    CHECK_THROWS_AS((void)cfg.occupancy(1), std::invalid_argument);
}

TEST_CASE("window initial configurations") {
    InfectionConfig c0 = initial_config_from_label(2, 0);
    CHECK(c0.occupancy(-2) == 0);
    CHECK(c0.occupancy(-4) == 0);
    CHECK(c0.occupancy(-6) == 1);
    CHECK(c0.occupancy(-8) == 1);
    CHECK(c0.edge() == 0);

    InfectionConfig c3 = initial_config_from_label(2, 3);
    CHECK(c3.occupancy(-2) == 1);
    CHECK(c3.occupancy(-4) == 1);

    // sites edge and edge-4 occupied, edge-2 healthy: bits (0,1)
    InfectionConfig c1 = initial_config_from_label(2, 1);
    CHECK(c1.occupancy(0) == 1);
    CHECK(c1.occupancy(-2) == 0);
    CHECK(c1.occupancy(-4) == 1);
    CHECK(imc_readout(c1, 2).label() == 1);

    CHECK_THROWS_AS(initial_config_from_label(1, 2), std::invalid_argument);

    for (int i : {0, 1, 3, 5})
        for (std::uint64_t l = 0; l < (std::uint64_t{1} << i); ++l)
            CHECK(imc_readout(initial_config_from_label(i, l), i).label() == l);
}

TEST_CASE("p=1 advances the edge by one each step") {
    UniformBondField field(5);
    InfectionConfig cfg = initial_config_canonical();
    for (int t = 1; t <= 50; ++t) {
        cfg = step(cfg, field, 1.0, 3);
        CHECK(cfg.edge() == t);
        CHECK(imc_readout(cfg, 3).label() == 7);
    }
}

TEST_CASE("edge never jumps right by more than one") {
    UniformBondField field(17);
    InfectionConfig cfg = initial_config_canonical();
    long long prev = 0;
    for (int t = 0; t < 300; ++t) {
        cfg = step(cfg, field, 0.58, 2);
        CHECK(cfg.edge() - prev <= 1);
        prev = cfg.edge();
        // forced-region invariant, spot checks below the window
        CHECK(cfg.occupancy(cfg.edge() - 6) == 1);
        CHECK(cfg.occupancy(cfg.edge() - 20) == 1);
    }
}

TEST_CASE("order-0 one-step jump law") {
    const double p = 0.6, q = 0.4;
    const int N = 200000;
    int plus = 0, minus1 = 0, minus3 = 0;
    for (int s = 0; s < N; ++s) {
        UniformBondField field(mix64(900 + s));
        InfectionConfig next = step(initial_config_canonical(), field, p, 0);
        long long j = next.edge();
        if (j == 1) ++plus;
        if (j == -1) ++minus1;
        if (j == -3) ++minus3;
    }
    auto within4 = [&](int count, double prob) {
        return std::fabs(double(count) / N - prob) <= 4 * std::sqrt(prob * (1 - prob) / N);
    };
    CHECK(within4(plus, p));
    CHECK(within4(minus1, q * (1 - q * q)));
    CHECK(within4(minus3, q * q * q * (1 - q * q)));
}

TEST_CASE("readout is Markov under translated bonds") {
    // Two configurations with the same window label, placed at different
    // space-time positions but fed the same uniforms, must produce the same
    // jump and the same next label.
    for (int s = 0; s < 40; ++s) {
        UniformBondField field(mix64(777 + s));
        InfectionConfig cfg = initial_config_canonical();
        for (int t = 0; t < 6; ++t) cfg = step(cfg, field, 0.6, 2);
        WindowState w = imc_readout(cfg, 2);

        InfectionConfig replay = initial_config_from_label(2, w.label());
        ShiftedField shifted(field, cfg.time, w.edge);
        InfectionConfig stepped = step(cfg, field, 0.6, 2);
        InfectionConfig replay_stepped = step(replay, shifted, 0.6, 2);

        WindowState wa = imc_readout(stepped, 2);
        WindowState wb = imc_readout(replay_stepped, 2);
        CHECK(wa.edge - w.edge == wb.edge);
        CHECK(wa.label() == wb.label());
    }
}

TEST_CASE("finite support can die out at infinite order") {
    int died = 0;
    for (int s = 0; s < 30; ++s) {
        InfectionConfig cfg;
        cfg.left = LeftBoundary::Empty;
        cfg.cells = {1};
        UniformBondField field(mix64(3000 + s));
        for (int t = 0; t < 50 && !cfg.died_out; ++t) cfg = step(cfg, field, 0.3, kOrderInf);
        if (cfg.died_out) {
            ++died;
            CHECK(cfg.occupancy(cfg.time % 2) == 0);  // parity-consistent site
            CHECK_THROWS_AS((void)cfg.edge(), std::runtime_error);
        }
    }
    CHECK(died > 20);  // p=0.3 is far subcritical
    InfectionConfig forced = initial_config_canonical();
    UniformBondField field(1);
    CHECK_THROWS_AS(step(forced, field, 0.3, kOrderInf), std::invalid_argument);
}

TEST_CASE("horizon runs fail loudly when the window collapses") {
    UniformBondField field(4242);
    InfectionConfig cfg = initial_config_horizon(5);
    bool threw = false;
    try {
        for (int t = 0; t < 200; ++t) cfg = step(cfg, field, 0.55, kOrderInf);
    } catch (const HorizonExhausted&) {
        threw = true;
    }
    CHECK(threw);
}

TEST_CASE("finite order agrees with infinite order near the edge") {
    for (int s = 0; s < 10; ++s) {
        long long bad = 0;
        auto observer = [&](long long, const std::vector<InfectionConfig>& cfgs) {
            bad += agreement_violations(cfgs[0], cfgs[1], 2);
        };
        run_coupled({2, kOrderInf}, {0.6, 0.6},
                    {initial_config_canonical(), initial_config_horizon(150)},
                    mix64(5100 + s), 100, observer);
        CHECK(bad == 0);
    }
}

TEST_CASE("coupling suites find no violations") {
    CoupleCheckReport r1 = couple_check_orders(1, 3, 0.6, 50, 61, 10);
    CHECK(r1.violations == 0);
    CHECK(r1.comparisons > 0);
    CoupleCheckReport r2 = couple_check_p(2, 0.5, 0.7, 50, 62, 10);
    CHECK(r2.violations == 0);
    CoupleCheckReport r3 = couple_check_initial(2, 0, 3, 0.6, 50, 63, 10);
    CHECK(r3.violations == 0);
    CoupleCheckReport r4 = couple_check_orders(1, kOrderInf, 0.6, 50, 64, 5);
    CHECK(r4.violations == 0);
    CHECK_THROWS_AS(couple_check_initial(2, 3, 1, 0.6, 10, 1, 1), std::invalid_argument);
}

TEST_CASE("trajectories record edges, labels and visits") {
    TrajectoryRecord rec = run_trajectory(1, 0.6, 321, 2000);
    REQUIRE(rec.edge.size() == 2000);
    REQUIRE(rec.label.size() == 2000);
    CHECK(rec.visits[0] + rec.visits[1] == 2000);
    CHECK(rec.visits[1] > rec.visits[0]);  // the all-ones window dominates
    CHECK(std::fabs(rec.edge_over_n(1999)) < 0.5);

    std::ostringstream csv;
    rec.write_csv(csv);
    std::string text = csv.str();
    CHECK(text.substr(0, 26) == "n,edge,edge_over_n,label\n1");
    size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 2001);

    TrajectoryRecord one = run_trajectory(3, 1.0, 9, 100);
    for (std::size_t t = 0; t < one.edge.size(); ++t)
        CHECK(one.edge[t] == static_cast<long long>(t) + 1);
}

TEST_CASE("visit fractions approach the exact stationary measure") {
    // order 1, p = 0.6: pi = (q^2, 1-q+q^3-q^4) / (1-q+q^2+q^3-q^4) at q = 0.4
    const double q = 0.4;
    const double den = 1 - q + q * q + q * q * q - q * q * q * q;
    const double pi0 = q * q / den;
    const int R = 12;
    const long long n = 20000;
    double mean = 0, m2 = 0;
    for (int r = 0; r < R; ++r) {
        TrajectoryRecord rec = run_trajectory(1, 0.6, mix64(7000 + r), n);
        double f0 = double(rec.visits[0]) / double(n);
        mean += f0 / R;
        m2 += f0 * f0;
    }
    double var = (m2 - R * mean * mean) / (R - 1);
    double se = std::sqrt(var / R);
    CHECK(std::fabs(mean - pi0) <= 4 * se);
}
