#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "opcrit/imc_exact.hpp"
#include "reference_values.hpp"

using namespace opcrit;

TEST_CASE("polynomial basics") {
    IntPoly a = IntPoly::from_coeffs({1, -2, 0, 3});
    CHECK(a.pretty() == "1 - 2q + 3q^3");
    CHECK(a.eval(mpq_class(1, 2)) == mpq_class(1) - 1 + mpq_class(3, 8));
    IntPoly prod = a * IntPoly::from_coeffs({0, 1});
    CHECK(prod.coeff(1) == 1);
    CHECK(prod.coeff(4) == 3);
    CHECK(IntPoly::div_exact(prod, IntPoly::from_coeffs({0, 1})) == a);
    CHECK_THROWS_AS(IntPoly::div_exact(a, IntPoly::from_coeffs({0, 1})),
                    std::runtime_error);
    RationalFn r = RationalFn::make(IntPoly::from_coeffs({0, -2, 2}),
                                    IntPoly::from_coeffs({-2, 0, 2}));
    CHECK(r.num().pretty() == "q");   // (2q(q-1)) / (2(q^2-1)) = q/(q+1)
    CHECK(r.den().pretty() == "1 + q");
}

TEST_CASE("site update polynomials") {
    CHECK(new_site_poly(1, 1) == IntPoly::from_coeffs({1, 0, -1}));
    CHECK(new_site_poly(1, 1).pretty() == "1 - q^2");
    CHECK(new_site_poly(1, 0) == IntPoly::from_coeffs({1, -1}));
    CHECK(new_site_poly(0, 1) == IntPoly::from_coeffs({1, -1}));
    CHECK(new_site_poly(0, 0).is_zero());
}

TEST_CASE("relative occupancy includes edge and forced region") {
    CHECK(rel_occupancy(2, 0b10, 0) == 1);   // the edge itself
    CHECK(rel_occupancy(2, 0b10, 1) == 1);   // b_1
    CHECK(rel_occupancy(2, 0b10, 2) == 0);   // b_2
    CHECK(rel_occupancy(2, 0b10, 3) == 1);   // forced
    CHECK(rel_occupancy(2, 0b10, -1) == 0);  // right of the edge
}

TEST_CASE("printed order-1 matrix and drifts") {
    TransitionMatrix m = transition_matrix(1);
    auto ref = refvals::matrix_1();
    for (int l = 0; l < 2; ++l)
        for (int c = 0; c < 2; ++c) CHECK(m.entries[l][c] == ref[l][c]);

    DriftVector d = drift_vector(1);
    auto dn = refvals::drift_num_1();
    IntPoly den = IntPoly::from_coeffs({1, 0, -1});
    for (int l = 0; l < 2; ++l) CHECK(d.entries[l] == RationalFn::make(dn[l], den));
}

TEST_CASE("printed order-2 matrix and drifts") {
    TransitionMatrix m = transition_matrix(2);
    auto ref = refvals::matrix_2();
    for (int l = 0; l < 4; ++l)
        for (int c = 0; c < 4; ++c) CHECK(m.entries[l][c] == ref[l][c]);

    DriftVector d = drift_vector(2);
    auto dn = refvals::drift_num_2();
    IntPoly den = IntPoly::from_coeffs({1, 0, -1});
    for (int l = 0; l < 4; ++l) CHECK(d.entries[l] == RationalFn::make(dn[l], den));
}

TEST_CASE("rows sum to one and entries are probabilities") {
    for (int i = 0; i <= 5; ++i) {
        TransitionMatrix m = transition_matrix(i);
        mpq_class q(37, 100);
        for (const auto& row : m.entries) {
            IntPoly sum;
            for (const IntPoly& e : row) {
                sum += e;
                mpq_class v = e.eval(q);
                CHECK(v > 0);
                CHECK(v <= 1);  // the order-0 matrix is the 1x1 identity
            }
            CHECK(sum == IntPoly(1));
        }
    }
}

TEST_CASE("jump law head and tail recombine into the matrix") {
    for (int i : {1, 2, 3})
        for (std::uint64_t l = 0; l < (std::uint64_t{1} << i); ++l) {
            JumpLaw law = one_step_law(i, l);
            TransitionRow row = transition_row(i, l);
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << i); ++m) {
                IntPoly total;
                for (long k = 0; k <= i + 1; ++k) total += law.prob(k, m);
                total += law.tail_sum_from(i + 2, m);
                CHECK(total == row.prob[m]);
            }
        }
}

TEST_CASE("deep jump probabilities follow the geometric ratio") {
    JumpLaw law = one_step_law(2, 1);
    IntPoly q2 = IntPoly::from_coeffs({0, 0, 1});
    for (long k = 4; k < 8; ++k)
        for (std::uint64_t m = 0; m < 4; ++m)
            CHECK(law.prob(k + 1, m) == law.prob(k, m) * q2);
}

TEST_CASE("symbolic stationary measures match the printed forms") {
    auto pi1 = symbolic_stationary(1);
    for (int l = 0; l < 2; ++l) CHECK(pi1[l] == refvals::stationary_1(l));
    auto pi2 = symbolic_stationary(2);
    for (int l = 0; l < 4; ++l) CHECK(pi2[l] == refvals::stationary_2(l));

    // stationarity and normalization as rational identities
    TransitionMatrix m = transition_matrix(2);
    RationalFn one = RationalFn::make(1, 1);
    RationalFn total;
    for (int c = 0; c < 4; ++c) {
        RationalFn acc;
        for (int l = 0; l < 4; ++l)
            acc = acc + pi2[l] * RationalFn::make(m.entries[l][c], 1);
        CHECK(acc == pi2[c]);
        total = total + pi2[c];
    }
    CHECK(total == one);
    CHECK_THROWS_AS(symbolic_stationary(3), std::invalid_argument);
}

TEST_CASE("symbolic mean drifts match the printed forms") {
    CHECK(symbolic_mean_drift(0) == refvals::mean_drift_0());
    CHECK(symbolic_mean_drift(1) == refvals::mean_drift_1());
    CHECK(symbolic_mean_drift(2) == refvals::mean_drift_2());

    // consistency: mean drift equals the stationary average of the drift vector
    auto pi = symbolic_stationary(2);
    DriftVector d = drift_vector(2);
    RationalFn acc;
    for (int l = 0; l < 4; ++l) acc = acc + pi[l] * d.entries[l];
    CHECK(acc == symbolic_mean_drift(2));
}

TEST_CASE("streaming rows match the assembled matrix") {
    TransitionMatrix m = transition_matrix(3);
    std::size_t seen = 0;
    for_each_row(3, [&](std::uint64_t l, TransitionRow&& row) {
        ++seen;
        for (std::uint64_t c = 0; c < 8; ++c) CHECK(row.prob[c] == m.entries[l][c]);
    });
    CHECK(seen == 8);
}

TEST_CASE("dump formats") {
    std::ostringstream pretty;
    dump_pretty(pretty, 1);
    CHECK(pretty.str().find("1 - q + q^3 - q^4") != std::string::npos);

    std::ostringstream js;
    dump_json(js, 1);
    nlohmann::json doc = nlohmann::json::parse(js.str());
    CHECK(doc["order"] == 1);
    CHECK(doc["matrix"].size() == 2);
    CHECK(doc["matrix"][0][1].size() == 5);  // 1 - q + q^3 - q^4
    CHECK(doc["matrix"][0][1][0] == "1");
    CHECK(doc["matrix"][0][1][4] == "-1");
    CHECK(doc["drift"].size() == 2);
    CHECK(doc.contains("mean_drift"));

    std::ostringstream js0;
    dump_json(js0, 0);
    nlohmann::json d0 = nlohmann::json::parse(js0.str());
    CHECK(d0["matrix"].size() == 1);
    CHECK(d0["matrix"][0][0][0] == "1");

    CHECK_THROWS_AS(one_step_law(13, 0), std::invalid_argument);
    CHECK_THROWS_AS(one_step_law(2, 4), std::invalid_argument);
}
