#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "opcrit/certified.hpp"
#include "opcrit/imc_exact.hpp"
#include "opcrit/rng.hpp"
#include "reference_values.hpp"

using namespace opcrit;

namespace {

// |x.v - exact| <= x.e, decided in exact rational arithmetic
bool encloses(const ErrBounded& x, const mpq_class& exact) {
    mpq_class v(x.v), e(x.e);
    mpq_class diff = v - exact;
    if (diff < 0) diff = -diff;
    return diff <= e;
}

}  // namespace

TEST_CASE("error-tracked scalar operations") {
    ErrBounded a = eb_exact(0.25), b = eb_exact(0.5);
    CHECK(eb_add(a, b).v == 0.75);
    CHECK(eb_add(a, b).e <= 1e-15);  // representable sum, only the blanket rounding term
    ErrBounded t = eb_mul(eb_exact(0.1), eb_exact(0.2));
    CHECK(t.e > 0.0);
    CHECK(encloses(t, mpq_class(0.1) * mpq_class(0.2)));  // the doubles, not the decimals

    ErrBounded one_minus = eb_one_minus(eb_exact(0.6));
    CHECK(one_minus.v == 1.0 - 0.6);
    CHECK(one_minus.e == 0.0);  // exact by cancellation for p in [0.5, 1]

    ErrBounded d = eb_div(eb_exact(1.0), eb_exact(3.0));
    CHECK(encloses(d, mpq_class(1, 3)));
    CHECK_THROWS_AS(eb_div(a, ErrBounded{1e-300, 1e-300}), CertificationError);
}

TEST_CASE("decimal parsing carries a rounding bound") {
    ErrBounded p = eb_from_decimal("0.604233");
    CHECK(p.v == doctest::Approx(0.604233).epsilon(1e-12));
    CHECK(p.e > 0.0);
    CHECK(p.e < 1e-15);
    CHECK(encloses(p, mpq_class(604233, 1000000)));
    CHECK(eb_from_decimal("1").e == doctest::Approx(0.0));
    CHECK_THROWS_AS(eb_from_decimal("zap"), std::invalid_argument);
}

TEST_CASE("certified signs") {
    CHECK(certified_sign({-1.0, 0.1}) == CertifiedSign::Negative);
    CHECK(certified_sign({1.0, 0.1}) == CertifiedSign::Positive);
    CHECK(certified_sign({1e-17, 1e-16}) == CertifiedSign::Inconclusive);
    CHECK(certified_sign({0.0, 0.0}) == CertifiedSign::Inconclusive);
}

TEST_CASE("polynomial compilation is exact for small coefficients") {
    CompiledPoly small = compile_poly(IntPoly::from_coeffs({1, -2, 3}));
    CHECK(small.ce.empty());
    ErrBounded v = eval_poly(small, eb_exact(0.5));
    CHECK(encloses(v, mpq_class(1) - 1 + mpq_class(3, 4)));

    IntPoly big = IntPoly::monomial(mpz_class("9007199254740993"), 0);  // 2^53 + 1
    CompiledPoly cb = compile_poly(big);
    REQUIRE(!cb.ce.empty());
    CHECK(cb.ce[0] >= 1.0);
    CHECK(encloses(eval_poly(cb, eb_exact(1.0)), mpq_class("9007199254740993")));
}

TEST_CASE("matrix evaluation encloses the exact rationals") {
    CertifiedPipeline pipe(1);
    mpq_class q(3, 10);
    std::vector<ErrBounded> m = pipe.matrix_at(eb_exact(0.3));
    TransitionMatrix exact = transition_matrix(1);
    for (int l = 0; l < 2; ++l)
        for (int c = 0; c < 2; ++c)
            CHECK(encloses(m[l * 2 + c], exact.entries[l][c].eval(q)));
}

TEST_CASE("stationary solve self-audits") {
    for (int i : {1, 2, 3, 4}) {
        CertifiedPipeline pipe(i);
        ErrBounded q = eb_exact(0.4);
        std::vector<ErrBounded> pi = pipe.stationary(q);
        ErrBounded total = eb_exact(0.0);
        for (const ErrBounded& x : pi) {
            CHECK(x.v > -x.e);  // nonnegative within certification
            total = eb_add(total, x);
        }
        CHECK(std::fabs(total.v - 1.0) <= total.e + 1e-15);
        for (const ErrBounded& r : pipe.residual(q, pi))
            CHECK(std::fabs(r.v) <= r.e);
    }
}

TEST_CASE("stationary measure encloses the symbolic solution") {
    CertifiedPipeline pipe(2);
    mpq_class q(37, 100);
    std::vector<ErrBounded> pi = pipe.stationary(eb_exact(0.37));
    auto sym = symbolic_stationary(2);
    for (int l = 0; l < 4; ++l) CHECK(encloses(pi[l], sym[l].eval(q)));
}

TEST_CASE("mean drift encloses the exact value at random points") {
    Xoshiro256pp rng(20260823);
    for (int i : {1, 2}) {
        CertifiedPipeline pipe(i);
        RationalFn exact = symbolic_mean_drift(i);
        for (int t = 0; t < 200; ++t) {
            double qd = 0.005 + 0.989 * rng.uniform();
            mpq_class qq(qd);  // double -> exact rational
            ErrBounded m = pipe.mean_drift(eb_exact(qd));
            CHECK(encloses(m, exact.eval(qq)));
            CHECK(m.e < 1e-10);  // grows toward q = 1 where 1 - q^2 shrinks
        }
    }
}

TEST_CASE("drift near the root matches the published decimal table") {
    CertifiedPipeline pipe(1);
    ErrBounded below = mean_drift_at_decimal_p(pipe, "0.604233");
    CHECK(certified_sign(below) == CertifiedSign::Negative);
    CHECK(below.v == doctest::Approx(-1.40e-6).epsilon(0.05));
    CHECK(below.e < 1e-13);
    ErrBounded above = mean_drift_at_decimal_p(pipe, "0.604234");
    CHECK(certified_sign(above) == CertifiedSign::Positive);
}

TEST_CASE("uncertifiable inputs are refused, not absorbed") {
    CertifiedPipeline pipe(2);
    CHECK_THROWS_AS(pipe.stationary(ErrBounded{0.4, 0.4}), CertificationError);
}
