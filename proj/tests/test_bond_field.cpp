#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "opcrit/bond_field.hpp"

using namespace opcrit;

TEST_CASE("sublattice validity") {
    CHECK(valid_site(0, 0));
    CHECK(valid_site(1, -1));
    CHECK(valid_site(3, 7));
    CHECK_FALSE(valid_site(1, 0));
    CHECK_FALSE(valid_site(-1, 1));  // negative time is off the lattice
    UniformBondField f(1);
    CHECK_THROWS_AS((void)f.uniform_at({1, 0, BondDir::Left}), std::invalid_argument);
}

TEST_CASE("uniforms are deterministic and seed-sensitive") {
    UniformBondField a(42), b(42), c(43);
    BondCoord k{5, -3, BondDir::Right};
    CHECK(a.uniform_at(k) == b.uniform_at(k));
    CHECK(a.uniform_at(k) != c.uniform_at(k));
    // direction matters
    CHECK(a.uniform_at({5, -3, BondDir::Left}) != a.uniform_at(k));
    double u = a.uniform_at(k);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}

TEST_CASE("open_at is monotone in p and matches the uniform") {
    UniformBondField f(7);
    for (long long n = 0; n < 50; ++n)
        for (long long m = -6; m <= 6; m += 2) {
            BondCoord k{n, (n % 2 == 0) ? m : m + 1, BondDir::Left};
            double u = f.uniform_at(k);
            CHECK(f.open_at(k, 1.0));
            CHECK_FALSE(f.open_at(k, u / 2));
            CHECK(f.open_at(k, u) == (u <= u));
            if (f.open_at(k, 0.3)) CHECK(f.open_at(k, 0.7));
        }
}

TEST_CASE("marginals look uniform") {
    UniformBondField f(2026);
    const int N = 200000;
    double sum = 0, sumsq = 0;
    int open03 = 0;
    for (int t = 0; t < N; ++t) {
        BondCoord k{t, (t % 2 == 0) ? 2 * (t % 17) : 2 * (t % 17) + 1, BondDir::Right};
        double u = f.uniform_at(k);
        sum += u;
        sumsq += u * u;
        if (f.open_at(k, 0.3)) ++open03;
    }
    double mean = sum / N;
    CHECK(std::fabs(mean - 0.5) < 4.0 / std::sqrt(12.0 * N));
    double var = sumsq / N - mean * mean;
    CHECK(std::fabs(var - 1.0 / 12) < 0.002);
    double frac = double(open03) / N;
    CHECK(std::fabs(frac - 0.3) < 4 * std::sqrt(0.3 * 0.7 / N));
}

TEST_CASE("neighbouring bonds are uncorrelated enough") {
    UniformBondField f(99);
    const int N = 100000;
    int joint[2][2] = {};
    for (int t = 0; t < N; ++t) {
        long long m = 2 * (t % 101);
        bool a = f.open_at({t, t % 2 ? m + 1 : m, BondDir::Left}, 0.5);
        bool b = f.open_at({t, t % 2 ? m + 1 : m, BondDir::Right}, 0.5);
        ++joint[a][b];
    }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            CHECK(std::fabs(double(joint[a][b]) / N - 0.25) <
                  4 * std::sqrt(0.25 * 0.75 / N));
}

TEST_CASE("shifted field relabels coordinates") {
    UniformBondField base(11);
    ShiftedField sf(base, 3, -3);  // dn+dm even keeps the sublattice
    BondCoord k{2, 2, BondDir::Left};
    CHECK(sf.uniform_at(k) == base.uniform_at({5, -1, BondDir::Left}));
    CHECK(sf.open_at(k, 0.37) == base.open_at({5, -1, BondDir::Left}, 0.37));
    static_assert(BondFieldLike<UniformBondField>);
    static_assert(BondFieldLike<ShiftedField>);
}
