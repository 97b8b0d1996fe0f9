#pragma once
#include <cstdint>
#include <stdexcept>

#include "opcrit/rng.hpp"

namespace opcrit {

// The oriented lattice lives on sites (n, m) with n >= 0 and n + m even.
// Every site owns two outgoing bonds: Left -> (n+1, m-1), Right -> (n+1, m+1).
enum class BondDir : uint32_t { Left = 0, Right = 1 };

struct BondCoord {
    int64_t n = 0;   // time level
    int64_t m = 0;   // space position
    BondDir dir = BondDir::Right;
};

inline bool valid_site(int64_t n, int64_t m) {
    return n >= 0 && (((n + m) & 1) == 0);
}

// Deterministic uniform random field on the bonds. Each coordinate gets its
// own uniform via a keyed counter-style hash of (seed, n, m, dir): random
// access by coordinate, no sequential state, so coupled replays at different
// p / order / initial condition consult the exact same numbers.
class UniformBondField {
public:
    explicit UniformBondField(uint64_t seed) : seed_(seed) {}

    uint64_t seed() const { return seed_; }

    double uniform_at(const BondCoord& c) const {
        check(c);
        return u64_to_unit(keyed_hash(seed_,
                                      static_cast<uint64_t>(c.n),
                                      static_cast<uint64_t>(c.m),
                                      static_cast<uint64_t>(c.dir)));
    }

    // Bond open at parameter p iff its uniform is <= p. The uniform lies in
    // [0,1): p=1 always opens; p=0 opens only on the measure-zero event u=0.
    bool open_at(const BondCoord& c, double p) const {
        return uniform_at(c) <= p;
    }

private:
    static void check(const BondCoord& c) {
        if (!valid_site(c.n, c.m))
            throw std::invalid_argument("bond coordinate off the even sublattice");
    }

    uint64_t seed_;
};

// Field view with translated coordinates: open_at(n, m) consults the base
// field at (n + dn, m + dm). Lets two runs occupy literally the same bonds
// despite different absolute positions (used by homogeneity/Markov checks).
class ShiftedField {
public:
    ShiftedField(const UniformBondField& base, int64_t dn, int64_t dm)
        : base_(base), dn_(dn), dm_(dm) {}

    double uniform_at(const BondCoord& c) const {
        return base_.uniform_at(BondCoord{c.n + dn_, c.m + dm_, c.dir});
    }
    bool open_at(const BondCoord& c, double p) const {
        return uniform_at(c) <= p;
    }

private:
    const UniformBondField& base_;
    int64_t dn_, dm_;
};

template <class F>
concept BondFieldLike = requires(const F& f, const BondCoord& c, double p) {
    { f.open_at(c, p) } -> std::convertible_to<bool>;
};

} // namespace opcrit
