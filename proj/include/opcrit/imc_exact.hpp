#pragma once
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "opcrit/poly.hpp"

namespace opcrit {

// ---------------------------------------------------------------------------
// Exact one-step law of the induced edge/window chain of order i.
//
// State: the right edge is occupied by definition; the window records the
// occupancy b_1..b_i of the sites at offsets 2,4,..,2i left of the edge;
// every site more than 2i left of the edge is occupied (forced). The label is
// l = sum_j 2^(i-j) b_j, so b_1 (nearest the edge) is the most significant bit.
//
// One step: candidate new-edge sites sit at x_t = edge + 1 - 2t, t = 0,1,2,...
// Site x_t is fed by the Right bond of the site at offset t and the Left bond
// of the site at offset t-1; distinct candidates use disjoint bond pairs, so
// their occupancies are independent with success probability theta_t:
//   both feeders occupied -> 1 - q^2, exactly one -> 1 - q, none -> 0.
// The new edge lands on the first occupied candidate; the new window bits are
// the occupancies of candidates t = k+1..k+i. For t >= i+2 every theta is
// 1 - q^2, which makes the deep jumps a geometric progression of ratio q^2.
// ---------------------------------------------------------------------------

inline int max_exact_order() { return 12; }

// Bit j (1-indexed from the edge) of a window label.
inline int bit_of_label(uint64_t l, int i, int j) {
    return static_cast<int>((l >> (i - j)) & 1u);
}
uint64_t bits_to_label(const std::vector<int>& bits);
std::vector<int> label_to_bits(uint64_t l, int i);

// Relative occupancy at offset 2j left of the edge (j < 0: right of edge).
int rel_occupancy(int i, uint64_t l, long j);

// Probability that a site fed by occupancies (a, b) becomes occupied.
IntPoly new_site_poly(int a, int b);

// theta_t for candidate t given the current window.
IntPoly theta_poly(int i, uint64_t l, long t);

struct JumpLaw {
    int order = 0;
    uint64_t source = 0;
    // head[k][m] = P(jump = 1-2k, new label m) for 0 <= k <= order+1.
    std::vector<std::vector<IntPoly>> head;
    // For k >= order+2: P(k, m) = tail_coeff * (q^2)^(k-order-2) * (1-q^2) * tail_window[m].
    IntPoly tail_coeff;                  // prod_{t=0}^{i+1} (1 - theta_t)
    std::vector<IntPoly> tail_window;    // prod_j (bit_j ? 1-q^2 : q^2)

    // P(jump = 1-2k, new label m) for any k >= 0.
    IntPoly prob(long k, uint64_t m) const;
    // P(jump <= 1-2k, new label m) summed in closed form (k >= order+2).
    IntPoly tail_sum_from(long k, uint64_t m) const;
};

JumpLaw one_step_law(int i, uint64_t l);

struct TransitionRow {
    std::vector<IntPoly> prob;   // row of the transition matrix, size 2^i
    IntPoly drift_num;           // per-state mean jump = drift_num / (1 - q^2)
};

// Build one row exactly; verifies the row sums to 1 and that the geometric
// tail divides out to a polynomial (throws std::runtime_error otherwise).
TransitionRow transition_row(int i, uint64_t l);

// Stream rows l = 0..2^i-1 through the callback without keeping them all.
void for_each_row(int i, const std::function<void(uint64_t, TransitionRow&&)>& fn);

struct TransitionMatrix {
    int order = 0;
    std::vector<std::vector<IntPoly>> entries;
};

struct DriftVector {
    int order = 0;
    std::vector<RationalFn> entries;
};

TransitionMatrix transition_matrix(int i);
DriftVector drift_vector(int i);

// Exact stationary measure and mean drift via rational-function elimination.
// Feasible for small orders only; callers beyond order 2 get an error.
std::vector<RationalFn> symbolic_stationary(int i);
RationalFn symbolic_mean_drift(int i);

// Dump formats: JSON (coefficients as decimal strings, ascending powers) and
// a human-readable pretty form. Both stream row by row.
void dump_json(std::ostream& out, int i);
void dump_pretty(std::ostream& out, int i);

} // namespace opcrit
