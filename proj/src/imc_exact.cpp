#include "opcrit/imc_exact.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace opcrit {

namespace {

void check_order(int i) {
    if (i < 0 || i > max_exact_order())
        throw std::invalid_argument("order out of range for the exact pipeline");
}

void check_label(int i, uint64_t l) {
    check_order(i);
    if (l >= (uint64_t(1) << i)) throw std::invalid_argument("window label out of range");
}

const IntPoly& poly_one() {
    static const IntPoly one(1);
    return one;
}

IntPoly one_minus_q2() { return IntPoly::from_coeffs({1, 0, -1}); }
IntPoly q2() { return IntPoly::from_coeffs({0, 0, 1}); }

} // namespace

uint64_t bits_to_label(const std::vector<int>& bits) {
    uint64_t l = 0;
    for (int b : bits) l = (l << 1) | static_cast<uint64_t>(b & 1);
    return l;
}

std::vector<int> label_to_bits(uint64_t l, int i) {
    check_label(i, l);
    std::vector<int> bits(i);
    for (int j = 1; j <= i; ++j) bits[j - 1] = bit_of_label(l, i, j);
    return bits;
}

int rel_occupancy(int i, uint64_t l, long j) {
    if (j < 0) return 0;            // right of the edge: empty
    if (j == 0) return 1;           // the edge itself
    if (j <= i) return bit_of_label(l, i, static_cast<int>(j));
    return 1;                       // forced region
}

IntPoly new_site_poly(int a, int b) {
    if (a && b) return IntPoly::from_coeffs({1, 0, -1});   // 1 - q^2
    if (a || b) return IntPoly::from_coeffs({1, -1});      // 1 - q
    return IntPoly();
}

IntPoly theta_poly(int i, uint64_t l, long t) {
    check_label(i, l);
    return new_site_poly(rel_occupancy(i, l, t), rel_occupancy(i, l, t - 1));
}

namespace {

// Window product tree: given the root factor, extend over candidates
// base+1..base+i. Leaf index equals the new window label (bit for candidate
// base+1 is the most significant).
std::vector<IntPoly> window_products(int i, uint64_t l, long base, const IntPoly& root,
                                     bool base_in_forced_tail) {
    std::vector<IntPoly> w{root};
    w.reserve(size_t(1) << i);
    for (long t = 1; t <= i; ++t) {
        IntPoly th = base_in_forced_tail ? IntPoly::from_coeffs({1, 0, -1})
                                         : theta_poly(i, l, base + t);
        IntPoly om = poly_one() - th;
        std::vector<IntPoly> next(w.size() * 2);
        for (size_t idx = 0; idx < w.size(); ++idx) {
            next[2 * idx] = w[idx] * om;
            next[2 * idx + 1] = w[idx] * th;
        }
        w = std::move(next);
    }
    return w;
}

} // namespace

JumpLaw one_step_law(int i, uint64_t l) {
    check_label(i, l);
    JumpLaw law;
    law.order = i;
    law.source = l;
    law.head.resize(i + 2);

    IntPoly prefix = poly_one();                 // prod_{t<k} (1 - theta_t)
    for (long k = 0; k <= i + 1; ++k) {
        IntPoly th = theta_poly(i, l, k);
        law.head[k] = window_products(i, l, k, prefix * th, /*forced=*/false);
        prefix *= (poly_one() - th);
    }
    law.tail_coeff = prefix;                     // C = prod_{t=0}^{i+1} (1 - theta_t)
    law.tail_window = window_products(i, l, /*base irrelevant*/ 0, poly_one(), /*forced=*/true);
    return law;
}

IntPoly JumpLaw::prob(long k, uint64_t m) const {
    if (k < 0 || m >= tail_window.size()) throw std::invalid_argument("jump law index");
    if (k <= order + 1) return head[k][m];
    IntPoly p = tail_coeff * one_minus_q2() * tail_window[m];
    for (long j = 0; j < k - order - 2; ++j) p *= q2();
    return p;
}

IntPoly JumpLaw::tail_sum_from(long k, uint64_t m) const {
    if (k < order + 2) throw std::invalid_argument("tail starts at k = order + 2");
    // sum_{k' >= k} C (q^2)^(k'-order-2) (1-q^2) W(m) = C (q^2)^(k-order-2) W(m)
    IntPoly p = tail_coeff * tail_window[m];
    for (long j = 0; j < k - order - 2; ++j) p *= q2();
    return p;
}

TransitionRow transition_row(int i, uint64_t l) {
    check_label(i, l);
    const uint64_t n = uint64_t(1) << i;
    TransitionRow row;
    row.prob.assign(n, IntPoly());

    IntPoly head_drift;                          // sum_k (1-2k) * prefix_k * theta_k
    IntPoly prefix = poly_one();
    for (long k = 0; k <= i + 1; ++k) {
        IntPoly th = theta_poly(i, l, k);
        IntPoly root = prefix * th;
        head_drift += IntPoly(1 - 2 * k) * root;
        std::vector<IntPoly> w = window_products(i, l, k, root, false);
        for (uint64_t m = 0; m < n; ++m) row.prob[m] += w[m];
        prefix *= (poly_one() - th);
    }

    // Deep-jump block: summing the geometric tail over k multiplies the
    // k = i+2 term by 1/(1-q^2); the division must be exact.
    const IntPoly om2 = one_minus_q2();
    IntPoly tail_total = IntPoly::div_exact(prefix * om2, om2);   // = C, checked
    std::vector<IntPoly> wtail = window_products(i, l, 0, tail_total, true);
    for (uint64_t m = 0; m < n; ++m) row.prob[m] += wtail[m];

    IntPoly row_sum;
    for (uint64_t m = 0; m < n; ++m) row_sum += row.prob[m];
    if (!(row_sum == poly_one()))
        throw std::runtime_error("transition row does not sum to 1");

    // Tail drift: sum_{k>=i+2} (1-2k) C (q^2)^(k-i-2) (1-q^2), summed over all
    // window outcomes, equals -C (2i+3) - 2 C q^2 / (1-q^2). With the head
    // part this gives the per-state mean jump over (1-q^2).
    row.drift_num = head_drift * om2 - IntPoly(2 * i + 3) * prefix * om2
                    - IntPoly(2) * prefix * q2();
    return row;
}

void for_each_row(int i, const std::function<void(uint64_t, TransitionRow&&)>& fn) {
    check_order(i);
    const uint64_t n = uint64_t(1) << i;
    for (uint64_t l = 0; l < n; ++l) fn(l, transition_row(i, l));
}

TransitionMatrix transition_matrix(int i) {
    check_order(i);
    TransitionMatrix tm;
    tm.order = i;
    tm.entries.resize(size_t(1) << i);
    for_each_row(i, [&](uint64_t l, TransitionRow&& row) {
        tm.entries[l] = std::move(row.prob);
    });
    return tm;
}

DriftVector drift_vector(int i) {
    check_order(i);
    DriftVector dv;
    dv.order = i;
    dv.entries.resize(size_t(1) << i);
    const IntPoly om2 = one_minus_q2();
    for (uint64_t l = 0; l < (uint64_t(1) << i); ++l)
        dv.entries[l] = RationalFn::make(transition_row(i, l).drift_num, om2);
    return dv;
}

std::vector<RationalFn> symbolic_stationary(int i) {
    if (i < 0 || i > 2)
        throw std::invalid_argument("exact rational stationary solve supports orders 0..2");
    const size_t n = size_t(1) << i;
    TransitionMatrix tm = transition_matrix(i);

    // Solve pi Q = pi with sum(pi) = 1: rows of A are (Q^T - I) with the last
    // balance equation replaced by the normalization row.
    std::vector<std::vector<RationalFn>> a(n, std::vector<RationalFn>(n + 1));
    for (size_t r = 0; r + 1 < n; ++r)
        for (size_t c = 0; c < n; ++c) {
            IntPoly v = tm.entries[c][r];
            if (r == c) v -= poly_one();
            a[r][c] = RationalFn::make(v, IntPoly(1));
        }
    for (size_t c = 0; c < n; ++c) a[n - 1][c] = RationalFn::make(IntPoly(1), IntPoly(1));
    a[n - 1][n] = RationalFn::make(IntPoly(1), IntPoly(1));

    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw std::runtime_error("singular stationary system");
        std::swap(a[col], a[piv]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            RationalFn f = a[r][col] / a[col][col];
            for (size_t c = col; c <= n; ++c)
                a[r][c] = a[r][c] - f * a[col][c];
        }
    }
    std::vector<RationalFn> pi(n);
    for (size_t r = 0; r < n; ++r) pi[r] = a[r][n] / a[r][r];
    return pi;
}

RationalFn symbolic_mean_drift(int i) {
    std::vector<RationalFn> pi = symbolic_stationary(i);
    DriftVector dv = drift_vector(i);
    RationalFn m;
    for (size_t l = 0; l < pi.size(); ++l) m = m + pi[l] * dv.entries[l];
    return m;
}

namespace {

void json_poly(std::ostream& out, const IntPoly& p) {
    out << '[';
    if (p.is_zero()) {
        out << "\"0\"";
    } else {
        for (size_t k = 0; k < p.coeffs().size(); ++k) {
            if (k) out << ',';
            out << '"' << p.coeffs()[k].get_str() << '"';
        }
    }
    out << ']';
}

} // namespace

void dump_json(std::ostream& out, int i) {
    check_order(i);
    const uint64_t n = uint64_t(1) << i;
    out << "{\n  \"order\": " << i << ",\n  \"variable\": \"q\",\n"
        << "  \"coeff_encoding\": \"decimal strings, ascending powers of q\",\n"
        << "  \"matrix\": [\n";
    std::vector<IntPoly> drift_nums(n);
    for (uint64_t l = 0; l < n; ++l) {
        TransitionRow row = transition_row(i, l);
        drift_nums[l] = std::move(row.drift_num);
        out << "    [";
        for (uint64_t m = 0; m < n; ++m) {
            if (m) out << ", ";
            json_poly(out, row.prob[m]);
        }
        out << (l + 1 < n ? "],\n" : "]\n");
    }
    out << "  ],\n  \"drift\": [\n";
    const IntPoly om2 = one_minus_q2();
    for (uint64_t l = 0; l < n; ++l) {
        RationalFn m = RationalFn::make(drift_nums[l], om2);
        out << "    {\"num\": ";
        json_poly(out, m.num());
        out << ", \"den\": ";
        json_poly(out, m.den());
        out << (l + 1 < n ? "},\n" : "}\n");
    }
    out << "  ]";
    if (i <= 2) {
        RationalFn m = symbolic_mean_drift(i);
        out << ",\n  \"mean_drift\": {\"num\": ";
        json_poly(out, m.num());
        out << ", \"den\": ";
        json_poly(out, m.den());
        out << "}";
    }
    out << "\n}\n";
}

void dump_pretty(std::ostream& out, int i) {
    check_order(i);
    const uint64_t n = uint64_t(1) << i;
    out << "transition matrix, order " << i << " (" << n << " states):\n";
    std::vector<IntPoly> drift_nums(n);
    for (uint64_t l = 0; l < n; ++l) {
        TransitionRow row = transition_row(i, l);
        drift_nums[l] = std::move(row.drift_num);
        out << "  [ ";
        for (uint64_t m = 0; m < n; ++m) {
            if (m) out << " , ";
            out << row.prob[m].pretty();
        }
        out << " ]\n";
    }
    out << "per-state drift:\n";
    const IntPoly om2 = one_minus_q2();
    for (uint64_t l = 0; l < n; ++l)
        out << "  M_" << l << " = " << RationalFn::make(drift_nums[l], om2).pretty() << "\n";
    if (i <= 2)
        out << "mean drift:\n  M = " << symbolic_mean_drift(i).pretty() << "\n";
}

} // namespace opcrit
