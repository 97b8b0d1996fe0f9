#pragma once
#include <cstdint>
#include <vector>

#include "opcrit/err_bounded.hpp"
#include "opcrit/imc_exact.hpp"
#include "opcrit/poly.hpp"

namespace opcrit {

// Integer polynomial compiled to double coefficients. Conversion errors are
// tracked exactly; ce stays empty when every coefficient is representable
// (true for all orders this project evaluates).
struct CompiledPoly {
    std::vector<double> c;
    std::vector<double> ce;   // per-coefficient |exact - double|, empty = all zero
};

CompiledPoly compile_poly(const IntPoly& p);

// Horner evaluation with full error accounting.
ErrBounded eval_poly(const CompiledPoly& p, const ErrBounded& q);

// Transition matrix and per-state drift numerators of one order, compiled for
// repeated numeric evaluation. Construction streams the exact rows (checking
// row sums and tail divisibility) and keeps only the double form.
class CertifiedPipeline {
public:
    explicit CertifiedPipeline(int order);

    int order() const { return order_; }
    size_t states() const { return size_t(1) << order_; }

    // Transition probabilities evaluated at q, row-major source x target.
    std::vector<ErrBounded> matrix_at(const ErrBounded& q) const;

    // Stationary measure: solves pi Q = pi, sum pi = 1 by Gaussian elimination
    // with partial pivoting; every pivot must be certified nonzero (its error
    // bound below half its magnitude) or CertificationError is thrown. The
    // bounds are valid against the exact stationary measure: with certified
    // pivots the same elimination sequence in exact arithmetic reproduces the
    // exact solution, and per-operation propagation bounds the distance.
    std::vector<ErrBounded> stationary(const ErrBounded& q) const;

    // Mean drift M(q) = sum_l pi_l * drift_l(q).
    ErrBounded mean_drift(const ErrBounded& q) const;

    // Residual pi Q - pi of a computed measure, error-tracked; used by the
    // self-audit (|value| must stay within the bound at every entry).
    std::vector<ErrBounded> residual(const ErrBounded& q,
                                     const std::vector<ErrBounded>& pi) const;

    const CompiledPoly& entry(size_t l, size_t m) const { return entry_[l * states() + m]; }
    const CompiledPoly& drift_num(size_t l) const { return drift_num_[l]; }

private:
    int order_;
    std::vector<CompiledPoly> entry_;       // 2^i * 2^i
    std::vector<CompiledPoly> drift_num_;   // 2^i, shared denominator 1 - q^2
    CompiledPoly den_;                      // 1 - q^2
};

// Convenience: mean drift at the probability written as a decimal string
// (q = 1 - p picked up exactly for p >= 0.5).
ErrBounded mean_drift_at_decimal_p(const CertifiedPipeline& pipe, const std::string& p_decimal);

} // namespace opcrit
