#include "opcrit/certified.hpp"

#include <cstdlib>
#include <stdexcept>

namespace opcrit {

ErrBounded eb_from_decimal(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw std::invalid_argument("not a decimal number: " + s);
    return {v, detail::seal(detail::kU * std::fabs(v))};
}

CompiledPoly compile_poly(const IntPoly& p) {
    CompiledPoly out;
    out.c.reserve(p.coeffs().size());
    bool any_err = false;
    std::vector<double> errs;
    errs.reserve(p.coeffs().size());
    for (const mpz_class& z : p.coeffs()) {
        double d = z.get_d();            // truncates; exact iff z fits 53 bits
        out.c.push_back(d);
        mpz_class back(d);
        mpz_class gap = z - back;
        double ge = 0.0;
        if (gap != 0) {
            any_err = true;
            ge = detail::seal(std::fabs(gap.get_d()) * (1.0 + 4 * detail::kU));
        }
        errs.push_back(ge);
    }
    if (any_err) out.ce = std::move(errs);
    return out;
}

ErrBounded eval_poly(const CompiledPoly& p, const ErrBounded& q) {
    if (p.c.empty()) return eb_exact(0.0);
    const bool ce = !p.ce.empty();
    size_t k = p.c.size() - 1;
    ErrBounded acc{p.c[k], ce ? p.ce[k] : 0.0};
    while (k-- > 0)
        acc = eb_add(eb_mul(acc, q), ErrBounded{p.c[k], ce ? p.ce[k] : 0.0});
    return acc;
}

CertifiedPipeline::CertifiedPipeline(int order) : order_(order) {
    const size_t n = states();
    entry_.resize(n * n);
    drift_num_.resize(n);
    for_each_row(order, [&](uint64_t l, TransitionRow&& row) {
        for (size_t m = 0; m < n; ++m) entry_[l * n + m] = compile_poly(row.prob[m]);
        drift_num_[l] = compile_poly(row.drift_num);
    });
    den_ = compile_poly(IntPoly::from_coeffs({1, 0, -1}));
}

std::vector<ErrBounded> CertifiedPipeline::matrix_at(const ErrBounded& q) const {
    const size_t n = states();
    std::vector<ErrBounded> e(n * n);
    for (size_t idx = 0; idx < n * n; ++idx) e[idx] = eval_poly(entry_[idx], q);
    return e;
}

std::vector<ErrBounded> CertifiedPipeline::stationary(const ErrBounded& q) const {
    const size_t n = states();
    std::vector<ErrBounded> E = matrix_at(q);

    // Balance equations (Q^T - I) with the one for the state of smallest
    // diagonal entry replaced by the normalization row sum(pi) = 1.
    size_t rstar = 0;
    double best = -1.0;
    for (size_t m = 0; m < n; ++m) {
        double dom = 1.0 - E[m * n + m].v;
        if (dom > best) {
            best = dom;
            rstar = m;
        }
    }

    std::vector<ErrBounded> a(n * (n + 1));
    auto at = [&](size_t r, size_t c) -> ErrBounded& { return a[r * (n + 1) + c]; };
    for (size_t r = 0; r < n; ++r) {
        if (r == rstar) {
            for (size_t c = 0; c < n; ++c) at(r, c) = eb_exact(1.0);
            at(r, n) = eb_exact(1.0);
        } else {
            for (size_t c = 0; c < n; ++c) {
                ErrBounded x = E[c * n + r];
                if (c == r) x = eb_sub(x, eb_exact(1.0));
                at(r, c) = x;
            }
            at(r, n) = eb_exact(0.0);
        }
    }

    // Gaussian elimination, partial pivoting by |value|; a pivot whose error
    // bound reaches half its magnitude aborts the solve instead of guessing.
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        double mag = std::fabs(at(col, col).v);
        for (size_t r = col + 1; r < n; ++r) {
            double m2 = std::fabs(at(r, col).v);
            if (m2 > mag) {
                mag = m2;
                piv = r;
            }
        }
        const ErrBounded& pv = at(piv, col);
        if (!(std::isfinite(pv.v) && pv.e < 0.5 * std::fabs(pv.v)))
            throw CertificationError("elimination pivot not certified nonzero");
        if (piv != col)
            for (size_t c = 0; c <= n; ++c) std::swap(at(col, c), at(piv, c));
        for (size_t r = col + 1; r < n; ++r) {
            if (at(r, col).v == 0.0 && at(r, col).e == 0.0) continue;
            ErrBounded f = eb_div(at(r, col), at(col, col));
            at(r, col) = eb_exact(0.0);
            for (size_t c = col + 1; c <= n; ++c)
                at(r, c) = eb_sub(at(r, c), eb_mul(f, at(col, c)));
        }
    }

    std::vector<ErrBounded> pi(n);
    for (size_t r = n; r-- > 0;) {
        ErrBounded s = at(r, n);
        for (size_t c = r + 1; c < n; ++c) s = eb_sub(s, eb_mul(at(r, c), pi[c]));
        pi[r] = eb_div(s, at(r, r));
    }
    return pi;
}

ErrBounded CertifiedPipeline::mean_drift(const ErrBounded& q) const {
    const size_t n = states();
    std::vector<ErrBounded> pi = stationary(q);
    ErrBounded s = eb_exact(0.0);
    for (size_t l = 0; l < n; ++l)
        s = eb_add(s, eb_mul(pi[l], eval_poly(drift_num_[l], q)));
    return eb_div(s, eval_poly(den_, q));
}

std::vector<ErrBounded> CertifiedPipeline::residual(const ErrBounded& q,
                                                    const std::vector<ErrBounded>& pi) const {
    const size_t n = states();
    std::vector<ErrBounded> E = matrix_at(q);
    std::vector<ErrBounded> r(n);
    for (size_t m = 0; m < n; ++m) {
        ErrBounded s = eb_neg(pi[m]);
        for (size_t l = 0; l < n; ++l) s = eb_add(s, eb_mul(pi[l], E[l * n + m]));
        r[m] = s;
    }
    return r;
}

ErrBounded mean_drift_at_decimal_p(const CertifiedPipeline& pipe, const std::string& p_decimal) {
    ErrBounded p = eb_from_decimal(p_decimal);
    return pipe.mean_drift(eb_one_minus(p));
}

} // namespace opcrit
