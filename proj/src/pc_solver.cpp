#include "opcrit/pc_solver.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace opcrit {

int grid_step_to_decimals(double grid_step) {
    for (int d = 1; d <= 12; ++d) {
        double step = std::pow(10.0, -d);
        if (std::fabs(grid_step - step) <= step * 1e-6) return d;
    }
    throw std::invalid_argument("grid step must be a power of ten between 1e-1 and 1e-12");
}

std::string decimal_string(long long num, int decimals) {
    std::string s = std::to_string(num);
    if (decimals == 0) return s;
    if (static_cast<int>(s.size()) <= decimals)
        s.insert(0, std::string(decimals + 1 - s.size(), '0'));
    s.insert(s.size() - decimals, ".");
    return s;
}

Enclosure bracket_root(const CertifiedPipeline& pipe, int grid_decimals, int max_refine) {
    if (grid_decimals < 1 || grid_decimals > 12)
        throw std::invalid_argument("grid decimals out of range");

    long long lo_num = 0, hi_num = 1;
    std::optional<ErrBounded> lo_ev, hi_ev;
    std::string lo_dec = "0", hi_dec = "1";
    bool stalled = false;
    int d = 0;

    for (d = 1; d <= grid_decimals && !stalled; ++d) {
        lo_num *= 10;
        hi_num *= 10;
        for (long long k = lo_num + 1; k < hi_num; ++k) {
            std::string p_str = decimal_string(k, d);
            ErrBounded m = mean_drift_at_decimal_p(pipe, p_str);
            CertifiedSign s = certified_sign(m);
            if (s == CertifiedSign::Negative) {
                lo_num = k;
                lo_ev = m;
                lo_dec = p_str;
            } else if (s == CertifiedSign::Positive) {
                hi_num = k;
                hi_ev = m;
                hi_dec = p_str;
                break;
            } else {
                stalled = true;   // keep the last certified bracket
                break;
            }
        }
    }

    if (!lo_ev)
        throw std::runtime_error("no certified negative drift found on the grid");
    if (!hi_ev) {
        // Only reachable if the root scan ran off the top of the grid; the
        // right endpoint is then p = 1 (drift 1 at q = 0).
        hi_dec = decimal_string(hi_num, d - 1);
        ErrBounded m = mean_drift_at_decimal_p(pipe, hi_dec);
        if (certified_sign(m) != CertifiedSign::Positive)
            throw std::runtime_error("no certified positive drift found on the grid");
        hi_ev = m;
    }

    Enclosure enc;
    enc.order = pipe.order();
    enc.p_lo = eb_from_decimal(lo_dec).v;
    enc.p_hi = eb_from_decimal(hi_dec).v;
    enc.p_lo_dec = lo_dec;
    enc.p_hi_dec = hi_dec;
    enc.m_lo = *lo_ev;
    enc.m_hi = *hi_ev;

    if (stalled) return enc;
    for (int r = 0; r < max_refine; ++r) {
        double mid = enc.p_lo + (enc.p_hi - enc.p_lo) / 2;
        if (!(mid > enc.p_lo && mid < enc.p_hi)) break;
        ErrBounded m = pipe.mean_drift(eb_one_minus(eb_exact(mid)));
        CertifiedSign s = certified_sign(m);
        if (s == CertifiedSign::Negative) {
            enc.p_lo = mid;
            enc.p_lo_dec.clear();
            enc.m_lo = m;
        } else if (s == CertifiedSign::Positive) {
            enc.p_hi = mid;
            enc.p_hi_dec.clear();
            enc.m_hi = m;
        } else {
            break;
        }
    }
    return enc;
}

Enclosure bracket_root(int order, double grid_step, int max_refine) {
    CertifiedPipeline pipe(order);
    return bracket_root(pipe, grid_step_to_decimals(grid_step), max_refine);
}

BoundTable convergence_table(int max_order, double grid_step) {
    int d = grid_step_to_decimals(grid_step);
    BoundTable table;
    for (int i = 0; i <= max_order; ++i) {
        int d_eff = i >= 9 ? std::min(d, 5) : d;
        CertifiedPipeline pipe(i);
        table.rows.push_back(bracket_root(pipe, d_eff, 0));
        if (table.rows.back().p_lo > table.certified_lower_bound)
            table.certified_lower_bound = table.rows.back().p_lo;
    }
    return table;
}

namespace {

std::string fmt_p(double v, const std::string& dec) {
    if (!dec.empty()) return dec;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_e(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

const Enclosure& best_row(const BoundTable& table) {
    const Enclosure* best = &table.rows.front();
    for (const Enclosure& r : table.rows)
        if (r.p_lo > best->p_lo) best = &r;
    return *best;
}

} // namespace

void write_bound_csv(std::ostream& out, const BoundTable& table) {
    out << "i,p_lo,p_hi,M_lo,dM_lo,M_hi,dM_hi\n";
    for (const Enclosure& r : table.rows)
        out << r.order << ',' << fmt_p(r.p_lo, r.p_lo_dec) << ',' << fmt_p(r.p_hi, r.p_hi_dec)
            << ',' << fmt_e(r.m_lo.v) << ',' << fmt_e(r.m_lo.e) << ',' << fmt_e(r.m_hi.v) << ','
            << fmt_e(r.m_hi.e) << '\n';
}

void write_bound_json(std::ostream& out, const BoundTable& table) {
    out << "{\n  \"rows\": [\n";
    for (size_t k = 0; k < table.rows.size(); ++k) {
        const Enclosure& r = table.rows[k];
        out << "    {\"order\": " << r.order << ", \"p_lo\": \"" << fmt_p(r.p_lo, r.p_lo_dec)
            << "\", \"p_hi\": \"" << fmt_p(r.p_hi, r.p_hi_dec) << "\", \"M_lo\": \""
            << fmt_e(r.m_lo.v) << "\", \"dM_lo\": \"" << fmt_e(r.m_lo.e) << "\", \"M_hi\": \""
            << fmt_e(r.m_hi.v) << "\", \"dM_hi\": \"" << fmt_e(r.m_hi.e) << "\"}"
            << (k + 1 < table.rows.size() ? ",\n" : "\n");
    }
    const Enclosure& best = best_row(table);
    out << "  ],\n  \"certified_lower_bound\": \"" << fmt_p(best.p_lo, best.p_lo_dec)
        << "\"\n}\n";
}

void write_bound_pretty(std::ostream& out, const BoundTable& table) {
    out << "  i  certified enclosure of p_c(i)            M at p_lo (+/- bound)\n";
    for (const Enclosure& r : table.rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%3d  %-12s <= p_c(%d) <= %-12s   %+.3e (+/- %.1e)\n",
                      r.order, fmt_p(r.p_lo, r.p_lo_dec).c_str(), r.order,
                      fmt_p(r.p_hi, r.p_hi_dec).c_str(), r.m_lo.v, r.m_lo.e);
        out << line;
    }
    const Enclosure& best = best_row(table);
    out << "certified: p_c >= " << fmt_p(best.p_lo, best.p_lo_dec) << "\n";
}

} // namespace opcrit
