#pragma once
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "opcrit/certified.hpp"

namespace opcrit {

// Certified enclosure of the critical probability of one order: the drift is
// certified negative at p_lo and certified positive at p_hi.
struct Enclosure {
    int order = 0;
    double p_lo = 0.0, p_hi = 1.0;
    std::string p_lo_dec, p_hi_dec;   // decimal spelling when the endpoint sits on the scan grid
    ErrBounded m_lo, m_hi;            // sign evidence at the endpoints
};

// Scans the decimal grid with step 10^-grid_decimals from coarse to fine
// (refining one digit at a time, so roughly 9 drift evaluations per digit),
// then optionally bisects on representable midpoints up to max_refine times.
// Refinement stops early if a sign comes out Inconclusive; the last certified
// bracket is returned. Throws std::runtime_error if no sign change exists on
// the grid.
Enclosure bracket_root(const CertifiedPipeline& pipe, int grid_decimals, int max_refine);
Enclosure bracket_root(int order, double grid_step, int max_refine);

struct BoundTable {
    std::vector<Enclosure> rows;
    double certified_lower_bound = 0.0;   // max p_lo across rows
};

// Enclosures for orders 0..max_order. Orders >= 9 are scanned at no finer
// than 10^-5 to keep the large linear solves affordable; finer grids apply
// as requested below that.
BoundTable convergence_table(int max_order, double grid_step);

int grid_step_to_decimals(double grid_step);   // validates step in {10^-1..10^-12}
std::string decimal_string(long long num, int decimals);

void write_bound_csv(std::ostream& out, const BoundTable& table);
void write_bound_json(std::ostream& out, const BoundTable& table);
void write_bound_pretty(std::ostream& out, const BoundTable& table);

} // namespace opcrit
