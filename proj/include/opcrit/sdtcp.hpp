#pragma once
// Reference simulator for the order-i strengthened contact process: explicit
// site occupancy, coordinate-keyed bond lookups, window readout.  Definition-
// faithful and deliberately unoptimized; the fast edge walker for large i
// lives in mc_edge.
//
// A configuration stores one tracked interval of sites plus a rule for
// everything left of it:
//   Forced  - every site below the interval is occupied (the reinforced
//             process guarantees this more than 2i left of the edge),
//   Empty   - every site below is healthy (finite-support initial data),
//   Horizon - sites below are undetermined.  Used to simulate the plain
//             (infinite-order) process from the half-line initial condition,
//             which has no finite exact representation: we track a window
//             whose left frontier advances one unit per step, so results are
//             exact until the edge falls behind the frontier, which raises
//             HorizonExhausted instead of returning wrong data.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "opcrit/bond_field.hpp"

namespace opcrit {

inline constexpr int kOrderInf = -1;  // no forced reinfection (plain contact process)

enum class LeftBoundary { Empty, Forced, Horizon };

class HorizonExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InfectionConfig {
    long long time = 0;
    long long lo = 0, hi = 0;         // tracked sites lo, lo+2, ..., hi
    std::vector<std::uint8_t> cells;  // cells[(m - lo) / 2]
    LeftBoundary left = LeftBoundary::Forced;
    bool died_out = false;

    int occupancy(long long m) const;  // throws below a Horizon boundary
    long long edge() const;            // rightmost occupied site
};

struct WindowState {
    int order = 0;
    long long edge = 0;
    std::vector<std::uint8_t> bits;  // b_1..b_order, b_1 nearest the edge
    std::uint64_t label() const;
};

InfectionConfig initial_config_canonical();
InfectionConfig initial_config_from_label(int order, std::uint64_t label);
// Half-line initial condition for the infinite-order process; reserve_sites is
// how many sites left of the origin are tracked explicitly.
InfectionConfig initial_config_horizon(long long reserve_sites);

WindowState imc_readout(const InfectionConfig& cfg, int order);

struct StepStats {
    long long forced_sites = 0;  // sites reinfected by force inside the tracked band
};

// One synchronous update.  Site m is occupied at time n+1 iff a bond transmits
// from m-1 or m+1, or (finite order) m lies more than 2*order left of the new
// edge.  The new edge itself always comes from a transmitting bond; when no
// tracked site transmits and the fill is Forced, we walk left through the
// filled region consulting the real keyed bonds, so coupled runs stay
// comparable site by site.
template <BondFieldLike F>
InfectionConfig step(const InfectionConfig& cfg, const F& field, double p, int order,
                     StepStats* stats = nullptr) {
    if (order < 0 && order != kOrderInf)
        throw std::invalid_argument("order must be >= 0 or kOrderInf");
    if (cfg.died_out) throw std::runtime_error("cannot step a process that has died out");
    if (order == kOrderInf && cfg.left == LeftBoundary::Forced)
        throw std::invalid_argument(
            "infinite order needs an Empty or Horizon left boundary");

    const long long n = cfg.time;
    auto open = [&](long long m, BondDir d) { return field.open_at({n, m, d}, p); };
    auto trans = [&](long long m) {
        return (cfg.occupancy(m - 1) && open(m - 1, BondDir::Right)) ||
               (cfg.occupancy(m + 1) && open(m + 1, BondDir::Left));
    };

    const long long scan_lo = cfg.left == LeftBoundary::Horizon ? cfg.lo + 1 : cfg.lo - 1;
    const long long scan_hi = cfg.hi + 1;
    std::vector<std::uint8_t> band;
    band.reserve(static_cast<std::size_t>((scan_hi - scan_lo) / 2 + 1));
    long long new_edge = scan_lo - 2;
    for (long long m = scan_lo; m <= scan_hi; m += 2) {
        std::uint8_t b = trans(m) ? 1 : 0;
        band.push_back(b);
        if (b) new_edge = m;
    }

    if (new_edge < scan_lo) {
        if (cfg.left == LeftBoundary::Horizon)
            throw HorizonExhausted("edge fell below the tracked horizon at step " +
                                   std::to_string(n + 1));
        if (cfg.left == LeftBoundary::Empty) {
            InfectionConfig dead;
            dead.time = n + 1;
            dead.lo = scan_lo;
            dead.hi = scan_lo - 2;
            dead.left = LeftBoundary::Empty;
            dead.died_out = true;
            return dead;
        }
        long long m = scan_lo - 2;  // below here both neighbours are filled
        while (!(open(m - 1, BondDir::Right) || open(m + 1, BondDir::Left))) m -= 2;
        new_edge = m;
    }

    auto band_at = [&](long long m) { return band[static_cast<std::size_t>((m - scan_lo) / 2)]; };
    auto new_occ = [&](long long m) -> std::uint8_t {
        if (m >= scan_lo) return band_at(m);
        if (cfg.left != LeftBoundary::Forced) return 0;
        return (open(m - 1, BondDir::Right) || open(m + 1, BondDir::Left)) ? 1 : 0;
    };

    InfectionConfig out;
    out.time = n + 1;
    out.hi = new_edge;
    if (order != kOrderInf) {
        out.left = LeftBoundary::Forced;
        out.lo = new_edge - 2 * order;
        for (long long m = out.lo; m <= out.hi; m += 2) out.cells.push_back(new_occ(m));
        if (stats)
            for (long long m = scan_lo; m < out.lo; m += 2)
                if (!band_at(m)) ++stats->forced_sites;
    } else if (cfg.left == LeftBoundary::Empty) {
        long long first = scan_lo;
        while (!band_at(first)) first += 2;
        out.left = LeftBoundary::Empty;
        out.lo = first;
        for (long long m = out.lo; m <= out.hi; m += 2) out.cells.push_back(band_at(m));
    } else {
        out.left = LeftBoundary::Horizon;
        out.lo = scan_lo;  // the determined region loses one site per step
        for (long long m = out.lo; m <= out.hi; m += 2) out.cells.push_back(band_at(m));
    }
    return out;
}

struct TrajectoryRecord {
    int order = 0;  // readout order (0 when simulating infinite order)
    double p = 0;
    std::uint64_t seed = 0;
    std::vector<long long> edge;  // edge[t] = position after step t+1
    std::vector<std::uint64_t> label;
    std::vector<std::uint64_t> visits;  // per-label counts; sum == recorded steps
    long long forced_sites = 0;
    bool died_out = false;

    double edge_over_n(std::size_t t) const {
        return static_cast<double>(edge[t]) / static_cast<double>(t + 1);
    }
    void write_csv(std::ostream& out) const;  // columns n,edge,edge_over_n,label
};

TrajectoryRecord run_trajectory(int order, double p, std::uint64_t seed, long long n_steps);

// Observer sees the step index (0 = initial states) and all current configs.
using CoupledObserver =
    std::function<void(long long step, const std::vector<InfectionConfig>&)>;

// All runs consult the same bond field; entries of the three lists pair up.
std::vector<TrajectoryRecord> run_coupled(const std::vector<int>& orders,
                                          const std::vector<double>& ps,
                                          const std::vector<InfectionConfig>& initials,
                                          std::uint64_t seed, long long n_steps,
                                          const CoupledObserver& observer = {});

// Sites where `sub` is occupied but `sup` is not, over the commonly determined
// range (sites below a Horizon frontier are skipped).
long long domination_violations(const InfectionConfig& sup, const InfectionConfig& sub);

// Mismatches between a finite-order and an infinite-order configuration at
// sites m with time - m <= 2*order, where the two processes must coincide.
long long agreement_violations(const InfectionConfig& finite_cfg,
                               const InfectionConfig& inf_cfg, int order);

struct CoupleCheckReport {
    long long seeds = 0;
    long long steps = 0;
    long long comparisons = 0;
    long long violations = 0;
    std::string first_violation;  // "seed=.. step=.. site=.." or empty
};

// The three monotonicity suites: lower order dominates higher order; larger p
// dominates smaller p; an initially dominating window stays dominating.
CoupleCheckReport couple_check_orders(int order_small, int order_large, double p,
                                      long long n_steps, std::uint64_t seed0, int n_seeds);
CoupleCheckReport couple_check_p(int order, double p_small, double p_large,
                                 long long n_steps, std::uint64_t seed0, int n_seeds);
CoupleCheckReport couple_check_initial(int order, std::uint64_t label_sub,
                                       std::uint64_t label_sup, double p, long long n_steps,
                                       std::uint64_t seed0, int n_seeds);

}  // namespace opcrit
