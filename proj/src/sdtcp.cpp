#include "opcrit/sdtcp.hpp"

#include <algorithm>
#include <ostream>

#include "opcrit/rng.hpp"

namespace opcrit {

int InfectionConfig::occupancy(long long m) const {
    if (((time + m) & 1) != 0)
        throw std::invalid_argument("site off the even sublattice");
    if (m > hi) return 0;
    if (m < lo) {
        switch (left) {
            case LeftBoundary::Empty: return 0;
            case LeftBoundary::Forced: return 1;
            case LeftBoundary::Horizon:
                throw std::out_of_range("site below the tracked horizon");
        }
    }
    return cells[static_cast<std::size_t>((m - lo) / 2)];
}

long long InfectionConfig::edge() const {
    if (died_out) throw std::runtime_error("process has died out");
    for (long long m = hi; m >= lo; m -= 2)
        if (cells[static_cast<std::size_t>((m - lo) / 2)]) return m;
    if (left == LeftBoundary::Forced) return lo - 2;
    throw std::runtime_error("no occupied site in the tracked window");
}

std::uint64_t WindowState::label() const {
    std::uint64_t l = 0;
    for (std::uint8_t b : bits) l = l << 1 | b;
    return l;
}

InfectionConfig initial_config_canonical() {
    InfectionConfig cfg;
    cfg.cells = {1};
    return cfg;  // lo = hi = 0, Forced fill: occupied iff m <= 0
}

InfectionConfig initial_config_from_label(int order, std::uint64_t label) {
    if (order < 0 || order >= 63) throw std::invalid_argument("order out of range");
    if (label >> order) throw std::invalid_argument("label out of range");
    InfectionConfig cfg;
    cfg.lo = -2 * order;
    cfg.cells.resize(static_cast<std::size_t>(order) + 1);
    cfg.cells[order] = 1;
    for (int j = 1; j <= order; ++j)
        cfg.cells[order - j] = (label >> (order - j)) & 1;
    return cfg;
}

InfectionConfig initial_config_horizon(long long reserve_sites) {
    if (reserve_sites < 1) throw std::invalid_argument("reserve must be positive");
    InfectionConfig cfg;
    cfg.left = LeftBoundary::Horizon;
    cfg.lo = -2 * reserve_sites;
    cfg.cells.assign(static_cast<std::size_t>(reserve_sites) + 1, 1);
    return cfg;
}

WindowState imc_readout(const InfectionConfig& cfg, int order) {
    if (order < 0) throw std::invalid_argument("readout needs a finite order");
    WindowState w;
    w.order = order;
    w.edge = cfg.edge();
    w.bits.resize(static_cast<std::size_t>(order));
    for (int j = 1; j <= order; ++j)
        w.bits[j - 1] = static_cast<std::uint8_t>(cfg.occupancy(w.edge - 2 * j));
    return w;
}

void TrajectoryRecord::write_csv(std::ostream& out) const {
    out << "n,edge,edge_over_n,label\n";
    char buf[48];
    for (std::size_t t = 0; t < edge.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%.10g", edge_over_n(t));
        out << (t + 1) << ',' << edge[t] << ',' << buf << ',' << label[t] << '\n';
    }
}

TrajectoryRecord run_trajectory(int order, double p, std::uint64_t seed, long long n_steps) {
    if (n_steps < 1) throw std::invalid_argument("need at least one step");
    const int readout = order >= 0 ? order : 0;
    TrajectoryRecord rec;
    rec.order = readout;
    rec.p = p;
    rec.seed = seed;
    rec.visits.assign(std::size_t{1} << readout, 0);
    rec.edge.reserve(static_cast<std::size_t>(n_steps));
    rec.label.reserve(static_cast<std::size_t>(n_steps));

    UniformBondField field(seed);
    InfectionConfig cfg = order >= 0 ? initial_config_canonical()
                                     : initial_config_horizon(n_steps + 32);
    StepStats stats;
    for (long long t = 1; t <= n_steps; ++t) {
        cfg = step(cfg, field, p, order, &stats);
        if (cfg.died_out) {
            rec.died_out = true;
            break;
        }
        WindowState w = imc_readout(cfg, readout);
        rec.edge.push_back(w.edge);
        rec.label.push_back(w.label());
        ++rec.visits[w.label()];
    }
    rec.forced_sites = stats.forced_sites;
    return rec;
}

std::vector<TrajectoryRecord> run_coupled(const std::vector<int>& orders,
                                          const std::vector<double>& ps,
                                          const std::vector<InfectionConfig>& initials,
                                          std::uint64_t seed, long long n_steps,
                                          const CoupledObserver& observer) {
    const std::size_t k = orders.size();
    if (ps.size() != k || initials.size() != k)
        throw std::invalid_argument("orders, ps and initials must pair up");
    UniformBondField field(seed);
    std::vector<InfectionConfig> cfgs = initials;
    std::vector<TrajectoryRecord> recs(k);
    for (std::size_t r = 0; r < k; ++r) {
        recs[r].order = orders[r] >= 0 ? orders[r] : 0;
        recs[r].p = ps[r];
        recs[r].seed = seed;
        recs[r].visits.assign(std::size_t{1} << recs[r].order, 0);
    }
    if (observer) observer(0, cfgs);
    for (long long t = 1; t <= n_steps; ++t) {
        for (std::size_t r = 0; r < k; ++r) {
            if (cfgs[r].died_out) continue;
            cfgs[r] = step(cfgs[r], field, ps[r], orders[r]);
            if (cfgs[r].died_out) {
                recs[r].died_out = true;
                continue;
            }
            WindowState w = imc_readout(cfgs[r], recs[r].order);
            recs[r].edge.push_back(w.edge);
            recs[r].label.push_back(w.label());
            ++recs[r].visits[w.label()];
        }
        if (observer) observer(t, cfgs);
    }
    return recs;
}

long long domination_violations(const InfectionConfig& sup, const InfectionConfig& sub) {
    if (sup.time != sub.time) throw std::invalid_argument("configs at different times");
    long long start = std::min(sup.lo, sub.lo);
    if (sup.left == LeftBoundary::Horizon) start = std::max(start, sup.lo);
    if (sub.left == LeftBoundary::Horizon) start = std::max(start, sub.lo);
    const long long stop = std::max(sup.hi, sub.hi);
    long long bad = 0;
    if (sup.left != LeftBoundary::Horizon && sub.left != LeftBoundary::Horizon &&
        sub.left == LeftBoundary::Forced && sup.left == LeftBoundary::Empty)
        ++bad;  // the entire deep fill violates
    for (long long m = start; m <= stop; m += 2)
        if (sub.occupancy(m) > sup.occupancy(m)) ++bad;
    return bad;
}

long long agreement_violations(const InfectionConfig& finite_cfg,
                               const InfectionConfig& inf_cfg, int order) {
    if (finite_cfg.time != inf_cfg.time)
        throw std::invalid_argument("configs at different times");
    long long start = finite_cfg.time - 2 * order;
    if (inf_cfg.left == LeftBoundary::Horizon) start = std::max(start, inf_cfg.lo);
    if (finite_cfg.left == LeftBoundary::Horizon) start = std::max(start, finite_cfg.lo);
    const long long stop = std::max(finite_cfg.hi, inf_cfg.hi);
    long long bad = 0;
    for (long long m = start; m <= stop; m += 2)
        if (finite_cfg.occupancy(m) != inf_cfg.occupancy(m)) ++bad;
    return bad;
}

namespace {

struct PairwiseCounter {
    CoupleCheckReport* report;
    std::uint64_t seed;
    // which config dominates: fixed by the caller
    void compare(long long t, const InfectionConfig& sup, const InfectionConfig& sub) {
        long long start = std::min(sup.lo, sub.lo);
        if (sup.left == LeftBoundary::Horizon) start = std::max(start, sup.lo);
        if (sub.left == LeftBoundary::Horizon) start = std::max(start, sub.lo);
        const long long stop = std::max(sup.hi, sub.hi);
        for (long long m = start; m <= stop; m += 2) {
            ++report->comparisons;
            if (sub.occupancy(m) > sup.occupancy(m)) {
                ++report->violations;
                if (report->first_violation.empty())
                    report->first_violation = "seed=" + std::to_string(seed) +
                                              " step=" + std::to_string(t) +
                                              " site=" + std::to_string(m);
            }
        }
    }
};

CoupleCheckReport run_pair_suite(const std::vector<int>& orders, const std::vector<double>& ps,
                                 const std::vector<InfectionConfig>& initials, bool first_is_sup,
                                 long long n_steps, std::uint64_t seed0, int n_seeds) {
    CoupleCheckReport report;
    report.seeds = n_seeds;
    report.steps = n_steps;
    for (int s = 0; s < n_seeds; ++s) {
        const std::uint64_t seed = mix64(seed0 + static_cast<std::uint64_t>(s));
        PairwiseCounter counter{&report, seed};
        auto observer = [&](long long t, const std::vector<InfectionConfig>& cfgs) {
            if (first_is_sup)
                counter.compare(t, cfgs[0], cfgs[1]);
            else
                counter.compare(t, cfgs[1], cfgs[0]);
        };
        run_coupled(orders, ps, initials, seed, n_steps, observer);
    }
    return report;
}

}  // namespace

CoupleCheckReport couple_check_orders(int order_small, int order_large, double p,
                                      long long n_steps, std::uint64_t seed0, int n_seeds) {
    if (order_large >= 0 && order_small > order_large)
        throw std::invalid_argument("first order must not exceed the second");
    InfectionConfig init_small = initial_config_canonical();
    InfectionConfig init_large = order_large >= 0 ? initial_config_canonical()
                                                  : initial_config_horizon(n_steps + 32);
    // the lower order forces more reinfection, so it dominates
    return run_pair_suite({order_small, order_large}, {p, p}, {init_small, init_large},
                          /*first_is_sup=*/true, n_steps, seed0, n_seeds);
}

CoupleCheckReport couple_check_p(int order, double p_small, double p_large, long long n_steps,
                                 std::uint64_t seed0, int n_seeds) {
    if (p_small > p_large) throw std::invalid_argument("p values out of order");
    InfectionConfig init = order >= 0 ? initial_config_canonical()
                                      : initial_config_horizon(n_steps + 32);
    return run_pair_suite({order, order}, {p_small, p_large}, {init, init},
                          /*first_is_sup=*/false, n_steps, seed0, n_seeds);
}

CoupleCheckReport couple_check_initial(int order, std::uint64_t label_sub,
                                       std::uint64_t label_sup, double p, long long n_steps,
                                       std::uint64_t seed0, int n_seeds) {
    if (order < 0) throw std::invalid_argument("initial-condition suite needs a finite order");
    if (label_sub & ~label_sup)
        throw std::invalid_argument("first label must be a bitwise subset of the second");
    InfectionConfig init_sub = initial_config_from_label(order, label_sub);
    InfectionConfig init_sup = initial_config_from_label(order, label_sup);
    return run_pair_suite({order, order}, {p, p}, {init_sup, init_sub},
                          /*first_is_sup=*/true, n_steps, seed0, n_seeds);
}

}  // namespace opcrit
