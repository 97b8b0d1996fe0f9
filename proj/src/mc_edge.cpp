#include "opcrit/mc_edge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace opcrit {

std::uint64_t PackedWindow::label() const {
    if (order > 63) throw std::invalid_argument("label only defined for order <= 63");
    std::uint64_t l = 0;
    for (int j = 1; j <= order; ++j) l = l << 1 | static_cast<std::uint64_t>(bit(j));
    return l;
}

PackedWindow window_from_label(int order, std::uint64_t label) {
    if (order < 0 || order > 63) throw std::invalid_argument("order out of range");
    if (order < 64 && label >> order) throw std::invalid_argument("label out of range");
    PackedWindow w;
    w.order = order;
    w.words.assign(static_cast<std::size_t>((order + 63) / 64), 0);
    for (int j = 1; j <= order; ++j) w.set_bit(j, (label >> (order - j)) & 1);
    return w;
}

EdgeProcess::EdgeProcess(int order, double p, std::uint64_t seed) : rng_(seed) {
    if (order < 0) throw std::invalid_argument("order must be nonnegative");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in (0, 1]");
    const double q = 1.0 - p;
    p_ = p;
    p2_ = 1.0 - q * q;
    log_q2_ = q > 0.0 ? 2.0 * std::log(q) : 0.0;
    w_.order = order;
    w_.words.assign(static_cast<std::size_t>((order + 63) / 64), ~std::uint64_t{0});
    if (order % 64 != 0 && !w_.words.empty())
        w_.words.back() = ~std::uint64_t{0} >> (64 - order % 64);
    scratch_.assign(w_.words.size(), 0);
}

void EdgeProcess::set_window(const PackedWindow& w) {
    if (w.order != w_.order) throw std::invalid_argument("window order mismatch");
    if (w.words.size() != w_.words.size()) throw std::invalid_argument("window size mismatch");
    w_ = w;
}

long long EdgeProcess::step() {
    const int i = w_.order;
    auto occ = [&](int t) -> int {
        if (t <= 0) return t == 0 ? 1 : 0;
        if (t <= i) return w_.bit(t);
        return 1;
    };
    auto theta = [&](int t) -> double {
        const int a = occ(t), b = occ(t - 1);
        if (a && b) return p2_;
        if (a || b) return p_;
        return 0.0;
    };

    long long k = -1;
    for (int t = 0; t <= i + 1; ++t) {
        const double th = theta(t);
        if (th > 0.0 && rng_.bernoulli(th)) {
            k = t;
            break;
        }
    }
    if (k < 0) {
        // every candidate beside the window has both neighbours occupied
        const long long g =
            static_cast<long long>(std::floor(std::log(rng_.uniform_pos()) / log_q2_));
        k = i + 2 + g;
    }

    std::fill(scratch_.begin(), scratch_.end(), 0);
    for (int j = 1; j <= i; ++j) {
        const long long t = k + j;
        const double th = t > i + 1 ? p2_ : theta(static_cast<int>(t));
        if (th > 0.0 && rng_.bernoulli(th))
            scratch_[static_cast<std::size_t>(j - 1) >> 6] |= std::uint64_t{1} << ((j - 1) & 63);
    }
    w_.words.swap(scratch_);
    w_.edge += 1 - 2 * k;
    return 1 - 2 * k;
}

void McTrajectory::write_csv(std::ostream& out) const {
    out << "n,edge,edge_over_n\n";
    char buf[48];
    for (const McSamplePoint& s : samples) {
        std::snprintf(buf, sizeof buf, "%.10g",
                      static_cast<double>(s.edge) / static_cast<double>(s.n));
        out << s.n << ',' << s.edge << ',' << buf << '\n';
    }
}

McTrajectory run_edge_trajectory(int order, double p, std::uint64_t seed, long long n_steps,
                                 long long stride) {
    if (n_steps < 5) throw std::invalid_argument("need at least 5 steps");
    if (stride <= 0) stride = std::max<long long>(1, n_steps / 1000);
    McTrajectory tr;
    tr.order = order;
    tr.p = p;
    tr.seed = seed;
    tr.n_steps = n_steps;

    EdgeProcess proc(order, p, seed);
    const long long t0 = n_steps - n_steps / 5 + 1;  // plateau window [t0, n_steps]
    double plateau_sum = 0, jsum = 0, jsq = 0;
    for (long long t = 1; t <= n_steps; ++t) {
        const long long jump = proc.step();
        jsum += static_cast<double>(jump);
        jsq += static_cast<double>(jump) * static_cast<double>(jump);
        if (t >= t0)
            plateau_sum += static_cast<double>(proc.edge()) / static_cast<double>(t);
        if (t % stride == 0 || t == n_steps) tr.samples.push_back({t, proc.edge()});
    }
    const double W = static_cast<double>(n_steps - t0 + 1);
    tr.plateau_height = plateau_sum / W;
    tr.final_edge_over_n =
        static_cast<double>(proc.edge()) / static_cast<double>(n_steps);
    const double n = static_cast<double>(n_steps);
    const double mean_j = jsum / n;
    tr.jump_sd = std::sqrt(std::max(0.0, jsq / n - mean_j * mean_j));

    // The plateau mean is sum_s J_s w_s with w_s = (1/|W|) sum_{t in W, t>=s} 1/t;
    // under independent jumps its variance is jump_var * sum_s w_s^2, computed
    // here with one backward harmonic pass.
    double h = 0, ssq = 0;
    for (long long s = n_steps; s >= t0; --s) {
        h += 1.0 / static_cast<double>(s);
        ssq += h * h;
    }
    const double wsq = (static_cast<double>(t0 - 1) * h * h + ssq) / (W * W);
    tr.plateau_theory_sd = tr.jump_sd * std::sqrt(wsq);
    return tr;
}

const char* PlateauResult::verdict_name() const {
    return verdict < 0 ? "subcritical" : verdict > 0 ? "supercritical" : "undecided";
}

PlateauResult plateau_at(int order, double p, long long n_steps, int replicas,
                         std::uint64_t seed) {
    if (replicas < 1) throw std::invalid_argument("need at least one replica");
    PlateauResult res;
    res.p = p;
    res.n_steps = n_steps;
    res.replicas = replicas;

    std::vector<double> heights(static_cast<std::size_t>(replicas));
    double theory_var = 0;
    for (int r = 0; r < replicas; ++r) {
        const std::uint64_t sr = mix64(seed + static_cast<std::uint64_t>(r) * 0x9E3779B97F4A7C15ull);
        McTrajectory tr = run_edge_trajectory(order, p, sr, n_steps, n_steps);
        heights[static_cast<std::size_t>(r)] = tr.plateau_height;
        res.final_edge_over_n += tr.final_edge_over_n / replicas;
        res.height += tr.plateau_height / replicas;
        theory_var += tr.plateau_theory_sd * tr.plateau_theory_sd;
    }
    const double se_theory = std::sqrt(theory_var) / replicas;
    double se = se_theory;
    if (replicas >= 2) {
        double var = 0;
        for (double hgt : heights) var += (hgt - res.height) * (hgt - res.height);
        var /= replicas - 1;
        se = std::max(se, std::sqrt(var / replicas));
    }
    res.std_err = se;
    if (res.height < -3 * se)
        res.verdict = -1;
    else if (res.height > 3 * se)
        res.verdict = 1;
    return res;
}

PlateauScan plateau_scan(int order, const std::vector<double>& ps, long long n_steps,
                         std::uint64_t seed, int replicas) {
    PlateauScan scan;
    scan.order = order;
    for (std::size_t k = 0; k < ps.size(); ++k)
        scan.results.push_back(
            plateau_at(order, ps[k], n_steps, replicas, mix64(seed ^ (k + 1))));
    return scan;
}

void write_scan_json(std::ostream& out, const PlateauScan& scan) {
    char buf[48];
    auto g10 = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return std::string(buf);
    };
    out << "{\n  \"order\": " << scan.order << ",\n  \"results\": [\n";
    for (std::size_t k = 0; k < scan.results.size(); ++k) {
        const PlateauResult& r = scan.results[k];
        out << "    {\"p\": " << g10(r.p) << ", \"n_steps\": " << r.n_steps
            << ", \"replicas\": " << r.replicas << ", \"height\": " << g10(r.height)
            << ", \"std_err\": " << g10(r.std_err)
            << ", \"final_edge_over_n\": " << g10(r.final_edge_over_n) << ", \"verdict\": \""
            << r.verdict_name() << "\"}" << (k + 1 < scan.results.size() ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
}

McEstimate estimate_pc_mc(int order, double tol, long long step_budget, std::uint64_t seed) {
    if (!(tol >= 1e-5)) throw std::invalid_argument("tolerance must be at least 1e-5");
    if (step_budget < 1) throw std::invalid_argument("step budget must be positive");

    McEstimate est;
    est.order = order;
    est.p_lo = 0.55;
    est.p_hi = 0.75;

    long long n = 250000;
    const int replicas = 4;
    std::uint64_t ctr = 0;
    bool budget_out = false;
    auto decide = [&](double p) -> int {
        while (true) {
            const long long cost = n * replicas;
            if (est.steps_spent + cost > step_budget) {
                budget_out = true;
                return 0;
            }
            PlateauResult r = plateau_at(order, p, n, replicas,
                                         mix64(seed + ++ctr * 0x9E3779B97F4A7C15ull));
            est.steps_spent += cost;
            if (r.verdict != 0) return r.verdict;
            n *= 4;  // sharpen: escalated n persists for later points
        }
    };

    if (decide(est.p_lo) != -1) {
        est.note = budget_out ? "step budget exhausted before the scan floor was decided"
                              : "scan floor is not subcritical";
        return est;
    }
    if (decide(est.p_hi) != 1) {
        est.note = budget_out ? "step budget exhausted before the scan ceiling was decided"
                              : "scan ceiling is not supercritical";
        return est;
    }
    while (est.p_hi - est.p_lo > tol) {
        const double mid = est.p_lo + (est.p_hi - est.p_lo) / 2;
        const int v = decide(mid);
        if (v == 0) {
            est.note = "step budget exhausted; returning the narrowest decided bracket";
            break;
        }
        (v < 0 ? est.p_lo : est.p_hi) = mid;
    }
    est.width_reached = est.p_hi - est.p_lo <= tol;
    return est;
}

}  // namespace opcrit
