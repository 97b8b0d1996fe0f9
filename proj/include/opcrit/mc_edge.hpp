#pragma once
// Fast Monte Carlo walker for the order-i edge process.  Instead of storing
// sites and bonds it keeps only the i-bit window behind the edge and samples
// the factorized one-step law directly: candidate landing sites succeed
// independently with probability p (one occupied neighbour), 1-q^2 (both) or
// 0 (neither), and once the scan is more than i+1 behind the old edge every
// candidate has both neighbours occupied, so the remaining jump depth is a
// geometric draw with ratio q^2.  This is the same factorization the exact
// transition-matrix construction enumerates, here sampled with a sequential
// RNG stream.  O(order) work per step, which is what makes order 1000
// tractable; site-level couplings live in the reference simulator instead.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "opcrit/rng.hpp"

namespace opcrit {

struct PackedWindow {
    int order = 0;
    long long edge = 0;
    std::vector<std::uint64_t> words;  // bit j-1 = occupancy at edge - 2j

    int bit(int j) const {  // j in 1..order
        return static_cast<int>(words[static_cast<std::size_t>(j - 1) >> 6] >> ((j - 1) & 63) & 1);
    }
    void set_bit(int j, bool v) {
        std::uint64_t mask = std::uint64_t{1} << ((j - 1) & 63);
        if (v)
            words[static_cast<std::size_t>(j - 1) >> 6] |= mask;
        else
            words[static_cast<std::size_t>(j - 1) >> 6] &= ~mask;
    }
    std::uint64_t label() const;  // order <= 63 only (cross-tests)
};

PackedWindow window_from_label(int order, std::uint64_t label);

class EdgeProcess {
public:
    // Starts from the canonical half-line state: edge at 0, window all ones.
    EdgeProcess(int order, double p, std::uint64_t seed);

    void set_window(const PackedWindow& w);
    const PackedWindow& window() const { return w_; }
    long long edge() const { return w_.edge; }
    int order() const { return w_.order; }

    long long step();  // returns the signed jump

private:
    PackedWindow w_;
    std::vector<std::uint64_t> scratch_;
    Xoshiro256pp rng_;
    double p_, p2_;      // p2 = 1 - q^2
    double log_q2_ = 0;  // for the geometric tail; 0 when unused
};

struct McSamplePoint {
    long long n = 0;
    long long edge = 0;
};

struct McTrajectory {
    int order = 0;
    double p = 0;
    std::uint64_t seed = 0;
    long long n_steps = 0;
    std::vector<McSamplePoint> samples;  // every `stride` steps plus the last
    double final_edge_over_n = 0;
    double plateau_height = 0;  // mean of edge/t over the last 20% of steps
    double plateau_theory_sd = 0;  // jump-variance-based sd of that mean
    double jump_sd = 0;

    void write_csv(std::ostream& out) const;  // columns n,edge,edge_over_n
};

// stride 0 picks ~1000 sample points.
McTrajectory run_edge_trajectory(int order, double p, std::uint64_t seed, long long n_steps,
                                 long long stride = 0);

struct PlateauResult {
    double p = 0;
    long long n_steps = 0;
    int replicas = 0;
    double height = 0;           // mean of per-replica plateau heights
    double std_err = 0;          // max(between-replica SE, theory SE)
    double final_edge_over_n = 0;
    int verdict = 0;  // -1 height certified negative, +1 positive, 0 undecided
    const char* verdict_name() const;
};

struct PlateauScan {
    int order = 0;
    std::vector<PlateauResult> results;
};

// Decision rule: plateau height = mean of edge/n over the last 20% of steps,
// decided when |height| > 3 std-err; negative height means p is below the
// order-i threshold, positive above.
PlateauResult plateau_at(int order, double p, long long n_steps, int replicas,
                         std::uint64_t seed);
PlateauScan plateau_scan(int order, const std::vector<double>& ps, long long n_steps,
                         std::uint64_t seed, int replicas = 4);
void write_scan_json(std::ostream& out, const PlateauScan& scan);

struct McEstimate {
    int order = 0;
    double p_lo = 0, p_hi = 0;  // every endpoint backed by a decided verdict
    bool width_reached = false;
    long long steps_spent = 0;
    std::string note;  // non-empty when the step budget ran out first
};

// Bisects on plateau verdicts, escalating n_steps x4 whenever a point comes
// back undecided, until the bracket is narrower than tol or the budget runs
// out.
McEstimate estimate_pc_mc(int order, double tol, long long step_budget, std::uint64_t seed);

}  // namespace opcrit
