#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "opcrit/certified.hpp"
#include "opcrit/imc_exact.hpp"
#include "opcrit/mc_edge.hpp"
#include "opcrit/pc_solver.hpp"
#include "opcrit/rng.hpp"
#include "opcrit/sdtcp.hpp"

namespace {

int thread_count() {
    if (const char* env = std::getenv("OPCRIT_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Writes to the file when a path is given, otherwise to stdout.
int with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) {
        fn(std::cout);
        return 0;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "cannot open output file: " << path << "\n";
        return 1;
    }
    fn(f);
    return 0;
}

struct BoundOpts {
    int order = -1;
    int max_order = -1;
    int refine = 0;
    double grid = 1e-6;
    std::string out, format = "pretty";
};

opcrit::BoundTable bound_table(int max_order, int grid_decimals, int threads) {
    std::vector<opcrit::Enclosure> rows(static_cast<std::size_t>(max_order) + 1);
    auto work = [&](int i) {
        opcrit::CertifiedPipeline pipe(i);
        int d_eff = i >= 9 ? std::min(grid_decimals, 5) : grid_decimals;
        rows[static_cast<std::size_t>(i)] = opcrit::bracket_root(pipe, d_eff, 0);
    };
    if (threads <= 1 || max_order == 0) {
        for (int i = 0; i <= max_order; ++i) work(i);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int i = next.fetch_add(1); i <= max_order; i = next.fetch_add(1)) work(i);
        };
        std::vector<std::future<void>> fs;
        int n = std::min(threads, max_order + 1);
        for (int t = 0; t < n; ++t) fs.push_back(std::async(std::launch::async, worker));
        for (auto& f : fs) f.get();
    }
    opcrit::BoundTable table;
    table.rows = std::move(rows);
    for (const opcrit::Enclosure& r : table.rows)
        table.certified_lower_bound = std::max(table.certified_lower_bound, r.p_lo);
    return table;
}

int run_bound(const BoundOpts& o) {
    int d = opcrit::grid_step_to_decimals(o.grid);
    if (o.order >= 0 && o.max_order >= 0)
        throw std::invalid_argument("give either --order or --max-order, not both");

    opcrit::BoundTable table;
    if (o.order >= 0) {
        opcrit::CertifiedPipeline pipe(o.order);
        int d_eff = o.order >= 9 ? std::min(d, 5) : d;
        table.rows.push_back(opcrit::bracket_root(pipe, d_eff, o.refine));
        table.certified_lower_bound = table.rows.front().p_lo;
    } else {
        if (o.refine != 0)
            throw std::invalid_argument("--refine needs a single --order");
        table = bound_table(o.max_order >= 0 ? o.max_order : 9, d, thread_count());
    }

    return with_output(o.out, [&](std::ostream& os) {
        if (o.format == "csv")
            opcrit::write_bound_csv(os, table);
        else if (o.format == "json")
            opcrit::write_bound_json(os, table);
        else if (o.format == "pretty")
            opcrit::write_bound_pretty(os, table);
        else
            throw std::invalid_argument("unknown format: " + o.format);
    });
}

struct DumpOpts {
    int order = 0;
    std::string out, format = "pretty";
};

int run_dump(const DumpOpts& o) {
    return with_output(o.out, [&](std::ostream& os) {
        if (o.format == "json")
            opcrit::dump_json(os, o.order);
        else if (o.format == "pretty")
            opcrit::dump_pretty(os, o.order);
        else
            throw std::invalid_argument("unknown format: " + o.format);
    });
}

struct SimOpts {
    int order = 0;
    std::vector<double> ps;
    double steps = 1e6;
    std::uint64_t seed = 12345;
    int replicas = 4;
    bool estimate = false;
    double tol = 1e-3;
    double budget = 5e8;
    std::string out, format = "pretty";
};

int run_simulate(const SimOpts& o) {
    const long long n_steps = static_cast<long long>(std::llround(o.steps));
    if (o.ps.empty() && !o.estimate)
        throw std::invalid_argument("give --p values and/or --estimate");

    if (!o.ps.empty()) {
        opcrit::PlateauScan scan;
        scan.order = o.order;
        scan.results.resize(o.ps.size());
        auto work = [&](std::size_t k) {
            scan.results[k] = opcrit::plateau_at(o.order, o.ps[k], n_steps, o.replicas,
                                                 opcrit::mix64(o.seed ^ (k + 1)));
        };
        int threads = std::min<std::size_t>(thread_count(), o.ps.size());
        if (threads <= 1) {
            for (std::size_t k = 0; k < o.ps.size(); ++k) work(k);
        } else {
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (std::size_t k = next.fetch_add(1); k < o.ps.size(); k = next.fetch_add(1))
                    work(k);
            };
            std::vector<std::future<void>> fs;
            for (int t = 0; t < threads; ++t)
                fs.push_back(std::async(std::launch::async, worker));
            for (auto& f : fs) f.get();
        }

        if (o.format == "json") {
            opcrit::write_scan_json(std::cout, scan);
        } else {
            for (const opcrit::PlateauResult& r : scan.results) {
                char line[200];
                std::snprintf(line, sizeof line,
                              "p=%.6f  n=%lld  replicas=%d  plateau=%+.6f (se %.2e)  "
                              "edge/n=%.6f  verdict=%s\n",
                              r.p, r.n_steps, r.replicas, r.height, r.std_err,
                              r.final_edge_over_n, r.verdict_name());
                std::cout << line;
            }
        }
        if (!o.out.empty()) {
            // one trajectory file per p for plotting
            for (std::size_t k = 0; k < o.ps.size(); ++k) {
                opcrit::McTrajectory tr = opcrit::run_edge_trajectory(
                    o.order, o.ps[k], opcrit::mix64(o.seed ^ (k + 1)), n_steps);
                std::string path = o.out + "." + std::to_string(k) + ".csv";
                std::ofstream f(path, std::ios::binary);
                if (!f) {
                    std::cerr << "cannot open output file: " << path << "\n";
                    return 1;
                }
                tr.write_csv(f);
                std::cout << "trajectory p=" << o.ps[k] << " -> " << path << "\n";
            }
        }
    }

    if (o.estimate) {
        opcrit::McEstimate est = opcrit::estimate_pc_mc(
            o.order, o.tol, static_cast<long long>(std::llround(o.budget)), o.seed);
        char line[240];
        std::snprintf(line, sizeof line,
                      "estimate: %.6f <= p_c(%d) <= %.6f  (width %.2g, steps %lld)\n",
                      est.p_lo, est.order, est.p_hi, est.p_hi - est.p_lo, est.steps_spent);
        std::cout << line;
        if (!est.note.empty()) std::cout << "note: " << est.note << "\n";
    }
    return 0;
}

struct CoupleOpts {
    int seeds = 100;
    double steps = 200;
    std::uint64_t seed = 2024;
};

int run_couple_check(const CoupleOpts& o) {
    const long long n_steps = static_cast<long long>(std::llround(o.steps));
    struct Suite {
        const char* name;
        opcrit::CoupleCheckReport rep;
    };
    std::vector<Suite> suites;
    suites.push_back({"order (i=1 over i=3, p=0.6)",
                      opcrit::couple_check_orders(1, 3, 0.6, n_steps, o.seed, o.seeds)});
    suites.push_back({"density (p=0.7 over p=0.5, i=2)",
                      opcrit::couple_check_p(2, 0.5, 0.7, n_steps, opcrit::mix64(o.seed ^ 1),
                                             o.seeds)});
    suites.push_back({"initial (label 3 over label 0, i=2)",
                      opcrit::couple_check_initial(2, 0, 3, 0.6, n_steps,
                                                   opcrit::mix64(o.seed ^ 2), o.seeds)});
    long long total = 0;
    for (const Suite& s : suites) {
        std::cout << s.name << ": seeds=" << s.rep.seeds << " steps=" << s.rep.steps
                  << " comparisons=" << s.rep.comparisons
                  << " violations=" << s.rep.violations;
        if (!s.rep.first_violation.empty()) std::cout << "  first: " << s.rep.first_violation;
        std::cout << "\n";
        total += s.rep.violations;
    }
    if (total > 0) {
        std::cerr << "coupling inequalities violated\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oriented-percolation edge process: certified threshold bounds and simulation"};
    app.require_subcommand(1);

    BoundOpts bo;
    auto* bound = app.add_subcommand("bound", "certified enclosures of the order-i thresholds");
    bound->add_option("--order,-i", bo.order, "single order to bracket");
    bound->add_option("--max-order", bo.max_order, "bracket all orders 0..N (default 9)");
    bound->add_option("--grid", bo.grid, "decimal grid step, a power of ten (default 1e-6)");
    bound->add_option("--refine", bo.refine, "extra bisection steps after the grid scan");
    bound->add_option("--out", bo.out, "output file (default stdout)");
    bound->add_option("--format", bo.format, "csv, json or pretty");

    DumpOpts dopt;
    auto* dump = app.add_subcommand("dump", "exact transition matrix and drift vector");
    dump->add_option("--order,-i", dopt.order, "window order (0..12)")->required();
    dump->add_option("--out", dopt.out, "output file (default stdout)");
    dump->add_option("--format", dopt.format, "json or pretty");

    SimOpts so;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo edge process and plateau verdicts");
    sim->add_option("--order,-i", so.order, "window order")->required();
    sim->add_option("--p", so.ps, "p values to scan")->delimiter(',');
    sim->add_option("--steps", so.steps, "steps per trajectory (default 1e6)");
    sim->add_option("--seed", so.seed, "RNG seed");
    sim->add_option("--replicas", so.replicas, "independent replicas per p (default 4)");
    sim->add_flag("--estimate", so.estimate, "bisect for the order-i threshold");
    sim->add_option("--tol", so.tol, "target bracket width for --estimate (>= 1e-5)");
    sim->add_option("--budget", so.budget, "total step budget for --estimate");
    sim->add_option("--out", so.out, "trajectory CSV path prefix");
    sim->add_option("--format", so.format, "json or pretty");

    CoupleOpts co;
    auto* couple = app.add_subcommand("couple-check",
                                      "pointwise coupling inequalities on shared bonds");
    couple->add_option("--seeds", co.seeds, "number of seeds (default 100)");
    couple->add_option("--steps", co.steps, "steps per run (default 200)");
    couple->add_option("--seed", co.seed, "base RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (bound->parsed()) return run_bound(bo);
        if (dump->parsed()) return run_dump(dopt);
        if (sim->parsed()) return run_simulate(so);
        if (couple->parsed()) return run_couple_check(co);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const opcrit::CertificationError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
