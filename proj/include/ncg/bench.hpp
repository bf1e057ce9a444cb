#pragma once

#include "ncg/csv.hpp"
#include "ncg/problems.hpp"
#include "ncg/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace ncg {

struct RunRecord {
    std::string problem;  ///< ProblemSpec::id()
    std::string method;
    std::string linesearch;
    std::string status;
    long iterations = 0;
    long f_evals = 0;
    long g_evals = 0;
    long descent_restarts = 0;
    double f_final = 0.0;
    double gnorm_final = 0.0;
    double wall_time = 0.0;  ///< seconds; informational only

    [[nodiscard]] bool solved() const { return status == to_string(SolverStatus::Converged); }
    [[nodiscard]] std::string solver() const { return method + "/" + linesearch; }
};

/// Runs every (problem, method, line search) cell with `workers` threads.
/// Records come back in problem-major, then method, then line-search order,
/// independent of scheduling.
[[nodiscard]] inline std::vector<RunRecord> run_grid(const std::vector<Method>& methods,
                                                     const std::vector<LineSearchKind>& linesearches,
                                                     const std::vector<ProblemSpec>& problems,
                                                     const SolverConfig& cfg, unsigned workers = 1) {
    if (methods.empty() || linesearches.empty() || problems.empty()) {
        throw config_error("run_grid: empty selection");
    }
    cfg.validate();
    const std::size_t per_problem = methods.size() * linesearches.size();
    std::vector<RunRecord> out(problems.size() * per_problem);

    auto run_cell = [&](std::size_t idx) {
        const auto& prob = problems[idx / per_problem];
        const Method m = methods[(idx % per_problem) / linesearches.size()];
        const LineSearchKind ls = linesearches[idx % linesearches.size()];
        SolverConfig c = cfg;
        c.method = m;
        c.linesearch = ls;
        const auto t0 = std::chrono::steady_clock::now();
        const SolverTrace trace = minimize(prob.objective, prob.x0, c);
        const auto t1 = std::chrono::steady_clock::now();

        RunRecord r;
        r.problem = prob.id();
        r.method = std::string(to_string(m));
        r.linesearch = std::string(to_string(ls));
        r.status = std::string(to_string(trace.status));
        r.iterations = trace.iterations();
        r.f_evals = trace.f_evals();
        r.g_evals = trace.g_evals();
        r.descent_restarts = trace.descent_restarts;
        r.f_final = trace.f_final;
        r.gnorm_final = trace.gnorm_final;
        r.wall_time = std::chrono::duration<double>(t1 - t0).count();
        out[idx] = std::move(r);
    };

    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(out.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < out.size(); ++i) run_cell(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < out.size(); i = next++) run_cell(i);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

// ---------------------------------------------------------------------------
// Record CSV

inline constexpr const char* record_columns =
    "problem,method,linesearch,status,iterations,f_evals,g_evals,descent_restarts,f_final,gnorm_final";

inline void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records, bool with_wall_time = false) {
    os << record_columns << (with_wall_time ? ",wall_time" : "") << '\n';
    for (const auto& r : records) {
        os << r.problem << ',' << r.method << ',' << r.linesearch << ',' << r.status << ',' << r.iterations << ','
           << r.f_evals << ',' << r.g_evals << ',' << r.descent_restarts << ',' << detail::format_g17(r.f_final)
           << ',' << detail::format_g17(r.gnorm_final);
        if (with_wall_time) os << ',' << detail::format_g17(r.wall_time);
        os << '\n';
    }
}

[[nodiscard]] inline std::vector<RunRecord> read_records_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw io_error("records CSV is empty");
    const auto header = detail::split_csv(line);
    const bool with_wall_time = header.size() == 11;
    if (header.size() != 10 && !with_wall_time) throw io_error("records CSV: unexpected header");

    std::vector<RunRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto c = detail::split_csv(line);
        if (c.size() != header.size()) throw io_error("records CSV: wrong column count");
        try {
            RunRecord r{c[0], c[1], c[2], c[3], std::stol(c[4]), std::stol(c[5]), std::stol(c[6]), std::stol(c[7]),
                        std::stod(c[8]), std::stod(c[9]), with_wall_time ? std::stod(c[10]) : 0.0};
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw io_error("records CSV: malformed number");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Performance profiles

enum class Metric { Iterations, FEvals, GEvals, WallTime };

[[nodiscard]] inline std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::Iterations: return "iterations";
        case Metric::FEvals: return "f_evals";
        case Metric::GEvals: return "g_evals";
        case Metric::WallTime: return "wall_time";
    }
    return "?";
}

[[nodiscard]] inline std::optional<Metric> parse_metric(std::string_view s) {
    for (Metric m : {Metric::Iterations, Metric::FEvals, Metric::GEvals, Metric::WallTime}) {
        if (to_string(m) == s) return m;
    }
    return std::nullopt;
}

[[nodiscard]] inline double cost_of(const RunRecord& r, Metric m) {
    switch (m) {
        case Metric::Iterations: return double(r.iterations);
        case Metric::FEvals: return double(r.f_evals);
        case Metric::GEvals: return double(r.g_evals);
        case Metric::WallTime: return r.wall_time;
    }
    return 0.0;
}

/// Dolan-More performance data.
///
/// ratio[p][s] = cost[p][s] / min over solved s' of cost[p][s']. Failed cells
/// carry M = 2 * (largest finite ratio). Problems no solver solved are dropped.
struct ProfileTable {
    std::vector<std::string> solvers;
    std::vector<std::string> problems;
    std::vector<std::string> excluded;  ///< unsolved by every solver
    std::vector<std::vector<std::optional<double>>> cost;  ///< [problem][solver], nullopt = failed
    std::vector<std::vector<double>> ratio;
    double big_m = 2.0;

    /// rho_s(tau) = |{p : r_{p,s} <= tau}| / n_p
    [[nodiscard]] double rho(std::size_t s, double tau) const {
        if (problems.empty()) return 0.0;
        std::size_t count = 0;
        for (const auto& row : ratio) {
            if (row[s] <= tau) ++count;
        }
        return double(count) / double(problems.size());
    }

    /// Distinct ratios in [1, M], always starting at 1 and ending at M.
    [[nodiscard]] std::vector<double> breakpoints() const {
        std::set<double> taus{1.0, big_m};
        for (const auto& row : ratio) taus.insert(row.begin(), row.end());
        return {taus.begin(), taus.end()};
    }

    [[nodiscard]] double solve_fraction(std::size_t s) const {
        if (problems.empty()) return 0.0;
        std::size_t solved = 0;
        for (const auto& row : cost) solved += row[s].has_value();
        return double(solved) / double(problems.size());
    }
};

/// Builds the profile table from a complete grid of records.
///
/// Cost ratios use max(cost, 1) for count metrics so a zero-iteration solve
/// (start point already optimal) stays well defined.
[[nodiscard]] inline ProfileTable profile(const std::vector<RunRecord>& records, Metric metric) {
    ProfileTable t;
    std::map<std::pair<std::string, std::string>, const RunRecord*> cells;
    for (const auto& r : records) {
        const auto solver = r.solver();
        if (std::find(t.solvers.begin(), t.solvers.end(), solver) == t.solvers.end()) t.solvers.push_back(solver);
        if (std::find(t.problems.begin(), t.problems.end(), r.problem) == t.problems.end()) {
            t.problems.push_back(r.problem);
        }
        cells[{r.problem, solver}] = &r;
    }
    if (cells.size() != t.solvers.size() * t.problems.size()) {
        throw incomplete_grid_error("profile: some (problem, solver) cells are missing");
    }

    const bool counts = metric != Metric::WallTime;
    std::vector<std::string> kept;
    for (const auto& p : t.problems) {
        std::vector<std::optional<double>> row;
        bool any = false;
        for (const auto& s : t.solvers) {
            const RunRecord& r = *cells.at({p, s});
            if (r.solved()) {
                const double c = cost_of(r, metric);
                row.emplace_back(counts ? std::max(c, 1.0) : c);
                any = true;
            } else {
                row.emplace_back(std::nullopt);
            }
        }
        if (any) {
            kept.push_back(p);
            t.cost.push_back(std::move(row));
        } else {
            t.excluded.push_back(p);
        }
    }
    t.problems = std::move(kept);

    double max_ratio = 1.0;
    t.ratio.assign(t.cost.size(), std::vector<double>(t.solvers.size(), 0.0));
    for (std::size_t p = 0; p < t.cost.size(); ++p) {
        double best = 0.0;
        bool first = true;
        for (const auto& c : t.cost[p]) {
            if (c && (first || *c < best)) {
                best = *c;
                first = false;
            }
        }
        for (std::size_t s = 0; s < t.solvers.size(); ++s) {
            if (!t.cost[p][s]) continue;
            // equal costs give exactly 1, including zero wall times
            const double r = *t.cost[p][s] == best ? 1.0 : *t.cost[p][s] / best;
            t.ratio[p][s] = r;
            max_ratio = std::max(max_ratio, r);
        }
    }
    t.big_m = 2.0 * max_ratio;
    for (std::size_t p = 0; p < t.cost.size(); ++p) {
        for (std::size_t s = 0; s < t.solvers.size(); ++s) {
            if (!t.cost[p][s]) t.ratio[p][s] = t.big_m;
        }
    }
    return t;
}

/// Wide CSV: tau followed by one rho column per solver, one row per breakpoint.
inline void emit_profile_csv(std::ostream& os, const ProfileTable& t) {
    os << "tau";
    for (const auto& s : t.solvers) os << ',' << s;
    os << '\n';
    for (double tau : t.breakpoints()) {
        os << detail::format_g17(tau);
        for (std::size_t s = 0; s < t.solvers.size(); ++s) os << ',' << detail::format_g17(t.rho(s, tau));
        os << '\n';
    }
}

/// Long-format step vertices (solver,tau,rho), right-continuous: plot with a
/// "steps-post" style. The last vertex of each solver sits at tau = M.
inline void emit_profile_plot_data(std::ostream& os, const ProfileTable& t) {
    os << "solver,tau,rho\n";
    const auto taus = t.breakpoints();
    for (std::size_t s = 0; s < t.solvers.size(); ++s) {
        double last = -1.0;
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const double r = t.rho(s, taus[i]);
            if (r != last || i + 1 == taus.size()) {
                os << t.solvers[s] << ',' << detail::format_g17(taus[i]) << ',' << detail::format_g17(r) << '\n';
                last = r;
            }
        }
    }
}

/// Parsed form of emit_profile_csv output.
struct ProfileCurves {
    std::vector<std::string> solvers;
    std::vector<double> taus;
    std::vector<std::vector<double>> rho;  ///< [breakpoint][solver]
};

[[nodiscard]] inline ProfileCurves read_profile_csv(std::istream& is) {
    ProfileCurves out;
    std::string line;
    if (!std::getline(is, line)) throw io_error("profile CSV is empty");
    auto header = detail::split_csv(line);
    if (header.empty() || header[0] != "tau") throw io_error("profile CSV: bad header");
    out.solvers.assign(header.begin() + 1, header.end());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto c = detail::split_csv(line);
        if (c.size() != header.size()) throw io_error("profile CSV: wrong column count");
        out.taus.push_back(std::stod(c[0]));
        std::vector<double> row;
        for (std::size_t i = 1; i < c.size(); ++i) row.push_back(std::stod(c[i]));
        out.rho.push_back(std::move(row));
    }
    return out;
}

}  // namespace ncg
