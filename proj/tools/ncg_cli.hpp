#pragma once

#include "ncg/ncg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace ncg::cli {

// sysexits-style codes
inline constexpr int exit_ok = 0;
inline constexpr int exit_max_iters = 2;
inline constexpr int exit_solver_error = 3;
inline constexpr int exit_usage = 64;
inline constexpr int exit_io = 74;

class usage_error : public error {
  public:
    using error::error;
};

inline std::uint64_t default_seed() {
    if (const char* env = std::getenv("NCG_SEED"); env != nullptr && *env != '\0') {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw usage_error(std::string("NCG_SEED is not an unsigned integer: ") + env);
        }
    }
    return 42;
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline std::string valid_methods() {
    std::string s;
    for (Method m : all_methods) s += (s.empty() ? "" : ", ") + std::string(to_string(m));
    return s;
}

inline std::vector<Method> parse_methods(const std::string& list) {
    std::vector<Method> out;
    for (const auto& name : split_list(list)) {
        const auto m = parse_method(name);
        if (!m) throw usage_error("unknown method '" + name + "'; valid methods: " + valid_methods());
        out.push_back(*m);
    }
    if (out.empty()) throw usage_error("empty method list; valid methods: " + valid_methods());
    return out;
}

inline std::vector<LineSearchKind> parse_linesearches(const std::string& list) {
    if (list == "both") return {LineSearchKind::Interp, LineSearchKind::Bisect};
    std::vector<LineSearchKind> out;
    for (const auto& name : split_list(list)) {
        const auto k = parse_linesearch(name);
        if (!k) throw usage_error("unknown line search '" + name + "'; valid: interp, bisect, both");
        out.push_back(*k);
    }
    if (out.empty()) throw usage_error("empty line-search list");
    return out;
}

/// Flags shared by every solving subcommand.
struct SolverFlags {
    double tol = 1e-5;
    int max_iters = 20000;
    double nu = 0.8;
    double kappa = 10.0;
    double eta_hz = 0.01;
    double rho = 0.1;
    double sigma = 0.4;

    void attach(CLI::App& app) {
        app.add_option("--tol", tol, "stop when |g|_inf < tol")->capture_default_str();
        app.add_option("--max-iters", max_iters, "iteration cap")->capture_default_str();
        app.add_option("--nu", nu, "MPRP / PRP-Y curvature weight (> 1/4)")->capture_default_str();
        app.add_option("--kappa", kappa, "MPRP cap")->capture_default_str();
        app.add_option("--eta-hz", eta_hz, "Hager-Zhang clamp constant")->capture_default_str();
        app.add_option("--rho", rho, "Armijo parameter")->capture_default_str();
        app.add_option("--sigma", sigma, "curvature parameter")->capture_default_str();
    }

    [[nodiscard]] SolverConfig config() const {
        SolverConfig c;
        c.epsilon = tol;
        c.max_iters = max_iters;
        c.dirparams = DirectionParams{nu, kappa, eta_hz};
        c.wolfe = WolfeParams{rho, sigma};
        return c;
    }
};

inline std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot write " + path);
    return os;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot read " + path);
    return is;
}

inline std::vector<ProblemSpec> select_problems(const std::string& names, const std::string& dims_list) {
    if (names == "suite" && dims_list.empty()) return suite();
    std::vector<std::size_t> dims;
    for (const auto& d : split_list(dims_list.empty() ? "2,10,100" : dims_list)) {
        dims.push_back(static_cast<std::size_t>(std::stoul(d)));
    }
    std::vector<std::string> wanted;
    if (names == "suite") {
        for (const auto& f : problems::suite_formulas()) wanted.emplace_back(f.name);
    } else {
        wanted = split_list(names);
    }
    std::vector<ProblemSpec> out;
    for (const auto& name : wanted) {
        const auto* f = problems::find_formula(name);
        if (f == nullptr) throw usage_error("unknown problem '" + name + "' (see list-problems)");
        if (f->fixed_dim != 0) {
            out.push_back(*make_problem(name, 0));
            continue;
        }
        for (std::size_t n : dims) {
            if (problems::dimension_allowed(*f, n)) out.push_back(*make_problem(name, n));
        }
    }
    if (out.empty()) throw usage_error("problem selection is empty");
    return out;
}

inline void print_solver_summary(std::ostream& out, const std::vector<RunRecord>& records) {
    std::map<std::string, std::pair<int, int>> tally;  // solver -> (solved, total)
    std::vector<std::string> order;
    for (const auto& r : records) {
        if (!tally.count(r.solver())) order.push_back(r.solver());
        auto& [solved, total] = tally[r.solver()];
        solved += r.solved();
        ++total;
    }
    for (const auto& s : order) {
        out << s << ": solved " << tally[s].first << "/" << tally[s].second << "\n";
    }
}

inline int cmd_run(const std::string& problem, std::size_t dim, const std::string& method,
                   const std::string& linesearch, const SolverFlags& flags, const std::string& out_path,
                   std::ostream& out) {
    const auto methods = parse_methods(method);
    if (methods.size() != 1) throw usage_error("run takes exactly one method");
    const auto searches = parse_linesearches(linesearch);
    if (searches.size() != 1) throw usage_error("run takes exactly one line search");
    const auto* f = problems::find_formula(problem);
    if (f == nullptr) throw usage_error("unknown problem '" + problem + "' (see list-problems)");
    if (f->fixed_dim == 0 && !problems::dimension_allowed(*f, dim)) {
        throw usage_error(problem + " is not defined at dimension " + std::to_string(dim));
    }
    const auto spec = *make_problem(problem, f->fixed_dim != 0 ? 0 : dim);

    SolverConfig cfg = flags.config();
    cfg.method = methods.front();
    cfg.linesearch = searches.front();
    const SolverTrace trace = minimize(spec.objective, spec.x0, cfg);
    if (!out_path.empty()) {
        auto os = open_out(out_path);
        write_trace_csv(os, trace);
    }
    out << "problem " << spec.id() << " method " << to_string(cfg.method) << " linesearch "
        << to_string(cfg.linesearch) << "\n"
        << "status " << to_string(trace.status) << (trace.message.empty() ? "" : " (" + trace.message + ")") << "\n"
        << "f " << detail::format_g17(trace.f_final) << "\n"
        << "gnorm_inf " << detail::format_g17(trace.gnorm_final) << "\n"
        << "iterations " << trace.iterations() << "\n";
    switch (trace.status) {
        case SolverStatus::Converged: return exit_ok;
        case SolverStatus::MaxIters: return exit_max_iters;
        default: return exit_solver_error;
    }
}

inline int cmd_compare(const std::string& methods, const std::string& problems_sel, const std::string& dims,
                       const std::string& linesearch, const SolverFlags& flags, unsigned workers,
                       bool wall_time, const std::string& out_path, std::ostream& out) {
    const auto ms = parse_methods(methods);
    const auto ls = parse_linesearches(linesearch);
    const auto probs = select_problems(problems_sel, dims);
    const auto records = run_grid(ms, ls, probs, flags.config(), workers);
    auto os = open_out(out_path);
    write_records_csv(os, records, wall_time);
    print_solver_summary(out, records);
    out << records.size() << " records written to " << out_path << "\n";
    return exit_ok;
}

inline int cmd_profile(const std::string& in_path, const std::string& metric_name, const std::string& out_path,
                       const std::string& plot_path, std::ostream& out) {
    const auto metric = parse_metric(metric_name);
    if (!metric) throw usage_error("unknown metric '" + metric_name + "'; valid: iterations, f_evals, g_evals, wall_time");
    auto is = open_in(in_path);
    const auto records = read_records_csv(is);
    if (records.empty()) throw usage_error("records file has no rows");
    const auto table = profile(records, *metric);
    {
        auto os = open_out(out_path);
        emit_profile_csv(os, table);
    }
    if (!plot_path.empty()) {
        auto os = open_out(plot_path);
        emit_profile_plot_data(os, table);
    }
    for (std::size_t s = 0; s < table.solvers.size(); ++s) {
        out << table.solvers[s] << ": rho(1) = " << table.rho(s, 1.0) << ", solved "
            << table.solve_fraction(s) << "\n";
    }
    if (!table.excluded.empty()) out << table.excluded.size() << " problem(s) unsolved by every solver, excluded\n";
    return exit_ok;
}

struct RegressFlags {
    std::size_t m = 10;
    std::size_t n = 50;
    double p = 1.5;
    double lambda = 0.01;
    double sparsity = 0.1;
    int seeds = 10;
    std::uint64_t seed = 42;
    std::string methods = "prp,prp+,prpy,mprp";
    std::string linesearch = "interp";
    std::string out = "regress_records.csv";
    std::string summary;
    std::string export_dir;
};

/// Mean iterations per method over seeds (the regression summary table).
struct RegressSummaryRow {
    std::string solver;
    int converged = 0;
    int runs = 0;
    double mean_iterations = 0.0;
    double mean_f_evals = 0.0;
    double mean_g_evals = 0.0;
};

[[nodiscard]] inline std::vector<RegressSummaryRow> summarize(const std::vector<RunRecord>& records) {
    std::vector<RegressSummaryRow> rows;
    for (const auto& r : records) {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& x) { return x.solver == r.solver(); });
        if (it == rows.end()) {
            rows.push_back({r.solver()});
            it = rows.end() - 1;
        }
        it->converged += r.solved();
        ++it->runs;
        it->mean_iterations += double(r.iterations);
        it->mean_f_evals += double(r.f_evals);
        it->mean_g_evals += double(r.g_evals);
    }
    for (auto& row : rows) {
        row.mean_iterations /= row.runs;
        row.mean_f_evals /= row.runs;
        row.mean_g_evals /= row.runs;
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.mean_iterations < b.mean_iterations; });
    return rows;
}

inline int cmd_regress(const RegressFlags& rf, const SolverFlags& flags, unsigned workers, std::ostream& out) {
    if (rf.seeds < 1) throw usage_error("--seeds must be >= 1");
    const auto ms = parse_methods(rf.methods);
    const auto ls = parse_linesearches(rf.linesearch);
    std::vector<ProblemSpec> probs;
    for (int i = 0; i < rf.seeds; ++i) {
        const auto prob = make_regression(RegressionParams{rf.m, rf.n, rf.p, rf.lambda, rf.sparsity, rf.seed + i});
        if (!rf.export_dir.empty()) {
            std::filesystem::create_directories(rf.export_dir);
            auto os = open_out((std::filesystem::path(rf.export_dir) /
                                ("regression-seed" + std::to_string(prob.params.seed) + ".txt"))
                                   .string());
            write_regression(os, prob);
        }
        probs.push_back(prob.spec());
    }
    const auto records = run_grid(ms, ls, probs, flags.config(), workers);
    {
        auto os = open_out(rf.out);
        write_records_csv(os, records);
    }
    const auto rows = summarize(records);
    std::ostringstream table;
    table << "solver,converged,runs,mean_iterations,mean_f_evals,mean_g_evals\n";
    for (const auto& r : rows) {
        table << r.solver << ',' << r.converged << ',' << r.runs << ',' << detail::format_g17(r.mean_iterations)
              << ',' << detail::format_g17(r.mean_f_evals) << ',' << detail::format_g17(r.mean_g_evals) << '\n';
    }
    if (!rf.summary.empty()) {
        auto os = open_out(rf.summary);
        os << table.str();
    }
    out << "solver            converged  mean iterations\n";
    for (const auto& r : rows) {
        out << std::left << std::setw(18) << r.solver << std::setw(11)
            << (std::to_string(r.converged) + "/" + std::to_string(r.runs)) << std::fixed << std::setprecision(1)
            << r.mean_iterations << "\n";
        out.unsetf(std::ios::floatfield);
    }
    return exit_ok;
}

inline int cmd_list_problems(std::ostream& out) {
    auto dims_of = [](const problems::Formula& f) {
        if (f.fixed_dim != 0) return std::to_string(f.fixed_dim);
        return std::string(f.paired ? "even n >= 2" : "n >= 2");
    };
    for (const auto& f : problems::suite_formulas()) {
        out << f.name << "  [" << dims_of(f) << "]  " << f.reference << "\n";
    }
    const auto& s = problems::sphere_formula();
    out << s.name << "  [" << dims_of(s) << ", not in suite]  " << s.reference << "\n";
    out << "regression  [via regress]  1/2|Ax-b|^2 + (lambda/2)|x|_p^p\n";
    return exit_ok;
}

/// Perturbation used for gradient checks: x0_i + 0.1 * max(1, |x0_i|) * z, z ~ U[-1, 1).
[[nodiscard]] inline Vector perturb(const Vector& x0, Random& rng) {
    std::vector<double> x(x0.begin(), x0.end());
    for (double& v : x) v += 0.1 * std::max(1.0, std::abs(v)) * (2.0 * rng.uniform01() - 1.0);
    return Vector(std::move(x));
}

/// Point with every |x_i| >= 0.1 so the regression penalty is smooth nearby.
[[nodiscard]] inline Vector away_from_zero(std::size_t n, Random& rng) {
    std::vector<double> x(n);
    for (double& v : x) {
        const double mag = 0.1 + 0.9 * rng.uniform01();
        v = rng.uniform01() < 0.5 ? -mag : mag;
    }
    return Vector(std::move(x));
}

inline int cmd_check_gradients(double h, double tol, int perturbations, std::uint64_t seed, std::ostream& out) {
    Random rng(seed);
    int failures = 0;
    auto report = [&](const std::string& id, const Objective& obj, const std::vector<Vector>& points) {
        double worst = 0.0;
        for (const auto& x : points) worst = std::max(worst, check_gradient(obj, x, h));
        const bool ok = worst <= tol;
        failures += !ok;
        out << (ok ? "ok   " : "FAIL ") << id << "  max_rel_err " << detail::format_g17(worst) << "\n";
    };
    for (const auto& p : suite()) {
        std::vector<Vector> pts{p.x0};
        for (int i = 0; i < perturbations; ++i) pts.push_back(perturb(p.x0, rng));
        report(p.id(), p.objective, pts);
    }
    const auto reg = make_regression(RegressionParams{.seed = seed});
    std::vector<Vector> pts;
    for (int i = 0; i <= perturbations; ++i) pts.push_back(away_from_zero(reg.params.n, rng));
    report(reg.spec().id(), reg.objective(), pts);
    return failures == 0 ? exit_ok : 1;
}

/// Entry point shared by the executable and the tests.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nonlinear conjugate gradient toolkit"};
    app.set_config("--config", "", "flat key=value file presetting any flag");
    app.require_subcommand(1);
    unsigned workers = default_workers();
    app.add_option("--workers", workers, "parallel grid cells")->capture_default_str();

    SolverFlags flags;
    std::uint64_t seed = 42;
    int code = exit_ok;

    auto* run = app.add_subcommand("run", "solve one problem and write its trace");
    std::string problem, method = "mprp", linesearch = "interp", out_path;
    std::size_t dim = 10;
    run->add_option("--problem", problem, "problem name")->required();
    run->add_option("--dim", dim, "dimension (ignored by fixed-size problems)")->capture_default_str();
    run->add_option("--method", method, "direction rule")->capture_default_str();
    run->add_option("--linesearch", linesearch, "interp or bisect")->capture_default_str();
    run->add_option("--out", out_path, "trace CSV path");
    flags.attach(*run);

    auto* compare = app.add_subcommand("compare", "run a method x problem grid");
    std::string methods = "prp,prp+,prpy,mprp", selection = "suite", dims, cmp_ls = "interp",
                records_out = "records.csv";
    bool wall_time = false;
    compare->add_option("--methods", methods, "comma-separated rules")->capture_default_str();
    compare->add_option("--problems", selection, "'suite' or comma-separated names")->capture_default_str();
    compare->add_option("--dims", dims, "comma-separated dimensions (default 2,10,100)");
    compare->add_option("--linesearch", cmp_ls, "interp, bisect, both, or a list")->capture_default_str();
    compare->add_option("--out", records_out, "records CSV path")->capture_default_str();
    compare->add_flag("--wall-time", wall_time, "append the wall_time column");
    flags.attach(*compare);

    auto* prof = app.add_subcommand("profile", "performance profiles from a records CSV");
    std::string records_in, metric = "iterations", profile_out = "profile.csv", plot_out;
    prof->add_option("--records", records_in, "records CSV")->required();
    prof->add_option("--metric", metric, "iterations, f_evals, g_evals or wall_time")->capture_default_str();
    prof->add_option("--out", profile_out, "profile CSV path")->capture_default_str();
    prof->add_option("--plot-data", plot_out, "long-format step data path");

    auto* regress = app.add_subcommand("regress", "Lp-regularized regression experiment over seeds");
    RegressFlags rf;
    regress->add_option("--m", rf.m, "rows of A")->capture_default_str();
    regress->add_option("--n", rf.n, "columns of A")->capture_default_str();
    regress->add_option("--p", rf.p, "penalty power in (1, 2]")->capture_default_str();
    regress->add_option("--lambda", rf.lambda, "penalty weight")->capture_default_str();
    regress->add_option("--sparsity", rf.sparsity, "fraction of nonzeros in u")->capture_default_str();
    regress->add_option("--seeds", rf.seeds, "number of seeds")->capture_default_str();
    regress->add_option("--seed", seed, "first seed (default: NCG_SEED or 42)");
    regress->add_option("--methods", rf.methods, "comma-separated rules")->capture_default_str();
    regress->add_option("--linesearch", rf.linesearch, "interp, bisect, both")->capture_default_str();
    regress->add_option("--out", rf.out, "records CSV path")->capture_default_str();
    regress->add_option("--summary", rf.summary, "summary CSV path");
    regress->add_option("--export-dir", rf.export_dir, "write each instance as text");
    flags.attach(*regress);

    app.add_subcommand("list-problems", "list registered problems");

    auto* check = app.add_subcommand("check-gradients", "finite-difference check of every problem");
    double h = 1e-6, tol = 1e-6;
    int perturbations = 5;
    check->add_option("--step", h, "difference step")->capture_default_str();
    check->add_option("--tol", tol, "maximum relative error")->capture_default_str();
    check->add_option("--perturbations", perturbations, "random points per problem")->capture_default_str();
    check->add_option("--seed", seed, "perturbation seed (default: NCG_SEED or 42)");

    std::vector<const char*> argv{"ncg"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        seed = default_seed();
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, eo;
        const int rc = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return rc == 0 ? exit_ok : exit_usage;
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (*run) {
            code = cmd_run(problem, dim, method, linesearch, flags, out_path, out);
        } else if (*compare) {
            code = cmd_compare(methods, selection, dims, cmp_ls, flags, workers, wall_time, records_out, out);
        } else if (*prof) {
            code = cmd_profile(records_in, metric, profile_out, plot_out, out);
        } else if (*regress) {
            rf.seed = seed;
            code = cmd_regress(rf, flags, workers, out);
        } else if (app.got_subcommand("list-problems")) {
            code = cmd_list_problems(out);
        } else if (*check) {
            code = cmd_check_gradients(h, tol, perturbations, seed, out);
        }
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const config_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const io_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const incomplete_grid_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_solver_error;
    }
    return code;
}

}  // namespace ncg::cli
