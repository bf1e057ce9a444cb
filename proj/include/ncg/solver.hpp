#pragma once

#include "ncg/core.hpp"
#include "ncg/csv.hpp"
#include "ncg/directions.hpp"
#include "ncg/linesearch.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ncg {

struct SolverConfig {
    double epsilon = 1e-5;  ///< stop when |g|_inf < epsilon
    int max_iters = 20000;
    WolfeParams wolfe{};
    DirectionParams dirparams{};
    Method method = Method::MPRP;
    LineSearchKind linesearch = LineSearchKind::Interp;

    void validate() const {
        if (!(epsilon > 0.0)) throw config_error("epsilon must be > 0");
        if (max_iters < 1) throw config_error("max_iters must be >= 1");
        wolfe.validate();
        dirparams.validate();
    }
};

enum class SolverStatus { Converged, MaxIters, LineSearchStall, EvaluationError };

[[nodiscard]] inline std::string_view to_string(SolverStatus s) {
    switch (s) {
        case SolverStatus::Converged: return "converged";
        case SolverStatus::MaxIters: return "max_iters";
        case SolverStatus::LineSearchStall: return "line_search_stall";
        case SolverStatus::EvaluationError: return "evaluation_error";
    }
    return "?";
}

/// How the direction for the next iteration was produced.
enum class BetaKind {
    Value,    ///< conjugate update with the recorded beta
    Restart,  ///< steepest-descent restart (degenerate rule or failed descent guard)
    None,     ///< no further direction (run ended after this step)
};

struct IterationRecord {
    int k = 0;
    double f = 0.0;          ///< f(x_k) after the step
    double gnorm_inf = 0.0;  ///< |g(x_k)|_inf after the step
    double alpha = 0.0;
    double slope = 0.0;      ///< <g_{k-1}, d_{k-1}> along the accepted step
    double beta = 0.0;
    BetaKind beta_kind = BetaKind::None;
    int ls_iters = 0;
    long f_evals = 0;  ///< cumulative, including the initial evaluation
    long g_evals = 0;
};

struct SolverTrace {
    std::vector<IterationRecord> records;
    SolverStatus status = SolverStatus::MaxIters;
    std::string message;
    Vector x_final;
    double f_initial = 0.0;
    double f_final = 0.0;
    double gnorm_final = 0.0;
    int descent_restarts = 0;     ///< descent guard rejected the conjugate direction
    int degenerate_restarts = 0;  ///< beta rule hit a zero denominator

    [[nodiscard]] int iterations() const noexcept { return static_cast<int>(records.size()); }
    [[nodiscard]] long f_evals() const noexcept { return records.empty() ? 1 : records.back().f_evals; }
    [[nodiscard]] long g_evals() const noexcept { return records.empty() ? 1 : records.back().g_evals; }
};

/// Data handed to a SolveObserver after every accepted line search.
struct LineSearchEvent {
    const Vector& x;
    double f0;
    const Vector& g0;
    const Vector& d;
    const LineSearchResult& result;
};

using SolveObserver = std::function<void(const LineSearchEvent&)>;

/// <d, g> <= -mu |d| |g|, with a relative slack of 1e-10 |d| |g|.
[[nodiscard]] inline bool descent_guard(const Vector& g, const Vector& d, double mu) {
    const double scale = norm2(d) * norm2(g);
    return dot(d, g) <= -mu * scale + 1e-10 * scale;
}

/// Nonlinear conjugate gradient driver.
///
/// Starts from d = -g(x0); each iteration runs the configured Wolfe line
/// search, tests |g|_inf < epsilon, and otherwise forms the next direction
/// with the configured beta rule. A zero-denominator rule or a direction
/// failing the descent guard is replaced by -g. For MPRP the guard uses
/// mu_of(dirparams); for the other rules it only demands <d, g> < 0.
[[nodiscard]] inline SolverTrace minimize(const Objective& obj, const Vector& x0, const SolverConfig& cfg,
                                          const SolveObserver& observer = {}) {
    cfg.validate();
    if (x0.size() != obj.dim()) {
        throw dimension_error("minimize: start point has wrong dimension");
    }

    SolverTrace trace;
    trace.x_final = x0;
    Vector x = x0;
    double f = 0.0;
    Vector g;
    try {
        f = obj.value(x);
        g = obj.gradient(x);
    } catch (const evaluation_error& e) {
        trace.status = SolverStatus::EvaluationError;
        trace.message = e.what();
        return trace;
    }
    trace.f_initial = f;
    trace.f_final = f;
    trace.gnorm_final = norm_inf(g);
    if (trace.gnorm_final < cfg.epsilon) {
        trace.status = SolverStatus::Converged;
        return trace;
    }

    const double mu = cfg.method == Method::MPRP ? mu_of(cfg.dirparams) : 0.0;
    long f_evals = 1;
    long g_evals = 1;
    Vector d = -g;

    for (int k = 1; k <= cfg.max_iters; ++k) {
        LineSearchResult ls;
        try {
            ls = wolfe_search(cfg.linesearch, obj, x, f, g, d, cfg.wolfe);
        } catch (const evaluation_error& e) {
            trace.status = SolverStatus::EvaluationError;
            trace.message = e.what();
            return trace;
        } catch (const error& e) {
            // stall, unbounded descent or bracket corruption
            trace.status = SolverStatus::LineSearchStall;
            trace.message = e.what();
            return trace;
        }
        if (observer) {
            observer(LineSearchEvent{x, f, g, d, ls});
        }

        IterationRecord rec;
        rec.k = k;
        rec.alpha = ls.alpha;
        rec.slope = dot(g, d);
        rec.ls_iters = ls.inner_iters;
        f_evals += ls.f_evals;
        g_evals += ls.g_evals;
        rec.f_evals = f_evals;
        rec.g_evals = g_evals;
        rec.f = ls.f_new;
        rec.gnorm_inf = norm_inf(ls.g_new);

        Vector g_prev = std::move(g);
        x = std::move(ls.x_new);
        f = ls.f_new;
        g = std::move(ls.g_new);
        trace.x_final = x;
        trace.f_final = f;
        trace.gnorm_final = rec.gnorm_inf;

        if (rec.gnorm_inf < cfg.epsilon) {
            trace.records.push_back(rec);
            trace.status = SolverStatus::Converged;
            return trace;
        }

        std::optional<Vector> next;
        try {
            const DirectionInputs in{g_prev, g, d};
            const double beta = compute_beta(cfg.method, in, cfg.dirparams);
            Vector candidate = next_direction(in, beta);
            const bool descent = cfg.method == Method::MPRP ? descent_guard(g, candidate, mu) && dot(g, candidate) < 0.0
                                                            : dot(g, candidate) < 0.0;
            if (descent) {
                rec.beta = beta;
                rec.beta_kind = BetaKind::Value;
                next = std::move(candidate);
            } else {
                ++trace.descent_restarts;
            }
        } catch (const degenerate_direction_error&) {
            ++trace.degenerate_restarts;
        } catch (const evaluation_error&) {
            ++trace.degenerate_restarts;  // overflow in -g + beta d
        }
        if (next) {
            d = std::move(*next);
        } else {
            rec.beta_kind = BetaKind::Restart;
            d = -g;
        }
        trace.records.push_back(rec);
    }
    trace.status = SolverStatus::MaxIters;
    return trace;
}

/// CSV with columns k,f,gnorm_inf,alpha,beta,ls_iters,f_evals,g_evals.
/// beta is "restart" for steepest-descent restarts and empty when no
/// direction followed the step.
inline void write_trace_csv(std::ostream& os, const SolverTrace& trace) {
    os << "k,f,gnorm_inf,alpha,beta,ls_iters,f_evals,g_evals\n";
    for (const auto& r : trace.records) {
        os << r.k << ',' << detail::format_g17(r.f) << ',' << detail::format_g17(r.gnorm_inf) << ','
           << detail::format_g17(r.alpha) << ',';
        switch (r.beta_kind) {
            case BetaKind::Value: os << detail::format_g17(r.beta); break;
            case BetaKind::Restart: os << "restart"; break;
            case BetaKind::None: break;
        }
        os << ',' << r.ls_iters << ',' << r.f_evals << ',' << r.g_evals << '\n';
    }
}

}  // namespace ncg
