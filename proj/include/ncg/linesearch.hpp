#pragma once

#include "ncg/core.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ncg {

/// Armijo slope rho and curvature factor sigma, 0 < 2 rho < sigma < 1.
struct WolfeParams {
    double rho = 0.1;
    double sigma = 0.4;

    void validate() const {
        if (!(0.0 < 2.0 * rho && 2.0 * rho < sigma && sigma < 1.0)) {
            throw config_error("Wolfe parameters must satisfy 0 < 2*rho < sigma < 1");
        }
    }
};

// ---------------------------------------------------------------------------
// Condition checkers. Exact inequalities, no slack.

namespace detail {
inline void require_descent(double slope0) {
    if (!(slope0 < 0.0)) {
        throw non_descent_error("initial slope must be negative");
    }
}
}  // namespace detail

/// f(x + a d) <= f(x) + rho a <g, d>
[[nodiscard]] inline bool armijo_holds(double f0, double slope0, double alpha, double f_alpha, const WolfeParams& w) {
    detail::require_descent(slope0);
    return f_alpha <= f0 + w.rho * alpha * slope0;
}

/// <g(x + a d), d> >= sigma <g, d>
[[nodiscard]] inline bool curvature_holds(double slope0, double slope_alpha, const WolfeParams& w) {
    detail::require_descent(slope0);
    return slope_alpha >= w.sigma * slope0;
}

/// |<g(x + a d), d>| <= -sigma <g, d>
[[nodiscard]] inline bool strong_curvature_holds(double slope0, double slope_alpha, const WolfeParams& w) {
    detail::require_descent(slope0);
    return std::abs(slope_alpha) <= -w.sigma * slope0;
}

/// Goldstein lower bound f(x + a d) >= f(x) + (1 - rho) a <g, d>
[[nodiscard]] inline bool goldstein_lower_holds(double f0, double slope0, double alpha, double f_alpha,
                                                const WolfeParams& w) {
    detail::require_descent(slope0);
    return f_alpha >= f0 + (1.0 - w.rho) * alpha * slope0;
}

// ---------------------------------------------------------------------------

/// Interval [a_lo, a_hi] known to contain a Wolfe step.
///
/// a_lo passes the Armijo test but fails the curvature test (so slope_lo is
/// steeper than sigma * slope0); a_hi fails the Armijo test.
struct Bracket {
    double a_lo = 0.0;
    double a_hi = 0.0;
    double f_lo = 0.0;
    double slope_lo = 0.0;
    double f_hi = 0.0;

    [[nodiscard]] double width() const noexcept { return a_hi - a_lo; }
};

/// eta = sigma / (2 (sigma - rho)); lies in (1/2, 1) for valid Wolfe parameters.
struct SafeguardConstant {
    double eta;

    [[nodiscard]] static SafeguardConstant from(const WolfeParams& w) {
        return SafeguardConstant{w.sigma / (2.0 * (w.sigma - w.rho))};
    }
};

struct LineSearchResult {
    double alpha = 0.0;
    Vector x_new;
    double f_new = 0.0;
    Vector g_new;
    int inner_iters = 0;  ///< trial points examined after the initial bracket
    int f_evals = 0;
    int g_evals = 0;
    std::vector<double> widths;  ///< bracket width before each trial
};

enum class LineSearchKind { Interp, Bisect };

[[nodiscard]] inline std::string_view to_string(LineSearchKind k) {
    return k == LineSearchKind::Interp ? "interp" : "bisect";
}

[[nodiscard]] inline std::optional<LineSearchKind> parse_linesearch(std::string_view s) {
    if (s == "interp") return LineSearchKind::Interp;
    if (s == "bisect") return LineSearchKind::Bisect;
    return std::nullopt;
}

inline constexpr int max_bracket_doublings = 60;
inline constexpr int max_line_search_iters = 100;

namespace detail {

/// Evaluation counter bound to one ray x + a d.
class Ray {
  public:
    Ray(const Objective& obj, const Vector& x, const Vector& d) : obj_(obj), x_(x), d_(d) {}

    [[nodiscard]] Vector point(double a) const { return axpy(a, d_, x_); }

    double value(const Vector& p) {
        ++f_evals;
        return obj_.value(p);
    }

    Vector gradient(const Vector& p) {
        ++g_evals;
        return obj_.gradient(p);
    }

    [[nodiscard]] const Vector& direction() const noexcept { return d_; }

    int f_evals = 0;
    int g_evals = 0;

  private:
    const Objective& obj_;
    const Vector& x_;
    const Vector& d_;
};

inline Bracket initial_bracket(Ray& ray, double f0, double slope0, const WolfeParams& w) {
    const double eta = SafeguardConstant::from(w).eta;
    double alpha = eta;
    for (int p = 0; p <= max_bracket_doublings; ++p, alpha *= 2.0) {
        const double fa = ray.value(ray.point(alpha));
        if (!armijo_holds(f0, slope0, alpha, fa, w)) {
            return Bracket{0.0, alpha, f0, slope0, fa};
        }
    }
    throw unbounded_descent_error("Armijo condition never failed; objective may be unbounded along d");
}

}  // namespace detail

/// Doubles a = eta 2^p, p = 0, 1, ..., until the Armijo test first fails and
/// returns [0, a_fail]. Only function values are evaluated.
[[nodiscard]] inline Bracket initial_bracket(const Objective& obj, const Vector& x, double f0, const Vector& g0,
                                             const Vector& d, const WolfeParams& w) {
    const double slope0 = dot(g0, d);
    detail::require_descent(slope0);
    detail::Ray ray(obj, x, d);
    return detail::initial_bracket(ray, f0, slope0, w);
}

/// Minimiser of the quadratic through (a_lo, f_lo) with slope slope_lo and
/// through (a_hi, f_hi).
[[nodiscard]] inline double interp_min(const Bracket& b) {
    const double delta = b.a_hi - b.a_lo;
    const double num = -delta * b.slope_lo;
    const double den = b.f_hi - b.f_lo - delta * b.slope_lo;
    if (!(den > 0.0) || !(num > 0.0)) {
        throw bracket_corruption_error("interpolant has no interior minimiser");
    }
    return b.a_lo + 0.5 * delta * (num / den);
}

/// max{c, eta a_lo + (1 - eta) a_hi}
[[nodiscard]] inline double safeguard(double c, const Bracket& b, const SafeguardConstant& sg) {
    return std::max(c, sg.eta * b.a_lo + (1.0 - sg.eta) * b.a_hi);
}

namespace detail {

inline void check_bracket(const Bracket& b, double f0, double slope0, const WolfeParams& w) {
    const bool ok = 0.0 <= b.a_lo && b.a_lo < b.a_hi && armijo_holds(f0, slope0, b.a_lo, b.f_lo, w) &&
                    !curvature_holds(slope0, b.slope_lo, w) && !armijo_holds(f0, slope0, b.a_hi, b.f_hi, w);
    if (!ok) {
        throw bracket_corruption_error("bracket invariant violated");
    }
}

/// Upper bound on the interpolation ratio implied by the bracket conditions.
inline void check_interp_ratio(const Bracket& b, const WolfeParams& w) {
    const double delta = b.width();
    const double ratio = (-delta * b.slope_lo) / (b.f_hi - b.f_lo - delta * b.slope_lo);
    if (!(ratio > 0.0 && ratio < w.sigma / (w.sigma - w.rho))) {
        throw bracket_corruption_error("interpolation ratio outside (0, sigma/(sigma-rho))");
    }
}

template <typename TrialRule>
LineSearchResult wolfe_search(const Objective& obj, const Vector& x, double f0, const Vector& g0, const Vector& d,
                              const WolfeParams& w, TrialRule&& trial) {
    w.validate();
    const double slope0 = dot(g0, d);
    require_descent(slope0);

    Ray ray(obj, x, d);
    Bracket b = initial_bracket(ray, f0, slope0, w);

    LineSearchResult out;
    for (int iter = 1; iter <= max_line_search_iters; ++iter) {
        check_bracket(b, f0, slope0, w);
        const double width = b.width();
        out.widths.push_back(width);
        if (width < 1e-16 * std::max(1.0, b.a_hi)) {
            throw line_search_stall("line search bracket collapsed", b.a_lo);
        }

        const double a = trial(b);
        Vector xa = ray.point(a);
        const double fa = ray.value(xa);
        if (!armijo_holds(f0, slope0, a, fa, w)) {
            b.a_hi = a;
            b.f_hi = fa;
            continue;
        }
        Vector ga = ray.gradient(xa);
        const double slope = dot(ga, d);
        if (curvature_holds(slope0, slope, w)) {
            out.alpha = a;
            out.x_new = std::move(xa);
            out.f_new = fa;
            out.g_new = std::move(ga);
            out.inner_iters = iter;
            out.f_evals = ray.f_evals;
            out.g_evals = ray.g_evals;
            return out;
        }
        b.a_lo = a;
        b.f_lo = fa;
        b.slope_lo = slope;
    }
    throw line_search_stall("line search iteration cap exceeded", b.a_lo);
}

}  // namespace detail

/// Weak-Wolfe line search by safeguarded quadratic interpolation.
///
/// Each trial is max{c, eta a_lo + (1 - eta) a_hi} where c minimises the
/// quadratic model of the bracket. A trial failing Armijo becomes the new
/// upper end (no gradient is evaluated); a trial passing Armijo but failing
/// curvature becomes the new lower end. The bracket shrinks by at least eta
/// per step.
[[nodiscard]] inline LineSearchResult wolfe_search_interp(const Objective& obj, const Vector& x, double f0,
                                                          const Vector& g0, const Vector& d, const WolfeParams& w) {
    const auto sg = SafeguardConstant::from(w);
    return detail::wolfe_search(obj, x, f0, g0, d, w, [&](const Bracket& b) {
        detail::check_interp_ratio(b, w);
        return safeguard(interp_min(b), b, sg);
    });
}

/// Same bracketing and acceptance as wolfe_search_interp with midpoint trials.
[[nodiscard]] inline LineSearchResult wolfe_search_bisect(const Objective& obj, const Vector& x, double f0,
                                                          const Vector& g0, const Vector& d, const WolfeParams& w) {
    return detail::wolfe_search(obj, x, f0, g0, d, w, [](const Bracket& b) { return 0.5 * (b.a_lo + b.a_hi); });
}

[[nodiscard]] inline LineSearchResult wolfe_search(LineSearchKind kind, const Objective& obj, const Vector& x,
                                                   double f0, const Vector& g0, const Vector& d,
                                                   const WolfeParams& w) {
    return kind == LineSearchKind::Interp ? wolfe_search_interp(obj, x, f0, g0, d, w)
                                          : wolfe_search_bisect(obj, x, f0, g0, d, w);
}

}  // namespace ncg
