#pragma once

#include "ncg/core.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ncg {

enum class ProblemFamily { Suite, Regression, Auxiliary };

struct ProblemSpec {
    std::string name;
    ProblemFamily family = ProblemFamily::Suite;
    Vector x0;
    Objective objective;
    std::string reference;

    [[nodiscard]] std::size_t dim() const noexcept { return objective.dim(); }
    /// name-dim, unique within a grid
    [[nodiscard]] std::string id() const { return name + "-" + std::to_string(dim()); }
};

namespace problems {

using Coords = std::vector<double>;

/// Description of a test function in terms of raw coordinate arrays.
struct Formula {
    std::string_view name;
    std::string_view reference;
    bool paired;                     ///< defined only for even n
    std::size_t fixed_dim;           ///< nonzero for fixed-size problems
    Coords (*start)(std::size_t n);  ///< standard start point
    double (*value)(const Coords& x);
    Coords (*gradient)(const Coords& x);
};

namespace detail {

inline Coords fill(std::size_t n, double v) { return Coords(n, v); }

inline Coords alternating(std::size_t n, double odd, double even) {
    Coords x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (i % 2 == 0) ? odd : even;
    return x;
}

inline double sq(double v) { return v * v; }

// --- Extended Rosenbrock -----------------------------------------------------
inline double rosen_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        f += 100.0 * sq(x[i + 1] - sq(x[i])) + sq(1.0 - x[i]);
    }
    return f;
}
inline Coords rosen_g(const Coords& x) {
    Coords g(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double t = x[i + 1] - sq(x[i]);
        g[i] = -400.0 * x[i] * t - 2.0 * (1.0 - x[i]);
        g[i + 1] = 200.0 * t;
    }
    return g;
}

// --- Extended White & Holst --------------------------------------------------
inline double white_holst_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        f += 100.0 * sq(x[i + 1] - x[i] * x[i] * x[i]) + sq(1.0 - x[i]);
    }
    return f;
}
inline Coords white_holst_g(const Coords& x) {
    Coords g(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double t = x[i + 1] - x[i] * x[i] * x[i];
        g[i] = -600.0 * x[i] * x[i] * t - 2.0 * (1.0 - x[i]);
        g[i + 1] = 200.0 * t;
    }
    return g;
}

// --- Extended Beale ----------------------------------------------------------
inline double beale_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double a = x[i], b = x[i + 1];
        f += sq(1.5 - a * (1.0 - b)) + sq(2.25 - a * (1.0 - b * b)) + sq(2.625 - a * (1.0 - b * b * b));
    }
    return f;
}
inline Coords beale_g(const Coords& x) {
    Coords g(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double a = x[i], b = x[i + 1];
        const double t1 = 1.5 - a * (1.0 - b);
        const double t2 = 2.25 - a * (1.0 - b * b);
        const double t3 = 2.625 - a * (1.0 - b * b * b);
        g[i] = -2.0 * (t1 * (1.0 - b) + t2 * (1.0 - b * b) + t3 * (1.0 - b * b * b));
        g[i + 1] = 2.0 * a * (t1 + 2.0 * b * t2 + 3.0 * b * b * t3);
    }
    return g;
}

// --- Extended Himmelblau -----------------------------------------------------
inline double himmelblau_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        f += sq(x[i] * x[i] + x[i + 1] - 11.0) + sq(x[i] + x[i + 1] * x[i + 1] - 7.0);
    }
    return f;
}
inline Coords himmelblau_g(const Coords& x) {
    Coords g(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double u = x[i] * x[i] + x[i + 1] - 11.0;
        const double v = x[i] + x[i + 1] * x[i + 1] - 7.0;
        g[i] = 4.0 * x[i] * u + 2.0 * v;
        g[i + 1] = 2.0 * u + 4.0 * x[i + 1] * v;
    }
    return g;
}

// --- Extended Tridiagonal 1 --------------------------------------------------
inline double tridiag1_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double u = x[i] + x[i + 1] - 3.0;
        const double v = x[i] - x[i + 1] + 1.0;
        f += u * u + v * v * v * v;
    }
    return f;
}
inline Coords tridiag1_g(const Coords& x) {
    Coords g(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        const double u = x[i] + x[i + 1] - 3.0;
        const double v = x[i] - x[i + 1] + 1.0;
        g[i] = 2.0 * u + 4.0 * v * v * v;
        g[i + 1] = 2.0 * u - 4.0 * v * v * v;
    }
    return g;
}

// --- Generalized Quartic -----------------------------------------------------
inline double gen_quartic_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        f += x[i] * x[i] + sq(x[i + 1] + x[i] * x[i]);
    }
    return f;
}
inline Coords gen_quartic_g(const Coords& x) {
    Coords g(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double t = x[i + 1] + x[i] * x[i];
        g[i] += 2.0 * x[i] + 4.0 * x[i] * t;
        g[i + 1] += 2.0 * t;
    }
    return g;
}

// --- Diagonal 1: sum exp(x_i) - i x_i ----------------------------------------
inline double diag1_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) f += std::exp(x[i]) - double(i + 1) * x[i];
    return f;
}
inline Coords diag1_g(const Coords& x) {
    Coords g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::exp(x[i]) - double(i + 1);
    return g;
}

// --- Diagonal 4: 1/2 sum (x_{2i-1}^2 + 100 x_{2i}^2) -------------------------
inline double diag4_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) f += 0.5 * (x[i] * x[i] + 100.0 * x[i + 1] * x[i + 1]);
    return f;
}
inline Coords diag4_g(const Coords& x) {
    Coords g(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
        g[i] = x[i];
        g[i + 1] = 100.0 * x[i + 1];
    }
    return g;
}

// --- Raydan 1: sum (i/10)(exp(x_i) - x_i) ------------------------------------
inline double raydan1_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) f += double(i + 1) / 10.0 * (std::exp(x[i]) - x[i]);
    return f;
}
inline Coords raydan1_g(const Coords& x) {
    Coords g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = double(i + 1) / 10.0 * (std::exp(x[i]) - 1.0);
    return g;
}

// --- Raydan 2: sum exp(x_i) - x_i --------------------------------------------
inline double raydan2_f(const Coords& x) {
    double f = 0.0;
    for (double v : x) f += std::exp(v) - v;
    return f;
}
inline Coords raydan2_g(const Coords& x) {
    Coords g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::exp(x[i]) - 1.0;
    return g;
}

// --- Quadratic QF1: 1/2 sum i x_i^2 - x_n ------------------------------------
inline double qf1_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) f += 0.5 * double(i + 1) * x[i] * x[i];
    return f - x.back();
}
inline Coords qf1_g(const Coords& x) {
    Coords g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = double(i + 1) * x[i];
    g.back() -= 1.0;
    return g;
}

// --- Quadratic QF2: 1/2 sum i (x_i^2 - 1)^2 - x_n ----------------------------
inline double qf2_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) f += 0.5 * double(i + 1) * sq(x[i] * x[i] - 1.0);
    return f - x.back();
}
inline Coords qf2_g(const Coords& x) {
    Coords g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * double(i + 1) * x[i] * (x[i] * x[i] - 1.0);
    g.back() -= 1.0;
    return g;
}

// --- Extended Penalty --------------------------------------------------------
inline double ext_penalty_f(const Coords& x) {
    double f = 0.0, s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i + 1 < x.size()) f += sq(x[i] - 1.0);
        s += x[i] * x[i];
    }
    return f + sq(s - 0.25);
}
inline Coords ext_penalty_g(const Coords& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    Coords g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        g[i] = 4.0 * (s - 0.25) * x[i];
        if (i + 1 < x.size()) g[i] += 2.0 * (x[i] - 1.0);
    }
    return g;
}
inline Coords ext_penalty_start(std::size_t n) {
    Coords x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = double(i + 1);
    return x;
}

// --- Perturbed Quadratic: sum i x_i^2 + (1/100)(sum x_i)^2 -------------------
inline double pert_quad_f(const Coords& x) {
    double f = 0.0, s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        f += double(i + 1) * x[i] * x[i];
        s += x[i];
    }
    return f + s * s / 100.0;
}
inline Coords pert_quad_g(const Coords& x) {
    double s = 0.0;
    for (double v : x) s += v;
    Coords g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * double(i + 1) * x[i] + s / 50.0;
    return g;
}

// --- Hager: sum exp(x_i) - sqrt(i) x_i ---------------------------------------
inline double hager_f(const Coords& x) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) f += std::exp(x[i]) - std::sqrt(double(i + 1)) * x[i];
    return f;
}
inline Coords hager_g(const Coords& x) {
    Coords g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = std::exp(x[i]) - std::sqrt(double(i + 1));
    return g;
}

// --- Extended Trigonometric --------------------------------------------------
// f = sum_i r_i^2, r_i = n - sum_j cos x_j + i (1 - cos x_i) - sin x_i
inline Coords trig_residuals(const Coords& x) {
    const double n = double(x.size());
    double c = 0.0;
    for (double v : x) c += std::cos(v);
    Coords r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        r[i] = n - c + double(i + 1) * (1.0 - std::cos(x[i])) - std::sin(x[i]);
    }
    return r;
}
inline double trig_f(const Coords& x) {
    double f = 0.0;
    for (double r : trig_residuals(x)) f += r * r;
    return f;
}
inline Coords trig_g(const Coords& x) {
    // dr_i/dx_j = sin x_j + delta_ij (i sin x_i - cos x_i)
    const Coords r = trig_residuals(x);
    double rsum = 0.0;
    for (double v : r) rsum += v;
    Coords g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        g[j] = 2.0 * (rsum * std::sin(x[j]) + r[j] * (double(j + 1) * std::sin(x[j]) - std::cos(x[j])));
    }
    return g;
}

// --- Wood (n = 4) ------------------------------------------------------------
inline double wood_f(const Coords& x) {
    return 100.0 * sq(x[1] - x[0] * x[0]) + sq(1.0 - x[0]) + 90.0 * sq(x[3] - x[2] * x[2]) + sq(1.0 - x[2]) +
           10.1 * (sq(x[1] - 1.0) + sq(x[3] - 1.0)) + 19.8 * (x[1] - 1.0) * (x[3] - 1.0);
}
inline Coords wood_g(const Coords& x) {
    const double a = x[1] - x[0] * x[0];
    const double b = x[3] - x[2] * x[2];
    return {-400.0 * x[0] * a - 2.0 * (1.0 - x[0]), 200.0 * a + 20.2 * (x[1] - 1.0) + 19.8 * (x[3] - 1.0),
            -360.0 * x[2] * b - 2.0 * (1.0 - x[2]), 180.0 * b + 20.2 * (x[3] - 1.0) + 19.8 * (x[1] - 1.0)};
}

// --- Powell singular (n = 4) -------------------------------------------------
inline double powell_f(const Coords& x) {
    return sq(x[0] + 10.0 * x[1]) + 5.0 * sq(x[2] - x[3]) + sq(sq(x[1] - 2.0 * x[2])) + 10.0 * sq(sq(x[0] - x[3]));
}
inline Coords powell_g(const Coords& x) {
    const double a = x[0] + 10.0 * x[1];
    const double b = x[2] - x[3];
    const double c = x[1] - 2.0 * x[2];
    const double e = x[0] - x[3];
    return {2.0 * a + 40.0 * e * e * e, 20.0 * a + 4.0 * c * c * c, 10.0 * b - 8.0 * c * c * c,
            -10.0 * b - 40.0 * e * e * e};
}

// --- Sphere (auxiliary) ------------------------------------------------------
inline double sphere_f(const Coords& x) {
    double f = 0.0;
    for (double v : x) f += 0.5 * v * v;
    return f;
}
inline Coords sphere_g(const Coords& x) { return x; }

}  // namespace detail

// clang-format off
inline const std::vector<Formula>& suite_formulas() {
    using namespace detail;
    static const std::vector<Formula> formulas{
        {"ext-rosenbrock", "sum 100(x2i - x2i-1^2)^2 + (1 - x2i-1)^2; x0 = (-1.2, 1, ...)", true, 0,
         [](std::size_t n) { return alternating(n, -1.2, 1.0); }, rosen_f, rosen_g},
        {"ext-white-holst", "sum 100(x2i - x2i-1^3)^2 + (1 - x2i-1)^2; x0 = (-1.2, 1, ...)", true, 0,
         [](std::size_t n) { return alternating(n, -1.2, 1.0); }, white_holst_f, white_holst_g},
        {"ext-beale", "sum (1.5 - a(1-b))^2 + (2.25 - a(1-b^2))^2 + (2.625 - a(1-b^3))^2; x0 = (1, 0.8, ...)", true, 0,
         [](std::size_t n) { return alternating(n, 1.0, 0.8); }, beale_f, beale_g},
        {"ext-himmelblau", "sum (a^2 + b - 11)^2 + (a + b^2 - 7)^2; x0 = (1, ...)", true, 0,
         [](std::size_t n) { return fill(n, 1.0); }, himmelblau_f, himmelblau_g},
        {"ext-tridiagonal-1", "sum (a + b - 3)^2 + (a - b + 1)^4; x0 = (2, ...)", true, 0,
         [](std::size_t n) { return fill(n, 2.0); }, tridiag1_f, tridiag1_g},
        {"gen-quartic", "sum_{i<n} x_i^2 + (x_{i+1} + x_i^2)^2; x0 = (1, ...)", false, 0,
         [](std::size_t n) { return fill(n, 1.0); }, gen_quartic_f, gen_quartic_g},
        {"diagonal-1", "sum exp(x_i) - i x_i; x0 = (1/n, ...)", false, 0,
         [](std::size_t n) { return fill(n, 1.0 / double(n)); }, diag1_f, diag1_g},
        {"diagonal-4", "1/2 sum x2i-1^2 + 100 x2i^2; x0 = (1, ...)", true, 0,
         [](std::size_t n) { return fill(n, 1.0); }, diag4_f, diag4_g},
        {"raydan-1", "sum (i/10)(exp(x_i) - x_i); x0 = (1, ...)", false, 0,
         [](std::size_t n) { return fill(n, 1.0); }, raydan1_f, raydan1_g},
        {"raydan-2", "sum exp(x_i) - x_i; x0 = (1, ...)", false, 0,
         [](std::size_t n) { return fill(n, 1.0); }, raydan2_f, raydan2_g},
        {"qf1", "1/2 sum i x_i^2 - x_n; x0 = (1, ...)", false, 0,
         [](std::size_t n) { return fill(n, 1.0); }, qf1_f, qf1_g},
        {"qf2", "1/2 sum i (x_i^2 - 1)^2 - x_n; x0 = (0.5, ...)", false, 0,
         [](std::size_t n) { return fill(n, 0.5); }, qf2_f, qf2_g},
        {"ext-penalty", "sum_{i<n} (x_i - 1)^2 + (sum x_j^2 - 1/4)^2; x0 = (1, 2, ..., n)", false, 0,
         ext_penalty_start, ext_penalty_f, ext_penalty_g},
        {"perturbed-quadratic", "sum i x_i^2 + (sum x_i)^2 / 100; x0 = (0.5, ...)", false, 0,
         [](std::size_t n) { return fill(n, 0.5); }, pert_quad_f, pert_quad_g},
        {"hager", "sum exp(x_i) - sqrt(i) x_i; x0 = (1, ...)", false, 0,
         [](std::size_t n) { return fill(n, 1.0); }, hager_f, hager_g},
        {"ext-trigonometric", "sum (n - sum cos x_j + i(1 - cos x_i) - sin x_i)^2; x0 = (0.2, ...)", false, 0,
         [](std::size_t n) { return fill(n, 0.2); }, trig_f, trig_g},
        {"wood", "Wood function; x0 = (-3, -1, -3, -1)", false, 4,
         [](std::size_t) { return Coords{-3.0, -1.0, -3.0, -1.0}; }, wood_f, wood_g},
        {"powell-singular", "Powell singular function; x0 = (3, -1, 0, 1)", false, 4,
         [](std::size_t) { return Coords{3.0, -1.0, 0.0, 1.0}; }, powell_f, powell_g},
    };
    return formulas;
}
// clang-format on

inline const Formula& sphere_formula() {
    static const Formula f{"sphere", "1/2 |x|^2; x0 = (1, ...)", false, 0,
                           [](std::size_t n) { return detail::fill(n, 1.0); }, detail::sphere_f, detail::sphere_g};
    return f;
}

inline constexpr std::size_t suite_dims[] = {2, 10, 100};

[[nodiscard]] inline Objective objective_of(const Formula& f, std::size_t n) {
    return Objective(std::string(f.name) + "-" + std::to_string(n), n,
                     [value = f.value](const Vector& x) { return value(x.raw()); },
                     [gradient = f.gradient](const Vector& x) { return gradient(x.raw()); });
}

[[nodiscard]] inline bool dimension_allowed(const Formula& f, std::size_t n) {
    if (f.fixed_dim != 0) return n == f.fixed_dim;
    if (n < 2) return false;
    return !f.paired || n % 2 == 0;
}

[[nodiscard]] inline ProblemSpec instantiate(const Formula& f, std::size_t n, ProblemFamily family) {
    if (!dimension_allowed(f, n)) {
        throw config_error(std::string(f.name) + ": dimension " + std::to_string(n) + " not supported");
    }
    return ProblemSpec{std::string(f.name), family, Vector(f.start(n)), objective_of(f, n), std::string(f.reference)};
}

[[nodiscard]] inline const Formula* find_formula(std::string_view name) {
    for (const auto& f : suite_formulas()) {
        if (f.name == name) return &f;
    }
    if (sphere_formula().name == name) return &sphere_formula();
    return nullptr;
}

}  // namespace problems

/// The benchmark suite: each scalable problem at n = 2, 10, 100 and the two
/// fixed-size problems at n = 4.
[[nodiscard]] inline std::vector<ProblemSpec> suite() {
    std::vector<ProblemSpec> out;
    for (const auto& f : problems::suite_formulas()) {
        if (f.fixed_dim != 0) {
            out.push_back(problems::instantiate(f, f.fixed_dim, ProblemFamily::Suite));
            continue;
        }
        for (std::size_t n : problems::suite_dims) {
            out.push_back(problems::instantiate(f, n, ProblemFamily::Suite));
        }
    }
    return out;
}

/// Any registered smooth problem (suite members plus "sphere") at dimension n.
/// A dimension of 0 selects the fixed size of fixed-size problems.
[[nodiscard]] inline std::optional<ProblemSpec> make_problem(std::string_view name, std::size_t n) {
    const auto* f = problems::find_formula(name);
    if (f == nullptr) return std::nullopt;
    if (f->fixed_dim != 0 && n == 0) n = f->fixed_dim;
    const auto family = (f == &problems::sphere_formula()) ? ProblemFamily::Auxiliary : ProblemFamily::Suite;
    return problems::instantiate(*f, n, family);
}

}  // namespace ncg
