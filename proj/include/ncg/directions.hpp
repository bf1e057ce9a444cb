#pragma once

#include "ncg/core.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace ncg {

/// Parameters shared by the curvature-corrected rules.
struct DirectionParams {
    double nu = 0.8;       ///< curvature weight for MPRP and PRP-Y; must exceed 1/4
    double kappa = 10.0;   ///< MPRP cap on beta * |d| / |g_next|
    double eta_hz = 0.01;  ///< lower-clamp constant of the Hager-Zhang rule

    void validate() const {
        if (!(nu > 0.25)) throw config_error("nu must be > 1/4");
        if (!(kappa > 0.0)) throw config_error("kappa must be > 0");
        if (!(eta_hz > 0.0)) throw config_error("eta_hz must be > 0");
    }
};

/// Gradients at x_k, x_{k+1} and the previous direction d_k.
struct DirectionInputs {
    const Vector& g_prev;
    const Vector& g_next;
    const Vector& d_prev;
};

enum class Method { FR, HS, PRP, PRPPlus, DY, HZ, PRPY, MPRP };

inline constexpr std::array<Method, 8> all_methods{Method::FR,  Method::HS, Method::PRP,  Method::PRPPlus,
                                                   Method::DY,  Method::HZ, Method::PRPY, Method::MPRP};

[[nodiscard]] inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::FR: return "fr";
        case Method::HS: return "hs";
        case Method::PRP: return "prp";
        case Method::PRPPlus: return "prp+";
        case Method::DY: return "dy";
        case Method::HZ: return "hz";
        case Method::PRPY: return "prpy";
        case Method::MPRP: return "mprp";
    }
    return "?";
}

[[nodiscard]] inline std::optional<Method> parse_method(std::string_view s) {
    for (Method m : all_methods) {
        if (to_string(m) == s) return m;
    }
    if (s == "prp-y") return Method::PRPY;
    if (s == "prpplus") return Method::PRPPlus;
    return std::nullopt;
}

namespace detail {

struct DirectionTerms {
    Vector y;
    double gprev_sq;
    double gnext_sq;
};

inline DirectionTerms direction_terms(const DirectionInputs& in) {
    detail::require_same_size(in.g_prev, in.g_next, "direction");
    detail::require_same_size(in.g_prev, in.d_prev, "direction");
    const double gprev_sq = dot(in.g_prev, in.g_prev);
    if (!(gprev_sq > 0.0)) {
        throw degenerate_direction_error("previous gradient is zero");
    }
    if (!(norm2(in.d_prev) > 0.0)) {
        throw degenerate_direction_error("previous direction is zero");
    }
    return {in.g_next - in.g_prev, gprev_sq, dot(in.g_next, in.g_next)};
}

inline double checked_ratio(double num, double den, const char* rule) {
    if (den == 0.0) {
        throw degenerate_direction_error(std::string(rule) + ": <d_k, y_k> is zero");
    }
    const double r = num / den;
    if (!std::isfinite(r)) {
        throw degenerate_direction_error(std::string(rule) + ": non-finite coefficient");
    }
    return r;
}

}  // namespace detail

[[nodiscard]] inline double beta_fr(const DirectionInputs& in) {
    const auto t = detail::direction_terms(in);
    return t.gnext_sq / t.gprev_sq;
}

[[nodiscard]] inline double beta_hs(const DirectionInputs& in) {
    const auto t = detail::direction_terms(in);
    return detail::checked_ratio(dot(in.g_next, t.y), dot(in.d_prev, t.y), "hs");
}

[[nodiscard]] inline double beta_prp(const DirectionInputs& in) {
    const auto t = detail::direction_terms(in);
    return dot(in.g_next, t.y) / t.gprev_sq;
}

/// Dai-Yuan: |g_{k+1}|^2 / <d_k, y_k>.
[[nodiscard]] inline double beta_dy(const DirectionInputs& in) {
    const auto t = detail::direction_terms(in);
    return detail::checked_ratio(t.gnext_sq, dot(in.d_prev, t.y), "dy");
}

[[nodiscard]] inline double beta_prp_plus(const DirectionInputs& in) { return std::max(beta_prp(in), 0.0); }

[[nodiscard]] inline double beta_hz(const DirectionInputs& in, const DirectionParams& p) {
    const auto t = detail::direction_terms(in);
    const double dy = dot(in.d_prev, t.y);
    if (dy == 0.0) {
        throw degenerate_direction_error("hz: <d_k, y_k> is zero");
    }
    const double hs = dot(in.g_next, t.y) / dy;
    const double corrected = hs - 2.0 * dot(t.y, t.y) * dot(in.g_next, in.d_prev) / (dy * dy);
    const double floor = -1.0 / (norm2(in.d_prev) * std::min(p.eta_hz, std::sqrt(t.gprev_sq)));
    const double beta = std::max(corrected, floor);
    if (!std::isfinite(beta)) {
        throw degenerate_direction_error("hz: non-finite coefficient");
    }
    return beta;
}

[[nodiscard]] inline double beta_prp_y(const DirectionInputs& in, const DirectionParams& p) {
    const auto t = detail::direction_terms(in);
    const double prp = dot(in.g_next, t.y) / t.gprev_sq;
    const double correction = p.nu * dot(t.y, t.y) * dot(in.g_next, in.d_prev) / (t.gprev_sq * t.gprev_sq);
    return std::max(prp - correction, 0.0);
}

/// Upper cap kappa * |g_{k+1}| / |d_k| applied by the MPRP rule.
[[nodiscard]] inline double mprp_cap(const DirectionInputs& in, const DirectionParams& p) {
    return p.kappa * norm2(in.g_next) / norm2(in.d_prev);
}

/// Modified PRP coefficient.
///
///   beta = min{ max(<g_{k+1}, y_k - (nu |y_k|^2 / |g_k|^2) d_k>, 0) / |g_k|^2,
///               kappa |g_{k+1}| / |d_k| }
///
/// The result always lies in [0, cap], which makes
/// <d_{k+1}, g_{k+1}> <= -mu |d_{k+1}| |g_{k+1}| hold for every input with
/// mu = mu_of(p).
[[nodiscard]] inline double beta_mprp(const DirectionInputs& in, const DirectionParams& p) {
    const auto t = detail::direction_terms(in);
    const Vector shifted = axpy(-p.nu * dot(t.y, t.y) / t.gprev_sq, in.d_prev, t.y);
    const double candidate = std::max(dot(in.g_next, shifted), 0.0) / t.gprev_sq;
    return std::min(candidate, mprp_cap(in, p));
}

/// -g_{k+1} + beta d_k
[[nodiscard]] inline Vector next_direction(const DirectionInputs& in, double beta) {
    if (!std::isfinite(beta)) {
        throw degenerate_direction_error("non-finite beta");
    }
    return axpy(beta, in.d_prev, -in.g_next);
}

/// Angle constant (4 nu - 1) / (4 nu (1 + kappa)) guaranteed by the MPRP rule.
[[nodiscard]] inline double mu_of(const DirectionParams& p) {
    return (4.0 * p.nu - 1.0) / (4.0 * p.nu * (1.0 + p.kappa));
}

[[nodiscard]] inline double compute_beta(Method m, const DirectionInputs& in, const DirectionParams& p) {
    switch (m) {
        case Method::FR: return beta_fr(in);
        case Method::HS: return beta_hs(in);
        case Method::PRP: return beta_prp(in);
        case Method::PRPPlus: return beta_prp_plus(in);
        case Method::DY: return beta_dy(in);
        case Method::HZ: return beta_hz(in, p);
        case Method::PRPY: return beta_prp_y(in, p);
        case Method::MPRP: return beta_mprp(in, p);
    }
    throw config_error("unknown method");
}

}  // namespace ncg
