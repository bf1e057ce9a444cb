#pragma once

#include "ncg/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ncg {

/// Dense real vector whose coordinates are always finite.
///
/// The length is fixed at construction. Every operation producing a new
/// Vector re-validates finiteness and throws evaluation_error otherwise, so a
/// NaN or Inf can never travel silently through the solver.
class Vector {
  public:
    Vector() = default;

    explicit Vector(std::size_t n, double fill = 0.0) : coords_(n, fill) { validate(); }

    Vector(std::initializer_list<double> values) : coords_(values) { validate(); }

    explicit Vector(std::vector<double> values) : coords_(std::move(values)) { validate(); }

    [[nodiscard]] std::size_t size() const noexcept { return coords_.size(); }
    [[nodiscard]] bool empty() const noexcept { return coords_.empty(); }

    [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }

    [[nodiscard]] std::span<const double> values() const noexcept { return coords_; }
    [[nodiscard]] const std::vector<double>& raw() const noexcept { return coords_; }

    [[nodiscard]] auto begin() const noexcept { return coords_.begin(); }
    [[nodiscard]] auto end() const noexcept { return coords_.end(); }

    /// Copy with coordinate i replaced.
    [[nodiscard]] Vector with(std::size_t i, double value) const {
        std::vector<double> c = coords_;
        c.at(i) = value;
        return Vector(std::move(c));
    }

    friend bool operator==(const Vector&, const Vector&) = default;

  private:
    void validate() const {
        for (double v : coords_) {
            if (!std::isfinite(v)) {
                throw evaluation_error("non-finite vector coordinate");
            }
        }
    }

    std::vector<double> coords_;
};

namespace detail {

inline void require_same_size(const Vector& a, const Vector& b, const char* op) {
    if (a.size() != b.size()) {
        throw dimension_error(std::string(op) + ": length mismatch (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    }
}

}  // namespace detail

[[nodiscard]] inline double dot(const Vector& a, const Vector& b) {
    detail::require_same_size(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

[[nodiscard]] inline double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

[[nodiscard]] inline double norm_inf(const Vector& a) {
    double m = 0.0;
    for (double v : a) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

/// y + alpha * x
[[nodiscard]] inline Vector axpy(double alpha, const Vector& x, const Vector& y) {
    detail::require_same_size(x, y, "axpy");
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = y[i] + alpha * x[i];
    }
    return Vector(std::move(out));
}

[[nodiscard]] inline Vector scale(double alpha, const Vector& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = alpha * x[i];
    }
    return Vector(std::move(out));
}

[[nodiscard]] inline Vector operator-(const Vector& a, const Vector& b) { return axpy(-1.0, b, a); }
[[nodiscard]] inline Vector operator-(const Vector& a) { return scale(-1.0, a); }

/// A differentiable function R^n -> R.
///
/// The callables must be pure. value() and gradient() check the results and
/// raise evaluation_error on NaN/Inf or a gradient of the wrong length.
class Objective {
  public:
    using ValueFn = std::function<double(const Vector&)>;
    using GradientFn = std::function<std::vector<double>(const Vector&)>;

    Objective(std::string name, std::size_t dim, ValueFn value, GradientFn gradient)
        : name_(std::move(name)), dim_(dim), value_(std::move(value)), gradient_(std::move(gradient)) {
        if (dim_ == 0) {
            throw config_error("objective dimension must be positive");
        }
    }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    [[nodiscard]] double value(const Vector& x) const {
        check_input(x);
        const double f = value_(x);
        if (!std::isfinite(f)) {
            throw evaluation_error(name_ + ": non-finite function value");
        }
        return f;
    }

    [[nodiscard]] Vector gradient(const Vector& x) const {
        check_input(x);
        std::vector<double> g = gradient_(x);
        if (g.size() != dim_) {
            throw dimension_error(name_ + ": gradient has wrong length");
        }
        for (double v : g) {
            if (!std::isfinite(v)) {
                throw evaluation_error(name_ + ": non-finite gradient");
            }
        }
        return Vector(std::move(g));
    }

  private:
    void check_input(const Vector& x) const {
        if (x.size() != dim_) {
            throw dimension_error(name_ + ": expected dimension " + std::to_string(dim_) + ", got " +
                                  std::to_string(x.size()));
        }
    }

    std::string name_;
    std::size_t dim_;
    ValueFn value_;
    GradientFn gradient_;
};

/// Largest per-coordinate discrepancy between the analytic gradient and a
/// central difference with step h, relative to max(1, |g_i|).
[[nodiscard]] inline double check_gradient(const Objective& obj, const Vector& x, double h) {
    if (!(h > 0.0)) {
        throw config_error("check_gradient: step must be positive");
    }
    const Vector g = obj.gradient(x);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        // divide by the step actually taken after rounding x_i +- h
        const double up = x[i] + h;
        const double down = x[i] - h;
        const double fd = (obj.value(x.with(i, up)) - obj.value(x.with(i, down))) / (up - down);
        const double err = std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i]));
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace ncg
