#pragma once

#include "ncg/core.hpp"
#include "ncg/csv.hpp"
#include "ncg/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace ncg {

/// Seeded random source with fully specified output.
///
/// Built on std::mt19937_64, whose output sequence the standard fixes.
/// Distributions are spelled out here instead of using the <random>
/// distribution classes, which are implementation-defined:
///   uniform01: (next >> 11) * 2^-53, in [0, 1)
///   below(k):  floor(uniform01 * k)
///   normal:    Box-Muller, z = sqrt(-2 ln(1 - u1)) cos(2 pi u2), one draw per pair
class Random {
  public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t below(std::size_t k) {
        return std::min(k - 1, static_cast<std::size_t>(uniform01() * static_cast<double>(k)));
    }

    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    std::mt19937_64 engine_;
};

struct RegressionParams {
    std::size_t m = 10;
    std::size_t n = 50;
    double p = 1.5;
    double lambda = 0.01;
    double sparsity = 0.1;
    std::uint64_t seed = 42;

    void validate() const {
        if (m < 1 || n < 1) throw config_error("regression: m and n must be >= 1");
        if (!(p > 1.0 && p <= 2.0)) throw config_error("regression: p must lie in (1, 2]");
        if (!(lambda >= 0.0)) throw config_error("regression: lambda must be >= 0");
        if (!(sparsity > 0.0 && sparsity <= 1.0)) throw config_error("regression: sparsity must lie in (0, 1]");
    }
};

/// min 1/2 |A x - b|^2 + (lambda/2) sum |x_i|^p with b = A u.
///
/// For 1 < p < 2 the penalty gradient (lambda p / 2) sign(x_i) |x_i|^(p-1)
/// is continuous but not Lipschitz at x_i = 0; its value there is 0.
struct RegressionProblem {
    RegressionParams params;
    std::vector<double> a;  ///< m x n, row-major
    Vector b;
    Vector u;

    [[nodiscard]] double entry(std::size_t i, std::size_t j) const { return a[i * params.n + j]; }

    [[nodiscard]] std::vector<double> residual(const Vector& x) const {
        std::vector<double> r(params.m);
        for (std::size_t i = 0; i < params.m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < params.n; ++j) s += entry(i, j) * x[j];
            r[i] = s - b[i];
        }
        return r;
    }

    [[nodiscard]] double value(const Vector& x) const {
        double fit = 0.0;
        for (double r : residual(x)) fit += r * r;
        double pen = 0.0;
        for (double v : x) pen += std::pow(std::abs(v), params.p);
        return 0.5 * fit + 0.5 * params.lambda * pen;
    }

    /// Derivative of (lambda/2)|t|^p.
    [[nodiscard]] double penalty_derivative(double t) const {
        if (t == 0.0) return 0.0;
        const double mag = 0.5 * params.lambda * params.p * std::pow(std::abs(t), params.p - 1.0);
        return t > 0.0 ? mag : -mag;
    }

    [[nodiscard]] std::vector<double> gradient(const Vector& x) const {
        const auto r = residual(x);
        std::vector<double> g(params.n, 0.0);
        for (std::size_t i = 0; i < params.m; ++i) {
            for (std::size_t j = 0; j < params.n; ++j) g[j] += entry(i, j) * r[i];
        }
        for (std::size_t j = 0; j < params.n; ++j) g[j] += penalty_derivative(x[j]);
        return g;
    }

    [[nodiscard]] Objective objective() const {
        auto self = std::make_shared<const RegressionProblem>(*this);
        return Objective("regression-seed" + std::to_string(params.seed), params.n,
                         [self](const Vector& x) { return self->value(x); },
                         [self](const Vector& x) { return self->gradient(x); });
    }

    /// Registry entry starting from the origin.
    [[nodiscard]] ProblemSpec spec() const {
        return ProblemSpec{"regression-seed" + std::to_string(params.seed), ProblemFamily::Regression,
                           Vector(params.n, 0.0), objective(),
                           "1/2|Ax-b|^2 + (lambda/2)|x|_p^p, A ~ U[0,1], b = Au; x0 = 0"};
    }
};

/// Draws A row by row, then the support of u by partial Fisher-Yates over
/// 0..n-1, then the nonzero values of u in support order.
[[nodiscard]] inline RegressionProblem make_regression(const RegressionParams& params) {
    params.validate();
    Random rng(params.seed);
    RegressionProblem prob;
    prob.params = params;
    prob.a.resize(params.m * params.n);
    for (double& v : prob.a) v = rng.uniform01();

    const auto k = static_cast<std::size_t>(std::ceil(params.sparsity * static_cast<double>(params.n) - 1e-9));
    std::vector<std::size_t> idx(params.n);
    for (std::size_t i = 0; i < params.n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(idx[i], idx[i + rng.below(params.n - i)]);
    }
    std::vector<double> u(params.n, 0.0);
    for (std::size_t i = 0; i < k; ++i) u[idx[i]] = rng.normal();
    prob.u = Vector(std::move(u));

    std::vector<double> b(params.m, 0.0);
    for (std::size_t i = 0; i < params.m; ++i) {
        for (std::size_t j = 0; j < params.n; ++j) b[i] += prob.entry(i, j) * prob.u[j];
    }
    prob.b = Vector(std::move(b));
    return prob;
}

[[nodiscard]] inline RegressionProblem make_regression(std::size_t m, std::size_t n, double p, double lambda,
                                                       double sparsity, std::uint64_t seed) {
    return make_regression(RegressionParams{m, n, p, lambda, sparsity, seed});
}

namespace detail {

inline void write_row(std::ostream& os, std::span<const double> row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) os << ',';
        os << format_g17(row[j]);
    }
    os << '\n';
}

inline std::vector<double> parse_row(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

}  // namespace detail

/// Text export:
///   m,n,p,lambda,sparsity,seed   (header)
///   <values>
///   A                            followed by m CSV rows
///   b                            followed by one CSV row
///   u                            followed by one CSV row
inline void write_regression(std::ostream& os, const RegressionProblem& prob) {
    const auto& q = prob.params;
    os << "m,n,p,lambda,sparsity,seed\n"
       << q.m << ',' << q.n << ',' << detail::format_g17(q.p) << ',' << detail::format_g17(q.lambda) << ','
       << detail::format_g17(q.sparsity) << ',' << q.seed << '\n';
    os << "A\n";
    for (std::size_t i = 0; i < q.m; ++i) {
        detail::write_row(os, std::span<const double>(prob.a).subspan(i * q.n, q.n));
    }
    os << "b\n";
    detail::write_row(os, prob.b.values());
    os << "u\n";
    detail::write_row(os, prob.u.values());
}

[[nodiscard]] inline RegressionProblem read_regression(std::istream& is) {
    std::string line;
    auto next = [&]() -> std::string& {
        if (!std::getline(is, line)) throw io_error("regression file truncated");
        return line;
    };
    auto expect = [&](const char* tag) {
        if (next() != tag) throw io_error(std::string("regression file: expected '") + tag + "'");
    };
    expect("m,n,p,lambda,sparsity,seed");
    std::stringstream header(next());
    RegressionParams q;
    char c = 0;
    header >> q.m >> c >> q.n >> c >> q.p >> c >> q.lambda >> c >> q.sparsity >> c >> q.seed;
    if (!header) throw io_error("regression file: bad header");
    q.validate();

    RegressionProblem prob;
    prob.params = q;
    expect("A");
    for (std::size_t i = 0; i < q.m; ++i) {
        const auto row = detail::parse_row(next());
        if (row.size() != q.n) throw io_error("regression file: bad row length");
        prob.a.insert(prob.a.end(), row.begin(), row.end());
    }
    expect("b");
    prob.b = Vector(detail::parse_row(next()));
    expect("u");
    prob.u = Vector(detail::parse_row(next()));
    if (prob.b.size() != q.m || prob.u.size() != q.n) throw io_error("regression file: bad vector length");
    return prob;
}

}  // namespace ncg
