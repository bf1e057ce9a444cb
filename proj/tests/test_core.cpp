#include "ncg/core.hpp"
#include "ncg/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace ncg;

namespace {

Objective sphere(std::size_t n) {
    return Objective(
        "sphere", n,
        [](const Vector& x) {
            double f = 0.0;
            for (double v : x) f += 0.5 * v * v;
            return f;
        },
        [](const Vector& x) { return x.raw(); });
}

Vector random_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> nd;
    std::vector<double> v(n);
    for (double& x : v) x = nd(rng);
    return Vector(std::move(v));
}

}  // namespace

TEST(Vector, RejectsNonFiniteCoordinates) {
    EXPECT_THROW(Vector({1.0, std::numeric_limits<double>::quiet_NaN()}), evaluation_error);
    EXPECT_THROW(Vector({std::numeric_limits<double>::infinity()}), evaluation_error);
    const double big = std::numeric_limits<double>::max();
    EXPECT_THROW((void)axpy(2.0, Vector{big}, Vector{big}), evaluation_error);
}

TEST(Dot, HandExamples) {
    EXPECT_EQ(dot(Vector{1, 0}, Vector{0, 2}), 0.0);
    EXPECT_EQ(dot(Vector{1, 2}, Vector{3, 4}), 11.0);
    EXPECT_THROW((void)dot(Vector{1, 2}, Vector{1, 2, 3}), dimension_error);
}

TEST(Norms, HandExamples) {
    EXPECT_EQ(norm2(Vector{3, 4}), 5.0);
    EXPECT_EQ(norm_inf(Vector{-2, 1}), 2.0);
    EXPECT_EQ(norm2(Vector(5, 0.0)), 0.0);
}

TEST(Axpy, HandExamples) {
    const Vector x{1.5, -2.0}, y{2.0, 3.0};
    EXPECT_EQ(axpy(0.0, x, y), y);
    EXPECT_EQ(axpy(1.0, Vector{1, 1}, Vector{2, 3}), (Vector{3, 4}));
    EXPECT_EQ(axpy(-1.0, x, x), Vector(2, 0.0));
    EXPECT_THROW((void)axpy(1.0, Vector{1}, Vector{1, 2}), dimension_error);
}

TEST(VectorAlgebra, BilinearityAndNormProperty) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> dim(1, 40);
    std::uniform_real_distribution<double> sc(-10.0, 10.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = dim(rng);
        const Vector a = random_vector(rng, n), b = random_vector(rng, n);
        const double s = sc(rng);
        const double lhs = dot(scale(s, a), b);
        const double rhs = s * dot(a, b);
        const double mag = std::abs(s) * norm2(a) * norm2(b);
        EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(mag, 1e-300));
        const double nn = norm2(a);
        EXPECT_LE(std::abs(nn * nn - dot(a, a)), 1e-12 * dot(a, a));
        EXPECT_GE(dot(a, a), 0.0);
    }
}

TEST(Objective, ValidatesEvaluations) {
    Objective bad("nan", 2, [](const Vector&) { return std::nan(""); },
                  [](const Vector&) { return std::vector<double>{0.0, 0.0}; });
    EXPECT_THROW((void)bad.value(Vector{1, 1}), evaluation_error);
    Objective short_grad("short", 2, [](const Vector&) { return 0.0; },
                         [](const Vector&) { return std::vector<double>{0.0}; });
    EXPECT_THROW((void)short_grad.gradient(Vector{1, 1}), dimension_error);
    EXPECT_THROW((void)sphere(2).value(Vector{1, 2, 3}), dimension_error);
}

TEST(CheckGradient, SphereIsExact) {
    EXPECT_LE(check_gradient(sphere(2), Vector{1, 2}, 1e-6), 1e-8);
}

// The difference quotient carries about ulp(f) / h of rounding, so the
// 1e-10 bound is checked where |f| stays small; at |f| ~ 10 the same
// rounding allows ~1e-9.
TEST(CheckGradient, LinearFunctionIsExactUpToRounding) {
    const Vector c{0.5, -3.0, 2.0};
    Objective lin("linear", 3, [c](const Vector& x) { return dot(c, x); }, [c](const Vector&) { return c.raw(); });
    for (const Vector& x : {Vector{0, 0, 0}, Vector{0.01, -0.02, 0.03}, Vector{-0.05, 0.01, 0.02}}) {
        EXPECT_LE(check_gradient(lin, x, 1e-6), 1e-10);
    }
    EXPECT_LE(check_gradient(lin, Vector{1, -2, 3}, 1e-6), 1e-8);
}

TEST(CheckGradient, RosenbrockAtStandardStart) {
    const auto p = make_problem("ext-rosenbrock", 2);
    ASSERT_TRUE(p);
    EXPECT_LE(check_gradient(p->objective, Vector{-1.2, 1.0}, 1e-6), 1e-6);
}

TEST(CheckGradient, DetectsWrongGradient) {
    Objective wrong("wrong", 1, [](const Vector& x) { return x[0] * x[0]; },
                    [](const Vector& x) { return std::vector<double>{x[0]}; });
    EXPECT_GT(check_gradient(wrong, Vector{3.0}, 1e-6), 0.4);
    EXPECT_THROW((void)check_gradient(wrong, Vector{3.0}, 0.0), config_error);
}
