#include "ncg/problems.hpp"
#include "ncg/regression.hpp"
#include "ncg/solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace ncg;

namespace {

// x0_i + 0.1 max(1, |x0_i|) z with z uniform in [-1, 1)
Vector perturb(const Vector& x0, Random& rng) {
    std::vector<double> x(x0.begin(), x0.end());
    for (double& v : x) v += 0.1 * std::max(1.0, std::abs(v)) * (2.0 * rng.uniform01() - 1.0);
    return Vector(std::move(x));
}

// Central differences taken at a larger step with a norm-wise comparison.
double normwise_fd_error(const Objective& obj, const Vector& x, double h) {
    const Vector g = obj.gradient(x);
    double num = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double fd = (obj.value(x.with(i, x[i] + h)) - obj.value(x.with(i, x[i] - h))) / (2.0 * h);
        num += (fd - g[i]) * (fd - g[i]);
    }
    return std::sqrt(num) / std::max(1.0, norm2(g));
}

}  // namespace

TEST(Suite, CompositionAndIds) {
    const auto s = suite();
    EXPECT_EQ(s.size(), 50u);  // 16 scalable x 3 dimensions + wood + powell
    std::set<std::string> ids, names;
    for (const auto& p : s) {
        ids.insert(p.id());
        names.insert(p.name);
        EXPECT_EQ(p.family, ProblemFamily::Suite);
        EXPECT_EQ(p.x0.size(), p.dim());
        EXPECT_FALSE(p.reference.empty());
    }
    EXPECT_EQ(ids.size(), s.size());
    EXPECT_EQ(names.size(), 18u);
    EXPECT_TRUE(ids.count("wood-4"));
    EXPECT_TRUE(ids.count("powell-singular-4"));
    EXPECT_TRUE(ids.count("ext-rosenbrock-100"));
}

TEST(Suite, RosenbrockStartValue) {
    const auto p = make_problem("ext-rosenbrock", 2);
    ASSERT_TRUE(p);
    // 100 (1 - 1.44)^2 + (1 + 1.2)^2 = 19.36 + 4.84
    EXPECT_NEAR(p->objective.value(p->x0), 24.2, 1e-12);
}

TEST(Suite, FixedSizeAndParityRules) {
    EXPECT_TRUE(make_problem("wood", 0));
    EXPECT_EQ(make_problem("wood", 0)->dim(), 4u);
    EXPECT_THROW((void)make_problem("wood", 10), config_error);
    EXPECT_THROW((void)make_problem("ext-rosenbrock", 3), config_error);
    EXPECT_FALSE(make_problem("no-such-problem", 2));
    EXPECT_EQ(make_problem("sphere", 5)->family, ProblemFamily::Auxiliary);
}

TEST(Suite, KnownMinimaAreStationary) {
    auto stationary = [](std::string_view name, std::size_t n, std::vector<double> xs) {
        const auto p = make_problem(name, n);
        EXPECT_LT(norm_inf(p->objective.gradient(Vector(std::move(xs)))), 1e-12) << name;
    };
    stationary("ext-rosenbrock", 4, {1, 1, 1, 1});
    stationary("ext-white-holst", 4, {1, 1, 1, 1});
    stationary("ext-beale", 2, {3, 0.5});
    stationary("ext-himmelblau", 2, {3, 2});
    stationary("wood", 4, {1, 1, 1, 1});
    stationary("powell-singular", 4, {0, 0, 0, 0});
    stationary("gen-quartic", 5, {0, 0, 0, 0, 0});
    stationary("perturbed-quadratic", 3, {0, 0, 0});
    stationary("raydan-2", 3, {0, 0, 0});
    stationary("qf1", 4, {0, 0, 0, 0.25});
}

// Absolute-relative FD check at h = 1e-6 on every suite problem at its start
// and at five perturbations. Extended Penalty at n = 100 has f ~ 1e11 at its
// start, where one ulp of f already exceeds the tolerance in the difference
// quotient; it is checked separately below.
TEST(Suite, GradientsMatchFiniteDifferences) {
    Random rng(42);
    for (const auto& p : suite()) {
        std::vector<Vector> pts{p.x0};
        for (int i = 0; i < 5; ++i) pts.push_back(perturb(p.x0, rng));
        if (p.id() == "ext-penalty-100") continue;
        for (const auto& x : pts) EXPECT_LE(check_gradient(p.objective, x, 1e-6), 1e-6) << p.id();
    }
}

TEST(Suite, ExtendedPenalty100GradientAtScale) {
    const auto p = make_problem("ext-penalty", 100);
    // at a step suited to |x| ~ 100 the difference quotient agrees closely
    EXPECT_LE(normwise_fd_error(p->objective, p->x0, 1e-3), 1e-7);
    // near the minimiser's scale the standard check passes
    EXPECT_LE(check_gradient(p->objective, Vector(100, 0.05), 1e-6), 1e-6);
}

TEST(Suite, Qf1ReachesClosedFormMinimum) {
    for (std::size_t n : problems::suite_dims) {
        const auto p = make_problem("qf1", n);
        const auto trace = minimize(p->objective, p->x0, SolverConfig{});
        ASSERT_EQ(trace.status, SolverStatus::Converged);
        // minimiser x_n = 1/n, others 0
        EXPECT_NEAR(trace.f_final, -1.0 / (2.0 * double(n)), 1e-6) << n;
    }
}

TEST(Random, DocumentedDistributions) {
    Random a(7), b(7);
    std::mt19937_64 raw(7);
    const std::uint64_t first = raw();
    EXPECT_EQ(a.uniform01(), double(first >> 11) * 0x1.0p-53);
    b.uniform01();
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_LT(b.below(7), 7u);
    }
    double sum = 0.0, sq = 0.0;
    Random c(11);
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = c.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Regression, Defaults) {
    const RegressionParams q;
    EXPECT_EQ(q.m, 10u);
    EXPECT_EQ(q.n, 50u);
    EXPECT_EQ(q.p, 1.5);
    EXPECT_EQ(q.lambda, 0.01);
    EXPECT_EQ(q.sparsity, 0.1);
    EXPECT_EQ(q.seed, 42u);
}

TEST(Regression, SeedDeterminism) {
    const auto a = make_regression(10, 50, 1.5, 0.01, 0.1, 3);
    const auto b = make_regression(10, 50, 1.5, 0.01, 0.1, 3);
    const auto c = make_regression(10, 50, 1.5, 0.01, 0.1, 4);
    EXPECT_EQ(a.a, b.a);
    EXPECT_EQ(a.u, b.u);
    EXPECT_EQ(a.b, b.b);
    EXPECT_NE(a.a, c.a);
}

TEST(Regression, ConstructionInvariants) {
    const auto prob = make_regression(RegressionParams{});
    EXPECT_EQ(prob.a.size(), 500u);
    for (double v : prob.a) {
        ASSERT_GE(v, 0.0);
        ASSERT_LT(v, 1.0);
    }
    const auto nonzeros = std::count_if(prob.u.begin(), prob.u.end(), [](double v) { return v != 0.0; });
    EXPECT_EQ(nonzeros, 5);
    // b = A u, recomputed independently
    for (std::size_t i = 0; i < 10; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 50; ++j) s += prob.a[i * 50 + j] * prob.u[j];
        EXPECT_EQ(prob.b[i], s);
    }
    EXPECT_EQ(make_regression(RegressionParams{.n = 7, .sparsity = 0.3}).u.size(), 7u);
    const auto r = make_regression(RegressionParams{.n = 7, .sparsity = 0.3});
    EXPECT_EQ(std::count_if(r.u.begin(), r.u.end(), [](double v) { return v != 0.0; }), 3);  // ceil(2.1)
}

TEST(Regression, ValueAtGenerator) {
    const auto prob = make_regression(RegressionParams{});
    double pen = 0.0;
    for (double v : prob.u) pen += std::pow(std::abs(v), 1.5);
    const double f = prob.value(prob.u);
    EXPECT_NEAR(f, 0.005 * pen, 1e-12 + 1e-10 * pen);
    for (double r : prob.residual(prob.u)) EXPECT_NEAR(r, 0.0, 1e-12);
}

TEST(Regression, RidgeGradient) {
    const auto prob = make_regression(RegressionParams{.p = 2.0, .lambda = 0.3});
    Random rng(1);
    std::vector<double> xs(50);
    for (double& v : xs) v = 2.0 * rng.uniform01() - 1.0;
    const Vector x(xs);
    const auto r = prob.residual(x);
    const Vector g(prob.gradient(x));
    for (std::size_t j = 0; j < 50; ++j) {
        double atr = 0.0;
        for (std::size_t i = 0; i < 10; ++i) atr += prob.entry(i, j) * r[i];
        EXPECT_NEAR(g[j], atr + 0.3 * x[j], 1e-12);
    }
}

TEST(Regression, GradientMatchesFiniteDifferencesAwayFromZero) {
    Random rng(5);
    for (std::uint64_t seed = 42; seed < 47; ++seed) {
        const auto prob = make_regression(RegressionParams{.seed = seed});
        const auto obj = prob.objective();
        for (int k = 0; k < 6; ++k) {
            std::vector<double> xs(50);
            for (double& v : xs) v = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * (0.1 + 0.9 * rng.uniform01());
            EXPECT_LE(check_gradient(obj, Vector(xs), 1e-6), 1e-6) << seed;
        }
    }
}

TEST(Regression, PenaltyGradientIsContinuousButNotLipschitzAtZero) {
    const auto prob = make_regression(RegressionParams{});
    EXPECT_EQ(prob.penalty_derivative(0.0), 0.0);
    EXPECT_EQ(prob.penalty_derivative(-1e-3), -prob.penalty_derivative(1e-3));
    EXPECT_LT(std::abs(prob.penalty_derivative(1e-20)), 1e-11);
    auto ratio = [&](double t) { return std::abs(prob.penalty_derivative(t) - prob.penalty_derivative(0.0)) / t; };
    // (lambda p / 2) t^(-1/2): the ratio grows by sqrt(1e12) = 1e6 between these points
    EXPECT_GT(ratio(1e-14) / ratio(1e-2), 1e5);
    EXPECT_NEAR(ratio(1e-2), 0.0075 * 10.0, 1e-12);
}

TEST(Regression, SpecStartsAtOrigin) {
    const auto spec = make_regression(RegressionParams{.seed = 9}).spec();
    EXPECT_EQ(spec.family, ProblemFamily::Regression);
    EXPECT_EQ(spec.x0, Vector(50, 0.0));
    EXPECT_EQ(spec.id(), "regression-seed9-50");
}

TEST(Regression, InvalidParameters) {
    EXPECT_THROW((void)make_regression(RegressionParams{.p = 1.0}), config_error);
    EXPECT_THROW((void)make_regression(RegressionParams{.p = 2.5}), config_error);
    EXPECT_THROW((void)make_regression(RegressionParams{.lambda = -1.0}), config_error);
    EXPECT_THROW((void)make_regression(RegressionParams{.sparsity = 0.0}), config_error);
    EXPECT_THROW((void)make_regression(RegressionParams{.m = 0}), config_error);
}

TEST(Regression, TextExportRoundTrip) {
    const auto prob = make_regression(RegressionParams{.m = 4, .n = 9, .seed = 77});
    std::stringstream ss;
    write_regression(ss, prob);
    const auto back = read_regression(ss);
    EXPECT_EQ(back.a, prob.a);
    EXPECT_EQ(back.b, prob.b);
    EXPECT_EQ(back.u, prob.u);
    EXPECT_EQ(back.params.seed, 77u);
    EXPECT_EQ(back.params.p, 1.5);

    std::istringstream truncated("m,n,p,lambda,sparsity,seed\n2,2,1.5,0.01,0.5,1\nA\n1,2\n");
    EXPECT_THROW((void)read_regression(truncated), io_error);
}
