#include "ncg_cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using ncg::cli::run_cli;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ncg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        unsetenv("NCG_SEED");
    }
    void TearDown() override {
        fs::remove_all(dir_);
        unsetenv("NCG_SEED");
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

double printed(const std::string& out, const std::string& key) {
    std::istringstream is(out);
    std::string k;
    std::string v;
    while (is >> k) {
        if (k == key && is >> v) return std::stod(v);
    }
    return std::nan("");
}

}  // namespace

TEST_F(CliTest, RunSphereConverges) {
    const auto r = cli({"run", "--problem", "sphere", "--dim", "10", "--out", path("trace.csv")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_LT(printed(r.out, "gnorm_inf"), 1e-5);
    EXPECT_NE(r.out.find("status converged"), std::string::npos);
    const auto trace = slurp(path("trace.csv"));
    EXPECT_EQ(trace.rfind("k,f,gnorm_inf,alpha,beta,ls_iters,f_evals,g_evals\n", 0), 0u);
}

TEST_F(CliTest, UnknownMethodIsUsageError) {
    const auto r = cli({"run", "--problem", "sphere", "--method", "steepest"});
    EXPECT_EQ(r.code, 64);
    for (const char* m : {"fr", "hs", "prp", "prp+", "dy", "hz", "prpy", "mprp"}) {
        EXPECT_NE(r.err.find(m), std::string::npos) << m;
    }
}

TEST_F(CliTest, UnknownProblemAndBadFlags) {
    EXPECT_EQ(cli({"run", "--problem", "nope"}).code, 64);
    EXPECT_EQ(cli({"run", "--problem", "ext-rosenbrock", "--dim", "3"}).code, 64);
    EXPECT_EQ(cli({"run", "--problem", "sphere", "--sigma", "0.1"}).code, 64);  // 2 rho == sigma
    EXPECT_EQ(cli({"frobnicate"}).code, 64);
    EXPECT_EQ(cli({}).code, 64);
}

TEST_F(CliTest, UnreachableToleranceHitsIterationCap) {
    const auto r = cli({"run", "--problem", "ext-rosenbrock", "--dim", "2", "--tol", "1e-300", "--max-iters", "30"});
    EXPECT_EQ(r.code, 2) << r.out;
    EXPECT_NE(r.out.find("status max_iters"), std::string::npos);
    // Left uncapped, the iterates reach |g| ~ 1e-14 where f no longer
    // resolves any step and the line search reports a stall.
    const auto uncapped = cli({"run", "--problem", "ext-rosenbrock", "--dim", "2", "--tol", "1e-300"});
    EXPECT_EQ(uncapped.code, 3) << uncapped.out;
    EXPECT_NE(uncapped.out.find("status line_search_stall"), std::string::npos);
}

TEST_F(CliTest, FixedSizeProblemIgnoresDim) {
    const auto r = cli({"run", "--problem", "wood", "--dim", "100"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("wood-4"), std::string::npos);
}

TEST_F(CliTest, CompareAndProfile) {
    const auto rec = path("records.csv");
    const auto c = cli({"--workers", "2", "compare", "--methods", "prp,prp+,prpy,mprp", "--dims", "2,10", "--out", rec});
    ASSERT_EQ(c.code, 0) << c.err;
    const auto suite_small = ncg::cli::select_problems("suite", "2,10").size();
    EXPECT_EQ(line_count(slurp(rec)), 1 + 4 * suite_small);

    const auto both = path("both.csv");
    ASSERT_EQ(cli({"compare", "--methods", "prp,prp+,prpy,mprp", "--dims", "2,10", "--linesearch", "both", "--out", both})
                  .code,
              0);
    EXPECT_EQ(line_count(slurp(both)), 1 + 8 * suite_small);

    const auto prof = path("profile.csv");
    const auto plot = path("plot.csv");
    const auto p = cli({"profile", "--records", rec, "--metric", "iterations", "--out", prof, "--plot-data", plot});
    ASSERT_EQ(p.code, 0) << p.err;
    std::ifstream is(prof);
    const auto curves = ncg::read_profile_csv(is);
    ASSERT_EQ(curves.solvers.size(), 4u);
    EXPECT_EQ(curves.taus.front(), 1.0);
    for (std::size_t i = 1; i < curves.taus.size(); ++i) {
        for (std::size_t s = 0; s < 4; ++s) EXPECT_GE(curves.rho[i][s], curves.rho[i - 1][s]);
    }
    EXPECT_EQ(slurp(plot).rfind("solver,tau,rho\n", 0), 0u);
}

TEST_F(CliTest, CompareIsByteStable) {
    ASSERT_EQ(cli({"compare", "--dims", "2", "--out", path("a.csv")}).code, 0);
    ASSERT_EQ(cli({"--workers", "3", "compare", "--dims", "2", "--out", path("b.csv")}).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(CliTest, ProfileErrors) {
    EXPECT_EQ(cli({"profile", "--records", path("missing.csv"), "--out", path("p.csv")}).code, 74);
    std::ofstream(path("partial.csv")) << ncg::record_columns << "\n"
                                       << "a,prp,interp,converged,1,1,1,0,0,0\n"
                                       << "a,mprp,interp,converged,1,1,1,0,0,0\n"
                                       << "b,prp,interp,converged,1,1,1,0,0,0\n";
    EXPECT_EQ(cli({"profile", "--records", path("partial.csv"), "--out", path("p.csv")}).code, 64);
    EXPECT_EQ(cli({"profile", "--records", path("partial.csv"), "--metric", "cpu"}).code, 64);
}

TEST_F(CliTest, RegressDefaults) {
    const auto out = path("regress.csv");
    const auto summary = path("summary.csv");
    const auto r = cli({"regress", "--methods", "mprp", "--out", out, "--summary", summary, "--export-dir", path("inst")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream is(out);
    const auto recs = ncg::read_records_csv(is);
    ASSERT_EQ(recs.size(), 10u);
    for (const auto& rec : recs) {
        EXPECT_TRUE(rec.solved()) << rec.problem;
        EXPECT_LE(rec.iterations, 20000);
    }
    EXPECT_EQ(recs.front().problem, "regression-seed42-50");
    EXPECT_EQ(recs.back().problem, "regression-seed51-50");
    EXPECT_EQ(slurp(summary).rfind("solver,converged,runs,mean_iterations", 0), 0u);
    EXPECT_TRUE(fs::exists(dir_ / "inst" / "regression-seed42.txt"));
    std::ifstream inst(dir_ / "inst" / "regression-seed42.txt");
    const auto back = ncg::read_regression(inst);
    EXPECT_EQ(back.a, ncg::make_regression(ncg::RegressionParams{}).a);
}

TEST_F(CliTest, RegressRidgeAllMethodsConverge) {
    const auto out = path("ridge.csv");
    const auto r = cli({"regress", "--p", "2", "--seeds", "3", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream is(out);
    const auto recs = ncg::read_records_csv(is);
    ASSERT_EQ(recs.size(), 12u);
    for (const auto& rec : recs) EXPECT_TRUE(rec.solved()) << rec.solver() << " " << rec.problem;
}

TEST_F(CliTest, RegressSummaryOrderedByMeanIterations) {
    std::vector<ncg::RunRecord> rs(3);
    rs[0].method = "a", rs[0].iterations = 30;
    rs[1].method = "b", rs[1].iterations = 10;
    rs[2].method = "a", rs[2].iterations = 10;
    const auto rows = ncg::cli::summarize(rs);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].solver, "b/");
    EXPECT_EQ(rows[1].mean_iterations, 20.0);
}

TEST_F(CliTest, SeedFromEnvironment) {
    setenv("NCG_SEED", "7", 1);
    const auto out = path("env.csv");
    ASSERT_EQ(cli({"regress", "--methods", "mprp", "--seeds", "1", "--out", out}).code, 0);
    EXPECT_NE(slurp(out).find("regression-seed7-50"), std::string::npos);
    ASSERT_EQ(cli({"regress", "--methods", "mprp", "--seeds", "1", "--seed", "3", "--out", out}).code, 0);
    EXPECT_NE(slurp(out).find("regression-seed3-50"), std::string::npos);
}

TEST_F(CliTest, RegressInvalidParameters) {
    EXPECT_EQ(cli({"regress", "--p", "1", "--out", path("x.csv")}).code, 64);
    EXPECT_EQ(cli({"regress", "--seeds", "0", "--out", path("x.csv")}).code, 64);
}

TEST_F(CliTest, ListProblems) {
    const auto r = cli({"list-problems"});
    EXPECT_EQ(r.code, 0);
    for (const auto& f : ncg::problems::suite_formulas()) {
        EXPECT_NE(r.out.find(std::string(f.name)), std::string::npos) << f.name;
    }
    EXPECT_NE(r.out.find("regression"), std::string::npos);
}

TEST_F(CliTest, CheckGradientsReportsEveryProblem) {
    const auto r = cli({"check-gradients", "--perturbations", "1"});
    EXPECT_EQ(line_count(r.out), ncg::suite().size() + 1);
    EXPECT_NE(r.out.find("regression-seed42-50"), std::string::npos);
    // a loose tolerance passes everywhere
    EXPECT_EQ(cli({"check-gradients", "--perturbations", "1", "--tol", "1e-4"}).code, 0);
}

TEST_F(CliTest, ConfigFilePresetsFlags) {
    std::ofstream(path("run.ini")) << "[run]\nproblem=ext-rosenbrock\ndim=4\nmax-iters=3\n";
    const auto r = cli({"--config", path("run.ini"), "run"});
    EXPECT_EQ(r.code, 2) << r.err;
    EXPECT_EQ(printed(r.out, "iterations"), 3.0);
    // command-line flags win over the file
    const auto r2 = cli({"--config", path("run.ini"), "run", "--max-iters", "20000"});
    EXPECT_EQ(r2.code, 0) << r2.err;
}
