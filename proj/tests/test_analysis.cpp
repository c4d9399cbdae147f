#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "muntz/analysis.hpp"
#include "oracles.hpp"

namespace {

using muntz::ConvergenceTable;
using muntz::ErrorChannel;
using muntz::RateClass;
using muntz::SweepConfig;

SweepConfig config_for(double lambda) {
    SweepConfig cfg;
    cfg.solver.lambda = lambda;
    return cfg;
}

TEST(WeightedL2, Examples) {
    EXPECT_EQ(muntz::weighted_l2_error([](double) { return 0.0; }, 0.0, 0.0, 50), 0.0);
    EXPECT_NEAR(muntz::weighted_l2_error([](double) { return 1.0; }, 0.0, 0.0, 50), 1.0, 1e-14);
    const double want = std::sqrt(oracle::beta_hp(2.5, 0.5));
    EXPECT_NEAR(muntz::weighted_l2_error([](double th) { return th; }, -0.5, -0.5, 200), want, 1e-14);
    EXPECT_NEAR(want, 1.085401881837401489044521940936193651808, 1e-15);
}

TEST(WeightedL2, AbsoluteValueAndScaling) {
    auto e = [](double th) { return std::sin(9.0 * th) - 0.2; };
    const double base = muntz::weighted_l2_error(e, -0.5, -0.5, 200);
    const double abs = muntz::weighted_l2_error([&](double th) { return std::fabs(e(th)); }, -0.5, -0.5, 200);
    EXPECT_NEAR(abs, base, 1e-12 * base);
    for (double c : {-3.0, 0.01, 7.5}) {
        const double scaled = muntz::weighted_l2_error([&](double th) { return c * e(th); }, -0.5, -0.5, 200);
        EXPECT_NEAR(scaled, std::fabs(c) * base, 1e-12 * std::fabs(c) * base);
        const double li = muntz::linf_error([&](double th) { return c * e(th); }, 2001);
        EXPECT_NEAR(li, std::fabs(c) * muntz::linf_error(e, 2001), 1e-12 * std::fabs(c));
    }
}

TEST(LinfError, Examples) {
    EXPECT_EQ(muntz::linf_error([](double) { return 0.0; }, 2001), 0.0);
    EXPECT_NEAR(muntz::linf_error([](double th) { return th * (1.0 - th); }, 2001), 0.25, 1e-12);
    EXPECT_THROW(muntz::linf_error([](double) { return 0.0; }, 1), std::invalid_argument);
    // The extra points are part of the maximum.
    auto spike = [](double th) { return th == 0.123456789 ? 5.0 : 0.0; };
    const std::vector<double> extra{0.123456789};
    EXPECT_EQ(muntz::linf_error(spike, 11, extra), 5.0);
    // The uniform grid includes both 1e-12 and 1.
    EXPECT_EQ(muntz::linf_error([](double th) { return th; }, 2), 1.0);
    EXPECT_EQ(muntz::linf_error([](double th) { return th < 1e-6 ? 1.0 / th : 0.0; }, 2), 1e12);
}

TEST(Sweep, Example51ExponentialDecay) {
    const auto p = muntz::example_problem("5.1");
    const std::vector<int> ns{4, 6, 8, 10, 12};
    const ConvergenceTable t = muntz::convergence_sweep(p, config_for(0.5), ns);
    ASSERT_EQ(t.rows.size(), ns.size());
    EXPECT_TRUE(t.all_ok());
    EXPECT_EQ(t.problem_id, "5.1");
    EXPECT_EQ(t.lambda, 0.5);
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const auto& r = t.rows[k];
        EXPECT_EQ(r.N, ns[k]);
        EXPECT_GE(r.l2_e, 0.0);
        EXPECT_GE(r.linf_e, r.l2_e / 10.0);
        EXPECT_GE(r.runtime_ms, 0.0);
        if (k) {
            EXPECT_LE(r.linf_e * 10.0, t.rows[k - 1].linf_e);
            EXPECT_LE(r.l2_e * 10.0, t.rows[k - 1].l2_e);
        }
        // e* within two orders of magnitude of e
        EXPECT_LE(r.linf_estar, 100.0 * r.linf_e + 1e-13);
        EXPECT_GE(100.0 * r.linf_estar + 1e-13, r.linf_e);
    }
    EXPECT_LE(t.rows.back().linf_e, 1e-10);
    EXPECT_EQ(muntz::fit_rates(t).classification, RateClass::Exponential);
}

TEST(Sweep, Example51WithLambdaOneIsAlgebraic) {
    const auto p = muntz::example_problem("5.1");
    const std::vector<int> ns{4, 6, 8, 10, 12};
    const auto t = muntz::convergence_sweep(p, config_for(1.0), ns);
    EXPECT_GE(t.rows.back().linf_e, 1e-6);
}

TEST(Sweep, Example52IsExponential) {
    const auto p = muntz::example_problem("5.2");
    const std::vector<int> ns{5, 7, 9, 11, 13};
    const auto t = muntz::convergence_sweep(p, config_for(1.0 / 3.0), ns);
    ASSERT_TRUE(t.all_ok());
    const auto rep = muntz::fit_rates(t);
    EXPECT_EQ(rep.classification, RateClass::Exponential);
    EXPECT_EQ(rep.points, 5u);
}

TEST(Sweep, ConstantSolutionIsAtRoundoff) {
    muntz::VideProblem p;
    p.name = "const";
    p.a1 = [](double) { return 0.0; };
    p.b1 = [](double) { return 0.0; };
    p.f1 = [](double) { return 0.0; };
    p.K1 = [](double, double) { return 0.0; };
    p.K2 = [](double, double) { return 0.0; };
    p.mu = 0.5;
    p.y0 = 2.0;
    p.exact = muntz::ExactSolution{[](double) { return 2.0; }, [](double) { return 0.0; }};
    const std::vector<int> ns{2, 4, 8};
    const auto t = muntz::convergence_sweep(p, config_for(0.5), ns);
    for (const auto& r : t.rows) {
        EXPECT_LE(r.linf_e, 1e-14);
        EXPECT_LE(r.l2_e, 1e-14);
        EXPECT_LE(r.linf_estar, 1e-14);
    }
}

TEST(Sweep, ValidatesInput) {
    const auto p = muntz::example_problem("5.1");
    const auto cfg = config_for(0.5);
    EXPECT_THROW(muntz::convergence_sweep(p, cfg, std::vector<int>{}), std::invalid_argument);
    EXPECT_THROW(muntz::convergence_sweep(p, cfg, std::vector<int>{6, 4}), std::invalid_argument);
    EXPECT_THROW(muntz::convergence_sweep(p, cfg, std::vector<int>{4, 4}), std::invalid_argument);
    const auto p4 = muntz::example_problem("5.4");
    EXPECT_THROW(muntz::convergence_sweep(p4, cfg, std::vector<int>{4}), std::invalid_argument);
    const auto ref = muntz::reference_solution(p4, cfg.solver, 10);
    EXPECT_THROW(muntz::convergence_sweep(p4, cfg, std::vector<int>{4, 10}, ref), std::invalid_argument);
}

TEST(Sweep, FailedSolveMarksRowOnly) {
    muntz::VideProblem p = muntz::example_problem("5.1");
    // A coefficient that is NaN near theta = 1 only reaches the grid at larger N.
    SweepConfig cfg = config_for(0.5);
    auto bad = p;
    bad.a1 = [](double t) { return t > 0.98 ? std::numeric_limits<double>::quiet_NaN() : 0.0; };
    bad.exact = p.exact;
    const auto t = muntz::convergence_sweep(bad, cfg, std::vector<int>{2, 40});
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_TRUE(t.rows[0].ok);
    EXPECT_FALSE(t.rows[1].ok);
    EXPECT_FALSE(t.rows[1].error.empty());
    EXPECT_TRUE(std::isnan(t.rows[1].linf_e));
    EXPECT_FALSE(t.all_ok());
}

TEST(Reference, AgainstItselfIsZero) {
    const auto p = muntz::example_problem("5.4");
    SweepConfig cfg = config_for(0.5);
    const auto ref = muntz::reference_solution(p, cfg.solver, 12);
    const auto row = muntz::measure_errors(ref.solution(), [&](double th) { return ref(th); }, cfg);
    EXPECT_EQ(row.l2_e, 0.0);
    EXPECT_EQ(row.linf_e, 0.0);
    EXPECT_EQ(row.linf_estar, 0.0);
    EXPECT_EQ(ref.n_ref(), 12);
}

TEST(Reference, Example51AgreesWithClosedForm) {
    const auto p = muntz::example_problem("5.1");
    SweepConfig cfg = config_for(0.5);
    const auto ref = muntz::reference_solution(p, cfg.solver, 16);
    double worst = 0.0;
    for (int s = 0; s <= 2000; ++s) {
        const double th = s / 2000.0;
        worst = std::max(worst, std::fabs(ref(th).first - p.exact->y(th)));
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(Reference, Example54SelfConvergence) {
    const auto p = muntz::example_problem("5.4");
    SweepConfig cfg = config_for(0.5);
    const auto ref = muntz::reference_solution(p, cfg.solver, 18);
    const auto t = muntz::convergence_sweep(p, cfg, std::vector<int>{6, 10, 14}, ref);
    ASSERT_TRUE(t.all_ok());
    EXPECT_GT(t.rows.back().linf_e, 0.0);
    EXPECT_LT(t.rows.back().linf_e, 1e-6);
    EXPECT_GT(t.rows[0].linf_e, t.rows[1].linf_e);
    EXPECT_GT(t.rows[1].linf_e, t.rows[2].linf_e);
}

TEST(Norms, QuadratureConverged) {
    const auto p = muntz::example_problem("5.2");
    SweepConfig cfg = config_for(1.0 / 3.0);
    const auto base = muntz::convergence_sweep(p, cfg, std::vector<int>{9});
    cfg.l2_points = 2 * muntz::default_l2_points(9);
    const auto fine = muntz::convergence_sweep(p, cfg, std::vector<int>{9});
    EXPECT_NEAR(fine.rows[0].l2_e, base.rows[0].l2_e, 0.01 * base.rows[0].l2_e);
    EXPECT_NEAR(fine.rows[0].l2_estar, base.rows[0].l2_estar, 0.01 * base.rows[0].l2_estar);
    EXPECT_EQ(muntz::default_l2_points(9), 200u);
    EXPECT_EQ(muntz::default_l2_points(80), 320u);
}

TEST(FitRates, SyntheticExponential) {
    std::vector<int> ns;
    std::vector<double> errs;
    for (int N = 2; N <= 12; N += 2) {
        ns.push_back(N);
        errs.push_back(std::pow(10.0, -N));
    }
    const auto rep = muntz::fit_rates(ns, errs);
    EXPECT_NEAR(rep.exponential.slope, -1.0, 1e-6);
    EXPECT_NEAR(rep.exponential.r2, 1.0, 1e-12);
    EXPECT_EQ(rep.classification, RateClass::Exponential);
    EXPECT_STREQ(muntz::to_string(rep.classification), "exponential");
}

TEST(FitRates, SyntheticAlgebraic) {
    std::vector<int> ns{4, 8, 16, 32, 64};
    std::vector<double> errs;
    for (int N : ns) errs.push_back(1.0 / (double(N) * N));
    const auto rep = muntz::fit_rates(ns, errs);
    EXPECT_NEAR(rep.algebraic.slope, -2.0, 1e-6);
    EXPECT_NEAR(rep.algebraic.rms_residual, 0.0, 1e-12);
    EXPECT_EQ(rep.classification, RateClass::Algebraic);
}

TEST(FitRates, InsufficientData) {
    EXPECT_THROW(muntz::fit_rates(std::vector<int>{4, 6}, std::vector<double>{1e-3, 1e-4}),
                 muntz::InsufficientDataError);
    // Zero errors are skipped, leaving too few rows.
    EXPECT_THROW(muntz::fit_rates(std::vector<int>{4, 6, 8}, std::vector<double>{1e-3, 0.0, 1e-5}),
                 muntz::InsufficientDataError);
    EXPECT_THROW(muntz::fit_rates(std::vector<int>{4, 6, 8}, std::vector<double>{1e-3, 1e-4}), std::invalid_argument);
}

TEST(FitRates, ChannelSelection) {
    ConvergenceTable t;
    for (int N : {4, 6, 8, 10}) {
        muntz::ConvergenceRow r;
        r.N = N;
        r.linf_e = std::pow(10.0, -N);
        r.l2_e = 1.0 / N;
        r.l2_estar = r.linf_estar = 1.0;
        t.rows.push_back(r);
    }
    EXPECT_EQ(muntz::fit_rates(t, ErrorChannel::LinfE).classification, RateClass::Exponential);
    EXPECT_EQ(muntz::fit_rates(t, ErrorChannel::L2E).classification, RateClass::Algebraic);
    t.rows[1].ok = false;
    t.rows[2].ok = false;
    EXPECT_THROW(muntz::fit_rates(t), muntz::InsufficientDataError);
}

}  // namespace
