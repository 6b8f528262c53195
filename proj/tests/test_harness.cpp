#include <cmath>

#include <gtest/gtest.h>

#include "ibshell/errors.hpp"
#include "ibshell/harness.hpp"

using namespace ibshell;

namespace {

StudyRecord record(const std::string& label, std::vector<double> times, double value) {
    StudyRecord r;
    r.label = label;
    r.n1 = 2;
    r.n2 = 1;
    r.times = std::move(times);
    for (std::size_t k = 0; k < r.times.size(); ++k) r.samples.push_back({Vec3(value, 0, 0), Vec3(0, value, 0)});
    return r;
}

}  // namespace

TEST(Norms, ParseAndEvaluate) {
    EXPECT_EQ(parse_norm("1"), NormKind::L1);
    EXPECT_EQ(parse_norm("inf"), NormKind::Linf);
    EXPECT_THROW(parse_norm("3"), InvalidParameter);
    const std::vector<Vec3> v = {Vec3(3, -4, 0), Vec3(0, 0, 12)};
    EXPECT_DOUBLE_EQ(lp_norm(v, NormKind::L1), 19.0);
    EXPECT_DOUBLE_EQ(lp_norm(v, NormKind::L2), 13.0);
    EXPECT_DOUBLE_EQ(lp_norm(v, NormKind::Linf), 12.0);
}

TEST(Restrict, SubsamplesNestedLattices) {
    std::vector<Vec3> X(5 * 3);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) X[static_cast<std::size_t>(i * 3 + j)] = Vec3(i, j, 0);
    const auto r = restrict_to_common_grid(X, 5, 3, 3, 2);
    ASSERT_EQ(r.size(), 6u);
    EXPECT_EQ(r[0], Vec3(0, 0, 0));
    EXPECT_EQ(r[1], Vec3(0, 2, 0));
    EXPECT_EQ(r[2], Vec3(2, 0, 0));
    EXPECT_EQ(r[5], Vec3(4, 2, 0));
    const auto same = restrict_to_common_grid(X, 5, 3, 5, 3);
    EXPECT_EQ(same, X);
    EXPECT_THROW(restrict_to_common_grid(X, 5, 3, 4, 3), NonNestedDims);
}

TEST(RelativeDifference, ValuesAndZeroDenominator) {
    const std::vector<Vec3> X1 = {Vec3(2, 0, 0)}, X2 = {Vec3(1, 0, 0)}, X0 = {Vec3(0, 0, 0)};
    EXPECT_DOUBLE_EQ(relative_difference(X1, X2, X0, NormKind::L2), 0.5);
    EXPECT_THROW(relative_difference(X0, X2, X0, NormKind::L1), ZeroDenominator);
}

TEST(SpacetimeNorm, SumsOverTheWindow) {
    const std::vector<double> t = {0.0, 1.0, 2.0, 3.0, 4.0};
    const StudyRecord a = record("a", t, 1.0), b = record("b", t, 0.5);
    // per time: |diff|_1 = 2 * 0.5 = 1; window [2, 4] holds three samples
    EXPECT_DOUBLE_EQ(spacetime_norm(a, b, NormKind::L1, 2.0, 4.0), 3.0);
    EXPECT_DOUBLE_EQ(spacetime_norm(a, b, NormKind::Linf, 0.0, 4.0), 2.5);
    const StudyRecord c = record("c", {0.0, 1.5, 2.0, 3.0, 4.0}, 0.0);
    EXPECT_THROW(spacetime_norm(a, c, NormKind::L1, 0.0, 4.0), TimeSetMismatch);
}

TEST(Rates, PublishedTableValues) {
    EXPECT_NEAR(convergence_rate(2.3984e-7, 9.6290e-8), 1.3166, 5e-5);
    EXPECT_DOUBLE_EQ(convergence_rate(2.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(convergence_rate(16.0, 4.0), 2.0);
    EXPECT_THROW(convergence_rate(1.0, 0.0), ZeroDenominator);
}

TEST(Rates, FromRunSequence) {
    const std::vector<double> t = {0.0, 1.0};
    // differences 0.4 then 0.1 between consecutive runs: rate 2
    const std::vector<StudyRecord> runs = {record("c", t, 1.0), record("m", t, 1.4), record("f", t, 1.5)};
    const auto r = convergence_rates(runs, NormKind::L2, 0.0, 1.0);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], 2.0, 1e-12);
    EXPECT_THROW(convergence_rates({runs[0]}, NormKind::L2, 0.0, 1.0), InsufficientRuns);
}

TEST(Study, RejectsBadPlans) {
    StudyOptions opt;
    opt.Ns = {16};
    opt.dts = {8e-8};
    EXPECT_THROW(run_convergence_study(ModelConfig{}, opt), InsufficientRuns);
    opt.Ns = {16, 32, 64};
    opt.dts = {8e-8, 3e-8, 2e-8};
    EXPECT_THROW(run_convergence_study(ModelConfig{}, opt), InvalidParameter);
}
