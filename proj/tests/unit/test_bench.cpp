#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "basinctl/bench.hpp"
#include "basinctl/errors.hpp"

namespace basinctl {
namespace {

TEST(Generator, SmallestInstance) {
  const auto inst = generate_instance(2, 1);
  EXPECT_EQ(inst.n(), 2u);
  EXPECT_EQ(inst.seed, 1u);
  EXPECT_TRUE(test_convergence(inst.system, inst.witness, inst.yt, ControlParams{}));
  EXPECT_FALSE(test_convergence(inst.system, inst.y0, inst.yt, ControlParams{}));
  EXPECT_TRUE(verify_instance(inst, ControlParams{}).ok());
}

TEST(Generator, PerturbableHalfAndFrozenRest) {
  const auto inst = generate_instance(10, 7);
  ASSERT_EQ(inst.perturbable.size(), 5u);
  const std::set<std::size_t> free(inst.perturbable.begin(), inst.perturbable.end());
  for (std::size_t i = 0; i < 10; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (free.count(i)) {
      EXPECT_DOUBLE_EQ(inst.cs.lb()[k], inst.y0[k] - 2.0);
      EXPECT_DOUBLE_EQ(inst.cs.ub()[k], inst.y0[k] + 2.0);
    } else {
      EXPECT_EQ(inst.cs.lb()[k], inst.y0[k]);
      EXPECT_EQ(inst.cs.ub()[k], inst.y0[k]);
    }
  }
  EXPECT_EQ(inst.yt, Vector(Vector::Ones(10)));
  EXPECT_LE(inst.system.rhs(inst.yt).norm(), 1e-8);
  EXPECT_DOUBLE_EQ(inst.coupling, 0.05);
}

TEST(Generator, RejectsTinyNetworks) {
  EXPECT_THROW(generate_instance(1, 1), ValidationError);
  EXPECT_THROW(generate_instance(0, 1), ValidationError);
}

TEST(Generator, Reproducible) {
  const auto a = generate_instance(12, 42);
  const auto b = generate_instance(12, 42);
  EXPECT_EQ(a.y0, b.y0);
  EXPECT_EQ(a.witness, b.witness);
  EXPECT_EQ(a.edges, b.edges);
  EXPECT_EQ(a.perturbable, b.perturbable);
  const auto c = generate_instance(12, 43);
  EXPECT_NE(a.y0, c.y0);
}

TEST(Generator, InstancesVerifyIndependently) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = generate_instance(10, seed);
    const auto check = verify_instance(inst, ControlParams{});
    EXPECT_TRUE(check.ok()) << "seed " << seed;
  }
}

TEST(Suite, AllFreeInstancesSucceed) {
  GeneratorOptions gen;
  gen.perturbable_fraction = 1.0;
  std::vector<BenchInstance> instances;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) instances.push_back(generate_instance(8, seed, gen));
  for (const auto& inst : instances) EXPECT_EQ(inst.perturbable.size(), 8u);
  const auto result = run_suite(instances, ControlParams{}, 2);
  EXPECT_EQ(result.successes, 3u);
  EXPECT_DOUBLE_EQ(result.success_fraction, 1.0);
  for (std::size_t k = 0; k < instances.size(); ++k) {
    EXPECT_EQ(result.per_instance[k].seed, instances[k].seed);
    EXPECT_TRUE(result.per_instance[k].reverified);
  }
}

TEST(Suite, ZeroBudgetCountsAsFailure) {
  ControlParams p;
  p.it_max = 0;
  const auto result = run_suite({generate_instance(6, 3)}, p);
  EXPECT_EQ(result.successes, 0u);
  EXPECT_EQ(result.success_fraction, 0.0);
  EXPECT_EQ(result.per_instance.front().outcome.status, ControlStatus::iteration_limit);
}

TEST(Scaling, ExactPowerLaw) {
  EXPECT_DOUBLE_EQ(fit_loglog_slope({1, 2, 4}, {1, 4, 16}), 2.0);
}

TEST(Scaling, ConstantRunnerIsFlat) {
  const InstanceRunner stub = [](const BenchInstance&, const ControlParams&) { return 0.01; };
  const auto report = run_scaling({4, 6, 8}, 2, ControlParams{}, GeneratorOptions{}, stub);
  ASSERT_EQ(report.mean_runtimes.size(), 3u);
  EXPECT_NEAR(report.fitted_exponent, 0.0, 0.2);
  for (const double s : report.stddev_runtimes) EXPECT_EQ(s, 0.0);
}

TEST(Scaling, RejectsShortSweep) {
  const InstanceRunner stub = [](const BenchInstance&, const ControlParams&) { return 0.01; };
  EXPECT_THROW(run_scaling({4, 8}, 2, ControlParams{}, GeneratorOptions{}, stub), ValidationError);
}

}  // namespace
}  // namespace basinctl
