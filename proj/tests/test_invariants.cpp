#include <set>

#include <gtest/gtest.h>

#include "cosym/invariants.hpp"

using namespace cosym;

TEST(InvariantSuite, EveryCheckPasses)
{
  for (std::uint64_t seed : {1u, 42u}) {
    const auto checks = run_invariant_suite(seed, ModelParameters::from_kn(1.5, 0.6, 2.0));
    ASSERT_FALSE(checks.empty());
    std::set<std::string> props;
    for (const auto & c : checks) {
      EXPECT_TRUE(c.passed) << c.structure << " " << c.property << " " << c.value;
      props.insert(c.property);
    }
    EXPECT_TRUE(props.count("reeb_omega"));
    EXPECT_TRUE(props.count("dissipation_law"));
  }
}

TEST(InvariantSuite, RandomPolynomialsAreDeterministic)
{
  std::mt19937_64 a(5), b(5);
  const ChartRef c = darboux_chart(2);
  EXPECT_EQ(random_polynomial(c, a).to_string(), random_polynomial(c, b).to_string());
}
