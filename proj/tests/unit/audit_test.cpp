#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "support.hpp"
#include "weavesafe/audit.hpp"
#include "weavesafe/combinations.hpp"
#include "weavesafe/error.hpp"

using namespace weavesafe;
using namespace weavesafe::audit;

namespace {

const SecureCodec& running_example() {
  static const SecureCodec codec = SecureCodec::create(pm_mbr::params_new(5, 3, 4, 4));
  return codec;
}

const SecureCodec& tiny() {
  static const SecureCodec codec = SecureCodec::create(pm_mbr::params_new(3, 2, 2, 3));
  return codec;
}

}  // namespace

TEST(Audit, LeakageExamples) {
  const auto& codec = running_example();
  const auto g = codec.inner().generator_matrix(1);
  const std::size_t first[] = {0};
  EXPECT_EQ(leakage(linalg::select_rows(g, first), g), 1u);
  EXPECT_EQ(leakage(g, g), 4u);
  // a disjoint-support row against a single sparse row
  auto f = codec.field();
  const auto a = linalg::Matrix::from_values(f, {{1, 0, 0}});
  const auto b = linalg::Matrix::from_values(f, {{0, 1, 1}});
  EXPECT_EQ(leakage(a, b), 0u);
  EXPECT_THROW(leakage(a, g), Error);
}

TEST(Audit, ConstructionPassesAtMaxGuesses) {
  const auto model = construction_model(running_example());
  const auto v = verify_weak_secrecy(model, 3);
  EXPECT_TRUE(v.passed());
  EXPECT_EQ(v.checks, 490u);
  EXPECT_EQ(weak_secrecy_checks(model, 3), 490u);
}

TEST(Audit, BaselineFailsAtKMinusOneWithMinimalCounterexample) {
  const auto model = baseline_model(running_example());
  EXPECT_TRUE(verify_weak_secrecy(model, 1).passed());
  const auto v = verify_weak_secrecy(model, 2);
  ASSERT_FALSE(v.passed());
  EXPECT_EQ(v.counterexample->subset.size(), 3u);
  EXPECT_GT(v.counterexample->leaked_symbols, 0u);
  // nothing of size <= 2 leaks, so size 3 is minimal
  EXPECT_TRUE(verify_weak_secrecy(model, 1).passed());
  // it really leaks per the rank formula
  const auto again =
      leakage_report(model, v.counterexample->subset, v.counterexample->node);
  EXPECT_EQ(again.leaked_symbols, v.counterexample->leaked_symbols);
}

// With no outer code, the k symbols under a weight-k row of G_e leak.
TEST(Audit, BaselineLeaksOnWeightKRows) {
  for (auto [n, k, d] : {std::tuple{5u, 3u, 4u}, {6u, 2u, 4u}, {7u, 4u, 6u}}) {
    const auto codec = SecureCodec::create(pm_mbr::params_new(n, k, d, 8));
    const auto model = baseline_model(codec);
    const auto g = codec.inner().generator_matrix(1);
    std::vector<std::size_t> subset;
    for (std::size_t c = 0; c < g.cols(); ++c) {
      if (!g(d - 1, c).is_zero()) subset.push_back(c);
    }
    ASSERT_EQ(subset.size(), k);
    EXPECT_GT(leakage_report(model, subset, 1).leaked_symbols, 0u);
  }
}

TEST(Audit, CapIsEnforced) {
  const auto model = construction_model(running_example());
  try {
    verify_weak_secrecy(model, 3, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::cap_exceeded);
  }
  EXPECT_THROW(verify_weak_secrecy(model, 7), Error);  // g must stay below Bs
}

TEST(Audit, CapFromEnvironment) {
  ::setenv("WEAVESAFE_AUDIT_CAP", "1234", 1);
  EXPECT_EQ(AuditLimits::from_environment().check_cap, 1234u);
  ::setenv("WEAVESAFE_AUDIT_CAP", "lots", 1);
  EXPECT_THROW(AuditLimits::from_environment(), Error);
  ::unsetenv("WEAVESAFE_AUDIT_CAP");
  EXPECT_EQ(AuditLimits::from_environment().check_cap, 5'000'000u);
}

TEST(Audit, LeakageIsMonotoneInSubset) {
  const auto model = baseline_model(running_example());
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::size_t> all(9);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    const unsigned e = 1 + rng() % 5;
    std::size_t prev = 0;
    for (std::size_t s = 0; s <= 9; ++s) {
      std::vector<std::size_t> subset(all.begin(), all.begin() + s);
      const std::size_t now = leakage_report(model, subset, e).leaked_symbols;
      ASSERT_GE(now, prev);
      prev = now;
    }
  }
}

// The enumeration oracle against the rank formula: every subset and node of the
// smallest code, for both parity-check models.
TEST(Audit, OracleMatchesRankFormulaExhaustively) {
  for (const auto& model : {construction_model(tiny()), baseline_model(tiny())}) {
    const std::size_t bs = model.message_size();
    for (std::size_t size = 0; size <= bs; ++size) {
      auto subset = first_combination(size);
      do {
        for (unsigned e = 1; e <= 3; ++e) {
          const Rational mi = exhaustive_mi_oracle(model, subset, e);
          const std::size_t rank_value = leakage_report(model, subset, e).leaked_symbols;
          EXPECT_EQ(mi, (Rational{static_cast<std::int64_t>(rank_value), 1}))
              << model.label << " size=" << size << " e=" << e;
        }
      } while (next_combination(subset, bs));
    }
  }
}

TEST(Audit, OracleSmallestCodeIsSecure) {
  const auto model = construction_model(tiny());
  const std::size_t one[] = {0};
  for (unsigned e = 1; e <= 3; ++e) {
    EXPECT_EQ(exhaustive_mi_oracle(model, one, e), (Rational{0, 1}));
    EXPECT_EQ(exhaustive_mi_oracle(model, {}, e), (Rational{0, 1}));
  }
}

TEST(Audit, OracleRefusesLargeSpaces) {
  const auto model = construction_model(running_example());  // 16^9 codewords
  const std::size_t one[] = {0};
  try {
    exhaustive_mi_oracle(model, one, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::cap_exceeded);
  }
}

TEST(Audit, RationalPrinting) {
  EXPECT_EQ((Rational{3, 1}).to_string(), "3");
  EXPECT_EQ((Rational{1, 2}).to_string(), "1/2");
}

TEST(Audit, ReportRunningExample) {
  AuditOptions options;
  const auto report = audit_report(running_example(), options);
  EXPECT_EQ(report.capacity, 9u);
  EXPECT_EQ(report.secure_capacity, 7u);
  EXPECT_EQ(report.perfect_capacity, 5u);
  EXPECT_EQ(report.max_guesses, 3u);
  EXPECT_EQ(report.baseline_guesses, 1u);
  EXPECT_EQ(report.improvement, 2u);
  EXPECT_TRUE(report.verdict.passed());
  ASSERT_TRUE(report.baseline_at_k_minus_2.has_value());
  EXPECT_TRUE(report.baseline_at_k_minus_2->passed());
  ASSERT_TRUE(report.baseline_at_k_minus_1.has_value());
  EXPECT_FALSE(report.baseline_at_k_minus_1->passed());
  EXPECT_TRUE(report.h_prime_certified);
  ASSERT_TRUE(report.completion.has_value());
  EXPECT_EQ(report.completion->failures, 0u);

  const auto j = nlohmann::json::parse(report.to_json());
  EXPECT_EQ(j["capacity"]["Bs"], 7);
  EXPECT_EQ(j["guarantees"]["improvement"], 2);
  EXPECT_EQ(j["verification"]["passed"], true);
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
  EXPECT_EQ(report.to_text(), audit_report(running_example(), options).to_text());
  EXPECT_NE(report.to_text().find("Bs: 7"), std::string::npos);
}

TEST(Audit, ReportSmallestGrid) {
  const auto codec = SecureCodec::create(pm_mbr::params_new(3, 2, 2, 3));
  const auto report = audit_report(codec, {});
  EXPECT_EQ(report.max_guesses, 0u);
  EXPECT_EQ(report.improvement, 0u);
  EXPECT_TRUE(report.verdict.passed());
}

TEST(Audit, ReportBaselineSubject) {
  AuditOptions options;
  options.baseline = true;
  options.guesses = 2;
  const auto report = audit_report(running_example(), options);
  EXPECT_EQ(report.subject, "baseline");
  ASSERT_FALSE(report.verdict.passed());
  EXPECT_EQ(report.verdict.counterexample->subset.size(), 3u);
}

TEST(Audit, ReportPropagatesCap) {
  AuditOptions options;
  options.limits.check_cap = 10;
  EXPECT_THROW(audit_report(running_example(), options), Error);
}
