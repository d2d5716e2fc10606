#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "plasticity/verify.hpp"

using namespace plasticity;

TEST(Verify, AllCasesPassOrAreKnownErrata) {
  const VerifyReport report = run_verification();
  EXPECT_TRUE(report.passed());
  std::size_t oracle_cases_seen = 0;
  for (const auto& c : report.cases) {
    if (c.kind == "oracle") ++oracle_cases_seen;
    if (c.status == "erratum") {
      EXPECT_TRUE(c.name == "E321_enhanced" || c.kind == "erratum") << c.name;
    } else {
      EXPECT_EQ(c.status, "pass") << c.name << ": " << c.detail;
      EXPECT_LE(c.max_delta, c.tolerance) << c.name;
    }
  }
  // 21 forms, with the general-j law split over five spins
  EXPECT_EQ(oracle_cases_seen, 25u);
  EXPECT_EQ(report.errata.size(), 3u);
}

TEST(Verify, FilterSelectsSingleCase) {
  VerifyOptions o;
  o.filter = "E321_spin";
  const VerifyReport report = run_verification(o);
  ASSERT_EQ(report.cases.size(), 1u);
  EXPECT_EQ(report.cases[0].name, "E321_spin");
  EXPECT_EQ(report.cases[0].trials, 100u);
}

TEST(Verify, FilterPrefixSelectsEverySpin) {
  VerifyOptions o;
  o.filter = "E_general_j";
  o.trials = 5;
  EXPECT_EQ(run_verification(o).cases.size(), 5u);
  o.filter = "E_general_j[j=3/2]";
  EXPECT_EQ(run_verification(o).cases.size(), 1u);
}

TEST(Verify, EmptySelectionIsUsageError) {
  VerifyOptions o;
  o.filter = "no_such_case";
  EXPECT_THROW(run_verification(o), UsageError);
  o.filter = "";
  o.trials = 0;
  EXPECT_THROW(run_verification(o), UsageError);
}

TEST(Verify, PerturbedFormulaFails) {
  VerifyOptions o;
  o.filter = "E421_spin";
  o.evaluator = [](FormId id, std::span<const double> args) { return evaluate(id, args) + 1e-6; };
  const VerifyReport report = run_verification(o);
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(report.cases[0].status, "fail");
  EXPECT_FALSE(report.cases[0].worst_point.empty());
}

TEST(Verify, ScaledFormOutsideErrataListFails) {
  // a perturbation of a form outside the errata list must never take the erratum pathway
  VerifyOptions o;
  o.filter = "E321_KS_101_theta";
  o.evaluator = [](FormId id, std::span<const double> args) { return evaluate(id, args) * 1.001; };
  EXPECT_FALSE(run_verification(o).passed());
}

TEST(Verify, ReportIsSeedDeterministic) {
  VerifyOptions o;
  o.trials = 20;
  o.filter = "E241_general,E321_general";
  const auto a = run_verification(o);
  const auto b = run_verification(o);
  ASSERT_EQ(a.cases.size(), b.cases.size());
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    EXPECT_EQ(a.cases[i].max_delta, b.cases[i].max_delta);
    EXPECT_EQ(a.cases[i].worst_point, b.cases[i].worst_point);
  }
  o.seed = 7;
  EXPECT_NE(run_verification(o).cases[0].worst_point, a.cases[0].worst_point);
}

TEST(Verify, ObservablePathsAgree) {
  DirectionSampler sampler(3);
  for (int two_j = 1; two_j <= 5; ++two_j) {
    const SpinMagnitude s(two_j);
    const auto labels = LabelVector::sign_values(s);
    const Direction d = sampler.next();
    EXPECT_LE(max_abs_diff(eigh_path_observable(s, d, labels), rotation_path_observable(s, d, labels)), 1e-10);
  }
}

TEST(Errata, RoundTrip) {
  const std::vector<ErratumRecord> records = {
      {"A", "x=0.5;y=1", 0.1, 0.2, -0.1, "note one"},
      {"B", "", 1.0 / 3.0, -2.0 / 3.0, 1.0, ""},
  };
  std::stringstream ss;
  write_errata(ss, records);
  const auto back = read_errata(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].id, "A");
  EXPECT_EQ(back[0].parameters, "x=0.5;y=1");
  EXPECT_EQ(back[1].printed, 1.0 / 3.0);
  EXPECT_EQ(back[1].engine, -2.0 / 3.0);
  EXPECT_EQ(back[0].note, "note one");
}

TEST(Errata, MalformedLinesAreUsageErrors) {
  std::stringstream few("a\tb\tc\n");
  EXPECT_THROW(read_errata(few), UsageError);
  std::stringstream bad("a\tb\tx\t1\t2\n");
  EXPECT_THROW(read_errata(bad), UsageError);
}

TEST(Errata, ShippedFileMatchesFreshRun) {
  std::ifstream in(PLASTICITY_SOURCE_DIR "/data/errata.tsv");
  ASSERT_TRUE(in) << "data/errata.tsv missing";
  const auto shipped = read_errata(in);
  VerifyOptions o;
  o.trials = 1000;
  o.filter = "E321_enhanced,erratum:enhancement_domain,erratum:step_fourier_series";
  const auto fresh = run_verification(o).errata;
  ASSERT_EQ(shipped.size(), fresh.size());
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    EXPECT_EQ(shipped[i].id, fresh[i].id);
    EXPECT_EQ(shipped[i].parameters, fresh[i].parameters);
    EXPECT_NEAR(shipped[i].printed, fresh[i].printed, 1e-12);
    EXPECT_NEAR(shipped[i].engine, fresh[i].engine, 1e-12);
    EXPECT_GT(std::abs(shipped[i].delta), 1e-9) << shipped[i].id;
  }
}
