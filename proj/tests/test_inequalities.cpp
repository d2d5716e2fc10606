#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "plasticity/inequalities.hpp"

using namespace plasticity;
using std::numbers::pi;

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);

ChshSetting canonical(const LabelVector& labels) {
  return {{Direction::in_meridian(0.0), Direction::in_meridian(-pi / 2)},
          {Direction::in_meridian(3 * pi / 4), Direction::in_meridian(-3 * pi / 4)},
          labels,
          labels};
}

}  // namespace

TEST(ChshValue, BellSingletCanonicalSetting) {
  const SpinMagnitude h = SpinMagnitude::half();
  const auto rho = density(bell_singlet());
  const auto setting = canonical(LabelVector::sign_values(h));
  EXPECT_NEAR(chsh_value(rho, h, setting, Engine::trace), kTsirelson, 1e-12);
  EXPECT_NEAR(chsh_value(rho, h, setting, Engine::closed_form), kTsirelson, 1e-12);
  EXPECT_NEAR(chsh_value(rho, h, setting, Engine::both), kTsirelson, 1e-12);
}

TEST(ChshValue, DegenerateSettingIsTwiceEqualDirectionCorrelation) {
  const SpinMagnitude h = SpinMagnitude::half();
  const Direction d(0.8, 1.3);
  const ChshSetting s{{d, d}, {d, d}, LabelVector::sign_values(h), LabelVector::sign_values(h)};
  EXPECT_NEAR(chsh_value(density(bell_singlet()), h, s, Engine::both), -2.0, 1e-12);
}

TEST(ChshValue, SpinOneScalesByTwoThirds) {
  const SpinMagnitude one(2);
  const auto rho = density(clebsch_gordan_singlet(one));
  EXPECT_NEAR(chsh_value(rho, one, canonical(LabelVector::spin_values(one)), Engine::both), (2.0 / 3.0) * kTsirelson,
              1e-12);
}

TEST(ChshValue, EnginesAgreeForPlasticLabels) {
  const SpinMagnitude one(2);
  const auto rho = density(clebsch_gordan_singlet(one));
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0, 2 * pi), l(-2, 2);
  for (int i = 0; i < 10; ++i) {
    const LabelVector labels{l(rng), l(rng), l(rng)};
    const ChshSetting s{{Direction(u(rng), u(rng)), Direction(u(rng), u(rng))},
                        {Direction(u(rng), u(rng)), Direction(u(rng), u(rng))},
                        labels,
                        labels};
    EXPECT_NO_THROW(chsh_value(rho, one, s, Engine::both));
  }
}

TEST(ChshValue, ClosedFormEngineRefusesUnsupportedCases) {
  const SpinMagnitude one(2);
  const auto rho = density(clebsch_gordan_singlet(one));
  auto s = canonical(LabelVector{1, 0, 1});
  s.bob_labels = LabelVector{0, 1, 0};
  EXPECT_THROW(chsh_value(rho, one, s, Engine::closed_form), UsageError);
  const auto product = density(product_basis_state({3, 3}, {0, 2}));
  EXPECT_THROW(chsh_value(product, one, canonical(LabelVector::spin_values(one)), Engine::closed_form), UsageError);
  EXPECT_NO_THROW(chsh_value(product, one, canonical(LabelVector::spin_values(one)), Engine::trace));
}

TEST(ClosedFormPair, AffineLabelsUseScaledGeneralLaw) {
  const SpinMagnitude s(3);
  const auto rho = density(clebsch_gordan_singlet(s));
  const LabelVector la{-4, -1, 2, 5}, lb{1, 0.5, 0, -0.5};
  const Direction a(0.3, 0.2), b(1.9, 4.4);
  const auto closed = closed_form_pair_correlation(s, a, la, b, lb);
  ASSERT_TRUE(closed.has_value());
  EXPECT_NEAR(*closed, correlation(rho, s, a, la, b, lb), 1e-12);
  EXPECT_FALSE(closed_form_pair_correlation(s, a, LabelVector::sign_values(s), b, lb).has_value());
}

TEST(GoldenSection, FindsInteriorMaximum) {
  const auto g = golden_section_maximize([](double x) { return -(x - 0.3) * (x - 0.3); }, -1.0, 2.0, 1e-10, 1000);
  EXPECT_NEAR(g.x, 0.3, 1e-8);
  EXPECT_LE(g.evaluations, 1000u);
}

TEST(OptimizeChsh, BellSingletReachesTsirelson) {
  const SpinMagnitude h = SpinMagnitude::half();
  const auto rho = density(bell_singlet());
  const auto pm = LabelVector::sign_values(h);
  const ScanResult r = optimize_chsh(rho, h, pm, pm);
  EXPECT_NEAR(r.best_value, kTsirelson, 1e-5);
  EXPECT_LE(r.best_value, kTsirelson + 1e-6);
  EXPECT_LE(r.evaluations, 1'000'000u);
  EXPECT_EQ(r.method, "grid+refine");
  const ChshSetting argmax{r.alice, r.bob, pm, pm};
  EXPECT_NEAR(chsh_value(rho, h, argmax), r.best_value, 1e-12);
}

TEST(OptimizeChsh, GridStageMatchesBruteForceOracle) {
  // the 0.001 rad brute-force grid with a = 0 bounds the lattice optimum from above
  const auto brute = oracle::bell_chsh_grid(1e-3);
  EXPECT_NEAR(brute.best, kTsirelson, 1e-5);
  auto e = [](const Direction& a, const Direction& b) {
    const auto ua = a.unit_vector(), ub = b.unit_vector();
    return -(ua[0] * ub[0] + ua[1] * ub[1] + ua[2] * ub[2]);
  };
  ScanOptions grid;
  grid.method = ScanMethod::grid;
  grid.grid_points = 72;  // 5 degree lattice contains an exact optimum
  const ScanResult r = optimize_chsh(e, grid);
  EXPECT_NEAR(r.best_value, brute.best, 1e-5);
  EXPECT_EQ(r.evaluations, 72u * 72u + 4u);
}

TEST(OptimizeChsh, DeterministicAcrossThreadCounts) {
  const SpinMagnitude one(2);
  const auto rho = density(clebsch_gordan_singlet(one));
  const LabelVector ks{1, 0, 1};
  ScanOptions a, b;
  a.threads = 1;
  b.threads = 7;
  a.grid_points = b.grid_points = 24;
  const ScanResult ra = optimize_chsh(rho, one, ks, ks, a);
  const ScanResult rb = optimize_chsh(rho, one, ks, ks, b);
  EXPECT_EQ(ra.best_value, rb.best_value);
  EXPECT_EQ(ra.alice[0].theta(), rb.alice[0].theta());
  EXPECT_EQ(ra.evaluations, rb.evaluations);
  EXPECT_LE(ra.best_value, 4.0);
}

TEST(OptimizeChsh, RespectsBudget) {
  const SpinMagnitude h = SpinMagnitude::half();
  const auto rho = density(bell_singlet());
  const auto pm = LabelVector::sign_values(h);
  ScanOptions o;
  o.budget = 500;
  const ScanResult r = optimize_chsh(rho, h, pm, pm, o);
  EXPECT_LE(r.evaluations, 500u + 4u);
  EXPECT_LE(r.grid_points * r.grid_points + 4, 500u);
  o.budget = 0;
  EXPECT_THROW(optimize_chsh(rho, h, pm, pm, o), UsageError);
}

TEST(OptimizeChsh, FullAngleSearchStaysBelowTsirelson) {
  const SpinMagnitude h = SpinMagnitude::half();
  const auto rho = density(bell_singlet());
  const auto pm = LabelVector::sign_values(h);
  ScanOptions o;
  o.full_angles = true;
  o.grid_points = 30;
  const ScanResult r = optimize_chsh(rho, h, pm, pm, o);
  EXPECT_NEAR(r.best_value, kTsirelson, 1e-5);
  EXPECT_LE(r.best_value, kTsirelson + 1e-6);
}

TEST(OptimizeChsh, ProductOfBellPairsPairwise) {
  const ScanResult r = optimize_chsh_pairwise(density(four_qubit_singlet(2)));
  EXPECT_NEAR(r.best_value, kTsirelson, 1e-5);
  EXPECT_THROW(optimize_chsh_pairwise(density(bell_singlet())), UsageError);
}

TEST(LocalModels, ChshNeverExceedsTwo) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int i = 0; i < 1000; ++i) {
    LocalDeterministicModel m;
    for (int* v : {&m.alice[0], &m.alice[1], &m.bob[0], &m.bob[1]}) *v = bit(rng) ? 1 : -1;
    EXPECT_LE(std::abs(chsh_value(m)), 2);
  }
  EXPECT_THROW(chsh_value(LocalDeterministicModel{{1, 0}, {1, 1}}), UsageError);
}

TEST(LocalModels, SignModelGivesLinearCorrelation) {
  for (double t : {0.0, 0.2, 1.0, pi / 2, 2.5, pi}) {
    EXPECT_NEAR(classical_sign_model_correlation(t), 2 * t / pi - 1, 1e-12) << t;
  }
}

TEST(Enhancement, PointDifferences) {
  auto diff = [](double d) { return enhanced_combination(d, 0.0) + std::cos(d); };
  EXPECT_NEAR(diff(pi / 3), 0.0, 1e-12);
  EXPECT_LT(diff(pi / 2), 0.0);
  EXPECT_NEAR(enhanced_combination(pi / 2, 0.0), -0.5, 1e-15);
  EXPECT_GT(diff(1e-6), 0.0);
}

TEST(Enhancement, MeasuredDomainAndBoundary) {
  const EnhancementReport r = enhancement_domain(1e-3);
  EXPECT_LE(r.grid_step, 1e-3);
  EXPECT_NEAR(r.boundary, pi / 3, r.grid_step);
  EXPECT_NEAR(r.below_lo, pi / 3, r.grid_step);
  EXPECT_NEAR(r.below_hi, pi, 1.5 * r.grid_step);  // the difference vanishes again at pi
  EXPECT_FALSE(r.claim_agrees);
  EXPECT_NE(r.summary.find("erratum"), std::string::npos);
  ASSERT_GE(r.intervals.size(), 2u);
  EXPECT_EQ(r.intervals.front().sign, 1);
  EXPECT_THROW(enhancement_domain(0.0), UsageError);
}

TEST(Fourier, SpotValues) {
  EXPECT_EQ(sign_fourier_partial(pi / 2, 1), 0.0);
  EXPECT_EQ(sign_fourier_partial(pi / 2, 12345), 0.0);
  EXPECT_NEAR(sign_fourier_partial(pi / 4, 1), -4.0 / (pi * std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(sign_fourier_partial(3 * pi / 4, 10000), 1.0, 5e-4);
  EXPECT_NEAR(sign_fourier_partial(pi / 4, 10000), -1.0, 5e-4);
}

TEST(Fourier, AntisymmetricAboutQuarterTurn) {
  for (std::size_t terms : {1u, 7u, 1000u, 10000u}) {
    for (double x : {0.01, 0.3, 0.9, 1.5}) {
      EXPECT_NEAR(sign_fourier_partial(pi / 2 + x, terms), -sign_fourier_partial(pi / 2 - x, terms), 1e-12);
    }
  }
}

TEST(Fourier, MatchesCosineFormOfTheSeries) {
  for (double t : {0.2, 1.0, 2.0, 3.0}) {
    double acc = 0.0;
    for (int n = 0; n < 50; ++n) acc += (n % 2 ? -1.0 : 1.0) * std::cos((2 * n + 1) * t) / (2 * n + 1);
    EXPECT_NEAR(sign_fourier_partial(t, 50), -(4 / pi) * acc, 1e-12);
  }
}

TEST(Fourier, PrintedSeriesTendsToMinusOne) {
  for (double t : {0.3, pi / 4, pi / 2, 3 * pi / 4, 2.9}) {
    EXPECT_NEAR(sign_fourier_partial_printed(t, 10000), -1.0, 5e-4) << t;
  }
  EXPECT_NEAR(sign_fourier_partial_printed(pi / 4, 1), -4.0 / (pi * std::sqrt(2.0)), 1e-15);
}

TEST(Fourier, RejectsBadArguments) {
  EXPECT_THROW(sign_fourier_partial(-0.1, 5), UsageError);
  EXPECT_THROW(sign_fourier_partial(4.0, 5), UsageError);
  EXPECT_THROW(sign_fourier_partial(1.0, 0), UsageError);
}
