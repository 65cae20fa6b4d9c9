#include <gtest/gtest.h>

#include <limits>
#include <vector>

#include "idtrack/errors.hpp"
#include "idtrack/oracle.hpp"

namespace idtrack {
namespace {

// Recursion over unnormalised joint weights w(s) = P(history, s); the value is
// linear in w, so no filter normalisation is ever needed. Shares no code with
// the library filter.
double brute_value(const TransitionModel& m, const std::vector<double>& w, double lambda, double alpha,
                   int h, std::size_t* best_action = nullptr) {
  if (h == 0) return 0.0;
  const std::size_t n = m.sensors(), d = n + 1;
  double mass = 0.0;
  std::vector<double> next(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    mass += w[i];
    for (std::size_t j = 0; j < d; ++j) next[j] += w[i] * m(i, j);
  }

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < (std::size_t{1} << n); ++a) {
    double v = 0.0;
    std::vector<double> missed(d, 0.0);
    bool any_miss = false;
    for (std::size_t l = 0; l < n; ++l) {
      if ((a >> l) & 1U) {
        v += lambda * mass;
        if (next[l] == 0.0) continue;
        std::vector<double> seen(d, 0.0);
        seen[l] = next[l];
        v += alpha * brute_value(m, seen, lambda, alpha, h - 1);
      } else if (next[l] > 0.0) {
        v += next[l];
        missed[l] = next[l];
        any_miss = true;
      }
    }
    if (any_miss) v += alpha * brute_value(m, missed, lambda, alpha, h - 1);
    if (v < best - 1e-12) {
      best = v;
      if (best_action) *best_action = a;
    }
  }
  return best;
}

ActionMask mask_from_bits(std::size_t n, std::size_t a) {
  ActionMask m(n);
  for (std::size_t l = 0; l < n; ++l)
    if ((a >> l) & 1U) m.set(l);
  return m;
}

TEST(Oracle, DeterministicSingleStage) {
  const TransitionModel m(3, {0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1});
  const auto r = expectimax_oracle(m, Belief::unit(3, 0), {0.4, 0.9}, 1);
  EXPECT_EQ(r.action.on_positions(), (std::vector<Position>{1}));
  EXPECT_DOUBLE_EQ(r.value, 0.4);
}

TEST(Oracle, FreeEnergyMeansZeroCost) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto m = random_small_model(4, seed);
    const auto r = expectimax_oracle(m, Belief::unit(4, 1), {0.0, 0.9}, 3);
    EXPECT_NEAR(r.value, 0.0, 1e-12);
    const Belief pred = predict(Belief::unit(4, 1), m);
    for (Position l = 0; l < 4; ++l) {
      if (pred[l] > 0.0) {
        EXPECT_TRUE(r.action.on(l));
      }
    }
  }
}

TEST(Oracle, ThreeStateChainByHand) {
  // Uniform rows: every stage sees a uniform prediction, so powering k sensors
  // costs 0.5k + (3-k)/3, minimised by k = 0 at 1 per stage: 1 + 0.9 * 1.
  const double t = 1.0 / 3.0;
  const TransitionModel m(3, {t, t, t, 0, t, t, t, 0, t, t, t, 0, 0, 0, 0, 1});
  const auto r = expectimax_oracle(m, Belief::unit(3, 0), {0.5, 0.9}, 2);
  EXPECT_EQ(r.action.count(), 0u);
  EXPECT_NEAR(r.value, 1.9, 1e-12);
}

TEST(Oracle, MatchesIndependentEnumeration) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 3 + seed % 3;
    const auto m = random_small_model(n, seed + 100);
    const double lambda = 0.1 + 0.15 * static_cast<double>(seed % 5);
    const int h = 1 + static_cast<int>(seed % 3);
    std::vector<double> root(n + 1, 0.0);
    root[seed % n] = 0.6;
    root[(seed + 1) % n] += 0.4;
    std::size_t best = 0;
    const double want = brute_value(m, root, lambda, 0.9, h, &best);
    const auto r = expectimax_oracle(m, Belief(root), {lambda, 0.9}, static_cast<std::size_t>(h));
    EXPECT_NEAR(r.value, want, 1e-9) << seed;
    EXPECT_EQ(r.action, mask_from_bits(n, best)) << seed;
  }
}

TEST(Oracle, SizeGuard) {
  const auto big = build_line_model(6, 1, 0.0);
  EXPECT_THROW(expectimax_oracle(big, Belief::unit(6, 2), {0.3, 0.9}, 2), OracleTooLargeError);
  const auto small = random_small_model(4, 1);
  EXPECT_THROW(expectimax_oracle(small, Belief::unit(4, 2), {0.3, 0.9}, 5), OracleTooLargeError);
}

TEST(Oracle, CasesAreSeededAndShaped) {
  const auto a = oracle_cases(3), b = oracle_cases(3);
  ASSERT_EQ(a.size(), 10u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].model.sensors(), 4u);
    EXPECT_EQ(a[k].horizon, 3u);
    EXPECT_DOUBLE_EQ(a[k].params.lambda, k % 2 == 0 ? 0.2 : 0.5);
    EXPECT_TRUE(std::equal(a[k].model.dense().begin(), a[k].model.dense().end(), b[k].model.dense().begin()));
  }
}

TEST(Oracle, SearchAgreesOnASmallInstance) {
  const auto cases = oracle_cases(1, 3);
  SearchConfig cfg;
  cfg.iterations = 20000;
  int matches = 0;
  for (const auto& c : cases) matches += compare_with_oracle(c, cfg).match;
  EXPECT_GE(matches, 2);
}

}  // namespace
}  // namespace idtrack
