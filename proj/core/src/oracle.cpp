#include "idtrack/oracle.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "idtrack/errors.hpp"
#include "idtrack/planners.hpp"
#include "idtrack/rng.hpp"

namespace idtrack {

namespace {

class Expectimax {
 public:
  Expectimax(const TransitionModel& model, const CostParams& params)
      : model_(model), params_(params), n_(model.sensors()), d_(model.dim()) {}

  // Returns the optimal value; writes the optimal subset when `best_action` is set.
  double value(const std::vector<double>& p, std::size_t h, std::size_t* best_action = nullptr) {
    if (h == 0) return 0.0;

    std::vector<double> pred(d_, 0.0);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) pred[j] += p[i] * model_(i, j);

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_a = 0;
    for (std::size_t a = 0; a < (std::size_t{1} << n_); ++a) {
      double miss = 0.0;
      double on = 0.0;
      double future = 0.0;
      for (std::size_t l = 0; l < n_; ++l) {
        if ((a >> l) & 1U) {
          on += 1.0;
          if (pred[l] > 0.0) future += pred[l] * unit_value(l, h - 1);
        } else {
          miss += pred[l];
        }
      }
      if (miss > 0.0) {
        std::vector<double> post(d_, 0.0);
        for (std::size_t l = 0; l < n_; ++l)
          if (!((a >> l) & 1U)) post[l] = pred[l] / miss;
        future += miss * value(post, h - 1);
      }
      const double q = miss + params_.lambda * on + params_.discount * future;
      if (q < best - 1e-12) {
        best = q;
        best_a = a;
      }
    }
    if (best_action) *best_action = best_a;
    return best;
  }

 private:
  double unit_value(std::size_t l, std::size_t h) {
    if (h == 0) return 0.0;
    const auto key = std::make_pair(l, h);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<double> e(d_, 0.0);
    e[l] = 1.0;
    const double v = value(e, h);
    memo_.emplace(key, v);
    return v;
  }

  const TransitionModel& model_;
  CostParams params_;
  std::size_t n_;
  std::size_t d_;
  std::map<std::pair<std::size_t, std::size_t>, double> memo_;
};

}  // namespace

OracleResult expectimax_oracle(const TransitionModel& model, const Belief& root,
                               const CostParams& params, std::size_t horizon) {
  if (model.sensors() > kOracleMaxSensors || horizon > kOracleMaxHorizon)
    throw OracleTooLargeError("expectimax oracle limited to n <= 5 and horizon <= 4");
  if (horizon == 0) throw ConfigError("oracle horizon must be >= 1");
  if (root.dim() != model.dim()) throw InvalidBeliefError("root belief dimension mismatch");
  params.validate();

  Expectimax ex(model, params);
  const std::vector<double> p(root.probs().begin(), root.probs().end());
  std::size_t best = 0;
  OracleResult result;
  result.value = ex.value(p, horizon, &best);
  result.action = ActionMask(model.sensors());
  for (std::size_t l = 0; l < model.sensors(); ++l)
    if ((best >> l) & 1U) result.action.set(l);
  return result;
}

TransitionModel random_small_model(std::size_t sensors, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t d = sensors + 1;
  std::vector<double> dense(d * d, 0.0);
  for (std::size_t i = 0; i < sensors; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < sensors; ++j) {
      if (uniform01(rng) < 0.65) {
        dense[i * d + j] = 0.05 + uniform01(rng);
        total += dense[i * d + j];
      }
    }
    if (total == 0.0) {
      const std::size_t j = static_cast<std::size_t>(rng() % sensors);
      dense[i * d + j] = 1.0;
      total = 1.0;
    }
    const double exit = uniform01(rng) < 0.25 ? 0.1 * uniform01(rng) : 0.0;
    for (std::size_t j = 0; j < sensors; ++j) dense[i * d + j] *= (1.0 - exit) / total;
    dense[i * d + sensors] = exit;
  }
  dense[sensors * d + sensors] = 1.0;
  return TransitionModel(sensors, std::move(dense));
}

std::vector<OracleCase> oracle_cases(std::uint64_t seed, std::size_t count) {
  constexpr std::size_t kSensors = 4;
  std::vector<OracleCase> cases;
  cases.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t s = derive_seed(seed, 0xC0FFEE, k);
    TransitionModel model = random_small_model(kSensors, s);
    const Position start = static_cast<Position>(splitmix64(s) % kSensors);
    const CostParams params{k % 2 == 0 ? 0.2 : 0.5, 0.9};
    cases.push_back(OracleCase{std::move(model), Belief::unit(kSensors, start), params, 3});
  }
  return cases;
}

OracleComparison compare_with_oracle(const OracleCase& c, const SearchConfig& config) {
  OracleComparison out;
  out.oracle = expectimax_oracle(c.model, c.root, c.params, c.horizon);

  SearchConfig cfg = config;
  cfg.max_depth = c.horizon;
  cfg.discount = c.params.discount;
  const SubsetActionSpace space(c.model.sensors());
  const SearchResult r = search(c.root, SearchProblem{c.model, c.params, space}, cfg);
  out.search_action = r.mask;
  out.search_value = r.value;
  out.match = out.search_action == out.oracle.action;
  out.relative_error = out.oracle.value > 0.0
                           ? std::abs(out.search_value - out.oracle.value) / out.oracle.value
                           : std::abs(out.search_value);
  return out;
}

}  // namespace idtrack
