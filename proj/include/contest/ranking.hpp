#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "contest/model.hpp"
#include "contest/random.hpp"

namespace contest {

/// Winner-selection model pi over contribution qualities.
class RankingModel {
 public:
  struct Perfect {};
  struct BetaMixture {
    double beta = 1.0;  // probability of a perfect ordering; otherwise uniformly random
  };
  struct SoftmaxNoise {
    double eta = 1.0;  // Gumbel noise scale on s_i = q_i + eps_i
  };
  using Variant = std::variant<Perfect, BetaMixture, SoftmaxNoise>;

  RankingModel() = default;
  static RankingModel perfect() { return RankingModel(Perfect{}); }
  static RankingModel beta_mixture(double beta);
  static RankingModel softmax(double eta);

  const Variant& variant() const noexcept { return variant_; }
  std::string name() const;
  bool is_softmax() const noexcept { return std::holds_alternative<SoftmaxNoise>(variant_); }
  // Probability of a perfect ordering (1 for Perfect); empty for SoftmaxNoise.
  std::optional<double> accuracy() const;

 private:
  explicit RankingModel(Variant v) : variant_(v) {}
  Variant variant_ = Perfect{};
};

// Probability that each contributor wins; sums to 1. Perfect-ranking ties split evenly.
std::vector<double> winner_probabilities(const RankingModel& ranking,
                                         std::span<const double> qualities);

// Win probability of a contributor with quality `own` against `others`, without allocation.
double own_win_probability(const RankingModel& ranking, double own,
                           std::span<const double> others);

// Samples a winner index. Softmax uses a Gumbel race on q/eta.
std::size_t draw_winner(const RankingModel& ranking, std::span<const double> qualities,
                        Stream& stream);

// Samples a full ordering (best first) under the beta-mixture: perfect with probability beta,
// else a uniformly random permutation. Ties in the perfect branch are ordered at random.
std::vector<std::size_t> draw_ranking(double beta, std::span<const double> qualities,
                                      Stream& stream);

/// Expected-points mechanism p(q_i, q_-i, m).
class GeneralMechanism {
 public:
  struct BestContribution {
    RewardScheme rewards;
    RankingModel ranking;
  };
  struct RankOrder {
    RankPrizes prizes;
    double beta = 1.0;
  };
  struct Proportional {
    double k = 1.0;
  };
  struct Scaled {
    std::shared_ptr<const GeneralMechanism> base;
    double k = 1.0;
  };
  using Variant = std::variant<BestContribution, RankOrder, Proportional, Scaled>;

  GeneralMechanism(Variant v);  // NOLINT(implicit)
  static GeneralMechanism scaled(GeneralMechanism base, double k);

  const Variant& variant() const noexcept { return variant_; }
  std::string name() const;

 private:
  Variant variant_;
};

// Expected points to a contributor of quality `own` facing contributions `others`.
// Proportional with all-zero qualities splits k uniformly.
double expected_points(const GeneralMechanism& mech, double own, std::span<const double> others);

struct RankingAssumptionReport {
  bool pass = true;
  std::string note;
  std::optional<std::string> violation;
};

using WinProbabilityFn = std::function<double(double own, std::span<const double> others)>;

// Grid check that pi is nondecreasing in own quality and nonincreasing as rival contributions
// are added. `strict` additionally requires a strict increase in own quality when m >= 2.
RankingAssumptionReport validate_ranking_assumptions(const WinProbabilityFn& pi,
                                                     std::size_t grid, bool strict,
                                                     std::size_t max_contributors = 5);
RankingAssumptionReport validate_ranking_assumptions(const RankingModel& ranking,
                                                     std::size_t grid);

}  // namespace contest
