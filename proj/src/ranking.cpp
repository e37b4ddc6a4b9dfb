#include "contest/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "contest/errors.hpp"

namespace contest {

namespace {

double perfect_share(double own, std::span<const double> others) {
  std::size_t tied = 0;
  for (double q : others) {
    if (q > own) return 0.0;
    if (q == own) ++tied;
  }
  return 1.0 / static_cast<double>(tied + 1);
}

// Average prize over the ranks a contribution of quality `own` can occupy in a perfect ordering.
double perfect_rank_prize(const RankPrizes& prizes, double own, std::span<const double> others) {
  std::size_t above = 0;
  std::size_t tied = 0;
  for (double q : others) {
    if (q > own) {
      ++above;
    } else if (q == own) {
      ++tied;
    }
  }
  double sum = 0.0;
  for (std::size_t r = above + 1; r <= above + tied + 1; ++r) sum += prizes.prize(r);
  return sum / static_cast<double>(tied + 1);
}

double random_rank_prize(const RankPrizes& prizes, std::size_t m) {
  double sum = 0.0;
  for (std::size_t r = 1; r <= m; ++r) sum += prizes.prize(r);
  return sum / static_cast<double>(m);
}

}  // namespace

RankingModel RankingModel::beta_mixture(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ContractError("ranking accuracy beta must lie in [0,1]");
  return RankingModel(BetaMixture{beta});
}

RankingModel RankingModel::softmax(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ContractError("softmax noise scale must be > 0");
  return RankingModel(SoftmaxNoise{eta});
}

std::string RankingModel::name() const {
  std::ostringstream out;
  if (std::holds_alternative<Perfect>(variant_)) {
    out << "perfect";
  } else if (const auto* b = std::get_if<BetaMixture>(&variant_)) {
    out << "beta(" << b->beta << ")";
  } else {
    out << "softmax(" << std::get<SoftmaxNoise>(variant_).eta << ")";
  }
  return out.str();
}

std::optional<double> RankingModel::accuracy() const {
  if (std::holds_alternative<Perfect>(variant_)) return 1.0;
  if (const auto* b = std::get_if<BetaMixture>(&variant_)) return b->beta;
  return std::nullopt;
}

double own_win_probability(const RankingModel& ranking, double own,
                           std::span<const double> others) {
  const auto& v = ranking.variant();
  if (std::holds_alternative<RankingModel::Perfect>(v)) return perfect_share(own, others);
  if (const auto* b = std::get_if<RankingModel::BetaMixture>(&v)) {
    const double m = static_cast<double>(others.size() + 1);
    return b->beta * perfect_share(own, others) + (1.0 - b->beta) / m;
  }
  const double eta = std::get<RankingModel::SoftmaxNoise>(v).eta;
  double denom = 1.0;
  for (double q : others) denom += std::exp((q - own) / eta);
  return 1.0 / denom;
}

std::vector<double> winner_probabilities(const RankingModel& ranking,
                                         std::span<const double> qualities) {
  if (qualities.empty()) throw ContractError("winner probabilities need at least one contributor");
  const std::size_t m = qualities.size();
  std::vector<double> probs(m);
  if (const auto* s = std::get_if<RankingModel::SoftmaxNoise>(&ranking.variant())) {
    const double top = *std::max_element(qualities.begin(), qualities.end());
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      probs[i] = std::exp((qualities[i] - top) / s->eta);
      total += probs[i];
    }
    for (double& p : probs) p /= total;
    return probs;
  }
  const double top = *std::max_element(qualities.begin(), qualities.end());
  const auto ties = static_cast<double>(std::count(qualities.begin(), qualities.end(), top));
  const double beta = ranking.accuracy().value_or(1.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double perfect = qualities[i] == top ? 1.0 / ties : 0.0;
    probs[i] = beta * perfect + (1.0 - beta) / static_cast<double>(m);
  }
  return probs;
}

std::size_t draw_winner(const RankingModel& ranking, std::span<const double> qualities,
                        Stream& stream) {
  if (qualities.empty()) throw ContractError("cannot draw a winner without contributions");
  if (const auto* s = std::get_if<RankingModel::SoftmaxNoise>(&ranking.variant())) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < qualities.size(); ++i) {
      const double score = qualities[i] / s->eta + stream.gumbel();
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    return best;
  }
  return draw_ranking(ranking.accuracy().value_or(1.0), qualities, stream).front();
}

std::vector<std::size_t> draw_ranking(double beta, std::span<const double> qualities,
                                      Stream& stream) {
  std::vector<std::size_t> order(qualities.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[stream.below(i)]);
  if (stream.uniform() < beta) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return qualities[x] > qualities[y]; });
  }
  return order;
}

GeneralMechanism::GeneralMechanism(Variant v) : variant_(std::move(v)) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BestContribution>) {
          m.rewards.validate();
        } else if constexpr (std::is_same_v<T, RankOrder>) {
          m.prizes.validate();
          if (!(m.beta >= 0.0 && m.beta <= 1.0)) throw ContractError("beta must lie in [0,1]");
        } else if constexpr (std::is_same_v<T, Proportional>) {
          if (!(m.k > 0.0)) throw ContractError("proportional scale must be > 0");
        } else {
          if (!m.base) throw ContractError("scaled mechanism needs a base mechanism");
          if (!(m.k > 0.0)) throw ContractError("mechanism scale k must be > 0");
        }
      },
      variant_);
}

GeneralMechanism GeneralMechanism::scaled(GeneralMechanism base, double k) {
  return GeneralMechanism(Scaled{std::make_shared<const GeneralMechanism>(std::move(base)), k});
}

std::string GeneralMechanism::name() const {
  std::ostringstream out;
  std::visit(
      [&out](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BestContribution>) {
          out << "best(" << m.rewards.p_B << "," << m.rewards.p_C << "," << m.ranking.name() << ")";
        } else if constexpr (std::is_same_v<T, RankOrder>) {
          out << "rank_order(beta=" << m.beta << ")";
        } else if constexpr (std::is_same_v<T, Proportional>) {
          out << "proportional(" << m.k << ")";
        } else {
          out << m.k << "*" << m.base->name();
        }
      },
      variant_);
  return out.str();
}

double expected_points(const GeneralMechanism& mech, double own, std::span<const double> others) {
  return std::visit(
      [own, others](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GeneralMechanism::BestContribution>) {
          const double pi = own_win_probability(m.ranking, own, others);
          return pi * m.rewards.p_B + (1.0 - pi) * m.rewards.p_C;
        } else if constexpr (std::is_same_v<T, GeneralMechanism::RankOrder>) {
          return m.beta * perfect_rank_prize(m.prizes, own, others) +
                 (1.0 - m.beta) * random_rank_prize(m.prizes, others.size() + 1);
        } else if constexpr (std::is_same_v<T, GeneralMechanism::Proportional>) {
          const double total = std::accumulate(others.begin(), others.end(), own);
          if (total <= 0.0) return m.k / static_cast<double>(others.size() + 1);
          return m.k * own / total;
        } else {
          return m.k * expected_points(*m.base, own, others);
        }
      },
      mech.variant());
}

RankingAssumptionReport validate_ranking_assumptions(const WinProbabilityFn& pi, std::size_t grid,
                                                     bool strict, std::size_t max_contributors) {
  RankingAssumptionReport report;
  if (grid < 2) grid = 2;
  const auto at = [grid](std::size_t i) { return static_cast<double>(i) / static_cast<double>(grid - 1); };
  std::vector<double> others;
  constexpr double slack = 1e-12;
  auto fail = [&report](const std::string& msg) {
    report.pass = false;
    report.violation = msg;
    return report;
  };
  // Rival profiles: all rivals at a common grid quality, and rivals spread over the grid.
  for (std::size_t rivals = 0; rivals + 1 <= max_contributors; ++rivals) {
    for (std::size_t j = 0; j <= grid; ++j) {
      others.assign(rivals, 0.0);
      for (std::size_t r = 0; r < rivals; ++r) {
        others[r] = j < grid ? at(j) : at((r * (grid - 1)) / std::max<std::size_t>(1, rivals));
      }
      double prev = -1.0;
      for (std::size_t i = 0; i < grid; ++i) {
        const double own = at(i);
        const double p = pi(own, others);
        if (i > 0) {
          const bool decreasing = p < prev - slack;
          const bool flat = !(p > prev);
          if (decreasing || (strict && rivals >= 1 && flat)) {
            std::ostringstream msg;
            msg << "win probability not " << (decreasing ? "nondecreasing" : "strictly increasing")
                << " in own quality at own=" << own << " with " << rivals << " rival(s)";
            return fail(msg.str());
          }
        }
        prev = p;
        if (j < grid) {
          std::vector<double> more(others);
          more.push_back(at(j));
          const double fewer = p;
          const double p_more = pi(own, more);
          if (p_more > fewer + slack) {
            std::ostringstream msg;
            msg << "win probability increases when a rival is added at own=" << own
                << ", rival quality=" << at(j) << ", rivals=" << rivals;
            return fail(msg.str());
          }
        }
      }
    }
  }
  return report;
}

RankingAssumptionReport validate_ranking_assumptions(const RankingModel& ranking,
                                                     std::size_t grid) {
  auto pi = [&ranking](double own, std::span<const double> others) {
    return own_win_probability(ranking, own, others);
  };
  auto report = validate_ranking_assumptions(pi, grid, ranking.is_softmax());
  if (report.pass && !ranking.is_softmax()) {
    report.note = "weak monotonicity off ties: win probability is a step function of own quality";
  }
  return report;
}

}  // namespace contest
