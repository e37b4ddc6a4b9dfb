#include <doctest.h>

#include <cmath>
#include <vector>

#include "contest/errors.hpp"
#include "contest/model.hpp"

using namespace contest;

TEST_CASE("reward and cost validation") {
  CHECK_NOTHROW(RewardScheme{1.0, 0.0, 0.0}.validate());
  CHECK_THROWS_AS(RewardScheme({0.5, 0.5, 0.0}).validate(), ContractError);
  CHECK_THROWS_AS(RewardScheme({1.0, -0.1, 0.0}).validate(), ContractError);
  CHECK_THROWS_AS(RewardScheme({1.0, 0.0, -1.0}).validate(), ContractError);
  CHECK_THROWS_AS(CostModel({-0.1, 0.0, std::nullopt}).validate(), ContractError);
  CHECK_THROWS_AS(CostModel({0.1, 0.0, 0.0}).validate(), ContractError);
}

TEST_CASE("rank prizes") {
  const RankPrizes p{{3.0, 1.0, 1.0}, 0.2};
  CHECK_NOTHROW(p.validate());
  CHECK(p.prize(1) == 3.0);
  CHECK(p.prize(3) == 1.0);
  CHECK(p.prize(4) == 0.0);
  CHECK_THROWS_AS(RankPrizes({{1.0, 1.0}, 0.0}).validate(), ContractError);
  CHECK_THROWS_AS(RankPrizes({{1.0, 2.0}, 0.0}).validate(), ContractError);
  CHECK_THROWS_AS(RankPrizes({{}, 0.0}).validate(), ContractError);
}

TEST_CASE("effort cost function") {
  const EffortCostFunction linear{0.05, 0.1, 1.0};
  CHECK(linear.cost(0.0) == doctest::Approx(0.05));
  CHECK(linear.cost(1.0) == doctest::Approx(0.15));
  CHECK(linear.marginal(0.3) == doctest::Approx(0.1));
  const EffortCostFunction quad{0.0, 2.0, 2.0};
  CHECK(quad.cost(0.5) == doctest::Approx(0.5));
  CHECK(quad.marginal(0.5) == doctest::Approx(2.0));
  // central difference
  const double h = 1e-6;
  CHECK(quad.marginal(0.7) == doctest::Approx((quad.cost(0.7 + h) - quad.cost(0.7 - h)) / (2 * h)));
  CHECK_THROWS_AS(EffortCostFunction({0.0, 1.0, 0.5}).validate(), ContractError);
}

TEST_CASE("quality models") {
  const auto h = QualityModel::homogeneous();
  CHECK(h.quality(0.3, 0.9) == 0.3);
  CHECK(h.d_quality_d_effort(0.3, 0.9) == 0.0);

  const auto lin = QualityModel::linear_mix(0.5);
  CHECK(lin.quality(0.2, 0.0) == doctest::Approx(0.1));
  CHECK(lin.quality(0.2, 1.0) == doctest::Approx(0.6));
  CHECK(lin.d_quality_d_effort(0.2, 0.4) == doctest::Approx(0.5));
  CHECK(lin.ability_for_quality(0.6, 1.0) == doctest::Approx(0.2));
  CHECK(lin.ability_for_quality(0.1, 1.0) == 0.0);  // clamped

  const auto cd = QualityModel::cobb_douglas(0.5, 0.05);
  CHECK(cd.quality(0.25, 1.0) == doctest::Approx(0.5));
  CHECK(cd.quality(0.25, 0.0) == doctest::Approx(cd.quality(0.25, 0.05)));
  CHECK(cd.ability_for_quality(cd.quality(0.36, 0.49), 0.49) == doctest::Approx(0.36));
  const double e = 0.4;
  const double dq = 1e-6;
  CHECK(cd.d_quality_d_effort(0.6, e) ==
        doctest::Approx((cd.quality(0.6, e + dq) - cd.quality(0.6, e - dq)) / (2 * dq)).epsilon(1e-5));
  CHECK_THROWS_AS(QualityModel::linear_mix(0.0), ContractError);
}

TEST_CASE("designer utilities on sorted qualities") {
  const std::vector<double> q{0.9, 0.5, 0.2};
  CHECK(DesignerUtility(DesignerUtility::MaxQuality{})(q) == doctest::Approx(0.9));
  CHECK(DesignerUtility(DesignerUtility::SumQuality{})(q) == doctest::Approx(1.6));
  CHECK(DesignerUtility(DesignerUtility::TopK{2})(q) == doctest::Approx(1.4));
  CHECK(DesignerUtility(DesignerUtility::TopK{5})(q) == doctest::Approx(1.6));
  CHECK(DesignerUtility(DesignerUtility::SumMinusSearchCost{0.5})(q) == doctest::Approx(0.1));
  const std::vector<double> none;
  for (const DesignerUtility u :
       {DesignerUtility(DesignerUtility::MaxQuality{}), DesignerUtility(DesignerUtility::SumQuality{}),
        DesignerUtility(DesignerUtility::TopK{1}),
        DesignerUtility(DesignerUtility::SumMinusSearchCost{0.3})}) {
    CHECK(u(none) == 0.0);
  }
  const DesignerUtility tab(DesignerUtility::Tabulated{"count", [](std::span<const double> s) {
    return static_cast<double>(s.size());
  }});
  CHECK(tab(q) == 3.0);
  CHECK_FALSE(tab.is_builtin());

  const DesignerUtility max(DesignerUtility::MaxQuality{});
  CHECK(evaluate_designer_utility(max, 3, q) == doctest::Approx(0.9));
  const std::vector<double> unsorted{0.2, 0.9};
  CHECK_THROWS_AS(evaluate_designer_utility(max, 2, unsorted), ContractError);
  CHECK_THROWS_AS(evaluate_designer_utility(max, 2, q), ContractError);
}

TEST_CASE("realized payoffs") {
  const CostModel costs{0.1, 0.02, std::nullopt};
  CHECK(realized_payoff(Action::not_participate(), 5.0, costs) == 0.0);
  CHECK(realized_payoff(Action::rate(), 0.3, costs) == doctest::Approx(0.28));
  CHECK(realized_payoff(Action::contribute(), 1.0, costs) == doctest::Approx(0.9));
  const EffortCostFunction effort{0.05, 0.1, 1.0};
  CHECK(realized_payoff(Action::contribute(1.0), 1.0, costs, effort) == doctest::Approx(0.85));
}

TEST_CASE("effort policies") {
  CHECK(EffortPolicy::constant(0.4)(0.9) == 0.4);
  const auto p = EffortPolicy::on_grid({0.0, 0.5, 1.0});
  CHECK(p(0.2) == 0.0);
  CHECK(p(0.5) == 0.5);
  CHECK(p(0.99) == 0.5);
  CHECK(p(1.0) == 1.0);
  CHECK_THROWS_AS(EffortPolicy::on_grid({1.5}), ContractError);
}

TEST_CASE("strategy profiles") {
  const auto sym = StrategyProfile::symmetric(4, {0.3, EffortPolicy::constant(1.0)});
  CHECK(sym.size() == 4);
  CHECK(sym.is_symmetric());
  CHECK(sym.agent(3).threshold == 0.3);
  CHECK(sym.roles() == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(sym.agent(4), ContractError);

  const auto collapsed = StrategyProfile::per_agent({{0.2, {}}, {0.2, {}}});
  CHECK(collapsed.is_symmetric());

  const auto asym = StrategyProfile::per_agent({{0.0, {}}, {0.15, {}}, {0.15, {}}});
  CHECK_FALSE(asym.is_symmetric());
  CHECK(asym.roles() == std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(StrategyProfile::symmetric(2, {1.5, {}}), ContractError);
}

TEST_CASE("mixed participation strategy") {
  const MixedParticipationStrategy sigma({0.0, 0.5, 1.0, 1.0});
  CHECK(sigma(0.1) == 0.0);
  CHECK(sigma(0.3) == 0.5);
  CHECK(sigma(1.0) == 1.0);
  // uniform: cells of mass 1/4
  CHECK(sigma.participation_rate(AbilityDistribution::uniform()) == doctest::Approx(0.625));
  CHECK_THROWS_AS(MixedParticipationStrategy({1.2}), ContractError);
}
