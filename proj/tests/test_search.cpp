#include <gtest/gtest.h>

#include <cmath>

#include "mrm/search.hpp"

using namespace mrm;

namespace {

double number(const Trial& t, const std::string& name) { return std::get<double>(t.params.at(name)); }

// Objective driven by one walk parameter, independent of the rest.
double depth_driven(const PipelineConfig& config) { return static_cast<double>(config.walk.depth) / 12.0; }

}  // namespace

TEST(RandomSearch, BudgetOneRunsOneTrial) {
  SearchSpace space;
  space.budget = 1;
  auto result = random_search(space, {}, depth_driven, 3);
  ASSERT_EQ(result.trials.size(), 1u);
  EXPECT_EQ(result.best.index, 0u);
}

TEST(RandomSearch, SameSeedSameTrials) {
  SearchSpace space;
  space.budget = 10;
  auto a = random_search(space, {}, depth_driven, 1);
  auto b = random_search(space, {}, depth_driven, 1);
  EXPECT_EQ(trial_log_json(a.trials), trial_log_json(b.trials));
  auto c = random_search(space, {}, depth_driven, 2);
  EXPECT_NE(trial_log_json(a.trials), trial_log_json(c.trials));
}

TEST(RandomSearch, SamplesStayInDomain) {
  SearchSpace space;
  space.budget = 40;
  auto result = random_search(space, {}, depth_driven, 5);
  for (const auto& t : result.trials) {
    for (auto name : {"qt_to_subject", "object_to_qt", "qt_to_object", "subject_to_qt"}) {
      EXPECT_GE(number(t, name), 0.0);
      EXPECT_LE(number(t, name), 1.0);
    }
    EXPECT_GE(number(t, "depth"), 3.0);
    EXPECT_LE(number(t, "depth"), 12.0);
    EXPECT_GE(result.best.objective, t.objective);
  }
}

TEST(RandomSearch, DegenerateSpaceRepeatsOneConfig) {
  SearchSpace space;
  space.probability_min = space.probability_max = 0.25;
  space.walks_per_root = {10};
  space.depth_min = space.depth_max = 4;
  space.modes = {WalkMode::RandomWalks};
  space.dims = {50};
  space.windows = {5};
  space.algorithms = {EmbedAlgorithm::SkipGram};
  space.budget = 5;
  auto result = random_search(space, {}, depth_driven, 0);
  for (const auto& t : result.trials) EXPECT_EQ(t.params, result.trials.front().params);
  auto config = apply_params({}, result.best.params);
  EXPECT_EQ(config.walk.depth, 4u);
  EXPECT_EQ(config.embed.algorithm, EmbedAlgorithm::SkipGram);
  EXPECT_DOUBLE_EQ(config.walk.probabilities.object_to_qt, 0.25);
}

TEST(GridSearch, TruncatesToBudget) {
  SearchSpace space;
  space.budget = 7;
  auto result = grid_search(space, {}, depth_driven);
  EXPECT_EQ(result.trials.size(), 7u);
}

TEST(Importance, DominantParameterStandsOut) {
  SearchSpace space;
  space.budget = 200;
  auto result = random_search(space, {}, depth_driven, 11);
  auto scores = report_importance(result.trials);
  EXPECT_GT(scores.at("depth"), 0.6);
  for (auto& [name, s] : scores) {
    if (name != "depth") EXPECT_LT(s, 0.1) << name;
  }
  double sum = 0;
  for (auto& [name, s] : scores) {
    EXPECT_GE(s, 0.0);
    sum += s;
  }
  EXPECT_LE(sum, 1.0 + 1e-12);
}

TEST(Importance, IrrelevantParameterScoresLow) {
  SearchSpace space;
  space.budget = 200;
  auto result = random_search(space, {}, depth_driven, 12);
  EXPECT_LT(report_importance(result.trials).at("qt_to_subject"), 0.05);
}

TEST(Importance, ConstantObjectiveScoresZero) {
  SearchSpace space;
  space.budget = 25;
  auto result = random_search(space, {}, [](const PipelineConfig&) { return 0.5; }, 1);
  for (auto& [name, s] : report_importance(result.trials)) EXPECT_EQ(s, 0.0) << name;
}

TEST(Importance, TooFewTrialsIsInsufficient) {
  SearchSpace space;
  space.budget = 19;
  auto result = random_search(space, {}, depth_driven, 1);
  EXPECT_THROW(report_importance(result.trials), InsufficientData);
}

TEST(TrialLog, JsonRoundTrip) {
  SearchSpace space;
  space.budget = 4;
  auto result = random_search(space, {}, depth_driven, 9);
  auto json = trial_log_json(result.trials);
  EXPECT_EQ(trial_log_json(trial_log_from_json(json)), json);
  EXPECT_EQ(to_json(search_space_from_json(to_json(space))), to_json(space));
}
