#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mrm/pipeline.hpp"

namespace mrm {

struct SearchSpace {
  double probability_min = 0.0;
  double probability_max = 1.0;
  std::vector<std::size_t> walks_per_root{10, 100, 200};
  std::size_t depth_min = 3;
  std::size_t depth_max = 12;
  std::vector<WalkMode> modes{WalkMode::MidWalks, WalkMode::MidWalksDuplicateFree,
                              WalkMode::RandomWalks, WalkMode::RandomWalksDuplicateFree};
  std::vector<std::size_t> dims{50, 100, 200, 400};
  std::vector<std::size_t> windows{5, 7, 9, 11};
  std::vector<EmbedAlgorithm> algorithms{EmbedAlgorithm::Cbow, EmbedAlgorithm::SkipGram,
                                         EmbedAlgorithm::CWindow,
                                         EmbedAlgorithm::StructuredSkipGram};
  std::size_t budget = 50;

  void validate() const;  // throws ConfigError
};

Json to_json(const SearchSpace& space);
SearchSpace search_space_from_json(const Json& json);

using ParamValue = std::variant<double, std::string>;

struct Trial {
  std::size_t index = 0;
  std::map<std::string, ParamValue> params;
  double objective = 0.0;
};

struct SearchResult {
  Trial best;
  std::vector<Trial> trials;  // in trial order
};

// Parameters of a trial, applied on top of a base config.
std::map<std::string, ParamValue> sample_params(const SearchSpace& space, Rng& rng);
PipelineConfig apply_params(const PipelineConfig& base, const std::map<std::string, ParamValue>& params);

// Objective of one configuration: filtered validation MRR.
using Objective = std::function<double(const PipelineConfig&)>;

// Objective that walks, embeds and trains on a fixed prepared task.
Objective validation_mrr(const PreparedTask& task);

SearchResult random_search(const SearchSpace& space, const PipelineConfig& base,
                           const Objective& objective, std::uint64_t seed);

// Cartesian product of the discrete domains (probabilities fixed at the
// base config), truncated to the budget.
SearchResult grid_search(const SearchSpace& space, const PipelineConfig& base,
                         const Objective& objective);

Json trial_log_json(const std::vector<Trial>& trials);
std::vector<Trial> trial_log_from_json(const Json& json);

// Between-bin over total sum of squares of the objective per parameter.
// Numeric parameters with more than 8 distinct values are cut into 8 equal
// bins; everything else groups by value. Scores are rescaled when they sum
// above 1. Throws InsufficientData below 20 trials.
std::map<std::string, double> report_importance(const std::vector<Trial>& trials);

}  // namespace mrm
