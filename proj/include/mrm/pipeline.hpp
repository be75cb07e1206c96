#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mrm/convert.hpp"
#include "mrm/embed.hpp"
#include "mrm/error.hpp"
#include "mrm/linkpred.hpp"
#include "mrm/task.hpp"
#include "mrm/walks.hpp"

namespace mrm {

using Json = nlohmann::ordered_json;

enum class Stage { Config, Ingest, Convert, Split, Walk, Embed, Train, Evaluate, Output };

std::string_view to_string(Stage stage);
// Process exit code for a failure in `stage`; 0 is success, 2 is usage.
int exit_code(Stage stage);

class StageError : public Error {
 public:
  StageError(Stage stage, const std::string& message)
      : Error(std::string(to_string(stage)) + ": " + message), stage_(stage) {}
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

enum class SourceKind { Wd50k, Kgrc };

struct DatasetConfig {
  SourceKind kind = SourceKind::Wd50k;
  std::string path;
  bool hyper_relational_only = true;
  WrapPolicy kgrc_wrap = WrapPolicy::Always;
};

struct PipelineConfig {
  DatasetConfig dataset;
  std::vector<Mrm> mrms{Mrm::Ref, Mrm::Sgp, Mrm::Rdr};
  ConvertOptions convert;
  SplitRatios split;
  WalkConfig walk;
  EmbedConfig embed;
  LPConfig lp;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  void validate() const;  // throws StageError(Config)
};

Json to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const Json& json);  // missing keys keep defaults
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_hash(const PipelineConfig& config);

// Stage seeds derived from the master seed.
struct StageSeeds {
  std::uint64_t split = 0;
  std::uint64_t walk = 0;
  std::uint64_t embed = 0;
  std::uint64_t lp = 0;
};
StageSeeds stage_seeds(std::uint64_t seed);

// One converted graph with its fair task and split.
struct PreparedTask {
  Mrm mrm = Mrm::Ref;
  Graph graph;
  EvalFilter filter;
  Split split;
  std::vector<std::string> warnings;
};

std::vector<HyperFact> load_facts(const DatasetConfig& dataset);
Graph convert_source(const DatasetConfig& dataset, const std::vector<HyperFact>& facts,
                     const Graph* kgrc_ref, Mrm mrm, const ConvertOptions& options,
                     std::vector<std::string>* warnings = nullptr);
PreparedTask prepare_task(Graph graph, Mrm mrm, const SplitRatios& ratios, std::uint64_t seed);

// The graph used for walks and LP training: everything except the held-out
// valid and test triples.
Graph training_graph(const PreparedTask& task);

struct RunOutcome {
  WalkCorpus corpus;
  EmbedResult embedding;
  LPModel model;
  CoverageReport coverage;
  TrainStats lp_stats;
  MetricsReport valid;
  MetricsReport test;
  std::size_t train_triples = 0;
};

// Walk, embed, train and evaluate one prepared task.
RunOutcome run_task(const PreparedTask& task, const PipelineConfig& config);

// Mean of 1/rank when the true entity is ranked uniformly among k: H(k)/k.
double random_baseline_mrr(std::size_t candidates);

Json metrics_json(const PreparedTask& task, const RunOutcome& outcome, const PipelineConfig& config);

struct PipelineResult {
  std::map<Mrm, Json> metrics;
  Json manifest;
};

// Full run writing artifacts under output_dir/<MRM>/ and a manifest.json.
// Throws StageError; the manifest records the failing stage.
PipelineResult run_pipeline(const PipelineConfig& config);

std::string write_json(const Json& json);

}  // namespace mrm
