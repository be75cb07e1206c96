#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mrm/pipeline.hpp"
#include "mrm/rdf_io.hpp"
#include "mrm/synthetic.hpp"

using namespace mrm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("mrm_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_small_dataset(const fs::path& dir) {
  auto path = dir / "small.csv";
  std::ofstream out(path);
  for (const auto& fact : synthetic_hrkg(HrkgOptions::small(), 0)) out << format_wd50k_row(fact) << '\n';
  return path;
}

PipelineConfig small_config(const fs::path& dir) {
  PipelineConfig config;
  config.dataset.path = write_small_dataset(dir).string();
  config.output_dir = (dir / "out").string();
  config.walk.walks_per_root = 5;
  config.walk.depth = 3;
  config.embed.dim = 16;
  config.embed.epochs = 3;
  config.lp.epochs = 10;
  config.seed = 7;
  return config;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST(Pipeline, SmallDatasetRunsForEveryModel) {
  auto dir = scratch("small");
  auto config = small_config(dir);
  auto result = run_pipeline(config);
  ASSERT_EQ(result.metrics.size(), 3u);
  for (auto mrm : kAllMrms) {
    const auto& m = result.metrics.at(mrm);
    double mrr = m["test"]["filtered"]["mrr"].get<double>();
    EXPECT_GT(mrr, 0.0) << to_string(mrm);
    EXPECT_LE(mrr, 1.0) << to_string(mrm);
    auto sub = dir / "out" / std::string(to_string(mrm));
    for (auto name : {"graph.nt", "train.nt", "valid.nt", "test.nt", "corpus.txt", "embeddings.tsv",
                      "model.tsv", "metrics.json"}) {
      EXPECT_TRUE(fs::exists(sub / name)) << sub / name;
    }
  }
  EXPECT_EQ(result.manifest["status"], "ok");
  EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
}

TEST(Pipeline, RerunGivesByteIdenticalArtifacts) {
  auto dir = scratch("rerun");
  auto config = small_config(dir);
  config.mrms = {Mrm::Rdr};
  run_pipeline(config);
  auto first_metrics = slurp(dir / "out" / "RDR" / "metrics.json");
  auto first_model = slurp(dir / "out" / "RDR" / "model.tsv");
  run_pipeline(config);
  EXPECT_EQ(slurp(dir / "out" / "RDR" / "metrics.json"), first_metrics);
  EXPECT_EQ(slurp(dir / "out" / "RDR" / "model.tsv"), first_model);
}

TEST(Pipeline, MissingDatasetFailsAtIngest) {
  auto dir = scratch("missing");
  auto config = small_config(dir);
  config.dataset.path = (dir / "absent.csv").string();
  try {
    run_pipeline(config);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), Stage::Ingest);
    EXPECT_EQ(exit_code(e.stage()), 11);
  }
  std::ifstream in(dir / "out" / "manifest.json");
  auto manifest = Json::parse(in);
  EXPECT_EQ(manifest["status"], "failed");
  EXPECT_EQ(manifest["failed_stage"], "ingest");
}

TEST(PipelineConfig, JsonRoundTrip) {
  PipelineConfig config;
  config.mrms = {Mrm::Sgp};
  config.walk.mode = WalkMode::MidWalksDuplicateFree;
  config.walk.probabilities = {0.1, 0.2, 0.3, 0.4};
  config.embed.algorithm = EmbedAlgorithm::CWindow;
  config.lp.sharing = Sharing::Unified;
  config.lp.norm = Norm::L1;
  config.seed = 99;
  auto json = to_json(config);
  auto back = config_from_json(json);
  EXPECT_EQ(to_json(back), json);
  EXPECT_EQ(config_hash(back), config_hash(config));
}

TEST(PipelineConfig, HashIgnoresOutputDirectory) {
  PipelineConfig a, b;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 1;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(PipelineConfig, UnknownKeysAreRejected) {
  auto json = to_json(PipelineConfig{});
  json["walk"]["speed"] = 3;
  EXPECT_THROW(config_from_json(json), StageError);
}

TEST(PipelineConfig, StageSeedsAreDistinct) {
  auto seeds = stage_seeds(0);
  EXPECT_NE(seeds.split, seeds.walk);
  EXPECT_NE(seeds.embed, seeds.lp);
  EXPECT_EQ(stage_seeds(0).lp, seeds.lp);
}

TEST(Baseline, HarmonicMeanOfUniformRank) {
  EXPECT_DOUBLE_EQ(random_baseline_mrr(1), 1.0);
  EXPECT_DOUBLE_EQ(random_baseline_mrr(2), 0.75);
  EXPECT_NEAR(random_baseline_mrr(4), (1 + 0.5 + 1.0 / 3 + 0.25) / 4, 1e-15);
}
