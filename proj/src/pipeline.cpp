#include "mrm/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mrm/rdf_io.hpp"
#include "mrm/rng.hpp"

namespace mrm {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Config: return "config";
    case Stage::Ingest: return "ingest";
    case Stage::Convert: return "convert";
    case Stage::Split: return "split";
    case Stage::Walk: return "walk";
    case Stage::Embed: return "embed";
    case Stage::Train: return "train";
    case Stage::Evaluate: return "evaluate";
    case Stage::Output: return "output";
  }
  return "?";
}

int exit_code(Stage stage) { return 10 + static_cast<int>(stage); }

namespace {

template <typename F>
auto staged(Stage stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

std::string_view wrap_name(WrapPolicy policy) {
  return policy == WrapPolicy::Always ? "always" : "on-collision";
}

void check_keys(const Json& object, std::string_view where, std::set<std::string> allowed) {
  if (!object.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read(const Json& object, const char* key, T& field) {
  if (object.contains(key)) field = object.at(key).get<T>();
}

template <typename T, typename Parse>
void read_enum(const Json& object, const char* key, T& field, Parse parse) {
  if (!object.contains(key)) return;
  auto name = object.at(key).get<std::string>();
  auto value = parse(name);
  if (!value) throw ConfigError("unknown value '" + name + "' for " + key);
  field = *value;
}

Json config_echo(const PipelineConfig& config) {
  Json j = to_json(config);
  j.erase("output_dir");
  return j;
}

}  // namespace

void PipelineConfig::validate() const {
  staged(Stage::Config, [&] {
    if (mrms.empty()) throw ConfigError("no MRM selected");
    walk.validate();
    embed.validate();
    lp.validate();
    for (double r : {split.train, split.valid, split.test}) {
      if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("split ratios must lie in [0, 1]");
    }
  });
}

Json to_json(const PipelineConfig& c) {
  Json mrms = Json::array();
  for (auto m : c.mrms) mrms.push_back(to_string(m));
  const auto& p = c.walk.probabilities;
  return Json{
      {"dataset",
       {{"kind", c.dataset.kind == SourceKind::Wd50k ? "wd50k" : "kgrc"},
        {"path", c.dataset.path},
        {"hyper_relational_only", c.dataset.hyper_relational_only},
        {"kgrc_wrap", wrap_name(c.dataset.kgrc_wrap)}}},
      {"mrms", mrms},
      {"convert", {{"emit_type", c.convert.emit_type}, {"sp_separator", c.convert.sp_separator}}},
      {"split", {{"train", c.split.train}, {"valid", c.split.valid}, {"test", c.split.test}}},
      {"walk",
       {{"walks_per_root", c.walk.walks_per_root},
        {"depth", c.walk.depth},
        {"mode", to_string(c.walk.mode)},
        {"qt_to_subject", p.qt_to_subject},
        {"object_to_qt", p.object_to_qt},
        {"qt_to_object", p.qt_to_object},
        {"subject_to_qt", p.subject_to_qt},
        {"threads", c.walk.threads}}},
      {"embed",
       {{"dim", c.embed.dim},
        {"window", c.embed.window},
        {"algorithm", to_string(c.embed.algorithm)},
        {"epochs", c.embed.epochs},
        {"learning_rate", c.embed.learning_rate},
        {"final_learning_rate", c.embed.final_learning_rate},
        {"negatives", c.embed.negatives},
        {"min_count", c.embed.min_count},
        {"tie_blocks", c.embed.tie_blocks}}},
      {"lp",
       {{"margin", c.lp.margin},
        {"learning_rate", c.lp.learning_rate},
        {"epochs", c.lp.epochs},
        {"negatives", c.lp.negatives},
        {"norm", to_string(c.lp.norm)},
        {"normalize_entities", c.lp.normalize_entities},
        {"sharing", to_string(c.lp.sharing)}}},
      {"seed", c.seed},
      {"output_dir", c.output_dir},
  };
}

PipelineConfig config_from_json(const Json& json) {
  return staged(Stage::Config, [&] {
    PipelineConfig c;
    check_keys(json, "config",
               {"dataset", "mrms", "convert", "split", "walk", "embed", "lp", "seed", "output_dir"});
    if (json.contains("dataset")) {
      const auto& d = json.at("dataset");
      check_keys(d, "dataset", {"kind", "path", "hyper_relational_only", "kgrc_wrap"});
      read_enum(d, "kind", c.dataset.kind, [](std::string_view n) -> std::optional<SourceKind> {
        if (n == "wd50k") return SourceKind::Wd50k;
        if (n == "kgrc") return SourceKind::Kgrc;
        return std::nullopt;
      });
      read(d, "path", c.dataset.path);
      read(d, "hyper_relational_only", c.dataset.hyper_relational_only);
      read_enum(d, "kgrc_wrap", c.dataset.kgrc_wrap, parse_wrap_policy);
    }
    if (json.contains("mrms")) {
      c.mrms.clear();
      for (const auto& m : json.at("mrms")) {
        auto parsed = parse_mrm(m.get<std::string>());
        if (!parsed) throw ConfigError("unknown MRM '" + m.get<std::string>() + "'");
        c.mrms.push_back(*parsed);
      }
    }
    if (json.contains("convert")) {
      const auto& v = json.at("convert");
      check_keys(v, "convert", {"emit_type", "sp_separator"});
      read(v, "emit_type", c.convert.emit_type);
      read(v, "sp_separator", c.convert.sp_separator);
    }
    if (json.contains("split")) {
      const auto& s = json.at("split");
      check_keys(s, "split", {"train", "valid", "test"});
      read(s, "train", c.split.train);
      read(s, "valid", c.split.valid);
      read(s, "test", c.split.test);
    }
    if (json.contains("walk")) {
      const auto& w = json.at("walk");
      check_keys(w, "walk",
                 {"walks_per_root", "depth", "mode", "qt_to_subject", "object_to_qt",
                  "qt_to_object", "subject_to_qt", "threads"});
      read(w, "walks_per_root", c.walk.walks_per_root);
      read(w, "depth", c.walk.depth);
      read_enum(w, "mode", c.walk.mode, parse_walk_mode);
      read(w, "qt_to_subject", c.walk.probabilities.qt_to_subject);
      read(w, "object_to_qt", c.walk.probabilities.object_to_qt);
      read(w, "qt_to_object", c.walk.probabilities.qt_to_object);
      read(w, "subject_to_qt", c.walk.probabilities.subject_to_qt);
      read(w, "threads", c.walk.threads);
    }
    if (json.contains("embed")) {
      const auto& e = json.at("embed");
      check_keys(e, "embed",
                 {"dim", "window", "algorithm", "epochs", "learning_rate", "final_learning_rate",
                  "negatives", "min_count", "tie_blocks"});
      read(e, "dim", c.embed.dim);
      read(e, "window", c.embed.window);
      read_enum(e, "algorithm", c.embed.algorithm, parse_embed_algorithm);
      read(e, "epochs", c.embed.epochs);
      read(e, "learning_rate", c.embed.learning_rate);
      read(e, "final_learning_rate", c.embed.final_learning_rate);
      read(e, "negatives", c.embed.negatives);
      read(e, "min_count", c.embed.min_count);
      read(e, "tie_blocks", c.embed.tie_blocks);
    }
    if (json.contains("lp")) {
      const auto& l = json.at("lp");
      check_keys(l, "lp",
                 {"margin", "learning_rate", "epochs", "negatives", "norm", "normalize_entities",
                  "sharing"});
      read(l, "margin", c.lp.margin);
      read(l, "learning_rate", c.lp.learning_rate);
      read(l, "epochs", c.lp.epochs);
      read(l, "negatives", c.lp.negatives);
      read_enum(l, "norm", c.lp.norm, parse_norm);
      read(l, "normalize_entities", c.lp.normalize_entities);
      read_enum(l, "sharing", c.lp.sharing, parse_sharing);
    }
    read(json, "seed", c.seed);
    read(json, "output_dir", c.output_dir);
    c.validate();
    return c;
  });
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return staged(Stage::Config, [&] {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    return config_from_json(Json::parse(in));
  });
}

std::string config_hash(const PipelineConfig& config) {
  Fnv1a h;
  h.add(config_echo(config).dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.value()));
  return buf;
}

StageSeeds stage_seeds(std::uint64_t seed) {
  return {derive_seed(seed, 1), derive_seed(seed, 2), derive_seed(seed, 3), derive_seed(seed, 4)};
}

std::vector<HyperFact> load_facts(const DatasetConfig& dataset) {
  return staged(Stage::Ingest, [&] {
    Wd50kReadOptions options;
    options.hyper_relational_only = dataset.hyper_relational_only;
    return read_wd50k_file(dataset.path, options);
  });
}

Graph convert_source(const DatasetConfig& dataset, const std::vector<HyperFact>& facts,
                     const Graph* kgrc_ref, Mrm mrm, const ConvertOptions& options,
                     std::vector<std::string>* warnings) {
  return staged(Stage::Convert, [&]() -> Graph {
    if (dataset.kind == SourceKind::Wd50k) return convert_facts(facts, mrm, options);
    if (!kgrc_ref) throw Error("no KGRC source graph loaded");
    if (mrm == Mrm::Ref) return *kgrc_ref;
    auto result = mrm == Mrm::Sgp
                      ? kgrc_to_sgp(*kgrc_ref, ObjectPriority::standard())
                      : kgrc_to_rdr(*kgrc_ref, ObjectPriority::standard(), dataset.kgrc_wrap);
    if (warnings) {
      warnings->insert(warnings->end(), result.warnings.begin(), result.warnings.end());
      for (const auto& s : result.skipped) {
        std::ostringstream msg;
        msg << "skipped " << s.node << ": " << s.reason;
        warnings->push_back(msg.str());
      }
    }
    return std::move(result.graph);
  });
}

PreparedTask prepare_task(Graph graph, Mrm mrm, const SplitRatios& ratios, std::uint64_t seed) {
  return staged(Stage::Split, [&] {
    PreparedTask task;
    task.mrm = mrm;
    task.graph = std::move(graph);
    task.filter = build_filter(task.graph, mrm);
    task.split = split_dataset(task.graph, task.filter, ratios, seed);
    return task;
  });
}

Graph training_graph(const PreparedTask& task) {
  Graph g = task.graph;
  g.remove_all(task.split.valid);
  g.remove_all(task.split.test);
  return g;
}

namespace {

std::vector<IdTriple> entity_triples(const Graph& graph) {
  std::vector<IdTriple> out;
  for (const auto& t : graph.triples()) {
    if (!graph.term(t.object).is_literal()) out.push_back(t);
  }
  return out;
}

}  // namespace

RunOutcome run_task(const PreparedTask& task, const PipelineConfig& config) {
  auto seeds = stage_seeds(config.seed);
  RunOutcome out;
  Graph train_graph = training_graph(task);

  out.corpus = staged(Stage::Walk, [&] {
    WalkConfig walk = config.walk;
    walk.seed = seeds.walk;
    return generate_walks(train_graph, walk);
  });
  out.embedding = staged(Stage::Embed, [&] {
    EmbedConfig embed = config.embed;
    embed.seed = seeds.embed;
    return train_embeddings(out.corpus, embed);
  });
  staged(Stage::Train, [&] {
    auto init = init_from_pretrained(out.embedding.table, task.graph, config.lp.sharing, seeds.lp);
    out.model = std::move(init.model);
    out.coverage = init.coverage;
    auto train = encode_triples(out.model, train_graph, entity_triples(train_graph));
    out.train_triples = train.size();
    LPConfig lp = config.lp;
    lp.seed = seeds.lp;
    out.lp_stats = train_lp(out.model, train, lp);
  });
  staged(Stage::Evaluate, [&] {
    auto known = encode_triples(out.model, task.graph, entity_triples(task.graph));
    const auto& candidates = out.model.entity_rows();
    auto valid = encode_triples(out.model, task.graph, task.split.valid);
    auto test = encode_triples(out.model, task.graph, task.split.test);
    out.valid = evaluate(out.model, valid, known, candidates, config.lp.norm);
    out.test = evaluate(out.model, test, known, candidates, config.lp.norm);
  });
  return out;
}

double random_baseline_mrr(std::size_t candidates) {
  if (candidates == 0) return 0.0;
  double harmonic = 0.0;
  for (std::size_t k = 1; k <= candidates; ++k) harmonic += 1.0 / static_cast<double>(k);
  return harmonic / static_cast<double>(candidates);
}

namespace {

Json rank_json(const RankMetrics& m) {
  return Json{{"mrr", m.mrr}, {"hits@1", m.hits1}, {"hits@3", m.hits3}, {"hits@10", m.hits10}};
}

Json report_json(const MetricsReport& r) {
  return Json{{"triples", r.test_triples}, {"raw", rank_json(r.raw)}, {"filtered", rank_json(r.filtered)}};
}

}  // namespace

Json metrics_json(const PreparedTask& task, const RunOutcome& o, const PipelineConfig& config) {
  auto seeds = stage_seeds(config.seed);
  auto stats = task.graph.stats();
  return Json{
      {"mrm", to_string(task.mrm)},
      {"config_hash", config_hash(config)},
      {"seed", config.seed},
      {"seeds", {{"split", seeds.split}, {"walk", seeds.walk}, {"embed", seeds.embed}, {"lp", seeds.lp}}},
      {"graph", {{"entities", stats.entities}, {"relations", stats.relations}, {"triples", stats.triples}}},
      {"task",
       {{"eligible", task.filter.eligible.size()},
        {"excluded_relations", task.filter.excluded.size()},
        {"train", task.split.train.size()},
        {"valid", task.split.valid.size()},
        {"test", task.split.test.size()}}},
      {"test", report_json(o.test)},
      {"valid", report_json(o.valid)},
      {"candidates", o.test.candidates},
      {"random_baseline_mrr", random_baseline_mrr(o.test.candidates)},
      {"coverage",
       {{"entities", o.coverage.entities},
        {"relations", o.coverage.relations},
        {"missing_entities", o.coverage.missing_entities},
        {"missing_relations", o.coverage.missing_relations},
        {"shared_rows", o.coverage.shared_rows}}},
      {"walks", {{"sequences", o.corpus.size()}, {"tokens", o.corpus.token_count()}}},
      {"embedding",
       {{"vocabulary", o.embedding.table.size()}, {"epoch_losses", o.embedding.epoch_losses}}},
      {"lp",
       {{"train_triples", o.train_triples},
        {"epoch_losses", o.lp_stats.epoch_losses},
        {"resample_exhausted", o.lp_stats.resample_exhausted}}},
      {"config", config_echo(config)},
  };
}

std::string write_json(const Json& json) { return json.dump(2) + "\n"; }

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

template <typename F>
void write_with(const std::filesystem::path& path, F&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  writer(out);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  const fs::path root = config.output_dir;
  const auto hash = config_hash(config);
  const auto seeds = stage_seeds(config.seed);

  PipelineResult result;
  Json& manifest = result.manifest;
  manifest = Json{{"config_hash", hash},
                  {"seed", config.seed},
                  {"seeds",
                   {{"split", seeds.split}, {"walk", seeds.walk}, {"embed", seeds.embed}, {"lp", seeds.lp}}},
                  {"config", to_json(config)},
                  {"status", "running"},
                  {"artifacts", Json::array()},
                  {"warnings", Json::array()}};

  auto record = [&](Mrm mrm, Stage stage, const fs::path& path, std::uint64_t seed) {
    manifest["artifacts"].push_back(Json{{"mrm", to_string(mrm)},
                                         {"stage", to_string(stage)},
                                         {"path", fs::relative(path, root).generic_string()},
                                         {"config_hash", hash},
                                         {"seed", seed}});
  };
  auto write_manifest = [&] { write_file(root / "manifest.json", write_json(manifest)); };

  staged(Stage::Output, [&] { fs::create_directories(root); });
  try {
    std::vector<HyperFact> facts;
    std::optional<Graph> kgrc;
    if (config.dataset.kind == SourceKind::Wd50k) {
      facts = load_facts(config.dataset);
    } else {
      kgrc = staged(Stage::Ingest, [&] { return read_turtle_file(config.dataset.path); });
    }

    for (Mrm mrm : config.mrms) {
      const fs::path dir = root / std::string(to_string(mrm));
      staged(Stage::Output, [&] { fs::create_directories(dir); });
      std::vector<std::string> warnings;
      Graph graph = convert_source(config.dataset, facts, kgrc ? &*kgrc : nullptr, mrm,
                                   config.convert, &warnings);
      for (auto& w : warnings) manifest["warnings"].push_back(std::string(to_string(mrm)) + ": " + w);
      staged(Stage::Output, [&] {
        write_file(dir / "graph.nt", serialize(graph, RdfFormat::NTriplesStar));
        record(mrm, Stage::Convert, dir / "graph.nt", 0);
      });

      PreparedTask task = prepare_task(std::move(graph), mrm, config.split, seeds.split);
      staged(Stage::Output, [&] {
        for (auto [name, part] : {std::pair{"train.nt", &task.split.train},
                                  std::pair{"valid.nt", &task.split.valid},
                                  std::pair{"test.nt", &task.split.test}}) {
          write_file(dir / name, serialize_triples(task.graph, *part));
          record(mrm, Stage::Split, dir / name, seeds.split);
        }
      });

      RunOutcome outcome = run_task(task, config);
      Json metrics = metrics_json(task, outcome, config);
      staged(Stage::Output, [&] {
        write_with(dir / "corpus.txt", [&](std::ostream& o) { write_corpus(outcome.corpus, o); });
        record(mrm, Stage::Walk, dir / "corpus.txt", seeds.walk);
        write_with(dir / "embeddings.tsv",
                   [&](std::ostream& o) { write_embeddings(outcome.embedding.table, o); });
        record(mrm, Stage::Embed, dir / "embeddings.tsv", seeds.embed);
        write_with(dir / "model.tsv", [&](std::ostream& o) { write_model(outcome.model, o); });
        record(mrm, Stage::Train, dir / "model.tsv", seeds.lp);
        write_file(dir / "metrics.json", write_json(metrics));
        record(mrm, Stage::Evaluate, dir / "metrics.json", seeds.lp);
      });
      result.metrics.emplace(mrm, std::move(metrics));
    }
  } catch (const StageError& e) {
    manifest["status"] = "failed";
    manifest["failed_stage"] = to_string(e.stage());
    manifest["error"] = e.what();
    try {
      write_manifest();
    } catch (const std::exception&) {
      // The original stage error is the one worth reporting.
    }
    throw;
  }
  manifest["status"] = "ok";
  staged(Stage::Output, write_manifest);
  return result;
}

}  // namespace mrm
