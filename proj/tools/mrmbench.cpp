// Command-line front end for conversion, task building, walks, embedding,
// link prediction, the full pipeline and hyperparameter search.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mrm/convert.hpp"
#include "mrm/corpus_io.hpp"
#include "mrm/embed.hpp"
#include "mrm/linkpred.hpp"
#include "mrm/pipeline.hpp"
#include "mrm/rdf_io.hpp"
#include "mrm/search.hpp"
#include "mrm/synthetic.hpp"
#include "mrm/task.hpp"
#include "mrm/walks.hpp"

namespace fs = std::filesystem;
using namespace mrm;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

template <typename F>
void emit_with(const std::string& path, F&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  emit(path, buffer.str());
}

bool is_csv(const std::string& path) { return fs::path(path).extension() == ".csv"; }

// A graph file (Turtle-star / N-Triples-star), or WD50K rows converted to `mrm`.
Graph load_graph(const std::string& path, Mrm mrm, const ConvertOptions& options,
                 bool hyper_relational_only) {
  if (is_csv(path)) {
    Wd50kReadOptions read_options;
    read_options.hyper_relational_only = hyper_relational_only;
    return convert_facts(read_wd50k_file(path, read_options), mrm, options);
  }
  return read_turtle_file(path);
}

Mrm mrm_option(const std::string& name) {
  auto m = parse_mrm(name);
  if (!m) throw ConfigError("unknown MRM '" + name + "'");
  return *m;
}

const std::map<std::string, RdfFormat> kFormats{{"turtle", RdfFormat::Turtle},
                                                {"turtle-star", RdfFormat::TurtleStar},
                                                {"ntriples-star", RdfFormat::NTriplesStar},
                                                {"wd50k-csv", RdfFormat::Wd50kCsv}};

const std::vector<std::string> kModeNames{"STAR_MID_WALKS", "STAR_MID_WALKS_DUPLICATE_FREE",
                                          "STAR_RANDOM_WALKS", "STAR_RANDOM_WALKS_DUPLICATE_FREE"};
const std::vector<std::string> kAlgorithmNames{"cbow", "skip-gram", "cwindow",
                                               "structured-skip-gram"};

Json stats_json(const Graph& graph) {
  auto s = graph.stats();
  return Json{{"entities", s.entities}, {"relations", s.relations}, {"triples", s.triples}};
}

std::vector<LPTriple> encode_file(const LPModel& model, const std::string& path) {
  Graph g = read_turtle_file(path);
  return encode_triples(model, g, g.triples());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metadata representation model benchmark toolkit"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Master random seed")->capture_default_str();

  ConvertOptions convert_options;
  std::string input, output, mrm_name = "RDR", wrap = "always";
  bool hyper_only = false;

  // convert
  auto* convert = app.add_subcommand("convert", "Convert WD50K rows or KGRC Turtle into an MRM");
  std::string source = "wd50k", format = "turtle-star";
  convert->add_option("-i,--input", input, "Input file")->required();
  convert->add_option("-o,--output", output, "Output file (default stdout)");
  convert->add_option("--source", source, "Input kind")->check(CLI::IsMember({"wd50k", "kgrc"}));
  convert->add_option("--mrm", mrm_name, "REF, SGP or RDR")->capture_default_str();
  convert->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"turtle", "turtle-star", "ntriples-star", "wd50k-csv"}))
      ->capture_default_str();
  convert->add_flag("--emit-type", convert_options.emit_type, "Emit rdf:type rdf:Statement (REF)");
  convert->add_option("--sp-separator", convert_options.sp_separator, "Singleton property separator");
  convert->add_option("--wrap", wrap, "KGRC RDR wrapping")->check(CLI::IsMember({"always", "on-collision"}));
  convert->add_flag("--hyper-relational-only", hyper_only, "Keep only facts with qualifiers");

  // stats
  auto* stats = app.add_subcommand("stats", "Entity, relation and triple counts");
  stats->add_option("-i,--input", input)->required();
  stats->add_option("--mrm", mrm_name, "MRM used when the input is WD50K rows");
  stats->add_flag("--hyper-relational-only", hyper_only);

  // profile-qt
  auto* profile = app.add_subcommand("profile-qt", "Share of triples with quoted subject/object");
  profile->add_option("-i,--input", input)->required();
  profile->add_flag("--hyper-relational-only", hyper_only);

  // split
  auto* split = app.add_subcommand("split", "Build the fair task and split it");
  std::string out_dir = "split";
  std::vector<double> ratios{0.8, 0.1, 0.1};
  split->add_option("-i,--input", input)->required();
  split->add_option("--mrm", mrm_name)->required();
  split->add_option("--ratios", ratios, "train valid test")->expected(3);
  split->add_option("--out-dir", out_dir)->capture_default_str();
  split->add_flag("--hyper-relational-only", hyper_only);

  // walk
  auto* walk = app.add_subcommand("walk", "Generate a walk corpus");
  WalkConfig walk_config;
  std::string mode_name = "STAR_RANDOM_WALKS";
  walk->add_option("-i,--input", input)->required();
  walk->add_option("-o,--output", output);
  walk->add_option("--mrm", mrm_name, "MRM used when the input is WD50K rows");
  walk->add_option("-n,--walks", walk_config.walks_per_root)->capture_default_str();
  walk->add_option("-d,--depth", walk_config.depth)->capture_default_str();
  walk->add_option("--mode", mode_name)->check(CLI::IsMember(kModeNames))->capture_default_str();
  walk->add_option("--alpha,--qt-to-subject", walk_config.probabilities.qt_to_subject);
  walk->add_option("--beta,--object-to-qt", walk_config.probabilities.object_to_qt);
  walk->add_option("--gamma,--qt-to-object", walk_config.probabilities.qt_to_object);
  walk->add_option("--delta,--subject-to-qt", walk_config.probabilities.subject_to_qt);
  walk->add_option("--threads", walk_config.threads)->capture_default_str();
  walk->add_flag("--hyper-relational-only", hyper_only);

  // embed
  auto* embed = app.add_subcommand("embed", "Train embeddings on a corpus");
  EmbedConfig embed_config;
  std::string algorithm_name = "structured-skip-gram";
  embed->add_option("-i,--corpus", input)->required();
  embed->add_option("-o,--output", output);
  embed->add_option("--dim", embed_config.dim)->capture_default_str();
  embed->add_option("--window", embed_config.window)->capture_default_str();
  embed->add_option("--algorithm", algorithm_name)
      ->check(CLI::IsMember(kAlgorithmNames))
      ->capture_default_str();
  embed->add_option("--epochs", embed_config.epochs)->capture_default_str();
  embed->add_option("--lr", embed_config.learning_rate)->capture_default_str();
  embed->add_option("--final-lr", embed_config.final_learning_rate)->capture_default_str();
  embed->add_option("--negatives", embed_config.negatives)->capture_default_str();
  embed->add_option("--min-count", embed_config.min_count)->capture_default_str();

  // train-lp
  auto* train = app.add_subcommand("train-lp", "Fine-tune TransE/TransU from pretrained vectors");
  LPConfig lp_config;
  std::string norm_name = "L2", sharing_name = "separate";
  std::string embeddings, train_file;
  train->add_option("-g,--graph", input, "Full graph (defines E and R)")->required();
  train->add_option("-e,--embeddings", embeddings)->required();
  train->add_option("--train", train_file, "Training triples (default: all graph triples)");
  train->add_option("-o,--output", output);
  train->add_option("--mrm", mrm_name, "MRM used when the graph is WD50K rows");
  train->add_option("--margin", lp_config.margin)->capture_default_str();
  train->add_option("--lr", lp_config.learning_rate)->capture_default_str();
  train->add_option("--epochs", lp_config.epochs)->capture_default_str();
  train->add_option("--negatives", lp_config.negatives)->capture_default_str();
  train->add_option("--norm", norm_name)->check(CLI::IsMember({"L1", "L2"}))->capture_default_str();
  train->add_option("--sharing", sharing_name)
      ->check(CLI::IsMember({"separate", "unified"}))
      ->capture_default_str();
  train->add_flag("!--no-normalize", lp_config.normalize_entities);

  // eval
  auto* eval = app.add_subcommand("eval", "Rank test tails with a trained model");
  std::string model_file, test_file;
  std::vector<std::string> known_files;
  eval->add_option("-m,--model", model_file)->required();
  eval->add_option("-t,--test", test_file)->required();
  eval->add_option("-k,--known", known_files, "Triple files of every split (filtered setting)");
  eval->add_option("--norm", norm_name)->check(CLI::IsMember({"L1", "L2"}))->capture_default_str();
  eval->add_option("-o,--output", output);

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run the end-to-end pipeline");
  std::string config_path, override_out;
  bool print_default = false;
  pipeline->add_option("-c,--config", config_path, "JSON config");
  pipeline->add_option("--output-dir", override_out);
  pipeline->add_flag("--print-default-config", print_default);

  // search
  auto* search = app.add_subcommand("search", "Random or grid hyperparameter search");
  std::string space_path, log_path;
  std::size_t budget = 0;
  bool grid = false;
  search->add_option("-c,--config", config_path, "Base pipeline config")->required();
  search->add_option("--space", space_path, "Search space JSON (default: full space)");
  search->add_option("--mrm", mrm_name)->capture_default_str();
  search->add_option("--budget", budget, "Trial budget override");
  search->add_flag("--grid", grid, "Grid search over the discrete domains");
  search->add_option("-o,--output", log_path, "Trial log JSON");

  // report
  auto* report = app.add_subcommand("report", "Per-parameter importance from a trial log");
  report->add_option("-i,--log", input)->required();
  report->add_option("-o,--output", output);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic WD50K-style dataset");
  std::string kind = "desk";
  synth->add_option("--kind", kind)->check(CLI::IsMember({"desk", "small", "random"}));
  synth->add_option("-o,--output", output);

  CLI11_PARSE(app, argc, argv);

  Stage stage = Stage::Config;
  try {
    if (*convert) {
      stage = Stage::Convert;
      Mrm mrm = mrm_option(mrm_name);
      Graph graph;
      if (source == "kgrc") {
        Graph ref = read_turtle_file(input);
        auto wrap_policy = parse_wrap_policy(wrap).value();
        if (mrm == Mrm::Ref) {
          graph = std::move(ref);
        } else {
          auto result = mrm == Mrm::Sgp ? kgrc_to_sgp(ref, ObjectPriority::standard())
                                        : kgrc_to_rdr(ref, ObjectPriority::standard(), wrap_policy);
          for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
          for (const auto& s : result.skipped) std::cerr << "skipped " << s.node << ": " << s.reason << '\n';
          graph = std::move(result.graph);
        }
      } else {
        graph = load_graph(input, mrm, convert_options, hyper_only);
      }
      emit(output, serialize(graph, kFormats.at(format)));
    } else if (*stats) {
      stage = Stage::Ingest;
      Graph graph = load_graph(input, mrm_option(mrm_name), convert_options, hyper_only);
      emit(output, write_json(stats_json(graph)));
    } else if (*profile) {
      stage = Stage::Ingest;
      Graph graph = load_graph(input, Mrm::Rdr, convert_options, hyper_only);
      auto p = qt_triple_profile(graph);
      Json j{{"triples", p.total()}};
      for (auto c : {QtCategory::QtToQt, QtCategory::QtToAt, QtCategory::AtToQt, QtCategory::AtToAt}) {
        j[std::string(to_string(c))] = {{"count", p.count(c)}, {"percent", p.percent(c)}};
      }
      emit(output, write_json(j));
    } else if (*split) {
      stage = Stage::Split;
      Mrm mrm = mrm_option(mrm_name);
      Graph graph = load_graph(input, mrm, convert_options, hyper_only);
      auto task = prepare_task(std::move(graph), mrm, {ratios[0], ratios[1], ratios[2]},
                               stage_seeds(seed).split);
      fs::create_directories(out_dir);
      emit((fs::path(out_dir) / "train.nt").string(), serialize_triples(task.graph, task.split.train));
      emit((fs::path(out_dir) / "valid.nt").string(), serialize_triples(task.graph, task.split.valid));
      emit((fs::path(out_dir) / "test.nt").string(), serialize_triples(task.graph, task.split.test));
      emit((fs::path(out_dir) / "task.json").string(),
           write_json(Json{{"mrm", to_string(mrm)},
                           {"seed", seed},
                           {"eligible", task.filter.eligible.size()},
                           {"train", task.split.train.size()},
                           {"valid", task.split.valid.size()},
                           {"test", task.split.test.size()}}));
    } else if (*walk) {
      stage = Stage::Walk;
      walk_config.seed = stage_seeds(seed).walk;
      walk_config.mode = parse_walk_mode(mode_name).value();
      Graph graph = load_graph(input, mrm_option(mrm_name), convert_options, hyper_only);
      auto corpus = generate_walks(graph, walk_config);
      emit_with(output, [&](std::ostream& o) { write_corpus(corpus, o); });
    } else if (*embed) {
      stage = Stage::Embed;
      embed_config.seed = stage_seeds(seed).embed;
      embed_config.algorithm = parse_embed_algorithm(algorithm_name).value();
      std::ifstream in(input);
      if (!in) throw Error("cannot open " + input);
      auto result = train_embeddings(read_corpus(in), embed_config);
      emit_with(output, [&](std::ostream& o) { write_embeddings(result.table, o); });
    } else if (*train) {
      stage = Stage::Train;
      lp_config.seed = stage_seeds(seed).lp;
      lp_config.norm = parse_norm(norm_name).value();
      lp_config.sharing = parse_sharing(sharing_name).value();
      Graph graph = load_graph(input, mrm_option(mrm_name), convert_options, hyper_only);
      std::ifstream in(embeddings);
      if (!in) throw Error("cannot open " + embeddings);
      auto init = init_from_pretrained(read_embeddings(in), graph, lp_config.sharing, lp_config.seed);
      std::vector<LPTriple> triples;
      if (train_file.empty()) {
        std::vector<IdTriple> ids;
        for (const auto& t : graph.triples()) {
          if (!graph.term(t.object).is_literal()) ids.push_back(t);
        }
        triples = encode_triples(init.model, graph, ids);
      } else {
        triples = encode_file(init.model, train_file);
      }
      auto stats_out = train_lp(init.model, triples, lp_config);
      std::cerr << "coverage: missing " << init.coverage.missing_entities << "/"
                << init.coverage.entities << " entities, " << init.coverage.missing_relations
                << "/" << init.coverage.relations << " relations\n";
      if (!stats_out.epoch_losses.empty()) {
        std::cerr << "final epoch loss " << stats_out.epoch_losses.back() << '\n';
      }
      emit_with(output, [&](std::ostream& o) { write_model(init.model, o); });
    } else if (*eval) {
      stage = Stage::Evaluate;
      std::ifstream in(model_file);
      if (!in) throw Error("cannot open " + model_file);
      LPModel model = read_model(in);
      auto test = encode_file(model, test_file);
      std::vector<LPTriple> known;
      for (const auto& f : known_files) {
        auto part = encode_file(model, f);
        known.insert(known.end(), part.begin(), part.end());
      }
      auto r = evaluate(model, test, known, model.entity_rows(),
                        parse_norm(norm_name).value());
      auto metrics = [](const RankMetrics& m) {
        return Json{{"mrr", m.mrr}, {"hits@1", m.hits1}, {"hits@3", m.hits3}, {"hits@10", m.hits10}};
      };
      emit(output, write_json(Json{{"triples", r.test_triples},
                                   {"candidates", r.candidates},
                                   {"raw", metrics(r.raw)},
                                   {"filtered", metrics(r.filtered)},
                                   {"random_baseline_mrr", random_baseline_mrr(r.candidates)}}));
    } else if (*pipeline) {
      stage = Stage::Config;
      if (print_default) {
        std::cout << write_json(to_json(PipelineConfig{}));
        return 0;
      }
      if (config_path.empty()) throw ConfigError("--config is required");
      PipelineConfig config = load_config(config_path);
      if (app.count("--seed")) config.seed = seed;
      if (!override_out.empty()) config.output_dir = override_out;
      auto result = run_pipeline(config);
      Json summary = Json::object();
      for (const auto& [mrm, m] : result.metrics) summary[std::string(to_string(mrm))] = m["test"];
      std::cout << write_json(summary);
    } else if (*search) {
      stage = Stage::Config;
      PipelineConfig base = load_config(config_path);
      if (app.count("--seed")) base.seed = seed;
      SearchSpace space;
      if (!space_path.empty()) space = search_space_from_json(Json::parse(read_text(space_path)));
      if (budget > 0) space.budget = budget;
      Mrm mrm = mrm_option(mrm_name);
      stage = Stage::Ingest;
      std::vector<HyperFact> facts;
      std::optional<Graph> kgrc;
      if (base.dataset.kind == SourceKind::Wd50k) {
        facts = load_facts(base.dataset);
      } else {
        kgrc = read_turtle_file(base.dataset.path);
      }
      Graph graph = convert_source(base.dataset, facts, kgrc ? &*kgrc : nullptr, mrm, base.convert);
      auto task = prepare_task(std::move(graph), mrm, base.split, stage_seeds(base.seed).split);
      auto objective = validation_mrr(task);
      auto result = grid ? grid_search(space, base, objective)
                         : random_search(space, base, objective, base.seed);
      Json log = trial_log_json(result.trials);
      emit(log_path, write_json(log));
      std::cerr << "best trial " << result.best.index << " objective " << result.best.objective << '\n';
    } else if (*report) {
      stage = Stage::Config;
      auto trials = trial_log_from_json(Json::parse(read_text(input)));
      Json j = Json::object();
      for (const auto& [name, score] : report_importance(trials)) j[name] = score;
      emit(output, write_json(j));
    } else if (*synth) {
      stage = Stage::Ingest;
      std::vector<HyperFact> facts;
      if (kind == "random") {
        facts = random_hyperfacts({}, seed);
      } else {
        facts = synthetic_hrkg(kind == "desk" ? HrkgOptions::desk() : HrkgOptions::small(), seed);
      }
      std::ostringstream out;
      for (const auto& f : facts) out << format_wd50k_row(f, vocab::kWd) << '\n';
      emit(output, out.str());
    }
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.stage());
  } catch (const std::exception& e) {
    std::cerr << "error: " << to_string(stage) << ": " << e.what() << '\n';
    return exit_code(stage);
  }
  return 0;
}
