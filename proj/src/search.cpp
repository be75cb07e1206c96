#include "mrm/search.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mrm/error.hpp"

namespace mrm {

namespace {

constexpr const char* kProbabilityNames[] = {"qt_to_subject", "object_to_qt", "qt_to_object",
                                             "subject_to_qt"};

template <typename T>
const T& choose(const std::vector<T>& items, Rng& rng) {
  return items[rng.index(items.size())];
}

double number(const std::map<std::string, ParamValue>& params, const std::string& key) {
  return std::get<double>(params.at(key));
}

const std::string& text(const std::map<std::string, ParamValue>& params, const std::string& key) {
  return std::get<std::string>(params.at(key));
}

}  // namespace

void SearchSpace::validate() const {
  if (budget < 1) throw ConfigError("search budget must be at least 1");
  if (!(probability_min >= 0.0 && probability_min <= probability_max && probability_max <= 1.0)) {
    throw ConfigError("probability range must lie within [0, 1]");
  }
  if (depth_min < 1 || depth_min > depth_max) throw ConfigError("depth range is empty");
  if (walks_per_root.empty() || modes.empty() || dims.empty() || windows.empty() ||
      algorithms.empty()) {
    throw ConfigError("every search domain needs at least one value");
  }
}

Json to_json(const SearchSpace& s) {
  Json modes = Json::array(), algorithms = Json::array();
  for (auto m : s.modes) modes.push_back(to_string(m));
  for (auto a : s.algorithms) algorithms.push_back(to_string(a));
  return Json{{"probability", {s.probability_min, s.probability_max}},
              {"walks_per_root", s.walks_per_root},
              {"depth", {s.depth_min, s.depth_max}},
              {"modes", modes},
              {"dims", s.dims},
              {"windows", s.windows},
              {"algorithms", algorithms},
              {"budget", s.budget}};
}

SearchSpace search_space_from_json(const Json& j) {
  SearchSpace s;
  if (j.contains("probability")) {
    s.probability_min = j.at("probability").at(0).get<double>();
    s.probability_max = j.at("probability").at(1).get<double>();
  }
  if (j.contains("walks_per_root")) s.walks_per_root = j.at("walks_per_root").get<std::vector<std::size_t>>();
  if (j.contains("depth")) {
    s.depth_min = j.at("depth").at(0).get<std::size_t>();
    s.depth_max = j.at("depth").at(1).get<std::size_t>();
  }
  if (j.contains("modes")) {
    s.modes.clear();
    for (const auto& m : j.at("modes")) {
      auto mode = parse_walk_mode(m.get<std::string>());
      if (!mode) throw ConfigError("unknown walk mode " + m.get<std::string>());
      s.modes.push_back(*mode);
    }
  }
  if (j.contains("dims")) s.dims = j.at("dims").get<std::vector<std::size_t>>();
  if (j.contains("windows")) s.windows = j.at("windows").get<std::vector<std::size_t>>();
  if (j.contains("algorithms")) {
    s.algorithms.clear();
    for (const auto& a : j.at("algorithms")) {
      auto algorithm = parse_embed_algorithm(a.get<std::string>());
      if (!algorithm) throw ConfigError("unknown algorithm " + a.get<std::string>());
      s.algorithms.push_back(*algorithm);
    }
  }
  if (j.contains("budget")) s.budget = j.at("budget").get<std::size_t>();
  s.validate();
  return s;
}

std::map<std::string, ParamValue> sample_params(const SearchSpace& space, Rng& rng) {
  std::map<std::string, ParamValue> p;
  for (const char* name : kProbabilityNames) {
    p[name] = rng.uniform(space.probability_min, space.probability_max);
  }
  p["walks_per_root"] = static_cast<double>(choose(space.walks_per_root, rng));
  p["depth"] = static_cast<double>(space.depth_min + rng.index(space.depth_max - space.depth_min + 1));
  p["mode"] = std::string(to_string(choose(space.modes, rng)));
  p["dim"] = static_cast<double>(choose(space.dims, rng));
  p["window"] = static_cast<double>(choose(space.windows, rng));
  p["algorithm"] = std::string(to_string(choose(space.algorithms, rng)));
  return p;
}

PipelineConfig apply_params(const PipelineConfig& base, const std::map<std::string, ParamValue>& p) {
  PipelineConfig c = base;
  auto& probs = c.walk.probabilities;
  if (p.contains("qt_to_subject")) probs.qt_to_subject = number(p, "qt_to_subject");
  if (p.contains("object_to_qt")) probs.object_to_qt = number(p, "object_to_qt");
  if (p.contains("qt_to_object")) probs.qt_to_object = number(p, "qt_to_object");
  if (p.contains("subject_to_qt")) probs.subject_to_qt = number(p, "subject_to_qt");
  if (p.contains("walks_per_root")) {
    c.walk.walks_per_root = static_cast<std::size_t>(number(p, "walks_per_root"));
  }
  if (p.contains("depth")) c.walk.depth = static_cast<std::size_t>(number(p, "depth"));
  if (p.contains("mode")) c.walk.mode = parse_walk_mode(text(p, "mode")).value();
  if (p.contains("dim")) c.embed.dim = static_cast<std::size_t>(number(p, "dim"));
  if (p.contains("window")) c.embed.window = static_cast<std::size_t>(number(p, "window"));
  if (p.contains("algorithm")) c.embed.algorithm = parse_embed_algorithm(text(p, "algorithm")).value();
  return c;
}

Objective validation_mrr(const PreparedTask& task) {
  return [&task](const PipelineConfig& config) {
    return run_task(task, config).valid.filtered.mrr;
  };
}

namespace {

SearchResult finish(std::vector<Trial> trials) {
  SearchResult result;
  result.trials = std::move(trials);
  result.best = result.trials.front();
  for (const auto& t : result.trials) {
    if (t.objective > result.best.objective) result.best = t;
  }
  return result;
}

}  // namespace

SearchResult random_search(const SearchSpace& space, const PipelineConfig& base,
                           const Objective& objective, std::uint64_t seed) {
  space.validate();
  Rng rng(derive_seed(seed, 0x5e));
  std::vector<Trial> trials;
  for (std::size_t i = 0; i < space.budget; ++i) {
    Trial t;
    t.index = i;
    t.params = sample_params(space, rng);
    t.objective = objective(apply_params(base, t.params));
    trials.push_back(std::move(t));
  }
  return finish(std::move(trials));
}

SearchResult grid_search(const SearchSpace& space, const PipelineConfig& base,
                         const Objective& objective) {
  space.validate();
  std::vector<Trial> trials;
  std::vector<std::size_t> depths;
  for (auto d = space.depth_min; d <= space.depth_max; ++d) depths.push_back(d);
  for (auto n : space.walks_per_root)
    for (auto d : depths)
      for (auto mode : space.modes)
        for (auto dim : space.dims)
          for (auto w : space.windows)
            for (auto algorithm : space.algorithms) {
              if (trials.size() >= space.budget) return finish(std::move(trials));
              Trial t;
              t.index = trials.size();
              t.params = {{"walks_per_root", static_cast<double>(n)},
                          {"depth", static_cast<double>(d)},
                          {"mode", std::string(to_string(mode))},
                          {"dim", static_cast<double>(dim)},
                          {"window", static_cast<double>(w)},
                          {"algorithm", std::string(to_string(algorithm))}};
              t.objective = objective(apply_params(base, t.params));
              trials.push_back(std::move(t));
            }
  return finish(std::move(trials));
}

Json trial_log_json(const std::vector<Trial>& trials) {
  Json log = Json::array();
  for (const auto& t : trials) {
    Json params = Json::object();
    for (const auto& [name, value] : t.params) {
      std::visit([&](const auto& v) { params[name] = v; }, value);
    }
    log.push_back(Json{{"trial", t.index}, {"params", params}, {"objective", t.objective}});
  }
  return log;
}

std::vector<Trial> trial_log_from_json(const Json& json) {
  std::vector<Trial> trials;
  for (const auto& entry : json) {
    Trial t;
    t.index = entry.at("trial").get<std::size_t>();
    t.objective = entry.at("objective").get<double>();
    for (const auto& [name, value] : entry.at("params").items()) {
      if (value.is_string()) {
        t.params[name] = value.get<std::string>();
      } else {
        t.params[name] = value.get<double>();
      }
    }
    trials.push_back(std::move(t));
  }
  return trials;
}

std::map<std::string, double> report_importance(const std::vector<Trial>& trials) {
  constexpr std::size_t kMinTrials = 20;
  constexpr std::size_t kBins = 8;
  if (trials.size() < kMinTrials) {
    throw InsufficientData("importance needs at least 20 trials, got " +
                           std::to_string(trials.size()));
  }
  double mean = 0.0;
  for (const auto& t : trials) mean += t.objective;
  mean /= static_cast<double>(trials.size());
  double total = 0.0;
  for (const auto& t : trials) total += (t.objective - mean) * (t.objective - mean);

  std::set<std::string> names;
  for (const auto& t : trials) {
    for (const auto& [name, value] : t.params) names.insert(name);
  }

  std::map<std::string, double> scores;
  for (const auto& name : names) {
    // Bin key per trial.
    std::vector<std::string> keys;
    std::set<double> distinct;
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& t : trials) {
      auto it = t.params.find(name);
      if (it != t.params.end() && std::holds_alternative<double>(it->second)) {
        double v = std::get<double>(it->second);
        distinct.insert(v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    bool binned = distinct.size() > kBins;
    for (const auto& t : trials) {
      auto it = t.params.find(name);
      if (it == t.params.end()) {
        keys.emplace_back("\x01missing");
      } else if (std::holds_alternative<std::string>(it->second)) {
        keys.push_back("s:" + std::get<std::string>(it->second));
      } else if (binned) {
        double v = std::get<double>(it->second);
        auto bin = static_cast<std::size_t>((v - lo) / (hi - lo) * kBins);
        keys.push_back("b:" + std::to_string(std::min(bin, kBins - 1)));
      } else {
        keys.push_back("v:" + format_double(std::get<double>(it->second)));
      }
    }
    std::map<std::string, std::pair<double, std::size_t>> groups;
    for (std::size_t i = 0; i < trials.size(); ++i) {
      auto& g = groups[keys[i]];
      g.first += trials[i].objective;
      ++g.second;
    }
    double between = 0.0;
    for (const auto& [key, g] : groups) {
      double group_mean = g.first / static_cast<double>(g.second);
      between += static_cast<double>(g.second) * (group_mean - mean) * (group_mean - mean);
    }
    scores[name] = total > 0.0 ? between / total : 0.0;
  }

  double sum = 0.0;
  for (const auto& [name, s] : scores) sum += s;
  if (sum > 1.0) {
    for (auto& [name, s] : scores) s /= sum;
  }
  return scores;
}

}  // namespace mrm
