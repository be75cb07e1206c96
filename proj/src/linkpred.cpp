#include "mrm/linkpred.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mrm/error.hpp"
#include "mrm/rng.hpp"

namespace mrm {

std::optional<Sharing> parse_sharing(std::string_view name) {
  if (name == "separate" || name == "transe" || name == "TransE") return Sharing::Separate;
  if (name == "unified" || name == "transu" || name == "TransU") return Sharing::Unified;
  return std::nullopt;
}

std::string_view to_string(Sharing sharing) {
  return sharing == Sharing::Separate ? "separate" : "unified";
}

std::optional<Norm> parse_norm(std::string_view name) {
  if (name == "L1" || name == "l1") return Norm::L1;
  if (name == "L2" || name == "l2") return Norm::L2;
  return std::nullopt;
}

std::string_view to_string(Norm norm) { return norm == Norm::L1 ? "L1" : "L2"; }

void LPConfig::validate() const {
  if (!(margin > 0.0)) throw ConfigError("margin must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (negatives < 1) throw ConfigError("negatives per positive must be at least 1");
}

std::uint32_t LPModel::new_row(const std::string& token, std::span<const double> vector) {
  if (vector.size() != dim_) throw ConfigError("vector for '" + token + "' has the wrong dimension");
  auto r = static_cast<std::uint32_t>(row_tokens_.size());
  values_.insert(values_.end(), vector.begin(), vector.end());
  row_tokens_.push_back(token);
  entity_flag_.push_back(false);
  return r;
}

std::uint32_t LPModel::add_entity(const std::string& token, std::span<const double> vector) {
  if (auto it = entities_.find(token); it != entities_.end()) return it->second;
  std::uint32_t r;
  if (auto rel = relations_.find(token); sharing_ == Sharing::Unified && rel != relations_.end()) {
    r = rel->second;
  } else {
    r = new_row(token, vector);
  }
  entities_.emplace(token, r);
  entity_rows_.push_back(r);
  entity_flag_[r] = true;
  return r;
}

std::uint32_t LPModel::add_relation(const std::string& token, std::span<const double> vector) {
  if (auto it = relations_.find(token); it != relations_.end()) return it->second;
  std::uint32_t r;
  if (auto ent = entities_.find(token); sharing_ == Sharing::Unified && ent != entities_.end()) {
    r = ent->second;
  } else {
    r = new_row(token, vector);
  }
  relations_.emplace(token, r);
  relation_rows_.push_back(r);
  return r;
}

std::optional<std::uint32_t> LPModel::entity_row(std::string_view token) const {
  auto it = entities_.find(std::string(token));
  if (it == entities_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> LPModel::relation_row(std::string_view token) const {
  auto it = relations_.find(std::string(token));
  if (it == relations_.end()) return std::nullopt;
  return it->second;
}

std::span<double> LPModel::entity(std::string_view token) {
  auto r = entity_row(token);
  if (!r) throw UnknownToken("unknown entity '" + std::string(token) + "'");
  return row(*r);
}

std::span<double> LPModel::relation(std::string_view token) {
  auto r = relation_row(token);
  if (!r) throw UnknownToken("unknown relation '" + std::string(token) + "'");
  return row(*r);
}

LPTriple LPModel::encode(std::string_view s, std::string_view p, std::string_view o) const {
  auto hs = entity_row(s);
  auto rp = relation_row(p);
  auto to = entity_row(o);
  if (!hs) throw UnknownToken("unknown entity '" + std::string(s) + "'");
  if (!rp) throw UnknownToken("unknown relation '" + std::string(p) + "'");
  if (!to) throw UnknownToken("unknown entity '" + std::string(o) + "'");
  return {*hs, *rp, *to};
}

bool LPModel::operator==(const LPModel& other) const {
  return dim_ == other.dim_ && sharing_ == other.sharing_ && values_ == other.values_ &&
         row_tokens_ == other.row_tokens_ && entity_flag_ == other.entity_flag_ &&
         entities_ == other.entities_ && relations_ == other.relations_;
}

InitResult init_from_pretrained(const EmbeddingTable& table, const Graph& graph, Sharing sharing,
                                std::uint64_t seed) {
  if (table.dim() == 0) throw ConfigError("pretrained table has dimension 0");
  InitResult result{LPModel(table.dim(), sharing), {}};
  Rng rng(derive_seed(seed, 0x1b));
  double bound = 0.5 / static_cast<double>(table.dim());
  std::vector<double> fallback(table.dim());

  auto vector_for = [&](const std::string& token, std::size_t& missing) -> std::span<const double> {
    if (auto v = table.find(token)) return *v;
    ++missing;
    for (auto& x : fallback) x = rng.uniform(-bound, bound);
    return fallback;
  };

  for (TermId e : graph.entities()) {
    auto token = corpus_token(graph, e);
    ++result.coverage.entities;
    result.model.add_entity(token, vector_for(token, result.coverage.missing_entities));
  }
  for (TermId r : graph.relations()) {
    auto token = corpus_token(graph, r);
    ++result.coverage.relations;
    if (sharing == Sharing::Unified && result.model.entity_row(token)) {
      ++result.coverage.shared_rows;
      result.model.add_relation(token, {});
      continue;
    }
    result.model.add_relation(token, vector_for(token, result.coverage.missing_relations));
  }
  return result;
}

std::vector<LPTriple> encode_triples(const LPModel& model, const Graph& graph,
                                     std::span<const IdTriple> triples) {
  std::vector<LPTriple> out;
  out.reserve(triples.size());
  std::unordered_map<TermId, std::string> cache;
  auto token = [&](TermId id) -> const std::string& {
    auto it = cache.find(id);
    if (it == cache.end()) it = cache.emplace(id, corpus_token(graph, id)).first;
    return it->second;
  };
  for (const auto& t : triples) {
    out.push_back(model.encode(token(t.subject), token(t.predicate), token(t.object)));
  }
  return out;
}

namespace {

double distance(const LPModel& model, const LPTriple& t, Norm norm) {
  auto h = model.row(t.head);
  auto r = model.row(t.relation);
  auto o = model.row(t.tail);
  double sum = 0.0;
  for (std::size_t k = 0; k < model.dim(); ++k) {
    double x = h[k] + r[k] - o[k];
    sum += norm == Norm::L1 ? std::abs(x) : x * x;
  }
  return norm == Norm::L1 ? sum : std::sqrt(sum);
}

// d ||x|| / dx for x = h + r - t.
std::vector<double> distance_gradient(const LPModel& model, const LPTriple& t, Norm norm) {
  auto h = model.row(t.head);
  auto r = model.row(t.relation);
  auto o = model.row(t.tail);
  std::vector<double> g(model.dim());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = h[k] + r[k] - o[k];
  if (norm == Norm::L1) {
    for (auto& x : g) x = x > 0 ? 1.0 : x < 0 ? -1.0 : 0.0;
  } else {
    double d = distance(model, t, norm);
    for (auto& x : g) x = d > 0 ? x / d : 0.0;
  }
  return g;
}

std::vector<double> scaled(const std::vector<double>& v, double factor) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] * factor;
  return out;
}

void normalize(std::span<double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  if (sum <= 0.0) return;
  double inv = 1.0 / std::sqrt(sum);
  for (auto& x : v) x *= inv;
}

}  // namespace

double score(const LPModel& model, const LPTriple& triple, Norm norm) {
  return -distance(model, triple, norm);
}

double score(const LPModel& model, std::string_view s, std::string_view p, std::string_view o,
             Norm norm) {
  return score(model, model.encode(s, p, o), norm);
}

MarginGradient margin_loss_and_gradient(const LPModel& model, const LPTriple& positive,
                                        const LPTriple& negative, double margin, Norm norm) {
  MarginGradient result;
  double value = margin + distance(model, positive, norm) - distance(model, negative, norm);
  if (value <= 0.0) return result;
  result.loss = value;
  auto gp = distance_gradient(model, positive, norm);
  auto gn = distance_gradient(model, negative, norm);
  result.rows.emplace_back(positive.head, gp);
  result.rows.emplace_back(positive.relation, gp);
  result.rows.emplace_back(positive.tail, scaled(gp, -1.0));
  result.rows.emplace_back(negative.head, scaled(gn, -1.0));
  result.rows.emplace_back(negative.relation, scaled(gn, -1.0));
  result.rows.emplace_back(negative.tail, gn);
  return result;
}

TrainStats train_lp(LPModel& model, std::span<const LPTriple> train, const LPConfig& config) {
  config.validate();
  TrainStats stats;
  const auto& entities = model.entity_rows();
  if (train.empty() || entities.empty()) return stats;

  std::unordered_set<LPTriple, LPTripleHash> known(train.begin(), train.end());
  std::vector<LPTriple> order(train.begin(), train.end());
  Rng rng(derive_seed(config.seed, 0x7a));

  if (config.normalize_entities) {
    for (auto r : entities) normalize(model.row(r));
  }

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    std::size_t steps = 0;
    for (const auto& positive : order) {
      for (std::size_t k = 0; k < config.negatives; ++k) {
        bool corrupt_head = rng.coin();
        LPTriple negative = positive;
        constexpr int kAttempts = 20;
        int attempt = 0;
        for (; attempt < kAttempts; ++attempt) {
          auto e = entities[rng.index(entities.size())];
          negative = positive;
          (corrupt_head ? negative.head : negative.tail) = e;
          if (!known.contains(negative)) break;
        }
        if (attempt == kAttempts) ++stats.resample_exhausted;

        auto grad = margin_loss_and_gradient(model, positive, negative, config.margin, config.norm);
        total += grad.loss;
        ++steps;
        for (const auto& [r, g] : grad.rows) {
          auto v = model.row(r);
          for (std::size_t d = 0; d < v.size(); ++d) v[d] -= config.learning_rate * g[d];
        }
        if (config.normalize_entities && !grad.rows.empty()) {
          for (auto r : {positive.head, positive.tail, negative.head, negative.tail}) {
            normalize(model.row(r));
          }
        }
      }
    }
    stats.epoch_losses.push_back(steps ? total / static_cast<double>(steps) : 0.0);
  }
  return stats;
}

namespace {

void finish(RankMetrics& m, const std::vector<double>& ranks) {
  if (ranks.empty()) return;
  for (double r : ranks) {
    m.mrr += 1.0 / r;
    m.hits1 += r <= 1.0 ? 1.0 : 0.0;
    m.hits3 += r <= 3.0 ? 1.0 : 0.0;
    m.hits10 += r <= 10.0 ? 1.0 : 0.0;
  }
  auto n = static_cast<double>(ranks.size());
  m.mrr /= n;
  m.hits1 /= n;
  m.hits3 /= n;
  m.hits10 /= n;
}

}  // namespace

MetricsReport evaluate(const LPModel& model, std::span<const LPTriple> test,
                       std::span<const LPTriple> known, std::span<const std::uint32_t> candidates,
                       Norm norm) {
  MetricsReport report;
  report.test_triples = test.size();
  report.candidates = candidates.size();
  std::unordered_set<LPTriple, LPTripleHash> known_set(known.begin(), known.end());

  for (const auto& t : test) {
    double truth = score(model, t, norm);
    std::size_t raw_better = 0, raw_ties = 0, filt_better = 0, filt_ties = 0;
    for (auto c : candidates) {
      if (c == t.tail) continue;
      LPTriple alt{t.head, t.relation, c};
      double s = score(model, alt, norm);
      bool filtered_out = known_set.contains(alt);
      if (s > truth) {
        ++raw_better;
        if (!filtered_out) ++filt_better;
      } else if (s == truth) {
        ++raw_ties;
        if (!filtered_out) ++filt_ties;
      }
    }
    report.raw_ranks.push_back(1.0 + static_cast<double>(raw_better) +
                               static_cast<double>(raw_ties) / 2.0);
    report.filtered_ranks.push_back(1.0 + static_cast<double>(filt_better) +
                                    static_cast<double>(filt_ties) / 2.0);
  }
  finish(report.raw, report.raw_ranks);
  finish(report.filtered, report.filtered_ranks);
  return report;
}

void write_model(const LPModel& model, std::ostream& out) {
  out << "lpmodel\t" << model.dim() << '\t' << to_string(model.sharing()) << '\n';
  for (std::uint32_t r = 0; r < model.rows(); ++r) {
    const auto& token = model.row_token(r);
    bool entity = model.entity_row(token) == r;
    bool relation = model.relation_row(token) == r;
    out << (entity && relation ? "ER" : entity ? "E" : "R") << '\t' << token;
    for (double v : model.row(r)) out << '\t' << format_double(v);
    out << '\n';
  }
}

LPModel read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty model file", 0);
  std::istringstream header(line);
  std::string magic, sharing_name;
  std::size_t dim = 0;
  header >> magic >> dim >> sharing_name;
  auto sharing = parse_sharing(sharing_name);
  if (magic != "lpmodel" || dim == 0 || !sharing) throw ParseError("bad model header", 0);
  LPModel model(dim, *sharing);
  std::size_t line_number = 1;
  std::vector<double> values(dim);
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != dim + 2) throw MalformedRow("model row has the wrong width", line_number);
    for (std::size_t k = 0; k < dim; ++k) {
      auto f = fields[k + 2];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[k]);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw MalformedRow("bad number in model row", line_number);
      }
    }
    std::string token(fields[1]);
    auto kind = fields[0];
    if (kind == "E" || kind == "ER") model.add_entity(token, values);
    if (kind == "R" || kind == "ER") model.add_relation(token, values);
    if (kind != "E" && kind != "R" && kind != "ER") throw MalformedRow("bad row kind", line_number);
  }
  return model;
}

}  // namespace mrm
