#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mrm/corpus_io.hpp"
#include "mrm/graph.hpp"

namespace mrm {

enum class Sharing { Separate, Unified };  // TransE, TransU
enum class Norm { L1, L2 };

std::optional<Sharing> parse_sharing(std::string_view name);
std::string_view to_string(Sharing sharing);
std::optional<Norm> parse_norm(std::string_view name);
std::string_view to_string(Norm norm);

struct LPConfig {
  double margin = 1.0;
  double learning_rate = 0.01;
  std::size_t epochs = 50;
  std::size_t negatives = 1;
  Norm norm = Norm::L2;
  bool normalize_entities = true;
  std::uint64_t seed = 0;
  Sharing sharing = Sharing::Separate;

  void validate() const;  // throws ConfigError
};

// Row indices of one triple in an LPModel.
struct LPTriple {
  std::uint32_t head = 0;
  std::uint32_t relation = 0;
  std::uint32_t tail = 0;
  bool operator==(const LPTriple&) const = default;
};

struct LPTripleHash {
  std::size_t operator()(const LPTriple& t) const noexcept {
    std::uint64_t h = t.head;
    h = h * 0x9e3779b97f4a7c15ULL ^ t.relation;
    h = h * 0x9e3779b97f4a7c15ULL ^ t.tail;
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

// Entity and relation vectors keyed by corpus token. Under unified sharing a
// token used in both roles owns a single row.
class LPModel {
 public:
  LPModel() = default;
  LPModel(std::size_t dim, Sharing sharing) : dim_(dim), sharing_(sharing) {}

  std::size_t dim() const { return dim_; }
  Sharing sharing() const { return sharing_; }
  std::size_t rows() const { return row_tokens_.size(); }

  // Returns the row; reuses the relation row of the same token under
  // unified sharing (and vice versa).
  std::uint32_t add_entity(const std::string& token, std::span<const double> vector);
  std::uint32_t add_relation(const std::string& token, std::span<const double> vector);

  std::optional<std::uint32_t> entity_row(std::string_view token) const;
  std::optional<std::uint32_t> relation_row(std::string_view token) const;
  // Throw UnknownToken.
  std::span<double> entity(std::string_view token);
  std::span<double> relation(std::string_view token);

  std::span<double> row(std::uint32_t r) { return {values_.data() + std::size_t{r} * dim_, dim_}; }
  std::span<const double> row(std::uint32_t r) const {
    return {values_.data() + std::size_t{r} * dim_, dim_};
  }
  const std::string& row_token(std::uint32_t r) const { return row_tokens_[r]; }

  // Entity rows in insertion order: the ranking candidates.
  const std::vector<std::uint32_t>& entity_rows() const { return entity_rows_; }
  const std::vector<std::uint32_t>& relation_rows() const { return relation_rows_; }
  bool is_entity_row(std::uint32_t r) const { return entity_flag_[r]; }

  // Row triple for (s, p, o) tokens; throws UnknownToken.
  LPTriple encode(std::string_view s, std::string_view p, std::string_view o) const;

  bool operator==(const LPModel& other) const;

 private:
  std::uint32_t new_row(const std::string& token, std::span<const double> vector);

  std::size_t dim_ = 0;
  Sharing sharing_ = Sharing::Separate;
  std::vector<double> values_;
  std::vector<std::string> row_tokens_;
  std::vector<bool> entity_flag_;
  std::vector<std::uint32_t> entity_rows_;
  std::vector<std::uint32_t> relation_rows_;
  std::unordered_map<std::string, std::uint32_t> entities_;
  std::unordered_map<std::string, std::uint32_t> relations_;
};

struct CoverageReport {
  std::size_t entities = 0;
  std::size_t relations = 0;
  std::size_t missing_entities = 0;
  std::size_t missing_relations = 0;
  std::size_t shared_rows = 0;  // tokens owning one row for both roles
};

struct InitResult {
  LPModel model;
  CoverageReport coverage;
};

// Entities are graph.entities(), relations graph.relations(), in id order.
// Tokens absent from the table get seeded uniform vectors in
// [-0.5/dim, 0.5/dim].
InitResult init_from_pretrained(const EmbeddingTable& table, const Graph& graph, Sharing sharing,
                                std::uint64_t seed = 0);

std::vector<LPTriple> encode_triples(const LPModel& model, const Graph& graph,
                                     std::span<const IdTriple> triples);

// -||s + p - o|| under the norm; higher is better.
double score(const LPModel& model, std::string_view s, std::string_view p, std::string_view o,
             Norm norm);
double score(const LPModel& model, const LPTriple& triple, Norm norm);

struct MarginGradient {
  double loss = 0.0;
  // (row, gradient) contributions; rows may repeat and must be summed.
  std::vector<std::pair<std::uint32_t, std::vector<double>>> rows;
};

// max(0, margin + d(positive) - d(negative)) with d = ||h + r - t||.
MarginGradient margin_loss_and_gradient(const LPModel& model, const LPTriple& positive,
                                        const LPTriple& negative, double margin, Norm norm);

struct TrainStats {
  std::vector<double> epoch_losses;  // mean hinge loss per negative
  std::size_t resample_exhausted = 0;
};

// Margin-ranking SGD with head/tail corruption filtered against `train`.
TrainStats train_lp(LPModel& model, std::span<const LPTriple> train, const LPConfig& config);

struct RankMetrics {
  double mrr = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
};

struct MetricsReport {
  RankMetrics raw;
  RankMetrics filtered;
  std::size_t test_triples = 0;
  std::size_t candidates = 0;
  std::vector<double> raw_ranks;
  std::vector<double> filtered_ranks;
};

// Tail ranking against `candidates` (entity rows). rank = 1 + better + ties/2;
// the filtered setting drops candidates c != o with (s, p, c) in `known`.
MetricsReport evaluate(const LPModel& model, std::span<const LPTriple> test,
                       std::span<const LPTriple> known, std::span<const std::uint32_t> candidates,
                       Norm norm);

// Text checkpoint: header "lpmodel\t<dim>\t<sharing>", then one row per line:
// "<E|R|ER>\ttoken\tv1...vD".
void write_model(const LPModel& model, std::ostream& out);
LPModel read_model(std::istream& in);

}  // namespace mrm
