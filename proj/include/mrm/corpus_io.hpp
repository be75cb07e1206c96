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
#include <vector>

#include "mrm/graph.hpp"

namespace mrm {

// Separator inside quoted-triple tokens. Raw IRIs containing it are rejected.
inline constexpr char kQtTokenSeparator = '|';

// Atomic, whitespace-free corpus token for a graph term:
//   IRI        -> its text
//   blank node -> _:label
//   literal    -> "lexical"@lang / "lexical"^^<dt>, with whitespace, '|'
//                 and '\' escaped as \uXXXX
//   quoted     -> <<s|p|o>>, recursively
// Throws EncodingError for IRIs containing whitespace, '|', '<', '>', '"'
// or starting with "_:".
std::string corpus_token(const Graph& graph, TermId id);

// Token sequences over an interned vocabulary.
class WalkCorpus {
 public:
  using TokenId = std::uint32_t;

  TokenId intern(std::string_view token);
  std::optional<TokenId> find(std::string_view token) const;
  const std::string& token(TokenId id) const { return vocabulary_[id]; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  // Empty sequences are ignored.
  void add_sequence(std::vector<TokenId> sequence);
  void add_sequence(std::span<const std::string> tokens);

  const std::vector<std::vector<TokenId>>& sequences() const { return sequences_; }
  std::size_t size() const { return sequences_.size(); }
  bool empty() const { return sequences_.empty(); }
  std::size_t token_count() const;

  std::vector<std::string> sequence_tokens(std::size_t index) const;

  bool operator==(const WalkCorpus& other) const;

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, TokenId> ids_;
  std::vector<std::vector<TokenId>> sequences_;
};

// One walk per line, tokens separated by single spaces.
void write_corpus(const WalkCorpus& corpus, std::ostream& out);
WalkCorpus read_corpus(std::istream& in);

// token -> dense vector, plus per-token corpus counts.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::uint64_t count(std::size_t row) const { return counts_[row]; }

  void add(std::string token, std::span<const double> vector, std::uint64_t count = 0);
  std::optional<std::size_t> row(std::string_view token) const;
  std::span<const double> vector(std::size_t row) const {
    return {values_.data() + row * dim_, dim_};
  }
  std::optional<std::span<const double>> find(std::string_view token) const;

  bool operator==(const EmbeddingTable& other) const {
    return dim_ == other.dim_ && tokens_ == other.tokens_ && values_ == other.values_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> rows_;
};

// Header "<vocab-size>\t<dim>", then "token\tv1\t...\tvD" per line. Values use
// the shortest round-trip decimal form.
void write_embeddings(const EmbeddingTable& table, std::ostream& out);
EmbeddingTable read_embeddings(std::istream& in);

std::string format_double(double value);

}  // namespace mrm
