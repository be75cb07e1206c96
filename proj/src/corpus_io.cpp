#include "mrm/corpus_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mrm/error.hpp"

namespace mrm {

namespace {

void append_escaped(std::string& out, unsigned char c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "\\u%04X", c);
  out += buf;
}

std::string literal_token(const Literal& lit) {
  std::string out = "\"";
  for (unsigned char c : lit.lexical) {
    if (c <= 0x20 || c == '|' || c == '\\' || c == '"' || c == 0x7F) {
      append_escaped(out, c);
    } else {
      out += static_cast<char>(c);
    }
  }
  out += '"';
  if (!lit.language.empty()) out += "@" + lit.language;
  if (!lit.datatype.empty()) out += "^^<" + lit.datatype + ">";
  return out;
}

void check_iri_token(std::string_view text) {
  if (text.starts_with("_:")) throw EncodingError("IRI '" + std::string(text) + "' looks like a blank node");
  for (unsigned char c : text) {
    if (c <= 0x20 || c == kQtTokenSeparator || c == '<' || c == '>' || c == '"') {
      throw EncodingError("IRI '" + std::string(text) + "' contains a reserved character");
    }
  }
}

}  // namespace

std::string corpus_token(const Graph& graph, TermId id) {
  const Term& term = graph.term(id);
  switch (term.kind()) {
    case Term::Kind::Iri:
      check_iri_token(term.iri_text());
      return term.iri_text();
    case Term::Kind::BlankNode:
      return "_:" + term.blank_label();
    case Term::Kind::Literal:
      return literal_token(term.literal_value());
    case Term::Kind::QtRef: {
      const auto& q = graph.quoted(term.qt_id());
      std::string out = "<<";
      out += corpus_token(graph, q.subject);
      out += kQtTokenSeparator;
      out += corpus_token(graph, q.predicate);
      out += kQtTokenSeparator;
      out += corpus_token(graph, q.object);
      out += ">>";
      return out;
    }
  }
  return {};
}

WalkCorpus::TokenId WalkCorpus::intern(std::string_view token) {
  std::string key(token);
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  for (unsigned char c : token) {
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
      throw EncodingError("corpus token contains whitespace: '" + key + "'");
    }
  }
  if (token.empty()) throw EncodingError("empty corpus token");
  auto id = static_cast<TokenId>(vocabulary_.size());
  vocabulary_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<WalkCorpus::TokenId> WalkCorpus::find(std::string_view token) const {
  if (auto it = ids_.find(std::string(token)); it != ids_.end()) return it->second;
  return std::nullopt;
}

void WalkCorpus::add_sequence(std::vector<TokenId> sequence) {
  if (sequence.empty()) return;
  sequences_.push_back(std::move(sequence));
}

void WalkCorpus::add_sequence(std::span<const std::string> tokens) {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(intern(t));
  add_sequence(std::move(ids));
}

std::size_t WalkCorpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sequences_) n += s.size();
  return n;
}

std::vector<std::string> WalkCorpus::sequence_tokens(std::size_t index) const {
  std::vector<std::string> out;
  for (auto id : sequences_[index]) out.push_back(vocabulary_[id]);
  return out;
}

bool WalkCorpus::operator==(const WalkCorpus& other) const {
  if (sequences_.size() != other.sequences_.size()) return false;
  for (std::size_t i = 0; i < sequences_.size(); ++i) {
    if (sequences_[i].size() != other.sequences_[i].size()) return false;
    for (std::size_t j = 0; j < sequences_[i].size(); ++j) {
      if (vocabulary_[sequences_[i][j]] != other.vocabulary_[other.sequences_[i][j]]) return false;
    }
  }
  return true;
}

void write_corpus(const WalkCorpus& corpus, std::ostream& out) {
  for (const auto& seq : corpus.sequences()) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i > 0) out << ' ';
      out << corpus.token(seq[i]);
    }
    out << '\n';
  }
}

WalkCorpus read_corpus(std::istream& in) {
  WalkCorpus corpus;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<WalkCorpus::TokenId> ids;
    std::size_t start = 0;
    while (start <= line.size()) {
      auto space = line.find(' ', start);
      auto end = space == std::string::npos ? line.size() : space;
      if (end == start) {
        throw EncodingError("line " + std::to_string(line_number) + ": empty token");
      }
      ids.push_back(corpus.intern(std::string_view(line).substr(start, end - start)));
      if (space == std::string::npos) break;
      start = space + 1;
    }
    corpus.add_sequence(std::move(ids));
  }
  return corpus;
}

void EmbeddingTable::add(std::string token, std::span<const double> vector, std::uint64_t count) {
  if (vector.size() != dim_) throw Error("embedding dimension mismatch for " + token);
  if (rows_.contains(token)) throw Error("duplicate embedding token " + token);
  for (double v : vector) {
    if (!std::isfinite(v)) throw Error("non-finite embedding value for " + token);
  }
  rows_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  counts_.push_back(count);
  values_.insert(values_.end(), vector.begin(), vector.end());
}

std::optional<std::size_t> EmbeddingTable::row(std::string_view token) const {
  if (auto it = rows_.find(std::string(token)); it != rows_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view token) const {
  if (auto r = row(token)) return vector(*r);
  return std::nullopt;
}

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void write_embeddings(const EmbeddingTable& table, std::ostream& out) {
  out << table.size() << '\t' << table.dim() << '\n';
  for (std::size_t r = 0; r < table.size(); ++r) {
    out << table.tokens()[r];
    for (double v : table.vector(r)) out << '\t' << format_double(v);
    out << '\n';
  }
}

EmbeddingTable read_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("embedding file is empty");
  std::size_t vocab = 0;
  std::size_t dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> vocab >> dim)) throw Error("malformed embedding header");
  }
  EmbeddingTable table(dim);
  std::vector<double> values(dim);
  for (std::size_t r = 0; r < vocab; ++r) {
    if (!std::getline(in, line)) throw Error("embedding file truncated");
    auto tab = line.find('\t');
    if (tab == std::string::npos && dim > 0) throw Error("malformed embedding row");
    std::string token = line.substr(0, tab);
    const char* p = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    for (std::size_t d = 0; d < dim; ++d) {
      auto [next, ec] = std::from_chars(p, end, values[d]);
      if (ec != std::errc()) throw Error("malformed value in embedding row " + token);
      p = next;
      if (d + 1 < dim) {
        if (p == end || *p != '\t') throw Error("too few values in embedding row " + token);
        ++p;
      }
    }
    table.add(std::move(token), values);
  }
  return table;
}

}  // namespace mrm
