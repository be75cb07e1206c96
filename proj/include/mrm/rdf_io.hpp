#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrm/graph.hpp"
#include "mrm/term.hpp"
#include "mrm/vocab.hpp"

namespace mrm {

// prefix -> namespace IRI. Redefining a prefix with a different namespace
// through add() is an error; Turtle @prefix directives use set().
class PrefixTable {
 public:
  // rdf, rdfs, xsd, wd, kgc and the empty prefix bound to the
  // singleton-property namespace.
  static PrefixTable standard();

  void add(std::string prefix, std::string ns);
  void set(std::string prefix, std::string ns) { table_[std::move(prefix)] = std::move(ns); }
  std::optional<std::string> lookup(std::string_view prefix) const;
  // "pfx:local" -> full IRI; nullopt for unknown prefixes or missing colon.
  std::optional<std::string> expand(std::string_view prefixed) const;
  // Longest-namespace compaction; nullopt when no namespace yields a valid
  // local name.
  std::optional<std::string> compact(std::string_view iri) const;

  const std::map<std::string, std::string>& entries() const { return table_; }
  bool empty() const { return table_.empty(); }

 private:
  std::map<std::string, std::string> table_;
};

// Local names accepted by the parser: letters, digits and _ - . # % :
// with no leading '-' or '.' and no trailing '.'.
bool valid_local_name(std::string_view local);

// --- WD50K qualifier rows ---------------------------------------------------

// Comma-separated "s,p,o[,qr,qv]*". Tokens become IRIs in `ns`; a token
// already carrying a scheme ("http:") or the empty namespace keeps its text.
HyperFact parse_wd50k_row(std::string_view line, std::size_t line_number = 1,
                          std::string_view ns = {});
std::string format_wd50k_row(const HyperFact& fact, std::string_view ns = {});

struct Wd50kReadOptions {
  std::string ns = std::string(vocab::kWd);
  // Keep only facts with at least one qualifier (the WD50K(100) setting).
  bool hyper_relational_only = false;
};

std::vector<HyperFact> read_wd50k(std::istream& in, const Wd50kReadOptions& options = {});
std::vector<HyperFact> read_wd50k_file(const std::string& path,
                                       const Wd50kReadOptions& options = {});

// --- Turtle-star ------------------------------------------------------------

// Parses the supported Turtle-star subset into `graph`. Quoted triples are
// interned without being asserted. Directives update `prefixes`.
void parse_turtle_star(std::string_view text, Graph& graph, PrefixTable& prefixes);
Graph parse_turtle_star(std::string_view text, PrefixTable prefixes = PrefixTable::standard());
Graph read_turtle_file(const std::string& path, PrefixTable prefixes = PrefixTable::standard());

enum class RdfFormat { Turtle, TurtleStar, NTriplesStar, Wd50kCsv };

std::optional<RdfFormat> parse_rdf_format(std::string_view name);
std::string_view to_string(RdfFormat format);

// turtle rejects graphs with quoted triples; wd50k-csv requires an
// RDF-star graph without nested quoted triples.
std::string serialize(const Graph& graph, RdfFormat format,
                      const PrefixTable& prefixes = PrefixTable::standard(),
                      std::string_view wd50k_ns = vocab::kWd);

// Triples in N-Triples-star, one per line.
std::string serialize_triples(const Graph& graph, std::span<const IdTriple> triples);

}  // namespace mrm
