#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrm/graph.hpp"
#include "mrm/term.hpp"

namespace mrm {

// Metadata representation model.
enum class Mrm { Ref, Sgp, Rdr };

std::optional<Mrm> parse_mrm(std::string_view name);
std::string_view to_string(Mrm mrm);
inline constexpr Mrm kAllMrms[] = {Mrm::Ref, Mrm::Sgp, Mrm::Rdr};

// Skolem label of a reified statement node. Derived from the fact content
// and its occurrence index among identical facts, so repeated rows get
// distinct nodes and reruns give identical graphs.
struct RefStatementId {
  std::string label;

  static RefStatementId for_fact(const HyperFact& fact, std::size_t occurrence);
  Term term() const { return Term::blank(label); }
};

// Singleton property p<separator>k, e.g. wd:P166#1.
struct SingletonPropertyId {
  std::string base;  // IRI text of the base predicate
  std::size_t k = 1;
  std::string separator = "#";

  Term term() const { return Term::iri(base + separator + std::to_string(k)); }
};

// 1-based per-predicate counters handed out in input order.
class SingletonCounter {
 public:
  explicit SingletonCounter(std::string separator = "#") : separator_(std::move(separator)) {}
  SingletonPropertyId next(const Term& predicate);

 private:
  std::string separator_;
  std::map<std::string, std::size_t> counters_;
};

// st rdf:subject s ; rdf:predicate p ; rdf:object o ; qr_i qv_i [; rdf:type rdf:Statement]
std::vector<Triple> to_ref(const HyperFact& fact, const RefStatementId& id, bool emit_type);

// s p#k o . p#k singletonPropertyOf p ; qr_i qv_i
std::vector<Triple> to_sgp(const HyperFact& fact, const SingletonPropertyId& sp);

// << s p o >> qr_i qv_i, or the plain triple when there are no qualifiers.
// Interns the quoted triple in `graph`.
std::vector<Triple> to_rdr(const HyperFact& fact, Graph& graph);

struct ConvertOptions {
  bool emit_type = false;
  std::string sp_separator = "#";
};

// Converts a fact list into one graph of the requested model, in input order.
Graph convert_facts(std::span<const HyperFact> facts, Mrm mrm, const ConvertOptions& options = {});

// Inverse of convert_facts: one fact per statement node / singleton property
// / quoted triple, ordered by first appearance. Throws ExtractionError on
// shape violations.
std::vector<HyperFact> extract_hyperfacts(const Graph& graph, Mrm mrm);

// --- KGRC-RDF ---------------------------------------------------------------

// Role properties tried, in order, when choosing the object of a statement.
class ObjectPriority {
 public:
  // kgc:what > kgc:whom > kgc:where > kgc:on > kgc:to > kgc:from
  static ObjectPriority standard();
  explicit ObjectPriority(std::vector<std::string> role_iris);

  const std::vector<std::string>& roles() const { return roles_; }

 private:
  std::vector<std::string> roles_;
};

enum class WrapPolicy { Always, OnCollision };

std::optional<WrapPolicy> parse_wrap_policy(std::string_view name);

struct SkippedStatement {
  Term node;
  std::string reason;
};

struct KgrcConversion {
  Graph graph;
  std::vector<SkippedStatement> skipped;
  std::vector<std::string> warnings;
  std::size_t converted = 0;
};

// Statement nodes (kgc:subject + kgc:hasPredicate + a priority role) become
// singleton properties <predicate>-<k>; every other triple of the node
// attaches to the singleton property, and references to converted nodes are
// redirected to their singleton property.
KgrcConversion kgrc_to_sgp(const Graph& ref_graph, const ObjectPriority& priority);

// Statement nodes become << s p o >>, wrapped as << << s p o >> rdf:value "id" >>
// per `wrap`; metadata attaches to the wrapped term and references to
// converted nodes (kgc:then targets, nested roles) point at it. Throws
// UnresolvedReference for kgc:then targets that name no node of the input.
KgrcConversion kgrc_to_rdr(const Graph& ref_graph, const ObjectPriority& priority,
                           WrapPolicy wrap = WrapPolicy::Always);

}  // namespace mrm
