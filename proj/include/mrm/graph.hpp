#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mrm/term.hpp"

namespace mrm {

using TermId = std::uint32_t;

// Triple over Terms; QtRef terms refer to the qt-table of a specific Graph.
struct Triple {
  Term subject;
  Term predicate;
  Term object;
  bool operator==(const Triple&) const = default;
  auto operator<=>(const Triple&) const = default;
};

// Triple over dictionary ids of one Graph.
struct IdTriple {
  TermId subject = 0;
  TermId predicate = 0;
  TermId object = 0;
  bool operator==(const IdTriple&) const = default;
  auto operator<=>(const IdTriple&) const = default;
};

struct IdTripleHash {
  std::size_t operator()(const IdTriple& t) const noexcept {
    std::uint64_t h = t.subject;
    h = h * 0x9e3779b97f4a7c15ULL ^ t.predicate;
    h = h * 0x9e3779b97f4a7c15ULL ^ t.object;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct QuotedTriple {
  QtId id = 0;
  TermId subject = 0;
  TermId predicate = 0;
  TermId object = 0;
  TermId self = 0;  // dictionary id of QtRef(id)
};

struct GraphStats {
  std::size_t entities = 0;
  std::size_t relations = 0;
  std::size_t triples = 0;
  bool operator==(const GraphStats&) const = default;
};

// Dictionary-encoded triple set with a quoted-triple interning table and
// subject/object/predicate indices. Asserted triples keep insertion order.
//
// E is every non-literal term in subject or object position of an asserted
// or quoted triple; R is every term in predicate position of either.
class Graph {
 public:
  TermId intern(const Term& term);
  std::optional<TermId> find(const Term& term) const;
  const Term& term(TermId id) const { return terms_[id]; }
  std::size_t term_count() const { return terms_.size(); }

  // Returns the existing id for identical (s, p, o) content, else a new one.
  QtId intern_qt(const Term& subject, const Term& predicate, const Term& object);
  QtId intern_qt(TermId subject, TermId predicate, TermId object);
  std::optional<QtId> find_qt(TermId subject, TermId predicate, TermId object) const;
  const QuotedTriple& quoted(QtId id) const { return qts_[id]; }
  std::size_t qt_count() const { return qts_.size(); }
  // Quoted triple behind a dictionary id, or nullptr when the term is not a QtRef.
  const QuotedTriple* quoted_by_term(TermId id) const;

  // Adds an asserted triple; false when it was already present.
  bool add(const Triple& triple);
  bool add(IdTriple triple);
  bool remove(const Triple& triple);
  bool remove(IdTriple triple);
  // Removes every listed triple with a single index rebuild; returns the
  // number actually removed.
  std::size_t remove_all(std::span<const IdTriple> triples);
  bool contains(const Triple& triple) const;
  bool contains(IdTriple triple) const { return triple_set_.contains(triple); }

  std::span<const IdTriple> triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  Triple resolve(IdTriple triple) const;
  IdTriple lookup(const Triple& triple) const;  // throws UnknownToken

  // Positions into triples() with the given term in the given role.
  std::span<const std::uint32_t> with_subject(TermId id) const;
  std::span<const std::uint32_t> with_predicate(TermId id) const;
  std::span<const std::uint32_t> with_object(TermId id) const;

  std::vector<TermId> entities() const;
  std::vector<TermId> relations() const;
  GraphStats stats() const;

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  // Throws Error if any index disagrees with the triple list.
  void verify() const;

 private:
  void check_mutable() const;
  void validate(IdTriple triple) const;
  void index(std::uint32_t position);
  void rebuild_indices();
  void grow_indices();

  struct QtKeyHash {
    std::size_t operator()(const IdTriple& t) const noexcept { return IdTripleHash{}(t); }
  };

  std::vector<Term> terms_;
  std::unordered_map<Term, TermId> term_ids_;
  std::vector<QuotedTriple> qts_;
  std::unordered_map<IdTriple, QtId, QtKeyHash> qt_ids_;
  std::vector<IdTriple> triples_;
  std::unordered_set<IdTriple, IdTripleHash> triple_set_;
  std::vector<std::vector<std::uint32_t>> by_subject_;
  std::vector<std::vector<std::uint32_t>> by_predicate_;
  std::vector<std::vector<std::uint32_t>> by_object_;
  bool frozen_ = false;
};

// N-Triples-star rendering of a term; quoted triples expand recursively.
std::string ntriples_term(const Graph& graph, TermId id);
std::string ntriples_term(const Graph& graph, const Term& term);
std::string escape_literal(std::string_view lexical);

// Sorted canonical N-Triples-star lines of the asserted triples and of the
// qt-table. Equal canonical forms mean the graphs hold the same content.
std::vector<std::string> canonical_triples(const Graph& graph);
std::vector<std::string> canonical_quoted(const Graph& graph);
bool same_content(const Graph& a, const Graph& b);

}  // namespace mrm
