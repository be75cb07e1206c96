#include "mrm/graph.hpp"

#include <algorithm>

#include "mrm/error.hpp"

namespace mrm {

TermId Graph::intern(const Term& term) {
  if (auto it = term_ids_.find(term); it != term_ids_.end()) return it->second;
  check_mutable();
  if (term.is_qt() && term.qt_id() >= qts_.size()) {
    throw MalformedTerm("QtRef " + std::to_string(term.qt_id()) + " has no qt-table entry");
  }
  auto id = static_cast<TermId>(terms_.size());
  terms_.push_back(term);
  term_ids_.emplace(term, id);
  grow_indices();
  return id;
}

std::optional<TermId> Graph::find(const Term& term) const {
  if (auto it = term_ids_.find(term); it != term_ids_.end()) return it->second;
  return std::nullopt;
}

QtId Graph::intern_qt(const Term& subject, const Term& predicate, const Term& object) {
  if (subject.is_literal()) throw MalformedTerm("literal in quoted-triple subject position");
  if (!predicate.is_iri()) throw MalformedTerm("quoted-triple predicate must be an IRI");
  return intern_qt(intern(subject), intern(predicate), intern(object));
}

QtId Graph::intern_qt(TermId subject, TermId predicate, TermId object) {
  IdTriple key{subject, predicate, object};
  if (auto it = qt_ids_.find(key); it != qt_ids_.end()) return it->second;
  validate(key);
  check_mutable();
  auto id = static_cast<QtId>(qts_.size());
  qts_.push_back(QuotedTriple{id, subject, predicate, object, 0});
  qts_.back().self = intern(Term::qt(id));
  qt_ids_.emplace(key, id);
  return id;
}

std::optional<QtId> Graph::find_qt(TermId subject, TermId predicate, TermId object) const {
  if (auto it = qt_ids_.find(IdTriple{subject, predicate, object}); it != qt_ids_.end()) {
    return it->second;
  }
  return std::nullopt;
}

const QuotedTriple* Graph::quoted_by_term(TermId id) const {
  const Term& t = terms_[id];
  return t.is_qt() ? &qts_[t.qt_id()] : nullptr;
}

bool Graph::add(const Triple& triple) {
  if (triple.subject.is_literal()) throw MalformedTerm("literal in subject position");
  if (!triple.predicate.is_iri()) throw MalformedTerm("predicate must be an IRI");
  return add(IdTriple{intern(triple.subject), intern(triple.predicate), intern(triple.object)});
}

bool Graph::add(IdTriple triple) {
  validate(triple);
  if (triple_set_.contains(triple)) return false;
  check_mutable();
  triple_set_.insert(triple);
  triples_.push_back(triple);
  index(static_cast<std::uint32_t>(triples_.size() - 1));
  return true;
}

bool Graph::remove(const Triple& triple) {
  auto s = find(triple.subject);
  auto p = find(triple.predicate);
  auto o = find(triple.object);
  if (!s || !p || !o) return false;
  return remove(IdTriple{*s, *p, *o});
}

bool Graph::remove(IdTriple triple) {
  if (!triple_set_.contains(triple)) return false;
  check_mutable();
  triple_set_.erase(triple);
  triples_.erase(std::find(triples_.begin(), triples_.end(), triple));
  rebuild_indices();
  return true;
}

std::size_t Graph::remove_all(std::span<const IdTriple> triples) {
  check_mutable();
  std::size_t removed = 0;
  for (const auto& t : triples) removed += triple_set_.erase(t);
  if (removed == 0) return 0;
  std::erase_if(triples_, [&](const IdTriple& t) { return !triple_set_.contains(t); });
  rebuild_indices();
  return removed;
}

bool Graph::contains(const Triple& triple) const {
  auto s = find(triple.subject);
  auto p = find(triple.predicate);
  auto o = find(triple.object);
  return s && p && o && contains(IdTriple{*s, *p, *o});
}

Triple Graph::resolve(IdTriple triple) const {
  return Triple{terms_[triple.subject], terms_[triple.predicate], terms_[triple.object]};
}

IdTriple Graph::lookup(const Triple& triple) const {
  auto s = find(triple.subject);
  auto p = find(triple.predicate);
  auto o = find(triple.object);
  if (!s || !p || !o) throw UnknownToken("triple mentions a term unknown to the graph");
  return IdTriple{*s, *p, *o};
}

std::span<const std::uint32_t> Graph::with_subject(TermId id) const {
  return id < by_subject_.size() ? std::span<const std::uint32_t>(by_subject_[id])
                                 : std::span<const std::uint32_t>();
}

std::span<const std::uint32_t> Graph::with_predicate(TermId id) const {
  return id < by_predicate_.size() ? std::span<const std::uint32_t>(by_predicate_[id])
                                   : std::span<const std::uint32_t>();
}

std::span<const std::uint32_t> Graph::with_object(TermId id) const {
  return id < by_object_.size() ? std::span<const std::uint32_t>(by_object_[id])
                                : std::span<const std::uint32_t>();
}

std::vector<TermId> Graph::entities() const {
  std::vector<char> mark(terms_.size(), 0);
  auto visit = [&](TermId id) {
    if (!terms_[id].is_literal()) mark[id] = 1;
  };
  for (const auto& t : triples_) {
    visit(t.subject);
    visit(t.object);
  }
  for (const auto& q : qts_) {
    visit(q.subject);
    visit(q.object);
  }
  std::vector<TermId> out;
  for (TermId id = 0; id < mark.size(); ++id) {
    if (mark[id]) out.push_back(id);
  }
  return out;
}

std::vector<TermId> Graph::relations() const {
  std::vector<char> mark(terms_.size(), 0);
  for (const auto& t : triples_) mark[t.predicate] = 1;
  for (const auto& q : qts_) mark[q.predicate] = 1;
  std::vector<TermId> out;
  for (TermId id = 0; id < mark.size(); ++id) {
    if (mark[id]) out.push_back(id);
  }
  return out;
}

GraphStats Graph::stats() const {
  return GraphStats{entities().size(), relations().size(), triples_.size()};
}

void Graph::verify() const {
  if (triple_set_.size() != triples_.size()) throw Error("triple set and list disagree");
  std::vector<std::vector<std::uint32_t>> subj(terms_.size()), pred(terms_.size()),
      obj(terms_.size());
  for (std::uint32_t i = 0; i < triples_.size(); ++i) {
    const auto& t = triples_[i];
    if (!triple_set_.contains(t)) throw Error("triple missing from set");
    subj[t.subject].push_back(i);
    pred[t.predicate].push_back(i);
    obj[t.object].push_back(i);
  }
  for (TermId id = 0; id < terms_.size(); ++id) {
    auto same = [&](const std::vector<std::vector<std::uint32_t>>& want,
                    const std::vector<std::vector<std::uint32_t>>& have) {
      static const std::vector<std::uint32_t> none;
      const auto& h = id < have.size() ? have[id] : none;
      return want[id] == h;
    };
    if (!same(subj, by_subject_) || !same(pred, by_predicate_) || !same(obj, by_object_)) {
      throw Error("index out of date for term " + std::to_string(id));
    }
  }
  for (const auto& q : qts_) {
    auto it = qt_ids_.find(IdTriple{q.subject, q.predicate, q.object});
    if (it == qt_ids_.end() || it->second != q.id) throw Error("qt-table interning broken");
    if (!terms_[q.self].is_qt() || terms_[q.self].qt_id() != q.id) {
      throw Error("qt self reference broken");
    }
  }
}

void Graph::check_mutable() const {
  if (frozen_) throw Error("graph is frozen");
}

void Graph::validate(IdTriple triple) const {
  if (triple.subject >= terms_.size() || triple.predicate >= terms_.size() ||
      triple.object >= terms_.size()) {
    throw MalformedTerm("triple references an unknown term id");
  }
  if (terms_[triple.subject].is_literal()) throw MalformedTerm("literal in subject position");
  if (!terms_[triple.predicate].is_iri()) throw MalformedTerm("predicate must be an IRI");
}

void Graph::index(std::uint32_t position) {
  const auto& t = triples_[position];
  by_subject_[t.subject].push_back(position);
  by_predicate_[t.predicate].push_back(position);
  by_object_[t.object].push_back(position);
}

void Graph::rebuild_indices() {
  for (auto* idx : {&by_subject_, &by_predicate_, &by_object_}) {
    for (auto& v : *idx) v.clear();
  }
  for (std::uint32_t i = 0; i < triples_.size(); ++i) index(i);
}

void Graph::grow_indices() {
  by_subject_.resize(terms_.size());
  by_predicate_.resize(terms_.size());
  by_object_.resize(terms_.size());
}

std::string escape_literal(std::string_view lexical) {
  std::string out;
  out.reserve(lexical.size());
  for (char c : lexical) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string ntriples_term(const Graph& graph, const Term& term) {
  switch (term.kind()) {
    case Term::Kind::Iri:
      return "<" + term.iri_text() + ">";
    case Term::Kind::BlankNode:
      return "_:" + term.blank_label();
    case Term::Kind::Literal: {
      const auto& lit = term.literal_value();
      std::string out = "\"" + escape_literal(lit.lexical) + "\"";
      if (!lit.language.empty()) out += "@" + lit.language;
      if (!lit.datatype.empty()) out += "^^<" + lit.datatype + ">";
      return out;
    }
    case Term::Kind::QtRef: {
      const auto& q = graph.quoted(term.qt_id());
      return "<< " + ntriples_term(graph, q.subject) + " " + ntriples_term(graph, q.predicate) +
             " " + ntriples_term(graph, q.object) + " >>";
    }
  }
  return {};
}

std::string ntriples_term(const Graph& graph, TermId id) {
  return ntriples_term(graph, graph.term(id));
}

std::vector<std::string> canonical_triples(const Graph& graph) {
  std::vector<std::string> lines;
  lines.reserve(graph.size());
  for (const auto& t : graph.triples()) {
    lines.push_back(ntriples_term(graph, t.subject) + " " + ntriples_term(graph, t.predicate) +
                    " " + ntriples_term(graph, t.object));
  }
  std::sort(lines.begin(), lines.end());
  return lines;
}

std::vector<std::string> canonical_quoted(const Graph& graph) {
  std::vector<std::string> lines;
  lines.reserve(graph.qt_count());
  for (std::size_t i = 0; i < graph.qt_count(); ++i) {
    lines.push_back(ntriples_term(graph, Term::qt(static_cast<QtId>(i))));
  }
  std::sort(lines.begin(), lines.end());
  return lines;
}

bool same_content(const Graph& a, const Graph& b) {
  return canonical_triples(a) == canonical_triples(b) &&
         canonical_quoted(a) == canonical_quoted(b);
}

}  // namespace mrm
