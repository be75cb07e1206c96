#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "mrm/convert.hpp"
#include "mrm/error.hpp"
#include "mrm/vocab.hpp"

namespace mrm {

ObjectPriority ObjectPriority::standard() {
  std::vector<std::string> roles;
  for (const char* role : {"what", "whom", "where", "on", "to", "from"}) {
    roles.push_back(std::string(vocab::kKgc) + role);
  }
  return ObjectPriority(std::move(roles));
}

ObjectPriority::ObjectPriority(std::vector<std::string> role_iris) : roles_(std::move(role_iris)) {
  if (roles_.empty()) throw ConfigError("object priority needs at least one role");
}

std::optional<WrapPolicy> parse_wrap_policy(std::string_view name) {
  if (name == "always") return WrapPolicy::Always;
  if (name == "on-collision") return WrapPolicy::OnCollision;
  return std::nullopt;
}

namespace {

constexpr std::uint32_t kNoPosition = ~std::uint32_t{0};

struct Statement {
  TermId node = 0;
  TermId subject = 0;
  TermId predicate = 0;
  TermId object = 0;
  // Positions of kgc:subject, kgc:hasPredicate and the chosen role triple.
  std::uint32_t consumed[3] = {kNoPosition, kNoPosition, kNoPosition};

  bool consumes(std::uint32_t pos) const {
    return pos == consumed[0] || pos == consumed[1] || pos == consumed[2];
  }
};

// Finds the statement nodes of a KGRC-style reified graph and resolves their
// (s, p, o) with the object-priority rule.
class StatementScanner {
 public:
  StatementScanner(const Graph& in, const ObjectPriority& priority, KgrcConversion& result)
      : in_(in), result_(result) {
    subject_ = in.find(Term::iri(std::string(vocab::kKgcSubject)));
    has_predicate_ = in.find(Term::iri(std::string(vocab::kKgcHasPredicate)));
    for (const auto& role : priority.roles()) {
      if (auto id = in.find(Term::iri(role))) roles_.push_back(*id);
    }
  }

  std::vector<Statement> scan() {
    std::vector<Statement> out;
    std::vector<char> seen(in_.term_count(), 0);
    auto triples = in_.triples();
    for (const auto& t : triples) {
      if (seen[t.subject]) continue;
      seen[t.subject] = 1;
      if (!is_candidate(t.subject)) continue;
      Statement st;
      st.node = t.subject;
      std::string reason;
      auto s = first_value(t.subject, subject_, "kgc:subject");
      auto p = first_value(t.subject, has_predicate_, "kgc:hasPredicate");
      std::optional<std::uint32_t> o;
      for (auto role : roles_) {
        o = first_value(t.subject, role, in_.term(role).iri_text().c_str());
        if (o) break;
      }
      if (!s) {
        reason = "missing kgc:subject";
      } else if (!p) {
        reason = "missing kgc:hasPredicate";
      } else if (!o) {
        reason = "none of the priority roles present";
      } else if (!in_.term(triples[*p].object).is_iri()) {
        reason = "kgc:hasPredicate value is not an IRI";
      }
      if (!reason.empty()) {
        result_.skipped.push_back({in_.term(t.subject), reason});
        continue;
      }
      st.subject = triples[*s].object;
      st.predicate = triples[*p].object;
      st.object = triples[*o].object;
      st.consumed[0] = *s;
      st.consumed[1] = *p;
      st.consumed[2] = *o;
      out.push_back(st);
    }
    return out;
  }

 private:
  bool is_candidate(TermId node) const {
    for (auto pos : in_.with_subject(node)) {
      auto pred = in_.triples()[pos].predicate;
      if (pred == subject_ || pred == has_predicate_) return true;
    }
    return false;
  }

  std::optional<std::uint32_t> first_value(TermId node, std::optional<TermId> property,
                                           const char* label) {
    if (!property) return std::nullopt;
    std::optional<std::uint32_t> first;
    std::size_t count = 0;
    for (auto pos : in_.with_subject(node)) {
      if (in_.triples()[pos].predicate != *property) continue;
      if (!first) first = pos;
      ++count;
    }
    if (count > 1) {
      result_.warnings.push_back("statement " + ntriples_term(in_, node) + " has " +
                                 std::to_string(count) + " values for " + label +
                                 "; using the first");
    }
    return first;
  }

  const Graph& in_;
  KgrcConversion& result_;
  std::optional<TermId> subject_;
  std::optional<TermId> has_predicate_;
  std::vector<TermId> roles_;
};

// Copies a term of `in` into `out`, re-interning quoted triples.
TermId copy_term(const Graph& in, TermId id, Graph& out) {
  const Term& term = in.term(id);
  if (!term.is_qt()) return out.intern(term);
  const auto& q = in.quoted(term.qt_id());
  QtId copied = out.intern_qt(copy_term(in, q.subject, out), copy_term(in, q.predicate, out),
                              copy_term(in, q.object, out));
  return out.quoted(copied).self;
}

std::string statement_identifier(const Term& node) {
  if (node.is_iri()) return node.iri_text();
  if (node.is_blank()) return "_:" + node.blank_label();
  throw MalformedTerm("statement node must be an IRI or blank node");
}

}  // namespace

KgrcConversion kgrc_to_sgp(const Graph& ref_graph, const ObjectPriority& priority) {
  KgrcConversion result;
  auto statements = StatementScanner(ref_graph, priority, result).scan();
  Graph& out = result.graph;

  std::unordered_map<TermId, std::size_t> index_of;
  for (std::size_t i = 0; i < statements.size(); ++i) index_of.emplace(statements[i].node, i);

  SingletonCounter counter("-");
  std::vector<TermId> singleton(statements.size());
  for (std::size_t i = 0; i < statements.size(); ++i) {
    singleton[i] = out.intern(counter.next(ref_graph.term(statements[i].predicate)).term());
  }
  auto redirect = [&](TermId id) {
    if (auto it = index_of.find(id); it != index_of.end()) return singleton[it->second];
    return copy_term(ref_graph, id, out);
  };

  TermId sp_of = out.intern(Term::iri(std::string(vocab::kSingletonPropertyOf)));
  std::vector<char> emitted(statements.size(), 0);
  auto triples = ref_graph.triples();
  for (std::uint32_t pos = 0; pos < triples.size(); ++pos) {
    const auto& t = triples[pos];
    auto it = index_of.find(t.subject);
    if (it == index_of.end()) {
      out.add(IdTriple{redirect(t.subject), copy_term(ref_graph, t.predicate, out),
                       redirect(t.object)});
      continue;
    }
    const auto& st = statements[it->second];
    TermId sp = singleton[it->second];
    if (!emitted[it->second]) {
      emitted[it->second] = 1;
      out.add(IdTriple{redirect(st.subject), sp, redirect(st.object)});
      out.add(IdTriple{sp, sp_of, copy_term(ref_graph, st.predicate, out)});
    }
    if (st.consumes(pos)) continue;
    out.add(IdTriple{sp, copy_term(ref_graph, t.predicate, out), redirect(t.object)});
  }
  result.converted = statements.size();
  return result;
}

KgrcConversion kgrc_to_rdr(const Graph& ref_graph, const ObjectPriority& priority,
                           WrapPolicy wrap) {
  KgrcConversion result;
  auto statements = StatementScanner(ref_graph, priority, result).scan();
  Graph& out = result.graph;
  auto triples = ref_graph.triples();

  if (auto then = ref_graph.find(Term::iri(std::string(vocab::kKgcThen)))) {
    std::vector<std::string> dangling;
    for (auto pos : ref_graph.with_predicate(*then)) {
      TermId target = triples[pos].object;
      if (ref_graph.term(target).is_literal()) continue;
      if (ref_graph.with_subject(target).empty()) dangling.push_back(ntriples_term(ref_graph, target));
    }
    if (!dangling.empty()) {
      std::string list;
      for (const auto& d : dangling) list += (list.empty() ? "" : ", ") + d;
      throw UnresolvedReference("kgc:then targets without statements: " + list);
    }
  }

  std::unordered_map<TermId, std::size_t> index_of;
  for (std::size_t i = 0; i < statements.size(); ++i) index_of.emplace(statements[i].node, i);

  std::map<IdTriple, std::size_t> content_count;
  for (const auto& st : statements) ++content_count[IdTriple{st.subject, st.predicate, st.object}];

  TermId rdf_value = out.intern(Term::iri(std::string(vocab::kRdfValue)));
  enum class State : std::uint8_t { Pending, Visiting, Done };
  std::vector<State> state(statements.size(), State::Pending);
  std::vector<TermId> entity(statements.size());
  std::vector<TermId> inner(statements.size());

  std::function<TermId(TermId)> redirect;
  std::function<TermId(std::size_t)> triple_entity = [&](std::size_t i) -> TermId {
    if (state[i] == State::Done) return entity[i];
    const auto& st = statements[i];
    if (state[i] == State::Visiting) {
      throw UnresolvedReference("cyclic statement nesting at " + ntriples_term(ref_graph, st.node));
    }
    state[i] = State::Visiting;
    TermId s = redirect(st.subject);
    TermId p = copy_term(ref_graph, st.predicate, out);
    TermId o = redirect(st.object);
    inner[i] = out.quoted(out.intern_qt(s, p, o)).self;
    bool wrapped = wrap == WrapPolicy::Always ||
                   content_count[IdTriple{st.subject, st.predicate, st.object}] > 1;
    if (wrapped) {
      TermId id = out.intern(Term::literal(statement_identifier(ref_graph.term(st.node))));
      entity[i] = out.quoted(out.intern_qt(inner[i], rdf_value, id)).self;
    } else {
      entity[i] = inner[i];
    }
    state[i] = State::Done;
    return entity[i];
  };
  redirect = [&](TermId id) -> TermId {
    if (auto it = index_of.find(id); it != index_of.end()) return triple_entity(it->second);
    return copy_term(ref_graph, id, out);
  };

  std::vector<char> has_metadata(statements.size(), 0);
  for (std::uint32_t pos = 0; pos < triples.size(); ++pos) {
    const auto& t = triples[pos];
    auto it = index_of.find(t.subject);
    if (it == index_of.end()) {
      out.add(IdTriple{redirect(t.subject), copy_term(ref_graph, t.predicate, out),
                       redirect(t.object)});
      continue;
    }
    const auto& st = statements[it->second];
    TermId te = triple_entity(it->second);
    if (st.consumes(pos)) continue;
    has_metadata[it->second] = 1;
    out.add(IdTriple{te, copy_term(ref_graph, t.predicate, out), redirect(t.object)});
  }
  // A statement with nothing but its core still needs to be present.
  for (std::size_t i = 0; i < statements.size(); ++i) {
    if (has_metadata[i]) continue;
    const auto& q = out.quoted(out.term(inner[i]).qt_id());
    out.add(IdTriple{q.subject, q.predicate, q.object});
  }
  result.converted = statements.size();
  return result;
}

}  // namespace mrm
