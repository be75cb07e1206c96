#include "mrm/convert.hpp"

#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "mrm/error.hpp"
#include "mrm/rng.hpp"
#include "mrm/vocab.hpp"

namespace mrm {

std::optional<Mrm> parse_mrm(std::string_view name) {
  if (name == "ref" || name == "REF") return Mrm::Ref;
  if (name == "sgp" || name == "SGP") return Mrm::Sgp;
  if (name == "rdr" || name == "RDR") return Mrm::Rdr;
  return std::nullopt;
}

std::string_view to_string(Mrm mrm) {
  switch (mrm) {
    case Mrm::Ref: return "REF";
    case Mrm::Sgp: return "SGP";
    case Mrm::Rdr: return "RDR";
  }
  return "?";
}

namespace {

Term iri(std::string_view text) { return Term::iri(std::string(text)); }

std::string debug_string(const Term& term) {
  std::ostringstream os;
  os << term;
  return os.str();
}

}  // namespace

RefStatementId RefStatementId::for_fact(const HyperFact& fact, std::size_t occurrence) {
  Fnv1a hash;
  hash.add(debug_string(fact.subject)).add_separator();
  hash.add(debug_string(fact.predicate)).add_separator();
  hash.add(debug_string(fact.object)).add_separator();
  for (const auto& q : fact.qualifiers) {
    hash.add(debug_string(q.relation)).add_separator();
    hash.add(debug_string(q.value)).add_separator();
  }
  hash.add(std::to_string(occurrence));
  char buf[24];
  std::snprintf(buf, sizeof buf, "st%016llx", static_cast<unsigned long long>(hash.value()));
  return RefStatementId{buf};
}

SingletonPropertyId SingletonCounter::next(const Term& predicate) {
  if (!predicate.is_iri()) throw MalformedTerm("singleton property base must be an IRI");
  auto& k = counters_[predicate.iri_text()];
  ++k;
  return SingletonPropertyId{predicate.iri_text(), k, separator_};
}

std::vector<Triple> to_ref(const HyperFact& fact, const RefStatementId& id, bool emit_type) {
  Term st = id.term();
  std::vector<Triple> out;
  out.reserve(4 + fact.qualifiers.size());
  if (emit_type) out.push_back({st, iri(vocab::kRdfType), iri(vocab::kRdfStatement)});
  out.push_back({st, iri(vocab::kRdfSubject), fact.subject});
  out.push_back({st, iri(vocab::kRdfPredicate), fact.predicate});
  out.push_back({st, iri(vocab::kRdfObject), fact.object});
  for (const auto& q : fact.qualifiers) out.push_back({st, q.relation, q.value});
  return out;
}

std::vector<Triple> to_sgp(const HyperFact& fact, const SingletonPropertyId& sp) {
  Term p_k = sp.term();
  std::vector<Triple> out;
  out.reserve(2 + fact.qualifiers.size());
  out.push_back({fact.subject, p_k, fact.object});
  out.push_back({p_k, iri(vocab::kSingletonPropertyOf), fact.predicate});
  for (const auto& q : fact.qualifiers) out.push_back({p_k, q.relation, q.value});
  return out;
}

std::vector<Triple> to_rdr(const HyperFact& fact, Graph& graph) {
  if (fact.qualifiers.empty()) return {{fact.subject, fact.predicate, fact.object}};
  Term qt = Term::qt(graph.intern_qt(fact.subject, fact.predicate, fact.object));
  std::vector<Triple> out;
  out.reserve(fact.qualifiers.size());
  for (const auto& q : fact.qualifiers) out.push_back({qt, q.relation, q.value});
  return out;
}

Graph convert_facts(std::span<const HyperFact> facts, Mrm mrm, const ConvertOptions& options) {
  Graph graph;
  switch (mrm) {
    case Mrm::Ref: {
      std::map<HyperFact, std::size_t> seen;
      for (const auto& fact : facts) {
        auto occurrence = seen[fact]++;
        for (const auto& t : to_ref(fact, RefStatementId::for_fact(fact, occurrence),
                                    options.emit_type)) {
          graph.add(t);
        }
      }
      break;
    }
    case Mrm::Sgp: {
      SingletonCounter counter(options.sp_separator);
      for (const auto& fact : facts) {
        for (const auto& t : to_sgp(fact, counter.next(fact.predicate))) graph.add(t);
      }
      break;
    }
    case Mrm::Rdr:
      for (const auto& fact : facts) {
        for (const auto& t : to_rdr(fact, graph)) graph.add(t);
      }
      break;
  }
  return graph;
}

// --- extraction -------------------------------------------------------------

namespace {

std::string node_name(const Graph& graph, TermId id) { return ntriples_term(graph, id); }

std::vector<HyperFact> extract_ref(const Graph& graph) {
  auto rdf_subject = graph.find(iri(vocab::kRdfSubject));
  auto rdf_predicate = graph.find(iri(vocab::kRdfPredicate));
  auto rdf_object = graph.find(iri(vocab::kRdfObject));
  auto rdf_type = graph.find(iri(vocab::kRdfType));
  auto rdf_statement = graph.find(iri(vocab::kRdfStatement));
  auto triples = graph.triples();

  std::vector<char> is_statement(graph.term_count(), 0);
  for (auto marker : {rdf_subject, rdf_predicate, rdf_object}) {
    if (!marker) continue;
    for (auto pos : graph.with_predicate(*marker)) is_statement[triples[pos].subject] = 1;
  }

  std::vector<HyperFact> facts;
  std::vector<char> done(graph.term_count(), 0);
  for (const auto& t : triples) {
    if (!is_statement[t.subject]) {
      throw ExtractionError("triple outside any reified statement, subject " +
                            node_name(graph, t.subject));
    }
    if (done[t.subject]) continue;
    done[t.subject] = 1;
    std::optional<TermId> s, p, o;
    HyperFact fact;
    for (auto pos : graph.with_subject(t.subject)) {
      const auto& u = triples[pos];
      auto take = [&](std::optional<TermId>& slot, const char* role) {
        if (slot) {
          throw ExtractionError("statement " + node_name(graph, t.subject) + " has several " +
                                role);
        }
        slot = u.object;
      };
      if (u.predicate == rdf_subject) {
        take(s, "rdf:subject");
      } else if (u.predicate == rdf_predicate) {
        take(p, "rdf:predicate");
      } else if (u.predicate == rdf_object) {
        take(o, "rdf:object");
      } else if (u.predicate == rdf_type && u.object == rdf_statement) {
        continue;
      } else {
        fact.qualifiers.push_back({graph.term(u.predicate), graph.term(u.object)});
      }
    }
    if (!s || !p || !o) {
      throw ExtractionError("statement " + node_name(graph, t.subject) +
                            " lacks rdf:subject, rdf:predicate or rdf:object");
    }
    fact.subject = graph.term(*s);
    fact.predicate = graph.term(*p);
    fact.object = graph.term(*o);
    facts.push_back(std::move(fact));
  }
  return facts;
}

std::vector<HyperFact> extract_sgp(const Graph& graph) {
  auto triples = graph.triples();
  auto sp_of = graph.find(iri(vocab::kSingletonPropertyOf));
  std::vector<char> is_sp(graph.term_count(), 0);
  std::vector<std::optional<TermId>> base(graph.term_count());
  if (sp_of) {
    for (auto pos : graph.with_predicate(*sp_of)) {
      const auto& t = triples[pos];
      if (base[t.subject]) {
        throw ExtractionError("singleton property " + node_name(graph, t.subject) +
                              " has several base predicates");
      }
      is_sp[t.subject] = 1;
      base[t.subject] = t.object;
    }
  }
  std::vector<HyperFact> facts;
  for (const auto& t : triples) {
    if (is_sp[t.predicate]) {
      if (graph.with_predicate(t.predicate).size() != 1) {
        throw ExtractionError("singleton property " + node_name(graph, t.predicate) +
                              " is used by several triples");
      }
      HyperFact fact{graph.term(t.subject), graph.term(*base[t.predicate]),
                     graph.term(t.object), {}};
      for (auto pos : graph.with_subject(t.predicate)) {
        const auto& u = triples[pos];
        if (u.predicate == sp_of) continue;
        fact.qualifiers.push_back({graph.term(u.predicate), graph.term(u.object)});
      }
      facts.push_back(std::move(fact));
    } else if (is_sp[t.subject]) {
      if (graph.with_predicate(t.subject).empty()) {
        throw ExtractionError("singleton property " + node_name(graph, t.subject) +
                              " never used as a predicate");
      }
    } else {
      throw ExtractionError("triple outside any singleton-property statement, subject " +
                            node_name(graph, t.subject));
    }
  }
  return facts;
}

std::vector<HyperFact> extract_rdr(const Graph& graph) {
  std::vector<HyperFact> facts;
  std::unordered_map<QtId, std::size_t> fact_of_qt;
  for (const auto& t : graph.triples()) {
    if (graph.term(t.object).is_qt()) {
      throw ExtractionError("quoted triple in object position: " + node_name(graph, t.object));
    }
    const auto* qt = graph.quoted_by_term(t.subject);
    if (qt == nullptr) {
      facts.push_back({graph.term(t.subject), graph.term(t.predicate), graph.term(t.object), {}});
      continue;
    }
    if (graph.term(qt->subject).is_qt() || graph.term(qt->object).is_qt()) {
      throw ExtractionError("nested quoted triple: " + node_name(graph, t.subject));
    }
    auto [it, inserted] = fact_of_qt.emplace(qt->id, facts.size());
    if (inserted) {
      facts.push_back({graph.term(qt->subject), graph.term(qt->predicate), graph.term(qt->object),
                       {}});
    }
    facts[it->second].qualifiers.push_back({graph.term(t.predicate), graph.term(t.object)});
  }
  return facts;
}

}  // namespace

std::vector<HyperFact> extract_hyperfacts(const Graph& graph, Mrm mrm) {
  switch (mrm) {
    case Mrm::Ref: return extract_ref(graph);
    case Mrm::Sgp: return extract_sgp(graph);
    case Mrm::Rdr: return extract_rdr(graph);
  }
  return {};
}

}  // namespace mrm
