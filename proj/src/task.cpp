#include "mrm/task.hpp"

#include <cmath>
#include <map>

#include "mrm/error.hpp"
#include "mrm/rng.hpp"
#include "mrm/vocab.hpp"

namespace mrm {

namespace {

std::optional<TermId> find_iri(const Graph& graph, std::string_view iri) {
  return graph.find(Term::iri(std::string(iri)));
}

}  // namespace

EvalFilter build_filter(const Graph& graph, Mrm mrm) {
  EvalFilter filter;
  filter.mrm = mrm;
  auto triples = graph.triples();
  switch (mrm) {
    case Mrm::Ref:
      for (auto marker : {vocab::kRdfSubject, vocab::kRdfPredicate, vocab::kRdfObject}) {
        auto id = find_iri(graph, marker);
        if (!id) continue;
        filter.excluded.insert(*id);
        for (auto pos : graph.with_predicate(*id)) {
          filter.triple_entities.insert(triples[pos].subject);
        }
      }
      break;
    case Mrm::Sgp:
      if (auto sp_of = find_iri(graph, vocab::kSingletonPropertyOf)) {
        filter.excluded.insert(*sp_of);
        for (auto pos : graph.with_predicate(*sp_of)) {
          TermId sp = triples[pos].subject;
          if (!graph.with_predicate(sp).empty()) filter.excluded.insert(sp);
          filter.triple_entities.insert(sp);
        }
      }
      break;
    case Mrm::Rdr:
      for (const auto& t : triples) {
        if (const auto* qt = graph.quoted_by_term(t.subject)) {
          filter.excluded.insert(qt->predicate);
          filter.triple_entities.insert(t.subject);
        }
      }
      break;
  }
  for (std::uint32_t pos = 0; pos < triples.size(); ++pos) {
    const auto& t = triples[pos];
    if (filter.excluded.contains(t.predicate)) continue;
    if (graph.term(t.object).is_literal()) continue;
    filter.eligible.push_back(pos);
  }
  return filter;
}

std::vector<std::pair<Term, Term>> eligible_targets(const Graph& graph, const EvalFilter& filter) {
  std::vector<std::pair<Term, Term>> out;
  out.reserve(filter.eligible.size());
  for (auto pos : filter.eligible) {
    const auto& t = graph.triples()[pos];
    out.emplace_back(graph.term(t.predicate), graph.term(t.object));
  }
  return out;
}

Split split_dataset(const Graph& graph, const EvalFilter& filter, SplitRatios ratios,
                    std::uint64_t seed) {
  for (double r : {ratios.train, ratios.valid, ratios.test}) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("split ratios must lie in [0, 1]");
  }
  if (std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
  if (filter.eligible.empty()) throw EmptyTask("no eligible triples for the link-prediction task");

  auto triples = graph.triples();
  Split split;
  split.seed = seed;
  split.ratios = ratios;
  Rng rng(seed);

  // Groups keyed by triple-entity subject, in order of first appearance.
  std::vector<std::vector<IdTriple>> groups;
  std::map<TermId, std::size_t> group_of;
  std::vector<IdTriple> free;
  for (auto pos : filter.eligible) {
    const auto& t = triples[pos];
    if (!filter.triple_entities.contains(t.subject)) {
      free.push_back(t);
      continue;
    }
    auto [it, inserted] = group_of.emplace(t.subject, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(t);
  }

  for (auto& group : groups) {
    if (group.size() == 1) {
      split.train.push_back(group.front());
      continue;
    }
    rng.shuffle(group);
    split.train.push_back(group[0]);
    split.test.push_back(group[1]);
    std::size_t next = 2;
    if (group.size() >= 3) split.valid.push_back(group[next++]);
    free.insert(free.end(), group.begin() + static_cast<std::ptrdiff_t>(next), group.end());
  }

  rng.shuffle(free);
  auto n = static_cast<double>(free.size());
  auto train_end = static_cast<std::size_t>(std::floor(n * ratios.train + 1e-9));
  auto valid_end = static_cast<std::size_t>(std::floor(n * (ratios.train + ratios.valid) + 1e-9));
  valid_end = std::min(valid_end, free.size());
  for (std::size_t i = 0; i < free.size(); ++i) {
    auto& target = i < train_end ? split.train : i < valid_end ? split.valid : split.test;
    target.push_back(free[i]);
  }
  return split;
}

std::string_view to_string(QtCategory category) {
  switch (category) {
    case QtCategory::QtToQt: return "QT->QT";
    case QtCategory::QtToAt: return "QT->AT";
    case QtCategory::AtToQt: return "AT->QT";
    case QtCategory::AtToAt: return "AT->AT";
  }
  return "?";
}

double QtProfile::percent(QtCategory c) const {
  auto n = total();
  return n == 0 ? 0.0 : 100.0 * static_cast<double>(count(c)) / static_cast<double>(n);
}

QtProfile qt_triple_profile(const Graph& graph, std::span<const IdTriple> triples) {
  for (auto marker : {vocab::kRdfSubject, vocab::kRdfPredicate, vocab::kRdfObject,
                      vocab::kSingletonPropertyOf}) {
    if (auto id = find_iri(graph, marker); id && !graph.with_predicate(*id).empty()) {
      throw WrongMrm("graph uses <" + std::string(marker) + ">; QT profiles need an RDF-star graph");
    }
  }
  QtProfile profile;
  for (const auto& t : triples) {
    bool s_qt = graph.term(t.subject).is_qt();
    bool o_qt = graph.term(t.object).is_qt();
    auto category = s_qt ? (o_qt ? QtCategory::QtToQt : QtCategory::QtToAt)
                         : (o_qt ? QtCategory::AtToQt : QtCategory::AtToAt);
    ++profile.counts[static_cast<std::size_t>(category)];
  }
  return profile;
}

QtProfile qt_triple_profile(const Graph& graph) { return qt_triple_profile(graph, graph.triples()); }

}  // namespace mrm
