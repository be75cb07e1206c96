#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mrm/convert.hpp"
#include "mrm/graph.hpp"

namespace mrm {

// Relations excluded from the link-prediction task for one model, and the
// triple entities (statement nodes, singleton properties, quoted triples).
//   REF: rdf:subject, rdf:predicate, rdf:object
//   SGP: singletonPropertyOf plus every singleton property p#i
//   RDR: every predicate inside a quoted triple that is the subject of an
//        asserted triple
struct EvalFilter {
  Mrm mrm = Mrm::Ref;
  std::unordered_set<TermId> excluded;
  std::unordered_set<TermId> triple_entities;
  // Positions into graph.triples() of the eligible triples, in graph order.
  std::vector<std::uint32_t> eligible;

  bool is_excluded(TermId relation) const { return excluded.contains(relation); }
};

EvalFilter build_filter(const Graph& graph, Mrm mrm);

// (p, o) prediction targets of the eligible triples, as terms.
std::vector<std::pair<Term, Term>> eligible_targets(const Graph& graph, const EvalFilter& filter);

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

struct Split {
  std::vector<IdTriple> train;
  std::vector<IdTriple> valid;
  std::vector<IdTriple> test;
  std::uint64_t seed = 0;
  SplitRatios ratios;
};

// Seeded split of the eligible triples. For every triple entity that is the
// subject of at least two eligible triples, one goes to train and one to
// test (a third, when present, to valid); singleton groups go to train; the
// rest is cut by ratio. Throws EmptyTask when nothing is eligible.
Split split_dataset(const Graph& graph, const EvalFilter& filter, SplitRatios ratios,
                    std::uint64_t seed);

enum class QtCategory : std::uint8_t { QtToQt, QtToAt, AtToQt, AtToAt };
std::string_view to_string(QtCategory category);

struct QtProfile {
  std::array<std::size_t, 4> counts{};
  std::size_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  std::size_t count(QtCategory c) const { return counts[static_cast<std::size_t>(c)]; }
  // Percentage of all profiled triples; 0 for an empty profile.
  double percent(QtCategory c) const;
};

// Classifies asserted triples by whether subject/object are quoted triples.
// Throws WrongMrm for graphs carrying REF or SGP markers.
QtProfile qt_triple_profile(const Graph& graph);
QtProfile qt_triple_profile(const Graph& graph, std::span<const IdTriple> triples);

}  // namespace mrm
