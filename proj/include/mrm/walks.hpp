#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mrm/corpus_io.hpp"
#include "mrm/graph.hpp"
#include "mrm/rng.hpp"

namespace mrm {

enum class WalkMode { MidWalks, MidWalksDuplicateFree, RandomWalks, RandomWalksDuplicateFree };

std::optional<WalkMode> parse_walk_mode(std::string_view name);
std::string_view to_string(WalkMode mode);

// Transition probabilities of the four QT moves.
struct TransitionProbabilities {
  double qt_to_subject = 0.0;  // alpha: QT -> its subject, predicate, object
  double object_to_qt = 0.0;   // beta: object of a QT -> the QT
  double qt_to_object = 0.0;   // gamma: QT -> its object
  double subject_to_qt = 0.0;  // delta: subject of a QT -> the QT
};

struct WalkConfig {
  std::size_t walks_per_root = 10;
  std::size_t depth = 4;  // hops beyond the root
  WalkMode mode = WalkMode::RandomWalks;
  TransitionProbabilities probabilities;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  void validate() const;  // throws ConfigError
};

using Walk = std::vector<TermId>;

// Per-term quoted-triple neighbourhood, built once per graph.
class WalkIndex {
 public:
  explicit WalkIndex(const Graph& graph);

  const Graph& graph() const { return *graph_; }
  // QT terms whose subject / object is `id`.
  const std::vector<TermId>& qts_with_subject(TermId id) const { return with_subject_[id]; }
  const std::vector<TermId>& qts_with_object(TermId id) const { return with_object_[id]; }
  const QuotedTriple* as_qt(TermId id) const { return graph_->quoted_by_term(id); }
  bool has_qt_neighbourhood(TermId id) const;

 private:
  const Graph* graph_;
  std::vector<std::vector<TermId>> with_subject_;
  std::vector<std::vector<TermId>> with_object_;
};

enum class QtMove { None, QtToSubject, ObjectToQt, QtToObject, SubjectToQt };
std::string_view to_string(QtMove move);

// How the plain branch extends a walk: one extension per outgoing triple, or
// a single uniformly chosen one.
enum class PlainExpansion { All, SampleOne };

// One QT-walk step on wl[position] at entity `e` (the walk's tail, or the
// root when the walk is empty). Four uniforms are drawn (oq, qs, qo, sq
// order) only when `e` has a QT neighbourhood. A chosen QT move replaces the
// walk by its extension. Without a move, the walk is replaced by one
// extension per selected outgoing triple, and left unchanged at a dead end.
// Returns the move taken.
QtMove qt_walk_step(std::vector<Walk>& wl, std::size_t position, TermId e, const WalkIndex& index,
                    const TransitionProbabilities& probabilities, PlainExpansion expansion, Rng& rng);

// All walks for one root, in generation order.
std::vector<Walk> walks_from_root(const WalkIndex& index, TermId root, const WalkConfig& config,
                                  Rng& rng);

// Roots are graph.entities() in id order; root i uses derive_seed(seed, i).
// Sequences are ordered by (root, walk) for any thread count.
WalkCorpus generate_walks(const Graph& graph, const WalkConfig& config);

}  // namespace mrm
