#include "mrm/walks.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "mrm/error.hpp"

namespace mrm {

std::optional<WalkMode> parse_walk_mode(std::string_view name) {
  // Accept both the bare names and the STAR_ prefixed forms.
  if (name.starts_with("STAR_")) name.remove_prefix(5);
  if (name == "MID_WALKS") return WalkMode::MidWalks;
  if (name == "MID_WALKS_DUPLICATE_FREE") return WalkMode::MidWalksDuplicateFree;
  if (name == "RANDOM_WALKS") return WalkMode::RandomWalks;
  if (name == "RANDOM_WALKS_DUPLICATE_FREE") return WalkMode::RandomWalksDuplicateFree;
  return std::nullopt;
}

std::string_view to_string(WalkMode mode) {
  switch (mode) {
    case WalkMode::MidWalks: return "STAR_MID_WALKS";
    case WalkMode::MidWalksDuplicateFree: return "STAR_MID_WALKS_DUPLICATE_FREE";
    case WalkMode::RandomWalks: return "STAR_RANDOM_WALKS";
    case WalkMode::RandomWalksDuplicateFree: return "STAR_RANDOM_WALKS_DUPLICATE_FREE";
  }
  return "?";
}

std::string_view to_string(QtMove move) {
  switch (move) {
    case QtMove::None: return "none";
    case QtMove::QtToSubject: return "qt2subject";
    case QtMove::ObjectToQt: return "object2qt";
    case QtMove::QtToObject: return "qt2object";
    case QtMove::SubjectToQt: return "subject2qt";
  }
  return "?";
}

void WalkConfig::validate() const {
  if (walks_per_root < 1) throw ConfigError("walks per root must be at least 1");
  if (depth < 1) throw ConfigError("walk depth must be at least 1");
  if (threads < 1) throw ConfigError("thread count must be at least 1");
  for (double p : {probabilities.qt_to_subject, probabilities.object_to_qt,
                   probabilities.qt_to_object, probabilities.subject_to_qt}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("transition probabilities must lie in [0, 1]");
  }
}

WalkIndex::WalkIndex(const Graph& graph)
    : graph_(&graph), with_subject_(graph.term_count()), with_object_(graph.term_count()) {
  for (QtId q = 0; q < graph.qt_count(); ++q) {
    const auto& qt = graph.quoted(q);
    with_subject_[qt.subject].push_back(qt.self);
    with_object_[qt.object].push_back(qt.self);
  }
}

bool WalkIndex::has_qt_neighbourhood(TermId id) const {
  return as_qt(id) != nullptr || !with_subject_[id].empty() || !with_object_[id].empty();
}

namespace {

TermId pick(const std::vector<TermId>& items, Rng& rng) {
  return items.size() == 1 ? items.front() : items[rng.index(items.size())];
}

}  // namespace

QtMove qt_walk_step(std::vector<Walk>& wl, std::size_t position, TermId e, const WalkIndex& index,
                    const TransitionProbabilities& probabilities, PlainExpansion expansion, Rng& rng) {
  const Walk walk = wl[position];
  const QuotedTriple* self = index.as_qt(e);
  const auto& object_qts = index.qts_with_object(e);
  const auto& subject_qts = index.qts_with_subject(e);

  std::vector<QtMove> moves;
  if (index.has_qt_neighbourhood(e)) {
    double rand_oq = rng.uniform();
    double rand_qs = rng.uniform();
    double rand_qo = rng.uniform();
    double rand_sq = rng.uniform();
    if (self && rand_qs < probabilities.qt_to_subject) moves.push_back(QtMove::QtToSubject);
    if (!object_qts.empty() && rand_oq < probabilities.object_to_qt) {
      moves.push_back(QtMove::ObjectToQt);
    }
    if (self && rand_qo < probabilities.qt_to_object) moves.push_back(QtMove::QtToObject);
    if (!subject_qts.empty() && rand_sq < probabilities.subject_to_qt) {
      moves.push_back(QtMove::SubjectToQt);
    }
  }

  Walk next = walk;
  if (next.empty()) next.push_back(e);

  if (moves.empty()) {
    const auto& graph = index.graph();
    auto outgoing = graph.with_subject(e);
    if (outgoing.empty()) return QtMove::None;
    auto extend = [&](std::uint32_t pos) {
      const auto& t = graph.triples()[pos];
      Walk extended = next;
      extended.push_back(t.predicate);
      extended.push_back(t.object);
      return extended;
    };
    wl.erase(wl.begin() + static_cast<std::ptrdiff_t>(position));
    if (expansion == PlainExpansion::SampleOne) {
      wl.push_back(extend(outgoing[rng.index(outgoing.size())]));
    } else {
      for (auto pos : outgoing) wl.push_back(extend(pos));
    }
    return QtMove::None;
  }

  QtMove move = moves.size() == 1 ? moves.front() : moves[rng.index(moves.size())];
  switch (move) {
    case QtMove::QtToSubject:
      next.push_back(self->subject);
      next.push_back(self->predicate);
      next.push_back(self->object);
      break;
    case QtMove::ObjectToQt:
      next.push_back(pick(object_qts, rng));
      break;
    case QtMove::QtToObject:
      next.push_back(self->object);
      break;
    case QtMove::SubjectToQt:
      next.push_back(pick(subject_qts, rng));
      break;
    case QtMove::None:
      break;
  }
  wl.erase(wl.begin() + static_cast<std::ptrdiff_t>(position));
  wl.push_back(std::move(next));
  return move;
}

namespace {

bool is_literal(const Graph& graph, TermId id) { return graph.term(id).is_literal(); }

// Single forward walk from the root; stops at dead ends and literals.
Walk random_walk(const WalkIndex& index, TermId root, const WalkConfig& config, Rng& rng) {
  std::vector<Walk> wl(1);
  TermId e = root;
  for (std::size_t hop = 0; hop < config.depth; ++hop) {
    if (is_literal(index.graph(), e)) break;
    std::size_t before = wl.front().size();
    qt_walk_step(wl, 0, e, index, config.probabilities, PlainExpansion::SampleOne, rng);
    if (wl.front().size() == before) break;
    e = wl.front().back();
  }
  if (wl.front().empty()) wl.front().push_back(root);
  return std::move(wl.front());
}

std::vector<Walk> duplicate_free_random_walks(const WalkIndex& index, TermId root,
                                              const WalkConfig& config, Rng& rng) {
  std::vector<Walk> current(1);
  for (std::size_t hop = 0; hop < config.depth; ++hop) {
    std::vector<Walk> next;
    bool grew = false;
    for (auto& walk : current) {
      TermId e = walk.empty() ? root : walk.back();
      if (is_literal(index.graph(), e)) {
        next.push_back(std::move(walk));
        continue;
      }
      std::vector<Walk> wl{walk};
      std::size_t before = walk.size();
      qt_walk_step(wl, 0, e, index, config.probabilities, PlainExpansion::All, rng);
      for (auto& w : wl) {
        if (w.size() != before) grew = true;
        next.push_back(std::move(w));
      }
    }
    while (next.size() > config.walks_per_root) {
      next.erase(next.begin() + static_cast<std::ptrdiff_t>(rng.index(next.size())));
    }
    current = std::move(next);
    if (!grew) break;
  }
  std::vector<Walk> out;
  std::set<Walk> seen;
  for (auto& walk : current) {
    if (walk.empty()) walk.push_back(root);
    if (seen.insert(walk).second) out.push_back(std::move(walk));
  }
  return out;
}

// Grows forward through QT-aware steps or backward along incoming triples,
// so the root can end up anywhere in the sequence.
Walk mid_walk(const WalkIndex& index, TermId root, const WalkConfig& config, Rng& rng) {
  const auto& graph = index.graph();
  std::vector<Walk> wl{{root}};
  for (std::size_t hop = 0; hop < config.depth; ++hop) {
    Walk& walk = wl.front();
    TermId tail = walk.back();
    TermId head = walk.front();
    bool can_forward = !is_literal(graph, tail) &&
                       (!graph.with_subject(tail).empty() || index.has_qt_neighbourhood(tail));
    auto incoming = graph.with_object(head);
    bool can_backward = !incoming.empty();
    if (!can_forward && !can_backward) break;

    bool forward = can_forward && (!can_backward || rng.coin());
    if (forward) {
      std::size_t before = walk.size();
      qt_walk_step(wl, 0, tail, index, config.probabilities, PlainExpansion::SampleOne, rng);
      if (wl.front().size() != before) continue;
      if (!can_backward) break;
    }
    const auto& t = graph.triples()[incoming[rng.index(incoming.size())]];
    Walk& w = wl.front();
    w.insert(w.begin(), {t.subject, t.predicate});
  }
  return std::move(wl.front());
}

}  // namespace

std::vector<Walk> walks_from_root(const WalkIndex& index, TermId root, const WalkConfig& config,
                                  Rng& rng) {
  std::vector<Walk> walks;
  switch (config.mode) {
    case WalkMode::RandomWalks:
      for (std::size_t i = 0; i < config.walks_per_root; ++i) {
        walks.push_back(random_walk(index, root, config, rng));
      }
      break;
    case WalkMode::RandomWalksDuplicateFree:
      walks = duplicate_free_random_walks(index, root, config, rng);
      break;
    case WalkMode::MidWalks:
      for (std::size_t i = 0; i < config.walks_per_root; ++i) {
        walks.push_back(mid_walk(index, root, config, rng));
      }
      break;
    case WalkMode::MidWalksDuplicateFree: {
      std::set<Walk> seen;
      std::size_t attempts = 20 * config.walks_per_root;
      for (std::size_t a = 0; a < attempts && walks.size() < config.walks_per_root; ++a) {
        Walk walk = mid_walk(index, root, config, rng);
        if (seen.insert(walk).second) walks.push_back(std::move(walk));
      }
      break;
    }
  }
  return walks;
}

WalkCorpus generate_walks(const Graph& graph, const WalkConfig& config) {
  config.validate();
  WalkIndex index(graph);
  auto roots = graph.entities();
  std::vector<std::vector<Walk>> per_root(roots.size());

  auto run = [&](std::size_t i) {
    Rng rng(derive_seed(config.seed, i));
    per_root[i] = walks_from_root(index, roots[i], config, rng);
  };
  if (config.threads <= 1) {
    for (std::size_t i = 0; i < roots.size(); ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < config.threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < roots.size(); i = next++) run(i);
      });
    }
    for (auto& w : workers) w.join();
  }

  WalkCorpus corpus;
  std::vector<std::optional<WalkCorpus::TokenId>> token_of(graph.term_count());
  for (const auto& walks : per_root) {
    for (const auto& walk : walks) {
      std::vector<WalkCorpus::TokenId> sequence;
      sequence.reserve(walk.size());
      for (TermId id : walk) {
        if (!token_of[id]) token_of[id] = corpus.intern(corpus_token(graph, id));
        sequence.push_back(*token_of[id]);
      }
      corpus.add_sequence(std::move(sequence));
    }
  }
  return corpus;
}

}  // namespace mrm
