#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "mrm/convert.hpp"
#include "mrm/error.hpp"
#include "mrm/synthetic.hpp"
#include "mrm/walks.hpp"

using namespace mrm;

namespace {

using Rows = std::vector<std::vector<std::string>>;

Rows root_walks(const Graph& g, const Term& root, WalkConfig config) {
  WalkIndex index(g);
  Rng rng(config.seed);
  Rows rows;
  for (const auto& walk : walks_from_root(index, *g.find(root), config, rng)) {
    std::vector<std::string> row;
    for (auto id : walk) row.push_back(corpus_token(g, id));
    rows.push_back(row);
  }
  return rows;
}

std::string w(const std::string& local) { return fixtures::wd(local); }

// Independent plain random walk: adjacency in triple order, one uniform
// index per hop.
std::vector<TermId> oracle_walk(const Graph& g, TermId root, std::size_t depth, Rng& rng) {
  std::map<TermId, std::vector<IdTriple>> out;
  for (const auto& t : g.triples()) out[t.subject].push_back(t);
  std::vector<TermId> walk{root};
  TermId e = root;
  for (std::size_t hop = 0; hop < depth; ++hop) {
    auto it = out.find(e);
    if (it == out.end()) break;
    const auto& t = it->second[rng.index(it->second.size())];
    walk.push_back(t.predicate);
    walk.push_back(t.object);
    e = t.object;
    if (g.term(e).is_literal()) break;
  }
  return walk;
}

Graph plain_graph(std::uint64_t seed) {
  RandomFactOptions options;
  options.facts = 120;
  options.entities = 25;
  options.max_qualifiers = 0;
  return convert_facts(random_hyperfacts(options, seed), Mrm::Rdr);
}

}  // namespace

TEST(QtStep, ChainWithoutQtsIsPlain) {
  Graph g = parse_turtle_star("<urn:a> <urn:r> <urn:b> .");
  WalkConfig config;
  config.walks_per_root = 3;
  config.depth = 4;
  auto rows = root_walks(g, Term::iri("urn:a"), config);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) EXPECT_EQ(row, (std::vector<std::string>{"urn:a", "urn:r", "urn:b"}));
  EXPECT_EQ(root_walks(g, Term::iri("urn:b"), config)[0], std::vector<std::string>{"urn:b"});
}

TEST(QtStep, PlainWalksMatchOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Graph g = plain_graph(seed);
    WalkConfig config;
    config.walks_per_root = 4;
    config.depth = 5;
    config.seed = seed;
    WalkIndex index(g);
    for (TermId root : g.entities()) {
      Rng a(seed * 1000 + root), b(seed * 1000 + root);
      auto walks = walks_from_root(index, root, config, a);
      for (const auto& walk : walks) EXPECT_EQ(walk, oracle_walk(g, root, config.depth, b));
    }
  }
}

TEST(QtStep, ObjectToQtOnListingGraph) {
  Graph g = parse_turtle_star(fixtures::kRdrListing);
  WalkConfig config;
  config.walks_per_root = 1;
  config.depth = 3;
  config.probabilities.object_to_qt = 1.0;
  auto q = fixtures::qt_token(w("Q1968853"), w("P166"), w("Q3703462"));
  EXPECT_EQ(root_walks(g, fixtures::wd_term("Q3703462"), config)[0],
            (std::vector<std::string>{w("Q3703462"), q, w("P1346"), w("Q55245")}));
}

TEST(QtStep, QtToSubjectOnEmptyWalkPrefixesRoot) {
  Graph g = parse_turtle_star(fixtures::kRdrListing);
  WalkIndex index(g);
  TermId q = g.quoted(0).self;
  std::vector<Walk> wl(1);
  Rng rng(1);
  TransitionProbabilities p;
  p.qt_to_subject = 1.0;
  EXPECT_EQ(qt_walk_step(wl, 0, q, index, p, PlainExpansion::All, rng), QtMove::QtToSubject);
  ASSERT_EQ(wl.size(), 1u);
  EXPECT_EQ(wl[0], (Walk{q, g.quoted(0).subject, g.quoted(0).predicate, g.quoted(0).object}));
}

TEST(QtStep, PlainBranchExpandsEveryOutgoingTriple) {
  Graph g = parse_turtle_star("<urn:a> <urn:r> <urn:b> . <urn:a> <urn:s> <urn:c> .");
  WalkIndex index(g);
  auto a = *g.find(Term::iri("urn:a"));
  std::vector<Walk> wl{{}, {a}};
  Rng rng(0);
  EXPECT_EQ(qt_walk_step(wl, 0, a, index, {}, PlainExpansion::All, rng), QtMove::None);
  ASSERT_EQ(wl.size(), 3u);
  EXPECT_EQ(wl[1].size(), 3u);
  EXPECT_EQ(wl[2].size(), 3u);
  EXPECT_NE(wl[1], wl[2]);
}

TEST(QtStep, DeadEndLeavesWalkUnchanged) {
  Graph g = parse_turtle_star("<urn:a> <urn:r> <urn:b> .");
  WalkIndex index(g);
  auto b = *g.find(Term::iri("urn:b"));
  std::vector<Walk> wl{{b}};
  Rng rng(0);
  qt_walk_step(wl, 0, b, index, {}, PlainExpansion::All, rng);
  EXPECT_EQ(wl, (std::vector<Walk>{{b}}));
}

TEST(QtStep, NoQtNeighbourhoodDrawsNothing) {
  Graph g = parse_turtle_star("<urn:a> <urn:r> <urn:b> .");
  WalkIndex index(g);
  auto a = *g.find(Term::iri("urn:a"));
  std::vector<Walk> wl(1);
  Rng rng(9), untouched(9);
  TransitionProbabilities all{1, 1, 1, 1};
  qt_walk_step(wl, 0, a, index, all, PlainExpansion::All, rng);
  EXPECT_EQ(rng.next(), untouched.next());
}

TEST(Walks, SameSeedSameCorpus) {
  Graph g = convert_facts(synthetic_hrkg(HrkgOptions::small(), 1), Mrm::Rdr);
  for (auto mode : {WalkMode::MidWalks, WalkMode::MidWalksDuplicateFree, WalkMode::RandomWalks,
                    WalkMode::RandomWalksDuplicateFree}) {
    WalkConfig config;
    config.mode = mode;
    config.probabilities = {0.3, 0.3, 0.3, 0.3};
    config.seed = 8;
    EXPECT_EQ(generate_walks(g, config), generate_walks(g, config)) << to_string(mode);
  }
}

TEST(Walks, ThreadCountDoesNotChangeOutput) {
  Graph g = convert_facts(synthetic_hrkg(HrkgOptions::small(), 2), Mrm::Rdr);
  WalkConfig config;
  config.probabilities = {0.5, 0.5, 0.5, 0.5};
  config.mode = WalkMode::MidWalks;
  auto single = generate_walks(g, config);
  config.threads = 4;
  EXPECT_EQ(generate_walks(g, config), single);
}

TEST(Walks, DuplicateFreeModesHaveNoRepeats) {
  Graph g = convert_facts(synthetic_hrkg(HrkgOptions::small(), 4), Mrm::Rdr);
  WalkIndex index(g);
  for (auto mode : {WalkMode::MidWalksDuplicateFree, WalkMode::RandomWalksDuplicateFree}) {
    WalkConfig config;
    config.mode = mode;
    config.walks_per_root = 6;
    config.probabilities = {0.2, 0.4, 0.2, 0.4};
    for (TermId root : g.entities()) {
      Rng rng(root);
      auto walks = walks_from_root(index, root, config, rng);
      std::set<Walk> unique(walks.begin(), walks.end());
      EXPECT_EQ(unique.size(), walks.size());
      EXPECT_LE(walks.size(), config.walks_per_root);
      EXPECT_GE(walks.size(), 1u);
    }
  }
}

TEST(Walks, PlainWalksFollowTriples) {
  Graph g = plain_graph(3);
  WalkIndex index(g);
  for (auto mode : {WalkMode::MidWalks, WalkMode::RandomWalks, WalkMode::RandomWalksDuplicateFree}) {
    WalkConfig config;
    config.mode = mode;
    config.depth = 6;
    for (TermId root : g.entities()) {
      Rng rng(root + 100);
      for (const auto& walk : walks_from_root(index, root, config, rng)) {
        ASSERT_EQ(walk.size() % 2, 1u);
        EXPECT_NE(std::find(walk.begin(), walk.end(), root), walk.end());
        for (std::size_t i = 0; i + 2 < walk.size(); i += 2) {
          EXPECT_TRUE(g.contains(IdTriple{walk[i], walk[i + 1], walk[i + 2]}));
        }
        EXPECT_LE(walk.size(), 2 * config.depth + 1);
      }
    }
  }
}

TEST(Walks, ModeNamesAndValidation) {
  EXPECT_EQ(parse_walk_mode("STAR_MID_WALKS"), WalkMode::MidWalks);
  EXPECT_EQ(parse_walk_mode("RANDOM_WALKS_DUPLICATE_FREE"), WalkMode::RandomWalksDuplicateFree);
  EXPECT_FALSE(parse_walk_mode("WALKS"));
  WalkConfig bad;
  bad.probabilities.qt_to_object = 1.5;
  EXPECT_THROW(bad.validate(), ConfigError);
  WalkConfig zero;
  zero.depth = 0;
  EXPECT_THROW(zero.validate(), ConfigError);
}
