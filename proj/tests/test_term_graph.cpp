#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mrm/error.hpp"
#include "mrm/graph.hpp"

using namespace mrm;

TEST(Term, EqualityFollowsVariantAndPayload) {
  EXPECT_EQ(Term::iri("http://x/a"), Term::iri("http://x/a"));
  EXPECT_NE(Term::iri("http://x/a"), Term::blank("http://x/a"));
  EXPECT_NE(Term::literal("a", "en"), Term::literal("a"));
  EXPECT_EQ(Term::qt(3), Term::qt(3));
  EXPECT_NE(Term::qt(3), Term::qt(4));
}

TEST(Term, IriRejectsEmptyAndWhitespace) {
  EXPECT_THROW(Term::iri(""), MalformedTerm);
  EXPECT_THROW(Term::iri("http://x/a b"), MalformedTerm);
  EXPECT_THROW(Term::blank(""), MalformedTerm);
}

TEST(Graph, InternQtIsIdempotent) {
  Graph g;
  auto a = Term::iri("urn:a"), r = Term::iri("urn:r"), b = Term::iri("urn:b");
  auto first = g.intern_qt(a, r, b);
  EXPECT_EQ(g.intern_qt(a, r, b), first);
  EXPECT_EQ(g.qt_count(), 1u);
  EXPECT_NE(g.intern_qt(a, r, Term::iri("urn:c")), first);
  EXPECT_EQ(g.qt_count(), 2u);
}

TEST(Graph, InternNestedQt) {
  Graph g;
  auto inner = g.intern_qt(Term::iri("urn:a"), Term::iri("urn:r"), Term::iri("urn:b"));
  auto outer = g.intern_qt(Term::qt(inner), Term::iri(std::string(vocab::kRdfValue)),
                           Term::literal(fixtures::kKdrp + "105"));
  EXPECT_NE(outer, inner);
  EXPECT_EQ(g.term(g.quoted(outer).subject), Term::qt(inner));
}

TEST(Graph, InternQtRejectsLiteralSubject) {
  Graph g;
  EXPECT_THROW(g.intern_qt(Term::literal("x"), Term::iri("urn:r"), Term::iri("urn:b")), MalformedTerm);
}

TEST(Graph, AddRejectsNonIriPredicateAndLiteralSubject) {
  Graph g;
  EXPECT_THROW(g.add(Triple{Term::iri("urn:a"), Term::blank("p"), Term::iri("urn:b")}), MalformedTerm);
  EXPECT_THROW(g.add(Triple{Term::literal("a"), Term::iri("urn:p"), Term::iri("urn:b")}), MalformedTerm);
}

TEST(Graph, StatsOfEmptyAndSingleTriple) {
  Graph g;
  EXPECT_EQ(g.stats(), (GraphStats{0, 0, 0}));
  g.add(Triple{Term::iri("urn:a"), Term::iri("urn:r"), Term::iri("urn:b")});
  EXPECT_EQ(g.stats(), (GraphStats{2, 1, 1}));
}

TEST(Graph, LiteralsAreNotEntitiesButQtsAre) {
  Graph g = parse_turtle_star(R"(<< <urn:s> <urn:p> "lit" >> <urn:m> <urn:v> .)");
  auto s = g.stats();
  // E = {urn:s, QT, urn:v}; R = {urn:p, urn:m}
  EXPECT_EQ(s.entities, 3u);
  EXPECT_EQ(s.relations, 2u);
  EXPECT_EQ(s.triples, 1u);
}

TEST(Graph, RemoveThenAddRestoresStats) {
  Graph g = parse_turtle_star(fixtures::kRefListing);
  auto before = g.stats();
  auto t = g.resolve(g.triples()[2]);
  EXPECT_TRUE(g.remove(t));
  g.verify();
  EXPECT_TRUE(g.add(t));
  g.verify();
  EXPECT_EQ(g.stats(), before);
}

TEST(Graph, RemoveAllRebuildsIndices) {
  Graph g = parse_turtle_star(fixtures::kRefListing);
  std::vector<IdTriple> drop{g.triples()[0], g.triples()[3]};
  EXPECT_EQ(g.remove_all(drop), 2u);
  EXPECT_EQ(g.size(), 2u);
  g.verify();
}

TEST(Graph, DuplicateAddIsIgnored) {
  Graph g;
  Triple t{Term::iri("urn:a"), Term::iri("urn:r"), Term::iri("urn:b")};
  EXPECT_TRUE(g.add(t));
  EXPECT_FALSE(g.add(t));
  EXPECT_EQ(g.size(), 1u);
}

TEST(Graph, FrozenGraphRejectsMutation) {
  Graph g;
  g.freeze();
  EXPECT_THROW(g.add(Triple{Term::iri("urn:a"), Term::iri("urn:r"), Term::iri("urn:b")}), Error);
}

TEST(Graph, RelationsNonEmptyWheneverTriplesExist) {
  for (const char* doc : {fixtures::kRefListing, fixtures::kSgpListing, fixtures::kRdrListing}) {
    Graph g = parse_turtle_star(doc);
    ASSERT_GE(g.size(), 1u);
    EXPECT_GE(g.stats().relations, 1u);
  }
}

TEST(Graph, IndicesPointAtMatchingTriples) {
  Graph g = parse_turtle_star(fixtures::kgrc_ref_document());
  g.verify();
  for (TermId id = 0; id < g.term_count(); ++id) {
    for (auto pos : g.with_subject(id)) EXPECT_EQ(g.triples()[pos].subject, id);
    for (auto pos : g.with_object(id)) EXPECT_EQ(g.triples()[pos].object, id);
    for (auto pos : g.with_predicate(id)) EXPECT_EQ(g.triples()[pos].predicate, id);
  }
}

TEST(Graph, NtriplesTermRendersNestedQuotedTriples) {
  Graph g = parse_turtle_star(R"(<< << <urn:a> <urn:r> <urn:b> >> <urn:v> "1" >> <urn:m> <urn:x> .)");
  auto subject = g.triples()[0].subject;
  EXPECT_EQ(ntriples_term(g, subject), R"(<< << <urn:a> <urn:r> <urn:b> >> <urn:v> "1" >>)");
}
