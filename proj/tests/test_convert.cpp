#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "mrm/convert.hpp"
#include "mrm/error.hpp"
#include "mrm/synthetic.hpp"

using namespace mrm;

namespace {

std::vector<std::string> canonical(const Graph& g) { return canonical_triples(g); }

std::size_t count_predicate(const std::vector<Triple>& triples, std::string_view iri) {
  return static_cast<std::size_t>(std::count_if(triples.begin(), triples.end(), [&](const Triple& t) {
    return t.predicate == Term::iri(std::string(iri));
  }));
}

}  // namespace

TEST(ToRef, ListingFactMatchesReificationListing) {
  auto fact = fixtures::olivier_fact();
  auto id = RefStatementId::for_fact(fact, 0);
  auto triples = to_ref(fact, id, false);
  ASSERT_EQ(triples.size(), 4u);
  Graph converted;
  for (auto& t : triples) converted.add(t);
  // Same content as the listing once the statement node label is aligned.
  std::string listing = fixtures::kRefListing;
  listing.replace(listing.find("_:st"), 4, "_:" + id.label);
  EXPECT_EQ(canonical(converted), canonical(parse_turtle_star(listing)));
}

TEST(ToRef, TypeTripleIsOptional) {
  HyperFact bare{fixtures::wd_term("Q1"), fixtures::wd_term("P1"), fixtures::wd_term("Q2"), {}};
  auto triples = to_ref(bare, RefStatementId::for_fact(bare, 0), true);
  EXPECT_EQ(triples.size(), 4u);
  EXPECT_EQ(count_predicate(triples, vocab::kRdfType), 1u);
}

TEST(ToRef, StatementIdsAreStableAndPerOccurrence) {
  auto fact = fixtures::olivier_fact();
  EXPECT_EQ(RefStatementId::for_fact(fact, 0).label, RefStatementId::for_fact(fact, 0).label);
  EXPECT_NE(RefStatementId::for_fact(fact, 0).label, RefStatementId::for_fact(fact, 1).label);
  std::vector<HyperFact> twice{fact, fact};
  Graph g = convert_facts(twice, Mrm::Ref);
  EXPECT_EQ(g.size(), 8u);
}

TEST(ToSgp, ListingFactMatchesSingletonListing) {
  auto fact = fixtures::olivier_fact();
  SingletonCounter counter;
  auto triples = to_sgp(fact, counter.next(fact.predicate));
  ASSERT_EQ(triples.size(), 3u);
  Graph converted;
  for (auto& t : triples) converted.add(t);
  EXPECT_EQ(canonical(converted), canonical(parse_turtle_star(fixtures::kSgpListing)));
}

TEST(ToSgp, CounterIsPerPredicate) {
  SingletonCounter counter;
  auto p = fixtures::wd_term("P166");
  auto q = fixtures::wd_term("P31");
  EXPECT_EQ(counter.next(p).term(), fixtures::wd_term("P166#1"));
  EXPECT_EQ(counter.next(q).term(), fixtures::wd_term("P31#1"));
  EXPECT_EQ(counter.next(p).term(), fixtures::wd_term("P166#2"));
}

TEST(ToSgp, NoQualifiersGivesTwoTriples) {
  HyperFact bare{fixtures::wd_term("Q1"), fixtures::wd_term("P1"), fixtures::wd_term("Q2"), {}};
  EXPECT_EQ(to_sgp(bare, SingletonPropertyId{fixtures::wd("P1"), 1}).size(), 2u);
}

TEST(ToRdr, ListingFactGivesQuotedSubject) {
  Graph g = convert_facts(std::vector{fixtures::olivier_fact()}, Mrm::Rdr);
  EXPECT_TRUE(same_content(g, parse_turtle_star(fixtures::kRdrListing)));
}

TEST(ToRdr, NoQualifiersAssertsPlainTriple) {
  HyperFact bare{fixtures::wd_term("Q1"), fixtures::wd_term("P1"), fixtures::wd_term("Q2"), {}};
  Graph g;
  auto triples = to_rdr(bare, g);
  ASSERT_EQ(triples.size(), 1u);
  EXPECT_EQ(triples[0], (Triple{bare.subject, bare.predicate, bare.object}));
  EXPECT_EQ(g.qt_count(), 0u);
}

TEST(ToRdr, IdenticalStatementsShareOneQt) {
  auto a = fixtures::olivier_fact();
  auto b = a;
  b.qualifiers = {{fixtures::wd_term("P585"), Term::literal("1951")}};
  Graph g = convert_facts(std::vector{a, b}, Mrm::Rdr);
  EXPECT_EQ(g.qt_count(), 1u);
  EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(g.triples()[0].subject, g.triples()[1].subject);
}

TEST(Extract, ListingsGiveTheRowFact) {
  auto expected = std::vector{fixtures::olivier_fact()};
  EXPECT_EQ(extract_hyperfacts(parse_turtle_star(fixtures::kRefListing), Mrm::Ref), expected);
  EXPECT_EQ(extract_hyperfacts(parse_turtle_star(fixtures::kSgpListing), Mrm::Sgp), expected);
  EXPECT_EQ(extract_hyperfacts(parse_turtle_star(fixtures::kRdrListing), Mrm::Rdr), expected);
}

TEST(Extract, MissingObjectIsReportedWithNode) {
  Graph g = parse_turtle_star("_:st rdf:subject wd:Q1 ; rdf:predicate wd:P1 ; wd:P2 wd:Q3 .");
  try {
    extract_hyperfacts(g, Mrm::Ref);
    FAIL();
  } catch (const ExtractionError& e) {
    EXPECT_NE(std::string(e.what()).find("st"), std::string::npos);
  }
}

TEST(Extract, StrayTriplesAreShapeErrors) {
  EXPECT_THROW(extract_hyperfacts(parse_turtle_star(":a :b :c ."), Mrm::Ref), ExtractionError);
  EXPECT_THROW(extract_hyperfacts(parse_turtle_star(":a :b :c . :b :q :v ."), Mrm::Sgp), ExtractionError);
  EXPECT_THROW(extract_hyperfacts(parse_turtle_star(fixtures::kgrc_rdr_listing()), Mrm::Rdr),
               ExtractionError);
}

TEST(RoundTrip, RandomBatchesAllModels) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomFactOptions options;
    options.facts = 200;
    options.literal_value_rate = 0.2;
    auto facts = random_hyperfacts(options, seed);
    for (auto mrm : kAllMrms) {
      Graph g = convert_facts(facts, mrm);
      EXPECT_EQ(extract_hyperfacts(g, mrm), facts) << to_string(mrm) << " seed " << seed;
    }
  }
}

TEST(RoundTrip, RefWithTypeTriples) {
  auto facts = random_hyperfacts({}, 3);
  ConvertOptions options;
  options.emit_type = true;
  Graph g = convert_facts(facts, Mrm::Ref, options);
  EXPECT_EQ(extract_hyperfacts(g, Mrm::Ref), facts);
}

TEST(Counts, SgpRelationsGrowWithFacts) {
  auto facts = random_hyperfacts({}, 11);
  Graph g = convert_facts(facts, Mrm::Sgp);
  EXPECT_GE(g.stats().relations, facts.size());
}

TEST(Counts, RefAndSgpShareEntityCountsWhenStatementsExcluded) {
  // Statement nodes are entities in REF and singleton properties are entities
  // in SGP; both add exactly one entity per fact with qualifiers.
  RandomFactOptions options;
  options.min_qualifiers = 1;
  auto facts = random_hyperfacts(options, 12);
  auto ref = convert_facts(facts, Mrm::Ref).stats();
  auto sgp = convert_facts(facts, Mrm::Sgp).stats();
  EXPECT_EQ(ref.entities, sgp.entities);
}

TEST(ModelNames, ParseAndPrint) {
  for (auto m : kAllMrms) EXPECT_EQ(parse_mrm(to_string(m)), m);
  EXPECT_FALSE(parse_mrm("XYZ"));
}
