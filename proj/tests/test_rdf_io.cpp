#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mrm/convert.hpp"
#include "mrm/error.hpp"
#include "mrm/rdf_io.hpp"
#include "mrm/synthetic.hpp"

using namespace mrm;

TEST(Wd50kRow, ParsesQualifierPairs) {
  auto fact = parse_wd50k_row("Q1968853,P166,Q3703462,P1346,Q55245", 1, vocab::kWd);
  EXPECT_EQ(fact, fixtures::olivier_fact());
}

TEST(Wd50kRow, ThreeFieldsGiveNoQualifiers) {
  auto fact = parse_wd50k_row("a,b,c");
  EXPECT_EQ(fact.subject, Term::iri("a"));
  EXPECT_TRUE(fact.qualifiers.empty());
}

TEST(Wd50kRow, DanglingQualifierNamesLine) {
  try {
    parse_wd50k_row("a,b,c,d", 17);
    FAIL() << "expected MalformedRow";
  } catch (const MalformedRow& e) {
    EXPECT_EQ(e.line(), 17u);
    EXPECT_NE(std::string(e.what()).find("17"), std::string::npos);
  }
}

TEST(Wd50kRow, TooFewFieldsAndEmptyFieldsRejected) {
  EXPECT_THROW(parse_wd50k_row("a,b"), MalformedRow);
  EXPECT_THROW(parse_wd50k_row("a,,c"), MalformedRow);
}

TEST(Wd50kRow, FormatStripsNamespace) {
  EXPECT_EQ(format_wd50k_row(fixtures::olivier_fact(), vocab::kWd),
            "Q1968853,P166,Q3703462,P1346,Q55245");
}

TEST(Wd50kRead, HyperRelationalFilterAndBlankLines) {
  std::istringstream in("a,b,c\n\nd,e,f,g,h\n");
  Wd50kReadOptions options;
  EXPECT_EQ(read_wd50k(in, options).size(), 2u);
  std::istringstream again("a,b,c\n\nd,e,f,g,h\n");
  options.hyper_relational_only = true;
  auto facts = read_wd50k(again, options);
  ASSERT_EQ(facts.size(), 1u);
  EXPECT_EQ(facts[0].subject, fixtures::wd_term("d"));
}

TEST(PrefixTable, ExpandThenCompactIsIdentity) {
  auto table = PrefixTable::standard();
  table.add("kdrp", fixtures::kKdrp);
  for (std::string name : {"wd:Q42", "kdrp:Young_man", "rdf:type", "wd:P166#1"}) {
    auto iri = table.expand(name);
    ASSERT_TRUE(iri) << name;
    EXPECT_EQ(table.compact(*iri), name);
  }
  EXPECT_FALSE(table.expand("nope:x"));
}

TEST(PrefixTable, ConflictingAddThrows) {
  auto table = PrefixTable::standard();
  EXPECT_THROW(table.add("wd", "http://elsewhere/"), Error);
  EXPECT_NO_THROW(table.add("wd", std::string(vocab::kWd)));
}

TEST(TurtleStar, QuotedSubject) {
  Graph g = parse_turtle_star("<< :s :p :o >> :m :v .");
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.qt_count(), 1u);
  EXPECT_TRUE(g.term(g.triples()[0].subject).is_qt());
}

TEST(TurtleStar, PlainTripleHasNoQts) {
  Graph g = parse_turtle_star(":s :p :o .");
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.qt_count(), 0u);
}

TEST(TurtleStar, KgrcNestedListing) {
  Graph g = parse_turtle_star(fixtures::kgrc_rdr_listing());
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(g.qt_count(), 6u);
  auto care = g.find(Term::iri(fixtures::kKdp + "care"));
  ASSERT_TRUE(care);
  auto ym = *g.find(Term::iri(fixtures::kKdrp + "Young_man"));
  auto em = *g.find(Term::iri(fixtures::kKdrp + "Elderly_man"));
  auto inner = g.find_qt(ym, *care, em);
  ASSERT_TRUE(inner);
  auto value = *g.find(Term::iri(std::string(vocab::kRdfValue)));
  auto id105 = *g.find(Term::literal(fixtures::kKdrp + "105"));
  auto wrapper = g.find_qt(g.quoted(*inner).self, value, id105);
  ASSERT_TRUE(wrapper);

  // Nesting depth: the say-statement wrapper holds a QT whose object is a wrapped QT.
  std::size_t max_depth = 0;
  std::function<std::size_t(TermId)> depth = [&](TermId id) -> std::size_t {
    const auto* qt = g.quoted_by_term(id);
    if (!qt) return 0;
    return 1 + std::max(depth(qt->subject), depth(qt->object));
  };
  for (QtId q = 0; q < g.qt_count(); ++q) max_depth = std::max(max_depth, depth(g.quoted(q).self));
  EXPECT_GE(max_depth, 3u);
}

TEST(TurtleStar, ErrorsCarryOffsets) {
  EXPECT_THROW(parse_turtle_star("<< :s :p :o :m :v ."), ParseError);
  EXPECT_THROW(parse_turtle_star(":s :p :o >> ."), ParseError);
  EXPECT_THROW(parse_turtle_star("zz:s :p :o ."), ParseError);
  EXPECT_THROW(parse_turtle_star("\"lit\" :p :o ."), ParseError);
  try {
    parse_turtle_star(":s :p :o .\nbad:s :p :o .");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 11u);
  }
}

TEST(TurtleStar, LiteralFormsAndEscapes) {
  Graph g = parse_turtle_star(R"(
:s :p "a\tbé" , 'single'@en , """long
text""" , "5"^^xsd:integer ; a :Thing .)");
  EXPECT_EQ(g.size(), 5u);
  EXPECT_EQ(g.term(g.triples()[0].object).literal_value().lexical, "a\tb\xc3\xa9");
  EXPECT_EQ(g.term(g.triples()[1].object).literal_value().language, "en");
  EXPECT_EQ(g.term(g.triples()[2].object).literal_value().lexical, "long\ntext");
  EXPECT_EQ(g.term(g.triples()[3].object).literal_value().datatype, std::string(vocab::kXsd) + "integer");
  EXPECT_EQ(g.term(g.triples()[4].predicate).iri_text(), std::string(vocab::kRdfType));
}

TEST(TurtleStar, UnsupportedShorthandIsRejected) {
  EXPECT_THROW(parse_turtle_star(":s :p 5 ."), ParseError);
  EXPECT_THROW(parse_turtle_star(":s :p [ :q :r ] ."), ParseError);
  EXPECT_THROW(parse_turtle_star(":s :p ( :a :b ) ."), ParseError);
}

TEST(Serialize, EmptyGraphIsEmptyDocument) {
  Graph g;
  for (auto f : {RdfFormat::Turtle, RdfFormat::TurtleStar, RdfFormat::NTriplesStar, RdfFormat::Wd50kCsv}) {
    EXPECT_EQ(serialize(g, f), "");
  }
}

TEST(Serialize, RdrListingRoundTrips) {
  Graph g = parse_turtle_star(fixtures::kRdrListing);
  for (auto f : {RdfFormat::TurtleStar, RdfFormat::NTriplesStar}) {
    Graph back = parse_turtle_star(serialize(g, f));
    EXPECT_TRUE(same_content(g, back)) << to_string(f);
  }
}

TEST(Serialize, NestedRoundTripIsFixedPoint) {
  Graph g = parse_turtle_star(fixtures::kgrc_rdr_listing());
  auto once = serialize(g, RdfFormat::TurtleStar);
  Graph back = parse_turtle_star(once);
  EXPECT_TRUE(same_content(g, back));
  EXPECT_EQ(serialize(back, RdfFormat::TurtleStar), once);
}

TEST(Serialize, RefStatementsKeepStats) {
  RandomFactOptions options;
  options.facts = 3;
  auto facts = random_hyperfacts(options, 5);
  Graph g = convert_facts(facts, Mrm::Ref);
  for (auto f : {RdfFormat::Turtle, RdfFormat::TurtleStar, RdfFormat::NTriplesStar}) {
    Graph back = parse_turtle_star(serialize(g, f));
    EXPECT_EQ(back.stats(), g.stats());
    EXPECT_TRUE(same_content(g, back));
  }
}

TEST(Serialize, TurtleRejectsQuotedTriples) {
  Graph g = parse_turtle_star(fixtures::kRdrListing);
  EXPECT_THROW(serialize(g, RdfFormat::Turtle), UnsupportedShape);
}

TEST(Serialize, Wd50kCsvRejectsNestedQts) {
  Graph g = parse_turtle_star(fixtures::kgrc_rdr_listing());
  EXPECT_THROW(serialize(g, RdfFormat::Wd50kCsv), UnsupportedShape);
}

TEST(Serialize, Wd50kCsvFromRdr) {
  Graph g = parse_turtle_star(fixtures::kRdrListing);
  EXPECT_EQ(serialize(g, RdfFormat::Wd50kCsv), "Q1968853,P166,Q3703462,P1346,Q55245\n");
}

TEST(Serialize, RoundTripPropertyOverRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomFactOptions options;
    options.facts = 30;
    options.literal_value_rate = 0.3;
    auto facts = random_hyperfacts(options, seed);
    for (auto mrm : kAllMrms) {
      Graph g = convert_facts(facts, mrm);
      for (auto f : {RdfFormat::TurtleStar, RdfFormat::NTriplesStar}) {
        Graph back = parse_turtle_star(serialize(g, f));
        ASSERT_TRUE(same_content(g, back)) << "seed " << seed << " " << to_string(mrm);
      }
    }
  }
}
