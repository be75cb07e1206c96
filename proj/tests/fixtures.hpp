#pragma once

#include <string>
#include <vector>

#include "mrm/corpus_io.hpp"
#include "mrm/graph.hpp"
#include "mrm/rdf_io.hpp"
#include "mrm/term.hpp"
#include "mrm/vocab.hpp"

namespace fixtures {

inline std::string wd(const std::string& local) { return std::string(mrm::vocab::kWd) + local; }
inline mrm::Term wd_term(const std::string& local) { return mrm::Term::iri(wd(local)); }

// Q1968853,P166,Q3703462,P1346,Q55245
inline mrm::HyperFact olivier_fact() {
  return {wd_term("Q1968853"), wd_term("P166"), wd_term("Q3703462"),
          {{wd_term("P1346"), wd_term("Q55245")}}};
}

inline const char* kRefListing = R"(
_:st rdf:subject wd:Q1968853 ;
    rdf:predicate wd:P166 ;
    rdf:object wd:Q3703462 ;
    wd:P1346 wd:Q55245 .
)";

inline const char* kSgpListing = R"(
wd:Q1968853 wd:P166#1 wd:Q3703462 .
wd:P166#1 :singletonPropertyOf wd:P166 ;
    wd:P1346 wd:Q55245 .
)";

inline const char* kRdrListing = R"(
<< wd:Q1968853 wd:P166 wd:Q3703462 >>
    wd:P1346 wd:Q55245 .
)";

inline const char* kKgrcPrefixes = R"(
@prefix kdrp: <http://kgc.knowledge-graph.jp/data/ResidentPatient/> .
@prefix kdp: <http://kgc.knowledge-graph.jp/data/predicate/> .
@prefix kgc: <http://kgc.knowledge-graph.jp/ontology/kgc.owl#> .
)";

// Three statements: 105 -then-> 106, and 106 says 107.
inline std::string kgrc_ref_document() {
  return std::string(kKgrcPrefixes) + R"(
kdrp:105
  kgc:source "The young man was caring for an elderly man"@en ;
  rdf:type kgc:Situation ;
  kgc:hasPredicate kdp:care ;
  kgc:subject kdrp:Young_man ;
  kgc:then kdrp:106 ;
  kgc:what kdrp:Elderly_man .
kdrp:106
  rdf:type kgc:Statement ;
  kgc:hasPredicate kdp:say ;
  kgc:subject kdrp:Young_man ;
  kgc:what kdrp:107 .
kdrp:107
  rdf:type kgc:Situation ;
  kgc:hasPredicate kgc:hasProperty ;
  kgc:subject kdrp:Elderly_man ;
  kgc:to kdp:equalTo .
)";
}

inline std::string kgrc_rdr_listing() {
  return std::string(kKgrcPrefixes) + R"(
<<
  << kdrp:Young_man kdp:care kdrp:Elderly_man >> rdf:value "http://kgc.knowledge-graph.jp/data/ResidentPatient/105"
>> rdf:type kgc:Situation ;
  kgc:source "The young man was caring for an elderly man"@en ;
  kgc:then
    <<
      << kdrp:Young_man kdp:say <<
        << kdrp:Elderly_man kgc:hasProperty kdp:equalTo >> rdf:value "http://kgc.knowledge-graph.jp/data/ResidentPatient/107" >>
      >> rdf:value "http://kgc.knowledge-graph.jp/data/ResidentPatient/106"
    >> .
)";
}

inline const std::string kKdrp = "http://kgc.knowledge-graph.jp/data/ResidentPatient/";
inline const std::string kKdp = "http://kgc.knowledge-graph.jp/data/predicate/";
inline const std::string kKgc = "http://kgc.knowledge-graph.jp/ontology/kgc.owl#";

// Corpus token of a quoted triple built from member tokens.
inline std::string qt_token(const std::string& s, const std::string& p, const std::string& o) {
  return "<<" + s + "|" + p + "|" + o + ">>";
}

inline std::string plain_literal_token(const std::string& lexical) { return "\"" + lexical + "\""; }

inline std::vector<std::vector<std::string>> corpus_rows(const mrm::WalkCorpus& corpus) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < corpus.size(); ++i) rows.push_back(corpus.sequence_tokens(i));
  return rows;
}

}  // namespace fixtures
