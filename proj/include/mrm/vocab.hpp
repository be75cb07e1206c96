#pragma once

#include <string_view>

namespace mrm::vocab {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kWd = "http://www.wikidata.org/entity/";
inline constexpr std::string_view kKgc = "http://kgc.knowledge-graph.jp/ontology/kgc.owl#";
inline constexpr std::string_view kSp = "http://mrm.example.org/sp#";

inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfSubject =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#subject";
inline constexpr std::string_view kRdfPredicate =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#predicate";
inline constexpr std::string_view kRdfObject = "http://www.w3.org/1999/02/22-rdf-syntax-ns#object";
inline constexpr std::string_view kRdfStatement =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#Statement";
inline constexpr std::string_view kRdfValue = "http://www.w3.org/1999/02/22-rdf-syntax-ns#value";

inline constexpr std::string_view kSingletonPropertyOf = "http://mrm.example.org/sp#singletonPropertyOf";

inline constexpr std::string_view kKgcSubject = "http://kgc.knowledge-graph.jp/ontology/kgc.owl#subject";
inline constexpr std::string_view kKgcHasPredicate =
    "http://kgc.knowledge-graph.jp/ontology/kgc.owl#hasPredicate";
inline constexpr std::string_view kKgcThen = "http://kgc.knowledge-graph.jp/ontology/kgc.owl#then";
inline constexpr std::string_view kKgcSource = "http://kgc.knowledge-graph.jp/ontology/kgc.owl#source";

}  // namespace mrm::vocab
