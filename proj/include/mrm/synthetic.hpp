#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mrm/term.hpp"

namespace mrm {

// Unstructured random facts for property tests. (s, p, o) triples are
// distinct and no fact repeats a qualifier pair.
struct RandomFactOptions {
  std::size_t facts = 1000;
  std::size_t entities = 60;
  std::size_t relations = 8;
  std::size_t qualifier_relations = 6;
  std::size_t min_qualifiers = 0;
  std::size_t max_qualifiers = 3;
  double literal_value_rate = 0.0;  // share of qualifier values that are literals
};

std::vector<HyperFact> random_hyperfacts(const RandomFactOptions& options, std::uint64_t seed);

// Clustered hyper-relational graph with learnable qualifiers: subjects come
// from a cluster, the object cluster depends on (cluster, relation), and each
// qualifier value is fixed per (cluster, qualifier relation) up to `noise`.
struct HrkgOptions {
  std::size_t clusters = 8;
  std::size_t entities_per_cluster = 22;
  std::size_t relations = 6;
  std::size_t qualifier_relations = 3;
  std::size_t facts = 300;
  std::size_t min_qualifiers = 2;
  std::size_t max_qualifiers = 3;
  double noise = 0.1;

  static HrkgOptions desk();   // about 200 entities
  static HrkgOptions small();  // 50 facts
};

std::vector<HyperFact> synthetic_hrkg(const HrkgOptions& options, std::uint64_t seed);

}  // namespace mrm
