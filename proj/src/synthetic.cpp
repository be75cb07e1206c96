#include "mrm/synthetic.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <tuple>

#include "mrm/error.hpp"
#include "mrm/rng.hpp"
#include "mrm/vocab.hpp"

namespace mrm {

namespace {

Term wd(const std::string& local) { return Term::iri(std::string(vocab::kWd) + local); }
Term entity(std::size_t i) { return wd("Q" + std::to_string(100 + i)); }
Term value_entity(std::size_t i) { return wd("Q" + std::to_string(9000 + i)); }
Term relation(std::size_t i) { return wd("P" + std::to_string(1 + i)); }
Term qualifier_relation(std::size_t i) { return wd("P" + std::to_string(500 + i)); }

std::vector<std::size_t> distinct_indices(std::size_t count, std::size_t range, Rng& rng) {
  std::vector<std::size_t> all(range);
  for (std::size_t i = 0; i < range; ++i) all[i] = i;
  rng.shuffle(all);
  all.resize(std::min(count, range));
  return all;
}

std::size_t between(std::size_t lo, std::size_t hi, Rng& rng) {
  return lo + rng.index(hi - lo + 1);
}

}  // namespace

std::vector<HyperFact> random_hyperfacts(const RandomFactOptions& options, std::uint64_t seed) {
  if (options.entities < 2 || options.relations < 1 || options.max_qualifiers < options.min_qualifiers ||
      options.max_qualifiers > options.qualifier_relations) {
    throw ConfigError("random fact options are inconsistent");
  }
  if (options.facts > options.entities * options.entities * options.relations) {
    throw ConfigError("too many facts for the entity and relation pools");
  }
  Rng rng(seed);
  std::vector<HyperFact> facts;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> used;
  while (facts.size() < options.facts) {
    auto s = rng.index(options.entities);
    auto p = rng.index(options.relations);
    auto o = rng.index(options.entities);
    if (!used.emplace(s, p, o).second) continue;
    HyperFact fact{entity(s), relation(p), entity(o), {}};
    auto k = between(options.min_qualifiers, options.max_qualifiers, rng);
    // Distinct qualifier relations keep the qualifier pairs distinct.
    for (auto q : distinct_indices(k, options.qualifier_relations, rng)) {
      Term value = rng.uniform() < options.literal_value_rate
                       ? Term::literal("v" + std::to_string(rng.index(options.entities)))
                       : entity(rng.index(options.entities));
      fact.qualifiers.push_back({qualifier_relation(q), std::move(value)});
    }
    facts.push_back(std::move(fact));
  }
  return facts;
}

HrkgOptions HrkgOptions::desk() { return {}; }

HrkgOptions HrkgOptions::small() {
  HrkgOptions o;
  o.clusters = 4;
  o.entities_per_cluster = 8;
  o.relations = 3;
  o.qualifier_relations = 3;
  o.facts = 50;
  return o;
}

std::vector<HyperFact> synthetic_hrkg(const HrkgOptions& options, std::uint64_t seed) {
  if (options.clusters < 1 || options.entities_per_cluster < 1 || options.relations < 1 ||
      options.max_qualifiers < options.min_qualifiers ||
      options.max_qualifiers > options.qualifier_relations) {
    throw ConfigError("synthetic graph options are inconsistent");
  }
  if (options.facts > options.clusters * options.entities_per_cluster *
                          options.entities_per_cluster * options.relations) {
    throw ConfigError("too many facts for the synthetic graph size");
  }
  Rng rng(seed);
  const auto values = options.clusters * options.qualifier_relations;
  std::vector<HyperFact> facts;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> used;
  while (facts.size() < options.facts) {
    auto cluster = rng.index(options.clusters);
    auto r = rng.index(options.relations);
    auto s = cluster * options.entities_per_cluster + rng.index(options.entities_per_cluster);
    auto object_cluster = (cluster + r + 1) % options.clusters;
    auto o = object_cluster * options.entities_per_cluster + rng.index(options.entities_per_cluster);
    if (!used.emplace(s, r, o).second) continue;
    HyperFact fact{entity(s), relation(r), entity(o), {}};
    auto k = between(options.min_qualifiers, options.max_qualifiers, rng);
    for (auto q : distinct_indices(k, options.qualifier_relations, rng)) {
      auto v = rng.uniform() < options.noise ? rng.index(values)
                                             : cluster * options.qualifier_relations + q;
      fact.qualifiers.push_back({qualifier_relation(q), value_entity(v)});
    }
    facts.push_back(std::move(fact));
  }
  return facts;
}

}  // namespace mrm
