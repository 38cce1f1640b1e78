#pragma once

#include <vector>

#include "carto/arg.hpp"

namespace carto {

struct Prototype {
  Arg graph;
  int frequency = 0;
};

/// Groups graphs by exact isomorphism. Groups below `min_support` are dropped; the rest
/// come back by descending frequency, ties in order of first appearance.
std::vector<Prototype> find_prototypes(const std::vector<Arg>& args, int min_support = 1,
                                       std::size_t budget = kDefaultSearchBudget);

struct ObjectModel {
  Arg max_csg;
  Arg min_csg;
  std::vector<Prototype> prototypes;
};

/// Left folds of the common-subgraph and common-supergraph operators in input order.
ObjectModel generate_model(const std::vector<Prototype>& prototypes, std::size_t budget = kDefaultSearchBudget);
ObjectModel generate_model(const std::vector<Arg>& prototypes, std::size_t budget = kDefaultSearchBudget);

enum class DistanceMode {
  nearest_prototype,  // min over prototypes of the Bunke distance
  interval,           // 1 - |mcs(g, min_csg)| / max(|g|, |max_csg|), clamped to [0, 1]
};

double model_distance(const Arg& g, const ObjectModel& model, DistanceMode mode = DistanceMode::nearest_prototype,
                      std::size_t budget = kDefaultSearchBudget);

}  // namespace carto
