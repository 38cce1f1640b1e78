#include "carto/model.hpp"

#include <algorithm>
#include <limits>

namespace carto {

std::vector<Prototype> find_prototypes(const std::vector<Arg>& args, int min_support, std::size_t budget) {
  if (args.empty()) throw Error(ErrorCode::EmptyInput, "no graphs to group");
  std::vector<Prototype> groups;
  for (const auto& g : args) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Prototype& p) { return are_isomorphic(p.graph, g, budget); });
    if (it != groups.end()) ++it->frequency;
    else groups.push_back({g, 1});
  }
  std::erase_if(groups, [&](const Prototype& p) { return p.frequency < min_support; });
  std::stable_sort(groups.begin(), groups.end(),
                   [](const Prototype& a, const Prototype& b) { return a.frequency > b.frequency; });
  return groups;
}

ObjectModel generate_model(const std::vector<Prototype>& prototypes, std::size_t budget) {
  if (prototypes.empty()) throw Error(ErrorCode::EmptyInput, "a model needs at least one prototype");
  ObjectModel m;
  m.prototypes = prototypes;
  m.max_csg = prototypes.front().graph;
  m.min_csg = prototypes.front().graph;
  for (std::size_t i = 1; i < prototypes.size(); ++i) {
    m.max_csg = max_common_subgraph(m.max_csg, prototypes[i].graph, budget).graph;
    m.min_csg = min_common_supergraph(m.min_csg, prototypes[i].graph, budget);
  }
  return m;
}

ObjectModel generate_model(const std::vector<Arg>& prototypes, std::size_t budget) {
  std::vector<Prototype> p;
  p.reserve(prototypes.size());
  for (const auto& g : prototypes) p.push_back({g, 1});
  return generate_model(p, budget);
}

double model_distance(const Arg& g, const ObjectModel& model, DistanceMode mode, std::size_t budget) {
  if (mode == DistanceMode::interval) {
    const std::size_t denom = std::max(g.vertex_count(), model.max_csg.vertex_count());
    if (denom == 0) return 0.0;
    const std::size_t common = max_common_subgraph(g, model.min_csg, budget).graph.vertex_count();
    return std::clamp(1.0 - static_cast<double>(common) / static_cast<double>(denom), 0.0, 1.0);
  }
  if (model.prototypes.empty()) return g.vertex_count() == 0 ? 0.0 : 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : model.prototypes) best = std::min(best, bunke_distance(g, p.graph, budget));
  return best;
}

}  // namespace carto
