#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "carto/primitives.hpp"

namespace carto {

enum class ConnectionKind { end_to_end, end_to_side, overlap };

/// Bearing of the vector between two primitive centers, binned to 45 degrees.
enum class Direction { E, NE, N, SE };

std::string_view to_string(ConnectionKind c);
std::string_view to_string(Direction d);
ConnectionKind connection_from_string(std::string_view s);
Direction direction_from_string(std::string_view s);

struct ArgEdge {
  int from = 0;  // always from < to
  int to = 0;
  ConnectionKind conn = ConnectionKind::overlap;
  Direction dir = Direction::E;
  friend bool operator==(const ArgEdge&, const ArgEdge&) = default;
};

/// Attributed relational graph: vertices are primitive kinds, edges carry
/// connection type and relative direction.
class Arg {
 public:
  Arg() = default;
  explicit Arg(std::vector<PrimitiveKind> vertices) : vertices_(std::move(vertices)) {}

  int add_vertex(PrimitiveKind kind);
  /// Adds or replaces the edge between a and b (a != b).
  void set_edge(int a, int b, ConnectionKind conn, Direction dir);

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<PrimitiveKind>& vertices() const noexcept { return vertices_; }
  PrimitiveKind kind(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  /// Edges sorted by (from, to).
  const std::vector<ArgEdge>& edges() const noexcept { return edges_; }
  std::optional<ArgEdge> edge(int a, int b) const;

  friend bool operator==(const Arg&, const Arg&) = default;

 private:
  std::vector<PrimitiveKind> vertices_;
  std::vector<ArgEdge> edges_;
};

struct ArgParams {
  double tolerance = 6.0;  // meters
};

Direction direction_between(Point2 from, Point2 to);

/// Pairwise relations between primitives; pairs farther apart than the tolerance stay unconnected.
Arg build_arg(const std::vector<Primitive>& primitives, const ArgParams& params = {});

struct ArgMatch {
  Arg graph;                            // induced on the matched vertices of the first graph, renumbered
  std::vector<std::pair<int, int>> map; // (vertex in first, vertex in second), ascending in first
};

/// Node budget for the exhaustive subgraph searches.
inline constexpr std::size_t kDefaultSearchBudget = 1'000'000;

/// Maximum common induced subgraph with attribute-preserving correspondence.
/// Ties (same vertex and edge count) keep the first mapping found in lexicographic search order.
ArgMatch max_common_subgraph(const Arg& g1, const Arg& g2, std::size_t budget = kDefaultSearchBudget);

/// Smallest graph containing both: g1 plus the unmatched part of g2.
Arg min_common_supergraph(const Arg& g1, const Arg& g2, std::size_t budget = kDefaultSearchBudget);

bool are_isomorphic(const Arg& a, const Arg& b, std::size_t budget = kDefaultSearchBudget);

/// True if `small` is isomorphic to an induced subgraph of `large`.
bool is_subgraph(const Arg& small, const Arg& large, std::size_t budget = kDefaultSearchBudget);

/// 1 - |mcs| / max(|g1|, |g2|), by vertex count; 0 for two empty graphs.
double bunke_distance(const Arg& g1, const Arg& g2, std::size_t budget = kDefaultSearchBudget);

}  // namespace carto
