#include "carto/arg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace carto {
namespace {

constexpr std::size_t kKinds = 3;

std::size_t kind_index(PrimitiveKind k) { return static_cast<std::size_t>(k); }

// Dense adjacency: cell value -1 = no edge, otherwise conn * 4 + dir.
class AdjacencyTable {
 public:
  explicit AdjacencyTable(const Arg& g) : n_(g.vertex_count()), cells_(n_ * n_, -1) {
    for (const auto& e : g.edges()) {
      const int code = static_cast<int>(e.conn) * 4 + static_cast<int>(e.dir);
      cells_[static_cast<std::size_t>(e.from) * n_ + static_cast<std::size_t>(e.to)] = code;
      cells_[static_cast<std::size_t>(e.to) * n_ + static_cast<std::size_t>(e.from)] = code;
    }
  }
  int operator()(int a, int b) const { return cells_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)]; }

 private:
  std::size_t n_;
  std::vector<int> cells_;
};

class Budget {
 public:
  explicit Budget(std::size_t limit) : limit_(limit) {}
  void tick() {
    if (++used_ > limit_) {
      throw Error(ErrorCode::BudgetExceeded,
                  "graph search exceeded its budget of " + std::to_string(limit_) + " nodes");
    }
  }

 private:
  std::size_t limit_;
  std::size_t used_ = 0;
};

// Induced common subgraph search. g1 vertices are decided in index order: each is
// mapped to a compatible unused g2 vertex (ascending) or skipped, so the first optimum
// found is the lexicographically smallest mapping.
class McsSearch {
 public:
  McsSearch(const Arg& g1, const Arg& g2, std::size_t budget)
      : g1_(g1), g2_(g2), a1_(g1), a2_(g2), budget_(budget),
        map_(g1.vertex_count(), -1), used_(g2.vertex_count(), false) {
    for (std::size_t v = g1.vertex_count(); v-- > 0;) {
      suffix_kinds_.insert(suffix_kinds_.begin(), suffix_kinds_.empty() ? std::array<int, kKinds>{} : suffix_kinds_.front());
      ++suffix_kinds_.front()[kind_index(g1.kind(static_cast<int>(v)))];
    }
    suffix_kinds_.push_back({});
    for (auto k : g2.vertices()) ++free2_[kind_index(k)];
    // Edges of g1 whose later endpoint is at or beyond position v.
    edges_from_.assign(g1.vertex_count() + 1, 0);
    for (const auto& e : g1.edges()) ++edges_from_[static_cast<std::size_t>(e.to)];
    for (std::size_t v = g1.vertex_count(); v-- > 0;) edges_from_[v] += edges_from_[v + 1];
  }

  std::vector<int> run() {
    dfs(0, 0, 0);
    return best_map_;
  }

 private:
  void dfs(std::size_t v, int vertices, int edges) {
    budget_.tick();
    const std::size_t n1 = g1_.vertex_count();
    if (vertices > best_vertices_ || (vertices == best_vertices_ && edges > best_edges_)) {
      best_vertices_ = vertices;
      best_edges_ = edges;
      best_map_ = map_;
    }
    if (v == n1) return;

    int vertex_bound = vertices;
    for (std::size_t k = 0; k < kKinds; ++k) vertex_bound += std::min(suffix_kinds_[v][k], free2_[k]);
    const int edge_bound = edges + edges_from_[v];
    if (vertex_bound < best_vertices_ || (vertex_bound == best_vertices_ && edge_bound <= best_edges_)) return;

    const int vi = static_cast<int>(v);
    const PrimitiveKind kind = g1_.kind(vi);
    for (std::size_t w = 0; w < g2_.vertex_count(); ++w) {
      const int wi = static_cast<int>(w);
      if (used_[w] || g2_.kind(wi) != kind) continue;
      int gained = 0;
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u) {
        const int mu = map_[u];
        if (mu < 0) continue;
        const int c1 = a1_(static_cast<int>(u), vi);
        if (c1 != a2_(mu, wi)) ok = false;
        else if (c1 >= 0) ++gained;
      }
      if (!ok) continue;
      map_[v] = wi;
      used_[w] = true;
      --free2_[kind_index(kind)];
      dfs(v + 1, vertices + 1, edges + gained);
      ++free2_[kind_index(kind)];
      used_[w] = false;
      map_[v] = -1;
    }
    dfs(v + 1, vertices, edges);
  }

  const Arg& g1_;
  const Arg& g2_;
  AdjacencyTable a1_;
  AdjacencyTable a2_;
  Budget budget_;
  std::vector<int> map_;
  std::vector<bool> used_;
  std::vector<std::array<int, kKinds>> suffix_kinds_;
  std::array<int, kKinds> free2_{};
  std::vector<int> edges_from_;
  int best_vertices_ = -1;
  int best_edges_ = -1;
  std::vector<int> best_map_;
};

// Injective, kind- and adjacency-preserving map of every vertex of `small` into `large`.
class SubgraphSearch {
 public:
  SubgraphSearch(const Arg& small, const Arg& large, std::size_t budget)
      : s_(small), l_(large), as_(small), al_(large), budget_(budget),
        map_(small.vertex_count(), -1), used_(large.vertex_count(), false) {}

  bool run() {
    if (s_.vertex_count() > l_.vertex_count() || s_.edge_count() > l_.edge_count()) return false;
    std::array<int, kKinds> ks{}, kl{};
    for (auto k : s_.vertices()) ++ks[kind_index(k)];
    for (auto k : l_.vertices()) ++kl[kind_index(k)];
    for (std::size_t k = 0; k < kKinds; ++k)
      if (ks[k] > kl[k]) return false;
    return dfs(0);
  }

 private:
  bool dfs(std::size_t v) {
    budget_.tick();
    if (v == s_.vertex_count()) return true;
    const int vi = static_cast<int>(v);
    for (std::size_t w = 0; w < l_.vertex_count(); ++w) {
      const int wi = static_cast<int>(w);
      if (used_[w] || l_.kind(wi) != s_.kind(vi)) continue;
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u) ok = as_(static_cast<int>(u), vi) == al_(map_[u], wi);
      if (!ok) continue;
      map_[v] = wi;
      used_[w] = true;
      if (dfs(v + 1)) return true;
      used_[w] = false;
    }
    map_[v] = -1;
    return false;
  }

  const Arg& s_;
  const Arg& l_;
  AdjacencyTable as_;
  AdjacencyTable al_;
  Budget budget_;
  std::vector<int> map_;
  std::vector<bool> used_;
};

bool within(double d, double tol) { return d <= tol + 1e-9; }

}  // namespace

std::string_view to_string(ConnectionKind c) {
  switch (c) {
    case ConnectionKind::end_to_end: return "end-to-end";
    case ConnectionKind::end_to_side: return "end-to-side";
    case ConnectionKind::overlap: return "overlap";
  }
  return "overlap";
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::E: return "E";
    case Direction::NE: return "NE";
    case Direction::N: return "N";
    case Direction::SE: return "SE";
  }
  return "E";
}

ConnectionKind connection_from_string(std::string_view s) {
  if (s == "end-to-end") return ConnectionKind::end_to_end;
  if (s == "end-to-side") return ConnectionKind::end_to_side;
  if (s == "overlap") return ConnectionKind::overlap;
  throw Error(ErrorCode::FormatError, "unknown connection kind '" + std::string(s) + "'");
}

Direction direction_from_string(std::string_view s) {
  if (s == "E") return Direction::E;
  if (s == "NE") return Direction::NE;
  if (s == "N") return Direction::N;
  if (s == "SE") return Direction::SE;
  throw Error(ErrorCode::FormatError, "unknown direction '" + std::string(s) + "'");
}

int Arg::add_vertex(PrimitiveKind kind) {
  vertices_.push_back(kind);
  return static_cast<int>(vertices_.size()) - 1;
}

void Arg::set_edge(int a, int b, ConnectionKind conn, Direction dir) {
  const int n = static_cast<int>(vertices_.size());
  if (a == b || a < 0 || b < 0 || a >= n || b >= n) {
    throw Error(ErrorCode::InvalidArgument, "edge endpoints must be distinct existing vertices");
  }
  ArgEdge e{std::min(a, b), std::max(a, b), conn, dir};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e, [](const ArgEdge& x, const ArgEdge& y) {
    return std::pair{x.from, x.to} < std::pair{y.from, y.to};
  });
  if (it != edges_.end() && it->from == e.from && it->to == e.to) *it = e;
  else edges_.insert(it, e);
}

std::optional<ArgEdge> Arg::edge(int a, int b) const {
  const int lo = std::min(a, b), hi = std::max(a, b);
  for (const auto& e : edges_)
    if (e.from == lo && e.to == hi) return e;
  return std::nullopt;
}

Direction direction_between(Point2 from, Point2 to) {
  const double bearing = map_bearing(to.x - from.x, to.y - from.y);
  const int bin = static_cast<int>(std::lround(bearing / (std::numbers::pi / 4))) % 4;
  return static_cast<Direction>(bin);
}

Arg build_arg(const std::vector<Primitive>& primitives, const ArgParams& params) {
  Arg g;
  for (const auto& p : primitives) g.add_vertex(kind_of(p));
  const double tol = params.tolerance;
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    for (std::size_t j = i + 1; j < primitives.size(); ++j) {
      const auto& a = primitives[i];
      const auto& b = primitives[j];
      if (!within(distance_between(a, b), tol)) continue;
      const auto ea = ends_of(a), eb = ends_of(b);
      ConnectionKind conn = ConnectionKind::overlap;
      bool end_end = false;
      for (const auto& pa : ea)
        for (const auto& pb : eb) end_end = end_end || within(distance(pa, pb), tol);
      if (end_end) {
        conn = ConnectionKind::end_to_end;
      } else {
        bool end_side = false;
        for (const auto& pa : ea) end_side = end_side || within(distance_to(b, pa), tol);
        for (const auto& pb : eb) end_side = end_side || within(distance_to(a, pb), tol);
        if (end_side) conn = ConnectionKind::end_to_side;
      }
      g.set_edge(static_cast<int>(i), static_cast<int>(j), conn, direction_between(center_of(a), center_of(b)));
    }
  }
  return g;
}

ArgMatch max_common_subgraph(const Arg& g1, const Arg& g2, std::size_t budget) {
  const std::vector<int> map = McsSearch(g1, g2, budget).run();
  ArgMatch out;
  std::vector<int> renumber(g1.vertex_count(), -1);
  for (std::size_t v = 0; v < map.size(); ++v) {
    if (map[v] < 0) continue;
    renumber[v] = out.graph.add_vertex(g1.kind(static_cast<int>(v)));
    out.map.emplace_back(static_cast<int>(v), map[v]);
  }
  for (const auto& e : g1.edges()) {
    const int a = renumber[static_cast<std::size_t>(e.from)], b = renumber[static_cast<std::size_t>(e.to)];
    if (a >= 0 && b >= 0) out.graph.set_edge(a, b, e.conn, e.dir);
  }
  return out;
}

Arg min_common_supergraph(const Arg& g1, const Arg& g2, std::size_t budget) {
  const ArgMatch m = max_common_subgraph(g1, g2, budget);
  Arg out = g1;
  std::vector<int> image(g2.vertex_count(), -1);  // g2 vertex -> vertex of the result
  for (const auto& [v1, v2] : m.map) image[static_cast<std::size_t>(v2)] = v1;
  for (std::size_t w = 0; w < g2.vertex_count(); ++w)
    if (image[w] < 0) image[w] = out.add_vertex(g2.kind(static_cast<int>(w)));
  for (const auto& e : g2.edges()) {
    // Edges between two matched vertices already exist in g1 with equal attributes.
    out.set_edge(image[static_cast<std::size_t>(e.from)], image[static_cast<std::size_t>(e.to)], e.conn, e.dir);
  }
  return out;
}

bool is_subgraph(const Arg& small, const Arg& large, std::size_t budget) {
  return SubgraphSearch(small, large, budget).run();
}

bool are_isomorphic(const Arg& a, const Arg& b, std::size_t budget) {
  return a.vertex_count() == b.vertex_count() && a.edge_count() == b.edge_count() && is_subgraph(a, b, budget);
}

double bunke_distance(const Arg& g1, const Arg& g2, std::size_t budget) {
  const std::size_t denom = std::max(g1.vertex_count(), g2.vertex_count());
  if (denom == 0) return 0.0;
  const std::size_t common = max_common_subgraph(g1, g2, budget).graph.vertex_count();
  return 1.0 - static_cast<double>(common) / static_cast<double>(denom);
}

}  // namespace carto
