#include "carto/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace carto {
namespace {

template <typename F>
auto parse_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("malformed ") + what + ": " + e.what());
  }
}

Json point(Point2 p) { return Json::array({p.x, p.y}); }

}  // namespace

Json to_json(const EdgeSet& edges) {
  Json chains = Json::array();
  for (const auto& c : edges.chains) {
    Json pts = Json::array();
    for (const auto& p : c.points) pts.push_back(point(p));
    chains.push_back({{"closed", c.closed}, {"points", std::move(pts)}});
  }
  return {{"width", edges.width}, {"height", edges.height}, {"chains", std::move(chains)}};
}

EdgeSet edges_from_json(const Json& j) {
  return parse_guard("edge set", [&] {
    EdgeSet out;
    out.width = j.value("width", 0);
    out.height = j.value("height", 0);
    for (const auto& c : j.at("chains")) {
      EdgeChain chain;
      chain.closed = c.at("closed").get<bool>();
      for (const auto& p : c.at("points")) chain.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      out.chains.push_back(std::move(chain));
    }
    return out;
  });
}

Json to_json(const Arg& g) {
  Json vertices = Json::array();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    vertices.push_back({{"id", v}, {"kind", std::string(to_string(g.kind(static_cast<int>(v))))}});
  }
  Json edges = Json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"conn", std::string(to_string(e.conn))},
                     {"dir", std::string(to_string(e.dir))}});
  }
  return {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

Arg arg_from_json(const Json& j) {
  return parse_guard("graph", [&] {
    const auto& vs = j.at("vertices");
    std::vector<PrimitiveKind> kinds(vs.size());
    std::vector<bool> seen(vs.size(), false);
    for (const auto& v : vs) {
      const auto id = v.at("id").get<std::size_t>();
      if (id >= kinds.size() || seen[id]) throw Error(ErrorCode::FormatError, "vertex ids must be dense 0..n-1");
      seen[id] = true;
      kinds[id] = primitive_kind_from_string(v.at("kind").get<std::string>());
    }
    Arg g(std::move(kinds));
    for (const auto& e : j.at("edges")) {
      const int a = e.at("from").get<int>(), b = e.at("to").get<int>();
      if (g.edge(a, b)) throw Error(ErrorCode::FormatError, "duplicate edge");
      try {
        g.set_edge(a, b, connection_from_string(e.at("conn").get<std::string>()),
                   direction_from_string(e.at("dir").get<std::string>()));
      } catch (const Error& err) {
        if (err.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::FormatError, err.what());
        throw;
      }
    }
    return g;
  });
}

Json to_json(const ObjectModel& m) {
  Json protos = Json::array();
  for (const auto& p : m.prototypes) protos.push_back({{"frequency", p.frequency}, {"graph", to_json(p.graph)}});
  return {{"max_csg", to_json(m.max_csg)}, {"min_csg", to_json(m.min_csg)}, {"prototypes", std::move(protos)}};
}

ObjectModel model_from_json(const Json& j) {
  return parse_guard("model", [&] {
    ObjectModel m;
    m.max_csg = arg_from_json(j.at("max_csg"));
    m.min_csg = arg_from_json(j.at("min_csg"));
    for (const auto& p : j.at("prototypes")) {
      m.prototypes.push_back({arg_from_json(p.at("graph")), p.at("frequency").get<int>()});
    }
    return m;
  });
}

Json to_json(const MatchResult& r) {
  Json j = {{"dx", r.offset.dx}, {"dy", r.offset.dy}, {"score", r.score}, {"tie_count", r.tie_count},
            {"no_edges", r.no_edges}};
  // Infinity has no JSON spelling.
  j["variance"] = std::isfinite(r.variance) ? Json(r.variance) : Json(nullptr);
  return j;
}

MatchResult match_result_from_json(const Json& j) {
  return parse_guard("match result", [&] {
    MatchResult r;
    r.offset = {j.at("dx").get<int>(), j.at("dy").get<int>()};
    r.score = j.at("score").get<long>();
    r.tie_count = j.value("tie_count", 0);
    r.no_edges = j.value("no_edges", false);
    r.variance = j.at("variance").is_null() ? std::numeric_limits<double>::infinity() : j.at("variance").get<double>();
    return r;
  });
}

Json to_json(const Primitive& p) {
  Json j = {{"kind", std::string(to_string(kind_of(p)))}};
  if (const auto* r = std::get_if<RectanglePrimitive>(&p)) {
    j["center"] = point(r->center);
    j["width"] = r->width;
    j["height"] = r->height;
    j["orientation"] = r->orientation;
  } else if (const auto* c = std::get_if<CirclePrimitive>(&p)) {
    j["center"] = point(c->center);
    j["radius"] = c->radius;
  } else {
    const auto& s = std::get<SegmentPrimitive>(p);
    j["a"] = point(s.a);
    j["b"] = point(s.b);
    j["length"] = s.length();
    j["orientation"] = s.orientation();
  }
  return j;
}

void write_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
  }
}

}  // namespace carto
