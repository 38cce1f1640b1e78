#include "carto/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "carto/morph.hpp"
#include "carto/raster_io.hpp"

namespace carto {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kWorld = kPanSize + 32;  // rendered extent, pan pixels
constexpr int kMargin = (kWorld - kPanSize) / 2;
constexpr double kCenter = (kWorld - 1) / 2.0;  // object center, world pixel coordinates

enum class Surface : std::uint8_t { vegetation, water, road, island, building };

struct Spectrum {
  double ch1, ch2, ch3;
};

// road: 0.3 * (110 + 110) - 50 = 16; vegetation -4; water -13; building -5.
Spectrum spectrum(Surface s) {
  switch (s) {
    case Surface::vegetation: return {90, 90, 58};
    case Surface::water: return {45, 45, 40};
    case Surface::road:
    case Surface::island: return {110, 110, 50};
    case Surface::building: return {150, 150, 95};
  }
  return {90, 90, 58};
}

double pan_gray(Surface s) {
  switch (s) {
    case Surface::vegetation: return 80;
    case Surface::water: return 45;
    case Surface::road: return 170;
    case Surface::island: return 140;
    case Surface::building: return 210;
  }
  return 80;
}

// Oriented box in world pixel coordinates.
struct Box {
  double cx, cy;
  double ux, uy;         // unit long axis
  double half_len, half_wid;

  bool contains(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    return std::abs(dx * ux + dy * uy) <= half_len && std::abs(-dx * uy + dy * ux) <= half_wid;
  }
};

struct Disk {
  double cx, cy, r;
  bool contains(double x, double y) const { return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r; }
};

Box box_along(double bearing, double start, double end, double width_px) {
  const double ux = std::cos(bearing), uy = -std::sin(bearing);
  const double mid = (start + end) / 2;
  return {kCenter + ux * mid, kCenter + uy * mid, ux, uy, (end - start) / 2, width_px / 2};
}

RectanglePrimitive to_primitive(const Box& b, Offset off) {
  // World pixel -> panchromatic pixel -> meters.
  const double px = b.cx - kMargin + off.dx, py = b.cy - kMargin + off.dy;
  RectanglePrimitive r;
  r.center = {px * kPanResolution, py * kPanResolution};
  r.width = 2 * b.half_len * kPanResolution;
  r.height = 2 * b.half_wid * kPanResolution;
  r.orientation = map_bearing(b.ux, b.uy);
  return r;
}

// Smooth noise in [-1, 1]: bilinear interpolation of random values on a coarse lattice.
class ValueNoise {
 public:
  ValueNoise(std::mt19937_64& rng, int extent, int cell) : cell_(cell), n_(extent / cell + 2) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    lattice_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
    for (auto& v : lattice_) v = u(rng);
  }
  double operator()(double x, double y) const {
    const double gx = x / cell_, gy = y / cell_;
    const int ix = std::clamp(static_cast<int>(std::floor(gx)), 0, n_ - 2);
    const int iy = std::clamp(static_cast<int>(std::floor(gy)), 0, n_ - 2);
    const double fx = gx - ix, fy = gy - iy;
    auto at = [&](int a, int b) { return lattice_[static_cast<std::size_t>(b) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(a)]; };
    return (1 - fy) * ((1 - fx) * at(ix, iy) + fx * at(ix + 1, iy)) + fy * ((1 - fx) * at(ix, iy + 1) + fx * at(ix + 1, iy + 1));
  }

 private:
  int cell_;
  int n_;
  std::vector<double> lattice_;
};

struct Layout {
  std::vector<Box> road_boxes;
  std::vector<Disk> road_disks;
  std::optional<Disk> island;
  std::optional<Box> river;
  std::vector<Primitive> truth;
};

Layout layout(const SceneSpec& s) {
  Layout l;
  const double m = kPanResolution;
  if (s.kind == SceneKind::bridge) {
    const double half = s.length / 2 / m;
    const double deck = s.river_width / (2 * std::sin(s.crossing_angle)) / m;
    const double w = s.road_width / m;
    l.road_boxes.push_back(box_along(s.orientation, -half, half, w));
    const double river_dir = s.orientation + s.crossing_angle;
    l.river = box_along(river_dir, -4.0 * kWorld, 4.0 * kWorld, s.river_width / m);
    l.truth.push_back(to_primitive(box_along(s.orientation, -half, -deck, w), s.offset));
    l.truth.push_back(to_primitive(box_along(s.orientation, -deck, deck, w), s.offset));
    l.truth.push_back(to_primitive(box_along(s.orientation, deck, half, w), s.offset));
  } else {
    const double r = s.radius / m;
    const double w = s.road_width / m;
    l.road_disks.push_back({kCenter, kCenter, r});
    l.island = Disk{kCenter, kCenter, std::max(0.0, r - 10.0 / m)};
    l.truth.push_back(CirclePrimitive{{(kCenter - kMargin + s.offset.dx) * m, (kCenter - kMargin + s.offset.dy) * m}, s.radius});
    for (int k = 0; k < 4; ++k) {
      const double bearing = s.orientation + k * kPi / 2 + s.arm_jitter[static_cast<std::size_t>(k)];
      l.road_boxes.push_back(box_along(bearing, 0.0, r + s.arm_length / m, w));
      l.truth.push_back(to_primitive(box_along(bearing, r, r + s.arm_length / m, w), s.offset));
    }
  }
  return l;
}

bool in_object(const Layout& l, double x, double y) {
  for (const auto& b : l.road_boxes)
    if (b.contains(x, y)) return true;
  for (const auto& d : l.road_disks)
    if (d.contains(x, y)) return true;
  return false;
}

struct Building {
  int x0, y0, x1, y1;  // inclusive, world pixels
};

std::vector<Building> place_buildings(const SceneSpec& s, const Image<Surface>& surface, const BinaryMask& object,
                                      std::mt19937_64& rng) {
  std::vector<Building> out;
  if (s.clutter <= 0) return out;
  BinaryMask outside(kWorld, kWorld);
  for (int y = 0; y < kWorld; ++y)
    for (int x = 0; x < kWorld; ++x) outside.set(x, y, !object(x, y));
  const auto dist = distance_transform(outside);
  BinaryMask taken(kWorld, kWorld);

  std::uniform_int_distribution<int> size(6, 12);
  std::uniform_int_distribution<int> pos(kMargin + 12, kMargin + kPanSize - 12);
  for (int b = 0; b < s.clutter; ++b) {
    for (int attempt = 0; attempt < 2000; ++attempt) {
      const int w = size(rng), h = size(rng);
      const int x0 = pos(rng) - w / 2, y0 = pos(rng) - h / 2;
      const Building cand{x0, y0, x0 + w - 1, y0 + h - 1};
      float closest = 1e9f;
      bool clear = true;
      for (int y = cand.y0 - 2; y <= cand.y1 + 2 && clear; ++y) {
        for (int x = cand.x0 - 2; x <= cand.x1 + 2 && clear; ++x) {
          if (!surface.contains(x, y) || taken(x, y)) clear = false;
          else if (surface(x, y) == Surface::water) clear = false;
          else if (x >= cand.x0 && x <= cand.x1 && y >= cand.y0 && y <= cand.y1) closest = std::min(closest, dist(x, y));
        }
      }
      if (!clear || closest < 4.0f || closest > 10.0f) continue;
      for (int y = cand.y0; y <= cand.y1; ++y)
        for (int x = cand.x0; x <= cand.x1; ++x) taken.set(x, y);
      out.push_back(cand);
      break;
    }
  }
  return out;
}

std::uint8_t quantize(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace

std::string_view to_string(SceneKind k) { return k == SceneKind::bridge ? "bridge" : "roundabout"; }

SceneKind scene_kind_from_string(std::string_view s) {
  if (s == "bridge") return SceneKind::bridge;
  if (s == "roundabout") return SceneKind::roundabout;
  throw Error(ErrorCode::SpecError, "unknown scene kind '" + std::string(s) + "'");
}

void validate(const SceneSpec& s) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::SpecError, what);
  };
  require(std::abs(s.offset.dx) <= 10 && std::abs(s.offset.dy) <= 10, "offset must lie within +-10 pixels");
  require(s.road_width > 0, "road width must be positive");
  require(s.noise >= 0 && std::isfinite(s.noise), "noise must be non-negative");
  require(s.clutter >= 0, "clutter must be non-negative");
  const double reach = 0.5 * kPanSize * kPanResolution - 10 * kPanResolution - 5.0;
  if (s.kind == SceneKind::bridge) {
    require(s.length > s.road_width, "bridge must be longer than wide");
    require(s.river_width > 0, "river width must be positive");
    require(s.crossing_angle > 0.1 && s.crossing_angle < kPi - 0.1, "crossing angle out of range");
    require(s.river_width / (2 * std::sin(s.crossing_angle)) + 5.0 <= s.length / 2, "river wider than the bridge span");
    require(s.length / 2 <= reach, "bridge does not fit in the frame");
  } else {
    require(s.radius > 0 && s.arm_length > 0, "radius and arm length must be positive");
    require(s.radius + s.arm_length <= reach, "roundabout does not fit in the frame");
    for (double j : s.arm_jitter) require(std::abs(j) < kPi / 4, "arm jitter too large");
  }
}

SceneSpec random_spec(SceneKind kind, std::uint64_t seed, double noise, int clutter) {
  std::mt19937_64 rng(seed);
  SceneSpec s;
  s.kind = kind;
  s.id = std::string(to_string(kind)) + "_" + std::to_string(seed);
  s.seed = seed;
  s.noise = noise;
  s.clutter = clutter;
  if (kind == SceneKind::bridge) {
    s.road_width = uniform(rng, 30, 36);
    s.length = uniform(rng, 100, 150);
    s.orientation = uniform(rng, 0, kPi);
    s.crossing_angle = uniform(rng, kPi / 3, 2 * kPi / 3);
    s.river_width = uniform(rng, 30, 50);
  } else {
    s.road_width = uniform(rng, 14, 18);
    s.radius = uniform(rng, 22, 32);
    s.arm_length = uniform(rng, 30, 50);
    s.orientation = uniform(rng, 0, kPi / 2);
    for (auto& j : s.arm_jitter) j = uniform(rng, -kPi / 18, kPi / 18);
  }
  std::uniform_int_distribution<int> off(-10, 10);
  s.offset.dx = off(rng);
  s.offset.dy = off(rng);
  return s;
}

Scene generate_scene(const SceneSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  const Layout l = layout(spec);

  Image<Surface> surface(kWorld, kWorld, kPanResolution, Surface::vegetation);
  BinaryMask object(kWorld, kWorld);
  for (int y = 0; y < kWorld; ++y) {
    for (int x = 0; x < kWorld; ++x) {
      if (l.river && l.river->contains(x, y)) surface(x, y) = Surface::water;
      if (in_object(l, x, y)) {
        object.set(x, y);
        surface(x, y) = (l.island && l.island->contains(x, y)) ? Surface::island : Surface::road;
      }
    }
  }
  const ValueNoise pan_texture(rng, kWorld, 8);
  const ValueNoise ms_texture(rng, kWorld, 8);
  for (const auto& b : place_buildings(spec, surface, object, rng))
    for (int y = b.y0; y <= b.y1; ++y)
      for (int x = b.x0; x <= b.x1; ++x) surface(x, y) = Surface::building;

  Scene scene;
  std::normal_distribution<double> pan_noise(0.0, 1.0);
  scene.pan = ScalarImage(kPanSize, kPanSize, kPanResolution);
  scene.truth.mask = BinaryMask(kPanSize, kPanSize);
  // The panchromatic frame is a window of the world shifted against the object.
  const int ox = kMargin - spec.offset.dx, oy = kMargin - spec.offset.dy;
  for (int y = 0; y < kPanSize; ++y) {
    for (int x = 0; x < kPanSize; ++x) {
      const Surface s = surface(x + ox, y + oy);
      double v = pan_gray(s);
      if (s == Surface::vegetation) v += 8.0 * pan_texture(x + ox, y + oy);
      if (spec.noise > 0) v += spec.noise * pan_noise(rng);
      scene.pan(x, y) = quantize(v);
      if (object(x + ox, y + oy)) scene.truth.mask.set(x, y);
    }
  }

  // Multispectral: 4x4 box average of the world, then sensor noise.
  const int f = kWorld / kMsSize;
  std::array<ScalarImage, 3> ch;
  for (auto& c : ch) c = ScalarImage(kMsSize, kMsSize, kMsResolution);
  std::normal_distribution<double> ms_noise(0.0, 1.0);
  const double ms_sigma = spec.noise / 4.0;
  for (int y = 0; y < kMsSize; ++y) {
    for (int x = 0; x < kMsSize; ++x) {
      std::array<double, 3> acc{};
      for (int sy = 0; sy < f; ++sy) {
        for (int sx = 0; sx < f; ++sx) {
          const int wx = x * f + sx, wy = y * f + sy;
          const Surface s = surface(wx, wy);
          Spectrum sp = spectrum(s);
          if (s == Surface::vegetation) sp.ch3 += 1.5 * ms_texture(wx, wy);
          acc[0] += sp.ch1;
          acc[1] += sp.ch2;
          acc[2] += sp.ch3;
        }
      }
      for (std::size_t c = 0; c < 3; ++c) {
        double v = acc[c] / (f * f);
        if (ms_sigma > 0) v += ms_sigma * ms_noise(rng);
        ch[c](x, y) = quantize(v);
      }
    }
  }
  scene.ms = MultiSpectralImage(std::move(ch[0]), std::move(ch[1]), std::move(ch[2]));
  scene.truth.offset = spec.offset;
  scene.truth.primitives = l.truth;
  scene.truth.arg = build_arg(l.truth);
  return scene;
}

Json to_json(const SceneSpec& s) {
  Json j = {{"id", s.id},
            {"kind", std::string(to_string(s.kind))},
            {"road_width", s.road_width},
            {"orientation", s.orientation},
            {"offset", {s.offset.dx, s.offset.dy}},
            {"noise", s.noise},
            {"clutter", s.clutter},
            {"seed", s.seed}};
  if (s.kind == SceneKind::bridge) {
    j["length"] = s.length;
    j["crossing_angle"] = s.crossing_angle;
    j["river_width"] = s.river_width;
  } else {
    j["radius"] = s.radius;
    j["arm_length"] = s.arm_length;
    j["arm_jitter"] = s.arm_jitter;
  }
  return j;
}

SceneSpec scene_spec_from_json(const Json& j) {
  try {
    SceneSpec s;
    s.id = j.at("id").get<std::string>();
    s.kind = scene_kind_from_string(j.at("kind").get<std::string>());
    s.road_width = j.at("road_width").get<double>();
    s.orientation = j.at("orientation").get<double>();
    s.offset = {j.at("offset").at(0).get<int>(), j.at("offset").at(1).get<int>()};
    s.noise = j.at("noise").get<double>();
    s.clutter = j.at("clutter").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
    if (s.kind == SceneKind::bridge) {
      s.length = j.at("length").get<double>();
      s.crossing_angle = j.at("crossing_angle").get<double>();
      s.river_width = j.at("river_width").get<double>();
    } else {
      s.radius = j.at("radius").get<double>();
      s.arm_length = j.at("arm_length").get<double>();
      s.arm_jitter = j.at("arm_jitter").get<std::array<double, 4>>();
    }
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("malformed scene spec: ") + e.what());
  }
}

void write_corpus(const std::vector<SceneSpec>& specs, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<Scene> scenes(specs.size());
  std::vector<std::string> errors(specs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < specs.size(); ++i) {
    try {
      scenes[i] = generate_scene(specs[i]);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < specs.size(); ++i)
    if (!errors[i].empty()) throw Error(ErrorCode::SpecError, specs[i].id + ": " + errors[i]);

  Json manifest = {{"scenes", Json::array()}};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    const auto& sc = scenes[i];
    write_raster(sc.pan, dir / (s.id + "_pan.pgm"));
    write_raster(sc.ms, dir / (s.id + "_ms.ppm"));
    write_mask(sc.truth.mask, dir / (s.id + "_truth.pgm"));
    Json prims = Json::array();
    for (const auto& p : sc.truth.primitives) prims.push_back(to_json(p));
    write_json({{"id", s.id},
                {"kind", std::string(to_string(s.kind))},
                {"offset", {sc.truth.offset.dx, sc.truth.offset.dy}},
                {"primitives", std::move(prims)},
                {"arg", to_json(sc.truth.arg)}},
               dir / (s.id + "_truth.json"));
    manifest["scenes"].push_back(to_json(s));
  }
  write_json(manifest, dir / "manifest.json");
}

}  // namespace carto
