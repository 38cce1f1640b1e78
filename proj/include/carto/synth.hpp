#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "carto/arg.hpp"
#include "carto/primitives.hpp"
#include "carto/raster.hpp"
#include "carto/serialize.hpp"

namespace carto {

enum class SceneKind { bridge, roundabout };

std::string_view to_string(SceneKind k);
SceneKind scene_kind_from_string(std::string_view s);

/// Geometry is in meters; angles are map bearings in radians.
struct SceneSpec {
  SceneKind kind = SceneKind::bridge;
  std::string id;
  double road_width = 24.0;
  double orientation = 0.0;   // bridge: road axis; roundabout: bearing of the first arm
  // Bridge.
  double length = 120.0;
  double crossing_angle = std::numbers::pi / 2;  // between road and river
  double river_width = 40.0;
  // Roundabout.
  double radius = 26.0;
  double arm_length = 40.0;
  std::array<double, 4> arm_jitter{};  // per-arm deviation from the 90 degree spacing
  Offset offset;                    // object displacement in the panchromatic frame, pixels
  double noise = 0.0;               // panchromatic gray-level std; multispectral uses noise / 4
  int clutter = 0;                  // number of buildings near the object
  std::uint64_t seed = 0;
};

void validate(const SceneSpec& spec);

/// Draws geometry uniformly from the supported ranges and an offset in [-10, 10]^2.
SceneSpec random_spec(SceneKind kind, std::uint64_t seed, double noise, int clutter);

struct GroundTruth {
  BinaryMask mask;  // panchromatic frame
  Offset offset;
  std::vector<Primitive> primitives;  // meters, panchromatic frame
  Arg arg;
};

struct Scene {
  ScalarImage pan;          // 128 x 128, 2.5 m
  MultiSpectralImage ms;    // 40 x 40, 10 m, object at the center
  GroundTruth truth;
};

inline constexpr int kPanSize = 128;
inline constexpr int kMsSize = 40;
inline constexpr double kPanResolution = 2.5;
inline constexpr double kMsResolution = 10.0;

Scene generate_scene(const SceneSpec& spec);

Json to_json(const SceneSpec& spec);
SceneSpec scene_spec_from_json(const Json& j);

/// Writes <id>_pan.pgm, <id>_ms.ppm, <id>_truth.pgm, <id>_truth.json per scene and manifest.json.
void write_corpus(const std::vector<SceneSpec>& specs, const std::filesystem::path& dir);

}  // namespace carto
