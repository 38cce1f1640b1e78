#include "carto/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "carto/morph.hpp"
#include "carto/raster_io.hpp"

namespace carto {
namespace {

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::InvalidArgument, "invalid value '" + value + "' for " + key);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out)) bad_value(key, v);
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

std::string fmt(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, p) : std::to_string(v);
}

std::string fmt(const StructuringElement& se) {
  return (se.shape == StructuringElement::Shape::disk ? "disk:" : "square:") + std::to_string(se.radius);
}

StructuringElement parse_se(const std::string& key, const std::string& v) {
  const auto colon = v.find(':');
  if (colon == std::string::npos) bad_value(key, v);
  const std::string shape = v.substr(0, colon);
  const int r = parse_int(key, v.substr(colon + 1));
  if (r < 0) bad_value(key, v);
  if (shape == "disk") return StructuringElement::disk(r);
  if (shape == "square") return StructuringElement::square(r);
  bad_value(key, v);
}

std::string_view to_string(ThresholdSource s) {
  switch (s) {
    case ThresholdSource::combined: return "combined";
    case ThresholdSource::ch1: return "ch1";
    case ThresholdSource::ch2: return "ch2";
    case ThresholdSource::ch3: return "ch3";
  }
  return "combined";
}

struct ConfigField {
  std::string key;
  std::function<void(PipelineConfig&, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

const std::vector<ConfigField>& fields() {
  static const std::vector<ConfigField> table = [] {
    std::vector<ConfigField> f;
    auto real = [&f](std::string key, auto member) {
      f.push_back({key, [key, member](PipelineConfig& c, const std::string& v) { member(c) = parse_double(key, v); },
                   [member](const PipelineConfig& c) { return fmt(member(const_cast<PipelineConfig&>(c))); }});
    };
    auto integer = [&f](std::string key, auto member) {
      f.push_back({key, [key, member](PipelineConfig& c, const std::string& v) { member(c) = parse_int(key, v); },
                   [member](const PipelineConfig& c) { return std::to_string(member(const_cast<PipelineConfig&>(c))); }});
    };
    auto flag = [&f](std::string key, auto member) {
      f.push_back({key, [key, member](PipelineConfig& c, const std::string& v) { member(c) = parse_bool(key, v); },
                   [member](const PipelineConfig& c) {
                     return std::string(member(const_cast<PipelineConfig&>(c)) ? "true" : "false");
                   }});
    };
    auto se = [&f](std::string key, auto member) {
      f.push_back({key, [key, member](PipelineConfig& c, const std::string& v) { member(c) = parse_se(key, v); },
                   [member](const PipelineConfig& c) { return fmt(member(const_cast<PipelineConfig&>(c))); }});
    };

    f.push_back({"corpus", [](PipelineConfig& c, const std::string& v) { c.corpus = v; },
                 [](const PipelineConfig& c) { return c.corpus.string(); }});
    f.push_back({"out", [](PipelineConfig& c, const std::string& v) { c.out = v; },
                 [](const PipelineConfig& c) { return c.out.string(); }});
    real("delta", [](PipelineConfig& c) -> double& { return c.spectral.delta; });
    f.push_back({"threshold-source",
                 [](PipelineConfig& c, const std::string& v) {
                   if (v == "combined") c.spectral.source = ThresholdSource::combined;
                   else if (v == "ch1") c.spectral.source = ThresholdSource::ch1;
                   else if (v == "ch2") c.spectral.source = ThresholdSource::ch2;
                   else if (v == "ch3") c.spectral.source = ThresholdSource::ch3;
                   else bad_value("threshold-source", v);
                 },
                 [](const PipelineConfig& c) { return std::string(to_string(c.spectral.source)); }});
    real("weight-1", [](PipelineConfig& c) -> double& { return c.spectral.weights.ch1; });
    real("weight-2", [](PipelineConfig& c) -> double& { return c.spectral.weights.ch2; });
    real("weight-3", [](PipelineConfig& c) -> double& { return c.spectral.weights.ch3; });
    integer("mode-window", [](PipelineConfig& c) -> int& { return c.spectral.mode_window; });
    real("sigma", [](PipelineConfig& c) -> double& { return c.canny.sigma; });
    real("high-percentile", [](PipelineConfig& c) -> double& { return c.canny.high_percentile; });
    real("low-ratio", [](PipelineConfig& c) -> double& { return c.canny.low_ratio; });
    f.push_back({"canny-thresholds",
                 [](PipelineConfig& c, const std::string& v) {
                   if (v == "auto") {
                     c.canny.thresholds.reset();
                     return;
                   }
                   const auto comma = v.find(',');
                   if (comma == std::string::npos) bad_value("canny-thresholds", v);
                   ThresholdPair t;
                   t.t_low = parse_double("canny-thresholds", v.substr(0, comma));
                   t.t_high = parse_double("canny-thresholds", v.substr(comma + 1));
                   if (t.t_low > t.t_high) bad_value("canny-thresholds", v);
                   c.canny.thresholds = t;
                 },
                 [](const PipelineConfig& c) {
                   return c.canny.thresholds ? fmt(c.canny.thresholds->t_low) + "," + fmt(c.canny.thresholds->t_high)
                                             : std::string("auto");
                 }});
    real("merge-dist", [](PipelineConfig& c) -> double& { return c.refine.merge_dist; });
    real("min-len", [](PipelineConfig& c) -> double& { return c.refine.min_len; });
    integer("smooth-window", [](PipelineConfig& c) -> int& { return c.refine.smooth_window; });
    integer("half-window", [](PipelineConfig& c) -> int& { return c.match.half_window; });
    se("match-se", [](PipelineConfig& c) -> StructuringElement& { return c.match.se; });
    se("boundary-se", [](PipelineConfig& c) -> StructuringElement& { return c.extraction.boundary_se; });
    integer("marker-prune", [](PipelineConfig& c) -> int& { return c.extraction.prune_spurs; });
    f.push_back({"minima-step",
                 [](PipelineConfig& c, const std::string& v) {
                   c.extraction.minima_step = static_cast<float>(parse_double("minima-step", v));
                 },
                 [](const PipelineConfig& c) { return fmt(c.extraction.minima_step); }});
    f.push_back({"decompose-mode",
                 [](PipelineConfig& c, const std::string& v) {
                   if (v == "shapes") c.decompose.mode = DecomposeMode::shapes;
                   else if (v == "skeleton") c.decompose.mode = DecomposeMode::skeleton;
                   else bad_value("decompose-mode", v);
                 },
                 [](const PipelineConfig& c) {
                   return std::string(c.decompose.mode == DecomposeMode::shapes ? "shapes" : "skeleton");
                 }});
    integer("prune-spurs", [](PipelineConfig& c) -> int& { return c.decompose.prune_spurs; });
    real("circularity", [](PipelineConfig& c) -> double& { return c.decompose.circularity; });
    integer("min-area", [](PipelineConfig& c) -> int& { return c.decompose.min_area; });
    real("adjacency-tol", [](PipelineConfig& c) -> double& { return c.arg.tolerance; });
    integer("min-support", [](PipelineConfig& c) -> int& { return c.min_support; });
    flag("model", [](PipelineConfig& c) -> bool& { return c.model; });
    f.push_back({"distance-mode",
                 [](PipelineConfig& c, const std::string& v) {
                   if (v == "nearest") c.distance = DistanceMode::nearest_prototype;
                   else if (v == "interval") c.distance = DistanceMode::interval;
                   else bad_value("distance-mode", v);
                 },
                 [](const PipelineConfig& c) {
                   return std::string(c.distance == DistanceMode::interval ? "interval" : "nearest");
                 }});
    real("correct", [](PipelineConfig& c) -> double& { return c.correct; });
    real("acceptable", [](PipelineConfig& c) -> double& { return c.acceptable; });
    flag("intermediates", [](PipelineConfig& c) -> bool& { return c.intermediates; });
    return f;
  }();
  return table;
}

struct SceneInput {
  std::string id;
  std::string kind;
};

std::vector<SceneInput> list_corpus(const std::filesystem::path& dir) {
  std::vector<SceneInput> out;
  const auto manifest = dir / "manifest.json";
  if (std::filesystem::exists(manifest)) {
    const Json j = read_json(manifest);
    try {
      for (const auto& s : j.at("scenes")) out.push_back({s.at("id").get<std::string>(), s.value("kind", "unknown")});
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::FormatError, "malformed manifest: " + std::string(e.what()));
    }
  } else if (std::filesystem::is_directory(dir)) {
    const std::string suffix = "_pan.pgm";
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.size() > suffix.size() && name.ends_with(suffix)) {
        const std::string id = name.substr(0, name.size() - suffix.size());
        const auto dash = id.find('_');
        out.push_back({id, dash == std::string::npos ? "unknown" : id.substr(0, dash)});
      }
    }
  } else {
    throw Error(ErrorCode::IoError, "corpus directory " + dir.string() + " not found");
  }
  std::sort(out.begin(), out.end(), [](const SceneInput& a, const SceneInput& b) { return a.id < b.id; });
  if (out.empty()) throw Error(ErrorCode::EmptyCorpus, "no scenes in " + dir.string());
  return out;
}

struct SceneState {
  SceneReport report;
  ScalarImage pan;
  MultiSpectralImage aligned;
  std::optional<BinaryMask> truth;
  Offset truth_offset;
  BinaryMask extracted;
  bool loaded = false;
  bool extracted_ok = false;
};

void load_scene(const PipelineConfig& cfg, SceneState& s) {
  const auto base = cfg.corpus / s.report.id;
  s.pan = read_gray(base.string() + "_pan.pgm");
  s.aligned = align_to_pan(read_multispectral(base.string() + "_ms.ppm"), s.pan);
  const std::filesystem::path truth_mask = base.string() + "_truth.pgm";
  const std::filesystem::path truth_json = base.string() + "_truth.json";
  if (std::filesystem::exists(truth_mask) && std::filesystem::exists(truth_json)) {
    s.truth = read_mask(truth_mask);
    if (!s.truth->same_shape(s.pan)) throw Error(ErrorCode::DimensionMismatch, "truth mask and pan sizes differ");
    const Json j = read_json(truth_json);
    try {
      s.truth_offset = {j.at("offset").at(0).get<int>(), j.at("offset").at(1).get<int>()};
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::FormatError, "malformed truth file: " + std::string(e.what()));
    }
  }
  s.loaded = true;
}

void run_stages(const PipelineConfig& cfg, const ThresholdPair& t, SceneState& s) {
  const auto dir = cfg.out / s.report.id;
  if (cfg.intermediates) std::filesystem::create_directories(dir);
  auto score = [&](const BinaryMask& result, Offset shift) -> std::optional<Evaluation> {
    if (!s.truth) return std::nullopt;
    return evaluate(result, translate(*s.truth, shift), cfg.correct, cfg.acceptable);
  };

  std::string stage = "segment";
  try {
    const BinaryMask seg = segment(s.aligned, t, cfg.spectral);
    // The segmentation lives in the multispectral frame, where the object is centered.
    s.report.stages.push_back({stage, score(seg, {-s.truth_offset.dx, -s.truth_offset.dy}),
                               {{"pixels", seg.count()}}});
    if (cfg.intermediates) {
      write_normalized(threshold_image(s.aligned, cfg.spectral), dir / "combined.pgm");
      write_mask(seg, dir / "segment.pgm");
    }

    stage = "match";
    const EdgeSet edges = detect_edges(s.pan, cfg.canny, cfg.refine);
    const BinaryMask edge_px = rasterize(edges, s.pan.width(), s.pan.height());
    const MatchResult m = match_mask(seg, edge_px, s.pan, cfg.match);
    const BinaryMask placed = translate(seg, m.offset);
    Json detail = to_json(m);
    detail["edge_points"] = edges.point_count();
    if (s.truth) detail["offset_error"] = {m.offset.dx - s.truth_offset.dx, m.offset.dy - s.truth_offset.dy};
    s.report.stages.push_back({stage, score(placed, {}), detail});
    if (cfg.intermediates) {
      write_json(to_json(edges), dir / "edges.json");
      write_mask(edge_px, dir / "edges.pgm");
      write_json(to_json(m), dir / "match.json");
      write_mask(placed, dir / "matched.pgm");
    }

    stage = "extract";
    const Extraction ex = extract(s.pan, placed, rasterize_dark_side(edges, s.pan, cfg.canny.sigma), cfg.extraction);
    s.extracted = ex.object;
    s.extracted_ok = true;
    s.report.stages.push_back({stage, score(ex.object, {}),
                               {{"pixels", ex.object.count()},
                                {"object_basins", ex.labels.object_basins},
                                {"background_basins", ex.labels.background_basins}}});
    if (cfg.intermediates) {
      write_mask(ex.markers.object_marker, dir / "marker_object.pgm");
      write_mask(ex.markers.background_marker, dir / "marker_background.pgm");
      write_normalized(ex.gradient, dir / "gradient.pgm");
      write_normalized(ex.relief, dir / "relief.pgm");
      write_raster(label_dump(ex.labels), dir / "labels.pgm");
      write_mask(ex.object, dir / "extract.pgm");
      write_raster(overlay(s.pan, ex.object, s.truth ? &*s.truth : nullptr), dir / "overlay.ppm");
    }
  } catch (const Error& e) {
    s.report.failed_stage = stage;
    s.report.error = e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    s.report.failed_stage = stage;
    s.report.error = std::string("IoError: ") + e.what();
  }
}

void run_models(const PipelineConfig& cfg, std::vector<SceneState>& scenes, EvalReport& report) {
  std::map<std::string, std::vector<std::size_t>> by_kind;
  std::vector<std::optional<Arg>> args(scenes.size());
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    auto& s = scenes[i];
    if (!s.extracted_ok) continue;
    try {
      DecomposeParams dp = cfg.decompose;
      dp.meters_per_pixel = s.pan.resolution();
      args[i] = build_arg(decompose(s.extracted, dp), cfg.arg);
      by_kind[s.report.kind].push_back(i);
    } catch (const Error& e) {
      s.report.failed_stage = "model";
      s.report.error = e.what();
    }
  }
  for (const auto& [kind, members] : by_kind) {
    std::vector<Arg> graphs;
    for (auto i : members) graphs.push_back(*args[i]);
    try {
      const auto protos = find_prototypes(graphs, cfg.min_support);
      if (protos.empty()) {
        report.models[kind] = {{"error", "no prototype reaches the minimum support"}};
        continue;
      }
      const ObjectModel model = generate_model(protos);
      report.models[kind] = to_json(model);
      if (cfg.intermediates) write_json(report.models[kind], cfg.out / ("model_" + kind + ".json"));
      for (auto i : members) {
        scenes[i].report.model_distance = model_distance(*args[i], model, cfg.distance);
        if (cfg.intermediates) write_json(to_json(*args[i]), cfg.out / scenes[i].report.id / "arg.json");
      }
    } catch (const Error& e) {
      report.models[kind] = {{"error", e.what()}};
    }
  }
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(f.key);
  return keys;
}

void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  const std::string k = normalize_key(trim(key));
  for (const auto& f : fields()) {
    if (f.key == k) {
      f.set(cfg, trim(value));
      return;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown configuration key '" + key + "'");
}

void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

std::vector<std::pair<std::string, std::string>> config_entries(const PipelineConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(cfg));
  return out;
}

void validate(const PipelineConfig& cfg) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
  };
  require(cfg.acceptable > 0 && cfg.correct <= 1 && cfg.acceptable <= cfg.correct,
          "need 0 < acceptable <= correct <= 1");
  require(cfg.spectral.delta >= 0, "delta must be non-negative");
  require(cfg.spectral.mode_window > 0, "mode-window must be positive");
  require(cfg.canny.sigma > 0, "sigma must be positive");
  require(cfg.canny.high_percentile > 0 && cfg.canny.high_percentile < 1, "high-percentile must lie in (0, 1)");
  require(cfg.canny.low_ratio > 0 && cfg.canny.low_ratio <= 1, "low-ratio must lie in (0, 1]");
  require(cfg.refine.smooth_window >= 1 && cfg.refine.smooth_window % 2 == 1, "smooth-window must be odd");
  require(cfg.match.half_window >= 0, "half-window must be non-negative");
  require(cfg.arg.tolerance >= 0, "adjacency-tol must be non-negative");
  require(cfg.min_support >= 1, "min-support must be at least 1");
  require(cfg.decompose.min_area >= 1, "min-area must be positive");
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::correct: return "correct";
    case Category::acceptable: return "acceptable";
    case Category::incorrect: return "incorrect";
  }
  return "incorrect";
}

Evaluation evaluate(const BinaryMask& result, const BinaryMask& truth, double correct, double acceptable) {
  if (!result.same_shape(truth)) throw Error(ErrorCode::DimensionMismatch, "result and truth sizes differ");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < result.size(); ++i) {
    inter += result.bits()[i] & truth.bits()[i];
    uni += result.bits()[i] | truth.bits()[i];
  }
  Evaluation e;
  e.iou = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  e.category = e.iou >= correct ? Category::correct : (e.iou >= acceptable ? Category::acceptable : Category::incorrect);
  return e;
}

MultiSpectralImage align_to_pan(const MultiSpectralImage& ms, const ScalarImage& pan) {
  const double ratio = ms.resolution() / pan.resolution();
  const int factor = static_cast<int>(std::lround(ratio));
  if (factor < 1 || std::abs(ratio - factor) > 1e-6) {
    throw Error(ErrorCode::DimensionMismatch, "resolution ratio must be a positive integer");
  }
  if (pan.width() % factor != 0 || pan.height() % factor != 0) {
    throw Error(ErrorCode::DimensionMismatch, "pan size is not a multiple of the resolution ratio");
  }
  const int cw = pan.width() / factor, ch = pan.height() / factor;
  if (cw > ms.width() || ch > ms.height()) {
    throw Error(ErrorCode::DimensionMismatch, "multispectral image does not cover the pan frame");
  }
  return magnify(clip_center(ms, cw, ch), factor);
}

BinaryMask segment(const MultiSpectralImage& aligned_ms, const ThresholdPair& t, const SpectralParams& params) {
  return keep_central_component(hysteresis_segment(threshold_image(aligned_ms, params), t), params.mode_window);
}

EdgeSet detect_edges(const ScalarImage& pan, const CannyParams& canny_params, const RefineParams& refine) {
  return refine_edges(canny(pan, canny_params), refine);
}

MultiSpectralImage overlay(const ScalarImage& pan, const BinaryMask& result, const BinaryMask* reference) {
  std::array<ScalarImage, 3> c{pan, pan, pan};
  for (auto& ch : c)
    for (auto& v : ch.pixels()) v = std::clamp(std::round(v), 0.0f, 255.0f);
  auto draw = [&](const BinaryMask& m, std::array<float, 3> rgb) {
    const BinaryMask contour = mask_minus(m, erode(m, StructuringElement::square(1)));
    for (int y = 0; y < m.height(); ++y)
      for (int x = 0; x < m.width(); ++x)
        if (contour(x, y))
          for (std::size_t k = 0; k < 3; ++k) c[k](x, y) = rgb[k];
  };
  if (reference) draw(*reference, {0, 255, 0});
  draw(result, {255, 0, 0});
  return MultiSpectralImage(std::move(c[0]), std::move(c[1]), std::move(c[2]));
}

EvalReport run_pipeline(const PipelineConfig& cfg) {
  validate(cfg);
  const auto inputs = list_corpus(cfg.corpus);
  std::filesystem::create_directories(cfg.out);

  std::vector<SceneState> scenes(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    scenes[i].report.id = inputs[i].id;
    scenes[i].report.kind = inputs[i].kind;
  }
  const auto n = static_cast<std::ptrdiff_t>(scenes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& s = scenes[static_cast<std::size_t>(i)];
    try {
      load_scene(cfg, s);
    } catch (const Error& e) {
      s.report.failed_stage = "load";
      s.report.error = e.what();
    }
  }

  EvalReport report;
  for (const auto& [k, v] : config_entries(cfg))
    if (k != "out") report.config[k] = v;
  std::vector<MultiSpectralImage> loaded;
  for (const auto& s : scenes)
    if (s.loaded) loaded.push_back(s.aligned);
  if (!loaded.empty()) report.threshold = corpus_mode_threshold(loaded, cfg.spectral);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& s = scenes[static_cast<std::size_t>(i)];
    if (s.loaded) run_stages(cfg, report.threshold, s);
  }
  if (cfg.model) run_models(cfg, scenes, report);

  for (auto& s : scenes) report.scenes.push_back(std::move(s.report));
  write_json(to_json(report), cfg.out / "report.json");
  std::ofstream txt(cfg.out / "report.txt", std::ios::binary);
  txt << format_table(report);
  if (!txt) throw Error(ErrorCode::IoError, "cannot write report table");
  return report;
}

std::map<std::string, std::map<std::string, std::array<int, 3>>> aggregate(const EvalReport& r) {
  std::map<std::string, std::map<std::string, std::array<int, 3>>> out;
  for (const auto& stage : kEvaluatedStages) {
    for (const auto& s : r.scenes) {
      Category c = Category::incorrect;
      for (const auto& o : s.stages)
        if (o.stage == stage && o.eval) c = o.eval->category;
      ++out[stage][s.kind][static_cast<std::size_t>(c)];
      ++out[stage]["all"][static_cast<std::size_t>(c)];
    }
  }
  return out;
}

Json to_json(const EvalReport& r) {
  Json scenes = Json::array();
  for (const auto& s : r.scenes) {
    Json stages = Json::object();
    for (const auto& o : s.stages) {
      Json e = o.detail;
      if (o.eval) {
        e["iou"] = o.eval->iou;
        e["category"] = std::string(to_string(o.eval->category));
      }
      stages[o.stage] = std::move(e);
    }
    Json j = {{"id", s.id}, {"kind", s.kind}, {"stages", std::move(stages)}};
    j["failed_stage"] = s.failed_stage ? Json(*s.failed_stage) : Json(nullptr);
    if (!s.error.empty()) j["error"] = s.error;
    if (s.model_distance) j["model_distance"] = *s.model_distance;
    scenes.push_back(std::move(j));
  }
  Json agg = Json::object();
  for (const auto& [stage, kinds] : aggregate(r)) {
    for (const auto& [kind, counts] : kinds) {
      agg[stage][kind] = {{"correct", counts[0]}, {"acceptable", counts[1]}, {"incorrect", counts[2]}};
    }
  }
  return {{"config", r.config},
          {"threshold", {{"t_high", r.threshold.t_high}, {"t_low", r.threshold.t_low}}},
          {"scenes", std::move(scenes)},
          {"aggregate", std::move(agg)},
          {"models", r.models}};
}

std::string format_table(const EvalReport& r) {
  static const std::map<std::string, std::string> label = {{"segment", "Segm."}, {"match", "Match."}, {"extract", "Extract."}};
  const auto agg = aggregate(r);
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof line, "%-9s %-11s %8s %11s %10s\n", "Stage", "Kind", "Correct", "Acceptable", "Incorrect");
  os << line;
  for (const auto& stage : kEvaluatedStages) {
    const auto it = agg.find(stage);
    if (it == agg.end()) continue;
    for (const auto& [kind, c] : it->second) {
      std::snprintf(line, sizeof line, "%-9s %-11s %8d %11d %10d\n", label.at(stage).c_str(), kind.c_str(), c[0], c[1], c[2]);
      os << line;
    }
  }
  return os.str();
}

}  // namespace carto
