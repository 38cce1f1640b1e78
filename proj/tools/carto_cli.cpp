#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "carto/pipeline.hpp"
#include "carto/raster_io.hpp"
#include "carto/synth.hpp"

namespace {

using namespace carto;

enum Exit { kOk = 0, kUsage = 1, kData = 2, kBudget = 3 };

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::BudgetExceeded: return kBudget;
    case ErrorCode::InvalidArgument:
    case ErrorCode::SpecError: return kUsage;
    default: return kData;
  }
}

// Config keys exposed as --<key> flags; values are applied after the config file.
struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app, bool with_paths) {
    app->add_option("--config", file, "key = value configuration file");
    for (const auto& key : config_keys()) {
      if (!with_paths && (key == "corpus" || key == "out")) continue;
      if (app->get_option_no_throw("--" + key) != nullptr) continue;  // subcommand-specific meaning wins
      app->add_option("--" + key, values[key], "configuration override");
    }
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!file.empty()) apply_config_file(cfg, file);
    for (const auto& [k, v] : values)
      if (!v.empty()) set_config_value(cfg, k, v);
    validate(cfg);
    return cfg;
  }
};

void emit(const Json& j, const std::string& out) {
  if (out.empty()) std::cout << j.dump(2) << '\n';
  else write_json(j, out);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

Arg load_arg(const std::string& path, const PipelineConfig& cfg) {
  if (path.ends_with(".json")) {
    const Json j = read_json(path);
    return arg_from_json(j.contains("arg") ? j.at("arg") : j);
  }
  const BinaryMask m = read_mask(path);
  return build_arg(decompose(m, cfg.decompose), cfg.arg);
}


// Single scene: --ms file, --pan file, --out mask. Corpus: --ms directory; frames come from
// <id>_pan.pgm in --pan (default: the same directory); one threshold for the whole corpus.
void run_segment(const std::filesystem::path& ms_path, std::filesystem::path pan_path, std::filesystem::path out,
                 double t_high, const SpectralParams& spectral) {
  const bool corpus = std::filesystem::is_directory(ms_path);
  std::vector<std::pair<std::string, MultiSpectralImage>> scenes;
  if (corpus) {
    if (pan_path.empty()) pan_path = ms_path;
    const std::string suffix = "_ms.ppm";
    std::vector<std::string> ids;
    for (const auto& entry : std::filesystem::directory_iterator(ms_path)) {
      const std::string name = entry.path().filename().string();
      if (name.size() > suffix.size() && name.ends_with(suffix)) ids.push_back(name.substr(0, name.size() - suffix.size()));
    }
    std::sort(ids.begin(), ids.end());
    if (ids.empty()) throw Error(ErrorCode::EmptyCorpus, "no *_ms.ppm files in " + ms_path.string());
    for (const auto& id : ids)
      scenes.emplace_back(id, align_to_pan(read_multispectral(ms_path / (id + suffix)), read_gray(pan_path / (id + "_pan.pgm"))));
  } else {
    if (pan_path.empty()) throw Error(ErrorCode::InvalidArgument, "--pan is required for a single scene");
    scenes.emplace_back("", align_to_pan(read_multispectral(ms_path), read_gray(pan_path)));
  }

  ThresholdPair t{t_high, t_high - spectral.delta};
  if (std::isnan(t_high)) {
    std::vector<MultiSpectralImage> images;
    for (const auto& sc : scenes) images.push_back(sc.second);
    t = corpus_mode_threshold(images, spectral);
  }
  std::ostringstream report;
  report << "t_high " << t.t_high << "\nt_low " << t.t_low << '\n';
  if (corpus) {
    if (out == "segment.pgm") out = "segment";
    std::filesystem::create_directories(out);
    for (const auto& [id, aligned] : scenes) write_mask(segment(aligned, t, spectral), out / (id + "_segment.pgm"));
    std::ofstream txt(out / "threshold.txt", std::ios::binary);
    txt << report.str();
    if (!txt) throw Error(ErrorCode::IoError, "cannot write threshold report");
  } else {
    write_mask(segment(scenes.front().second, t, spectral), out);
  }
  std::cout << report.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object extraction from paired panchromatic and multispectral rasters"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  std::string kinds = "bridge,roundabout", synth_out = "corpus";
  int n = 20, clutter = 0;
  std::uint64_t seed = 7;
  double noise = 0.0;
  synth->add_option("--kind", kinds, "comma-separated scene kinds");
  synth->add_option("--n", n, "scenes per kind")->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed, "base seed");
  synth->add_option("--out", synth_out, "output directory");
  synth->add_option("--noise", noise, "panchromatic noise std (gray levels)")->check(CLI::NonNegativeNumber);
  synth->add_option("--clutter", clutter, "buildings per scene")->check(CLI::NonNegativeNumber);

  // segment
  auto* seg = app.add_subcommand("segment", "spectral segmentation of one scene");
  std::string seg_ms, seg_pan, seg_out = "segment.pgm";
  double t_high = std::numeric_limits<double>::quiet_NaN();
  ConfigFlags seg_cfg;
  seg->add_option("--ms", seg_ms, "multispectral PPM, or a corpus directory of <id>_ms.ppm files")->required();
  seg->add_option("--pan", seg_pan, "panchromatic PGM (or directory) defining the output frame");
  seg->add_option("--out", seg_out, "output mask, or a directory in corpus mode");
  seg->add_option("--t-high", t_high, "high threshold; default: mode of the central window");
  seg_cfg.attach(seg, false);

  // edges
  auto* edg = app.add_subcommand("edges", "edge chains of a panchromatic image");
  std::string edg_pan, edg_out = "edges.json", edg_raster;
  ConfigFlags edg_cfg;
  edg->add_option("--pan", edg_pan, "panchromatic PGM")->required();
  edg->add_option("--out", edg_out, "edge JSON");
  edg->add_option("--raster", edg_raster, "also write the rasterized edges");
  edg_cfg.attach(edg, false);

  // match
  auto* mat = app.add_subcommand("match", "align a mask with the panchromatic edges");
  std::string mat_mask, mat_pan, mat_edges, mat_out;
  ConfigFlags mat_cfg;
  mat->add_option("--mask", mat_mask, "segmentation mask")->required();
  mat->add_option("--pan", mat_pan, "panchromatic PGM")->required();
  mat->add_option("--edges", mat_edges, "edge JSON")->required();
  mat->add_option("--out", mat_out, "result JSON (default: stdout)");
  mat_cfg.attach(mat, false);

  // extract
  auto* ext = app.add_subcommand("extract", "marker-controlled watershed extraction");
  std::string ext_mask, ext_pan, ext_edges, ext_match, ext_out = "extract.pgm";
  ConfigFlags ext_cfg;
  ext->add_option("--mask", ext_mask, "segmentation mask")->required();
  ext->add_option("--pan", ext_pan, "panchromatic PGM")->required();
  ext->add_option("--edges", ext_edges, "edge JSON")->required();
  ext->add_option("--match", ext_match, "match JSON; the mask is shifted by its offset");
  ext->add_option("--out", ext_out, "output mask");
  ext_cfg.attach(ext, false);

  // model
  auto* mdl = app.add_subcommand("model", "build an object model from example masks or graphs");
  std::vector<std::string> mdl_in;
  std::string mdl_out = "model.json";
  ConfigFlags mdl_cfg;
  mdl->add_option("inputs", mdl_in, "mask PGMs or graph JSON files")->required();
  mdl->add_option("--out", mdl_out, "model JSON");
  mdl_cfg.attach(mdl, false);

  // score
  auto* scr = app.add_subcommand("score", "distance of a mask or graph to a model");
  std::string scr_model, scr_in;
  ConfigFlags scr_cfg;
  scr->add_option("--model", scr_model, "model JSON")->required();
  scr->add_option("input", scr_in, "mask PGM or graph JSON")->required();
  scr_cfg.attach(scr, false);

  // eval
  auto* evl = app.add_subcommand("eval", "IoU and category of a result against truth");
  std::string evl_res, evl_truth;
  ConfigFlags evl_cfg;
  evl->add_option("--result", evl_res, "result mask")->required();
  evl->add_option("--truth", evl_truth, "truth mask")->required();
  evl_cfg.attach(evl, false);

  // pipeline
  auto* pip = app.add_subcommand("pipeline", "run every stage over a corpus");
  ConfigFlags pip_cfg;
  pip_cfg.attach(pip, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) {
      std::vector<SceneSpec> specs;
      const auto kind_list = split_list(kinds);
      if (kind_list.empty()) throw Error(ErrorCode::InvalidArgument, "no scene kind given");
      for (std::size_t k = 0; k < kind_list.size(); ++k) {
        const SceneKind kind = scene_kind_from_string(kind_list[k]);
        for (int i = 0; i < n; ++i) {
          const std::uint64_t s = seed * 1'000'003ULL + k * 10'007ULL + static_cast<std::uint64_t>(i);
          SceneSpec spec = random_spec(kind, s, noise, clutter);
          char id[64];
          std::snprintf(id, sizeof id, "%s_%03d", kind_list[k].c_str(), i);
          spec.id = id;
          specs.push_back(spec);
        }
      }
      write_corpus(specs, synth_out);
      std::cout << "wrote " << specs.size() << " scenes to " << synth_out << '\n';
    } else if (*seg) {
      const PipelineConfig cfg = seg_cfg.resolve();
      run_segment(seg_ms, seg_pan, seg_out, t_high, cfg.spectral);
    } else if (*edg) {
      const PipelineConfig cfg = edg_cfg.resolve();
      const auto pan = read_gray(edg_pan);
      const EdgeSet e = detect_edges(pan, cfg.canny, cfg.refine);
      write_json(to_json(e), edg_out);
      if (!edg_raster.empty()) write_mask(rasterize(e, pan.width(), pan.height()), edg_raster);
    } else if (*mat) {
      const PipelineConfig cfg = mat_cfg.resolve();
      const auto pan = read_gray(mat_pan);
      const MatchResult r = match_mask(read_mask(mat_mask), edges_from_json(read_json(mat_edges)), pan, cfg.match);
      if (r.no_edges) std::cerr << "warning: no edges to match against\n";
      emit(to_json(r), mat_out);
    } else if (*ext) {
      const PipelineConfig cfg = ext_cfg.resolve();
      const auto pan = read_gray(ext_pan);
      BinaryMask mask = read_mask(ext_mask);
      if (!ext_match.empty()) mask = translate(mask, match_result_from_json(read_json(ext_match)).offset);
      const auto edge_px = rasterize_dark_side(edges_from_json(read_json(ext_edges)), pan, cfg.canny.sigma);
      write_mask(extract(pan, mask, edge_px, cfg.extraction).object, ext_out);
    } else if (*mdl) {
      const PipelineConfig cfg = mdl_cfg.resolve();
      std::vector<Arg> args;
      for (const auto& p : mdl_in) args.push_back(load_arg(p, cfg));
      const ObjectModel m = generate_model(find_prototypes(args, cfg.min_support));
      write_json(to_json(m), mdl_out);
    } else if (*scr) {
      const PipelineConfig cfg = scr_cfg.resolve();
      const ObjectModel m = model_from_json(read_json(scr_model));
      std::cout << Json{{"distance", model_distance(load_arg(scr_in, cfg), m, cfg.distance)}}.dump() << '\n';
    } else if (*evl) {
      const PipelineConfig cfg = evl_cfg.resolve();
      const Evaluation e = evaluate(read_mask(evl_res), read_mask(evl_truth), cfg.correct, cfg.acceptable);
      std::cout << Json{{"iou", e.iou}, {"category", std::string(to_string(e.category))}}.dump() << '\n';
    } else if (*pip) {
      const PipelineConfig cfg = pip_cfg.resolve();
      const EvalReport r = run_pipeline(cfg);
      std::cout << format_table(r);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
