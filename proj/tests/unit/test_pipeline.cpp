#include <doctest.h>

#include <fstream>
#include <sstream>

#include "carto/pipeline.hpp"
#include "carto/raster_io.hpp"
#include "carto/synth.hpp"
#include "oracles.hpp"

using namespace carto;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<SceneSpec> specs(int per_kind, std::uint64_t seed, double noise, int clutter) {
  std::vector<SceneSpec> out;
  for (int i = 0; i < per_kind; ++i)
    for (auto kind : {SceneKind::bridge, SceneKind::roundabout}) {
      auto s = random_spec(kind, seed + static_cast<std::uint64_t>(i) * 7919, noise, clutter);
      s.id = std::string(to_string(kind)) + "_" + std::to_string(i);
      out.push_back(s);
    }
  return out;
}

PipelineConfig config_for(const std::filesystem::path& corpus, const std::filesystem::path& out) {
  PipelineConfig cfg;
  cfg.corpus = corpus;
  cfg.out = out;
  return cfg;
}

const StageOutcome* find_stage(const SceneReport& s, const std::string& name) {
  for (const auto& o : s.stages)
    if (o.stage == name) return &o;
  return nullptr;
}

}  // namespace

TEST_CASE("evaluation categories") {
  const auto sq = oracle::filled_rect(20, 20, 2, 2, 9, 9);
  auto e = evaluate(sq, sq);
  CHECK(e.iou == 1.0);
  CHECK(e.category == Category::correct);
  e = evaluate(sq, oracle::filled_rect(20, 20, 12, 12, 15, 15));
  CHECK(e.iou == 0.0);
  CHECK(e.category == Category::incorrect);
  // Equal squares overlapping by half: 32 / 96.
  e = evaluate(sq, oracle::filled_rect(20, 20, 6, 2, 13, 9));
  CHECK(e.iou == doctest::Approx(1.0 / 3.0));
  CHECK(e.category == Category::incorrect);
  e = evaluate(BinaryMask(5, 5), BinaryMask(5, 5));
  CHECK(e.iou == 1.0);
  CHECK(e.category == Category::correct);
  CHECK(evaluate(sq, oracle::filled_rect(20, 20, 2, 2, 9, 5)).category == Category::acceptable);
  CHECK_THROWS_AS(evaluate(sq, BinaryMask(5, 5)), Error);
}

TEST_CASE("configuration keys, aliases and files") {
  PipelineConfig cfg;
  set_config_value(cfg, "delta", "12");
  CHECK(cfg.spectral.delta == 12.0);
  set_config_value(cfg, "half_window", "7");
  CHECK(cfg.match.half_window == 7);
  set_config_value(cfg, "match-se", "square:3");
  CHECK(cfg.match.se.shape == StructuringElement::Shape::square);
  CHECK(cfg.match.se.radius == 3);
  set_config_value(cfg, "canny-thresholds", "4,9");
  REQUIRE(cfg.canny.thresholds.has_value());
  CHECK(cfg.canny.thresholds->t_high == 9.0);
  set_config_value(cfg, "canny-thresholds", "auto");
  CHECK_FALSE(cfg.canny.thresholds.has_value());
  set_config_value(cfg, "distance-mode", "interval");
  CHECK(cfg.distance == DistanceMode::interval);
  CHECK_THROWS_AS(set_config_value(cfg, "no-such-key", "1"), Error);
  CHECK_THROWS_AS(set_config_value(cfg, "delta", "lots"), Error);

  const auto dir = oracle::scratch_dir("config");
  std::ofstream(dir / "run.cfg") << "# comment\nsigma = 2.5\nmin-support=2   # trailing\n\n";
  apply_config_file(cfg, dir / "run.cfg");
  CHECK(cfg.canny.sigma == 2.5);
  CHECK(cfg.min_support == 2);
  std::ofstream(dir / "bad.cfg") << "sigma\n";
  CHECK_THROWS_AS(apply_config_file(cfg, dir / "bad.cfg"), Error);

  // Every key round-trips through its printed value.
  PipelineConfig copy;
  for (const auto& [k, v] : config_entries(cfg)) set_config_value(copy, k, v);
  CHECK(config_entries(copy) == config_entries(cfg));
  CHECK(config_entries(cfg).size() == config_keys().size());
}

TEST_CASE("invalid thresholds are rejected") {
  PipelineConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.correct = 0.4;
  cfg.acceptable = 0.5;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.correct = 1.2;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.acceptable = 0.0;
  CHECK_THROWS_AS(validate(cfg), Error);
}

TEST_CASE("alignment clips and magnifies the multispectral image onto the pan grid") {
  const auto scene = generate_scene(random_spec(SceneKind::bridge, 3, 0, 0));
  const auto aligned = align_to_pan(scene.ms, scene.pan);
  CHECK(aligned.width() == kPanSize);
  CHECK(aligned.resolution() == doctest::Approx(kPanResolution));
  CHECK(aligned == magnify(clip_center(scene.ms, 32, 32), 4));
  CHECK_THROWS_AS(align_to_pan(scene.ms, ScalarImage(130, 128, 2.5)), Error);
}

TEST_CASE("noise-free single scene extracts the object") {
  const auto root = oracle::scratch_dir("pipeline_clean");
  auto spec = random_spec(SceneKind::roundabout, 8, 0, 0);
  spec.offset = {0, 0};
  spec.id = "roundabout_0";
  write_corpus({spec}, root / "corpus");
  const auto report = run_pipeline(config_for(root / "corpus", root / "out"));
  REQUIRE(report.scenes.size() == 1);
  const auto& s = report.scenes[0];
  CHECK_FALSE(s.failed_stage.has_value());
  const auto* ex = find_stage(s, "extract");
  REQUIRE(ex);
  REQUIRE(ex->eval);
  CHECK(ex->eval->iou >= 0.95);
  CHECK(ex->eval->category == Category::correct);
  const auto* m = find_stage(s, "match");
  REQUIRE(m);
  CHECK(m->detail.at("dx") == 0);
  CHECK(m->detail.at("dy") == 0);
  for (const char* f : {"segment.pgm", "edges.json", "match.json", "matched.pgm", "marker_object.pgm",
                        "marker_background.pgm", "relief.pgm", "labels.pgm", "extract.pgm", "overlay.ppm"})
    CHECK(std::filesystem::exists(root / "out" / "roundabout_0" / f));
  CHECK(std::filesystem::exists(root / "out" / "report.json"));
  CHECK(std::filesystem::exists(root / "out" / "report.txt"));
}

TEST_CASE("one unreadable scene fails at load and the rest complete") {
  const auto root = oracle::scratch_dir("pipeline_broken");
  write_corpus(specs(2, 100, 4, 1), root / "corpus");
  std::ofstream(root / "corpus" / "bridge_1_ms.ppm", std::ios::binary | std::ios::trunc) << "P6\ngarbage";
  const auto report = run_pipeline(config_for(root / "corpus", root / "out"));
  REQUIRE(report.scenes.size() == 4);
  for (const auto& s : report.scenes) {
    if (s.id == "bridge_1") {
      CHECK(s.failed_stage == std::optional<std::string>("load"));
      CHECK(s.stages.empty());
      CHECK(s.error.find("FormatError") != std::string::npos);
    } else {
      CHECK(s.stages.size() == 3);
    }
  }
  // Category counts always cover the whole corpus.
  for (const auto& [stage, kinds] : aggregate(report)) {
    const auto& all = kinds.at("all");
    CHECK(all[0] + all[1] + all[2] == 4);
  }
}

TEST_CASE("a failing stage stops the scene") {
  const auto root = oracle::scratch_dir("pipeline_stop");
  auto spec = random_spec(SceneKind::bridge, 9, 0, 0);
  spec.id = "bridge_0";
  write_corpus({spec}, root / "corpus");
  // Flat inputs select the whole frame and leave no room for a background marker.
  const auto ms = read_multispectral(root / "corpus" / "bridge_0_ms.ppm");
  const ScalarImage flat(ms.width(), ms.height(), ms.resolution(), 50.0f);
  write_raster(MultiSpectralImage(flat, flat, flat), root / "corpus" / "bridge_0_ms.ppm");
  write_raster(ScalarImage(kPanSize, kPanSize, kPanResolution, 90.0f), root / "corpus" / "bridge_0_pan.pgm");
  const PipelineConfig cfg = config_for(root / "corpus", root / "out");
  const auto report = run_pipeline(cfg);
  const auto& s = report.scenes.at(0);
  REQUIRE(s.failed_stage.has_value());
  CHECK(*s.failed_stage == "extract");
  CHECK(s.error.find("EmptyMarker") != std::string::npos);
  const auto failed = std::find(kEvaluatedStages.begin(), kEvaluatedStages.end(), *s.failed_stage);
  REQUIRE(failed != kEvaluatedStages.end());
  for (auto it = failed + 1; it != kEvaluatedStages.end(); ++it) CHECK(find_stage(s, *it) == nullptr);
  CHECK(find_stage(s, *s.failed_stage) == nullptr);
}

TEST_CASE("repeated runs give byte-identical reports") {
  const auto root = oracle::scratch_dir("pipeline_repeat");
  write_corpus(specs(2, 200, 8, 2), root / "corpus");
  run_pipeline(config_for(root / "corpus", root / "a"));
  run_pipeline(config_for(root / "corpus", root / "b"));
  CHECK(slurp(root / "a" / "report.json") == slurp(root / "b" / "report.json"));
  CHECK(slurp(root / "a" / "report.txt") == slurp(root / "b" / "report.txt"));
  CHECK(slurp(root / "a" / "bridge_0" / "extract.pgm") == slurp(root / "b" / "bridge_0" / "extract.pgm"));
  const auto table = slurp(root / "a" / "report.txt");
  CHECK(table.find("Segm.") != std::string::npos);
  CHECK(table.find("Extract.") != std::string::npos);
  CHECK(table.find("Acceptable") != std::string::npos);
}

TEST_CASE("missing or empty corpus") {
  const auto root = oracle::scratch_dir("pipeline_empty");
  auto code_of = [](const PipelineConfig& cfg) {
    try {
      run_pipeline(cfg);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of(config_for(root / "nowhere", root / "out")) == ErrorCode::IoError);
  std::filesystem::create_directories(root / "empty");
  CHECK(code_of(config_for(root / "empty", root / "out")) == ErrorCode::EmptyCorpus);
}
