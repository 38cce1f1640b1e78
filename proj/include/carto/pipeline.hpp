#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "carto/arg.hpp"
#include "carto/edges.hpp"
#include "carto/match.hpp"
#include "carto/model.hpp"
#include "carto/primitives.hpp"
#include "carto/serialize.hpp"
#include "carto/spectral.hpp"
#include "carto/watershed.hpp"

namespace carto {

struct PipelineConfig {
  std::filesystem::path corpus = "corpus";
  std::filesystem::path out = "out";
  SpectralParams spectral;
  CannyParams canny;
  RefineParams refine;
  MatchParams match;
  ExtractionParams extraction;
  DecomposeParams decompose;
  ArgParams arg;
  int min_support = 1;
  bool model = true;
  DistanceMode distance = DistanceMode::nearest_prototype;
  double correct = 0.8;
  double acceptable = 0.5;
  bool intermediates = true;
};

/// Configuration keys, all spelled with dashes; underscores are accepted as aliases.
std::vector<std::string> config_keys();
/// InvalidArgument for an unknown key or an unparsable value.
void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);
/// key = value lines; '#' starts a comment.
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path);
/// Every key with its current value, in config_keys() order.
std::vector<std::pair<std::string, std::string>> config_entries(const PipelineConfig& cfg);
/// InvalidArgument unless 0 < acceptable <= correct <= 1 and parameters are in range.
void validate(const PipelineConfig& cfg);

enum class Category { correct, acceptable, incorrect };
std::string_view to_string(Category c);

struct Evaluation {
  double iou = 0.0;
  Category category = Category::incorrect;
};

/// IoU of two same-sized masks (1 when both are empty) and its category.
Evaluation evaluate(const BinaryMask& result, const BinaryMask& truth, double correct = 0.8, double acceptable = 0.5);

// Individual stages, shared by the pipeline and the command line.

/// Multispectral window covering the panchromatic frame, resampled onto its grid.
MultiSpectralImage align_to_pan(const MultiSpectralImage& ms, const ScalarImage& pan);
BinaryMask segment(const MultiSpectralImage& aligned_ms, const ThresholdPair& t, const SpectralParams& params);
EdgeSet detect_edges(const ScalarImage& pan, const CannyParams& canny, const RefineParams& refine);

/// Mask contours drawn over the panchromatic image: result in red, reference in green.
MultiSpectralImage overlay(const ScalarImage& pan, const BinaryMask& result, const BinaryMask* reference = nullptr);

struct StageOutcome {
  std::string stage;
  std::optional<Evaluation> eval;
  Json detail = Json::object();
};

struct SceneReport {
  std::string id;
  std::string kind;
  std::vector<StageOutcome> stages;  // completed stages, in order
  std::optional<std::string> failed_stage;
  std::string error;
  std::optional<double> model_distance;
};

struct EvalReport {
  ThresholdPair threshold;
  std::vector<SceneReport> scenes;  // ordered by id
  Json models = Json::object();      // per kind
  Json config = Json::object();
};

inline const std::vector<std::string> kEvaluatedStages = {"segment", "match", "extract"};

/// Runs every stage on every scene of cfg.corpus and writes intermediates plus
/// report.json and report.txt under cfg.out. Scene failures are recorded, not thrown.
EvalReport run_pipeline(const PipelineConfig& cfg);

Json to_json(const EvalReport& r);
/// Counts per stage, kind and category; failed or unscored stages count as incorrect.
std::map<std::string, std::map<std::string, std::array<int, 3>>> aggregate(const EvalReport& r);
std::string format_table(const EvalReport& r);

}  // namespace carto
