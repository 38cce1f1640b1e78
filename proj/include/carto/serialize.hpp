#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>
#include "carto/arg.hpp"
#include "carto/edges.hpp"
#include "carto/match.hpp"
#include "carto/model.hpp"
#include "carto/primitives.hpp"

namespace carto {

using Json = nlohmann::json;

Json to_json(const EdgeSet& edges);
EdgeSet edges_from_json(const Json& j);

Json to_json(const Arg& g);
Arg arg_from_json(const Json& j);

Json to_json(const ObjectModel& m);
ObjectModel model_from_json(const Json& j);

Json to_json(const MatchResult& r);
MatchResult match_result_from_json(const Json& j);

Json to_json(const Primitive& p);

/// Pretty-printed with a trailing newline; IoError on failure.
void write_json(const Json& j, const std::filesystem::path& path);
/// IoError if unreadable, FormatError if not valid JSON.
Json read_json(const std::filesystem::path& path);

}  // namespace carto
