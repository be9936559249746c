#pragma once

// JSON formats. Rationals are always strings ("3/2", "2"); points are
// referred to by label. Output objects keep a fixed key order so identical
// inputs produce byte-identical files.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "urykit/homotopy.hpp"
#include "urykit/stabilizer.hpp"

namespace urykit::io {

using Json = nlohmann::ordered_json;

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);
std::string dump(const Json& doc);

Json to_json(const Rat& r);
Rat rat_from_json(const Json& j);

/// {"points": [...], "dist": [[...], ...]}
Json space_to_json(const FinMetric& m);
FinMetric space_from_json(const Json& j);
FinMetric read_space(const std::filesystem::path& path);

/// A GrowingSpace with its provenance:
/// {"base": space, "added": [{"point": label, "domain": [...], "values": [...]}]}
Json growing_to_json(const GrowingSpace& s);
GrowingSpace growing_from_json(const Json& j);

/// Either a plain space file or a growing-space file.
GrowingSpace read_growing(const std::filesystem::path& path);

/// {"domain": [...], "values": [...]}
Json map_to_json(const GrowingSpace& s, const KatetovMap& f);
KatetovMap map_from_json(const GrowingSpace& s, const Json& j);

/// ["p", "q", ...] or {"points": [...]}
Json tuple_to_json(const GrowingSpace& s, std::span<const PointId> tuple);
std::vector<PointId> tuple_from_json(const GrowingSpace& s, const Json& j);

/// Comma separated labels.
std::vector<PointId> parse_label_list(const GrowingSpace& s, std::string_view text);

/// {"domain": [...], "range": [...], "fixed": "FixesA" | "FixesB" | "None"}
Json isometry_to_json(const GrowingSpace& s, const PartialIsometry& f);
PartialIsometry isometry_from_json(const GrowingSpace& s, const Json& j);

/// {"pattern": space, "cross": [[...]], "base_points": [...] (optional)}.
/// Row i of cross lists d(a'_i, y) for y in base_points order (default: all
/// points of the space in order). Returns the spec and the base point ids.
std::pair<ExtensionSpec, std::vector<PointId>> spec_from_json(const GrowingSpace& s, const Json& j);

/// {"anchors": [{"index": i, "target": label, "radius": r}]}
Json open_set_to_json(const GrowingSpace& s, const BasicOpenSet& v);
BasicOpenSet open_set_from_json(const GrowingSpace& s, const Json& j);

Json path_to_json(const GrowingSpace& s, const TuplePath& path);

struct TraceDocument {
  StabilizerInstance instance;
  std::vector<PointId> original_c;
  std::optional<DeflattenReport> deflatten;
  DescentTrace trace;
  std::uint64_t seed = 0;
};

Json trace_to_json(const TraceDocument& doc);
TraceDocument trace_from_json(const Json& j);

}  // namespace urykit::io
