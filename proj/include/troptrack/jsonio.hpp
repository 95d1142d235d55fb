#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"

#include "troptrack/surface.hpp"
#include "troptrack/tracks.hpp"
#include "troptrack/tropical.hpp"

namespace troptrack {

using Json = nlohmann::json;

// Malformed input (syntax, missing keys, bad rationals). Distinct from Error
// so the CLI can map it to its own exit code.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Rationals are serialized as "p/q" with q > 0, including integers ("3/1").
std::string rat_pq(const Rat& r);
Rat rat_from_json(const Json& j);

Json vec_to_json(const Vec& v);
Json mat_to_json(const Mat& m);
Json imat_to_json(const IMat& m);

Json surface_to_json(const SurfaceData& s);
SurfaceData surface_from_json(const Json& j);

Json triangulation_to_json(const Triangulation& tri);
Triangulation triangulation_from_json(const Json& j);

Json point_to_json(const TropicalPoint& p, const Triangulation& tri);
TropicalPoint point_from_json(const Json& j, const Triangulation& tri);

Json track_to_json(const TrainTrack& t);
TrainTrack track_from_json(const Json& j, const Triangulation& tri);

Json loop_to_json(const FlipWord& word, int power, const std::string& base);
struct LoopSpec {
  FlipWord word;
  int power = 1;
  std::string base;
};
LoopSpec loop_from_json(const Json& j);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Json& j);

Json load_json_file(const std::string& path);

}  // namespace troptrack
