#include "troptrack/jsonio.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace troptrack {

namespace {

const Json& expect(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string("missing key '") + key + "'");
  return j.at(key);
}

int expect_int(const Json& j, const char* what) {
  if (!j.is_number_integer())
    throw ParseError(std::string(what) + " must be an integer");
  return j.get<int>();
}

std::string expect_str(const Json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

}  // namespace

std::string rat_pq(const Rat& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r) << "/"
     << boost::multiprecision::denominator(r);
  return os.str();
}

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) {
    auto r = parse_rat(j.get<std::string>());
    if (!r) throw ParseError("bad rational '" + j.get<std::string>() + "'");
    return *r;
  }
  throw ParseError("rationals must be \"p/q\" strings or integers");
}

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (const Rat& r : v) a.push_back(rat_pq(r));
  return a;
}

Json mat_to_json(const Mat& m) {
  Json a = Json::array();
  for (const Vec& row : m) a.push_back(vec_to_json(row));
  return a;
}

Json imat_to_json(const IMat& m) {
  Json a = Json::array();
  for (const auto& row : m) a.push_back(row);
  return a;
}

Json surface_to_json(const SurfaceData& s) {
  return Json{{"genus", s.genus}, {"punctures", s.punctures}};
}

SurfaceData surface_from_json(const Json& j) {
  SurfaceData s;
  s.genus = expect_int(expect(j, "genus"), "genus");
  const Json& ps = expect(j, "punctures");
  if (!ps.is_array()) throw ParseError("punctures must be an array");
  for (const Json& p : ps) s.punctures.push_back(expect_str(p, "puncture id"));
  return s;
}

Json triangulation_to_json(const Triangulation& tri) {
  Json triangles = Json::array();
  for (const auto& t : tri.tris) {
    Json sides = Json::array();
    for (const auto& s : t) {
      Json side{{"arc", s.arc}};
      if (s.flip) side["flip"] = true;
      sides.push_back(std::move(side));
    }
    triangles.push_back(std::move(sides));
  }
  Json labels{{"name", tri.name}, {"surface", surface_to_json(tri.surface)}};
  return Json{{"arcs", tri.arcs}, {"labels", std::move(labels)},
              {"triangles", std::move(triangles)}};
}

Triangulation triangulation_from_json(const Json& j) {
  const Json& labels = expect(j, "labels");
  SurfaceData surface = surface_from_json(expect(labels, "surface"));
  std::string name;
  if (labels.contains("name")) name = expect_str(labels.at("name"), "name");

  std::vector<ArcId> arcs;
  const Json& ja = expect(j, "arcs");
  if (!ja.is_array()) throw ParseError("arcs must be an array");
  for (const Json& a : ja) arcs.push_back(expect_int(a, "arc id"));

  std::vector<TriangleSides> tris;
  const Json& jt = expect(j, "triangles");
  if (!jt.is_array()) throw ParseError("triangles must be an array");
  for (const Json& t : jt) {
    if (!t.is_array() || t.size() != 3)
      throw ParseError("each triangle must list exactly three sides");
    TriangleSides sides;
    for (int i = 0; i < 3; ++i) {
      const Json& s = t.at(i);
      sides[i].arc = expect_int(expect(s, "arc"), "arc");
      sides[i].flip = s.contains("flip") && s.at("flip").is_boolean() &&
                      s.at("flip").get<bool>();
    }
    tris.push_back(sides);
  }
  return build_triangulation(surface, arcs, tris, name);
}

Json point_to_json(const TropicalPoint& p, const Triangulation& tri) {
  Json coords = Json::object();
  for (std::size_t i = 0; i < tri.arcs.size(); ++i)
    coords[std::to_string(tri.arcs[i])] = rat_pq(p.coords[i]);
  return Json{{"chart", p.chart},
              {"coords", std::move(coords)},
              {"kind", p.kind == PKind::A ? "A" : "X"}};
}

TropicalPoint point_from_json(const Json& j, const Triangulation& tri) {
  TropicalPoint p;
  p.chart = expect_str(expect(j, "chart"), "chart");
  std::string kind = expect_str(expect(j, "kind"), "kind");
  if (kind == "A")
    p.kind = PKind::A;
  else if (kind == "X")
    p.kind = PKind::X;
  else
    throw ParseError("kind must be \"A\" or \"X\"");
  const Json& coords = expect(j, "coords");
  if (!coords.is_object()) throw ParseError("coords must be an object");
  p.coords.assign(tri.arcs.size(), Rat(0));
  for (const auto& [key, val] : coords.items()) {
    ArcId a;
    try {
      a = std::stoi(key);
    } catch (...) {
      throw ParseError("coordinate key '" + key + "' is not an arc id");
    }
    bool found = false;
    for (std::size_t i = 0; i < tri.arcs.size(); ++i) {
      if (tri.arcs[i] == a) {
        p.coords[i] = rat_from_json(val);
        found = true;
        break;
      }
    }
    if (!found) throw ParseError("coordinate for unknown arc " + key);
  }
  return p;
}

Json track_to_json(const TrainTrack& t) {
  Json triangles = Json::object();
  for (std::size_t i = 0; i < t.config.size(); ++i) {
    const TriangleConfig& c = t.config[i];
    triangles[std::to_string(i)] =
        Json{{"absent", c.absent}, {"type", static_cast<int>(c.type)}};
  }
  return Json{{"base", t.base}, {"triangles", std::move(triangles)}};
}

TrainTrack track_from_json(const Json& j, const Triangulation& tri) {
  TrainTrack t;
  t.base = expect_str(expect(j, "base"), "base");
  const Json& triangles = expect(j, "triangles");
  if (!triangles.is_object()) throw ParseError("triangles must be an object");
  t.config.assign(tri.tris.size(), TriangleConfig{TriangleType::III, {}});
  for (const auto& [key, val] : triangles.items()) {
    std::size_t idx;
    try {
      idx = static_cast<std::size_t>(std::stoul(key));
    } catch (...) {
      throw ParseError("triangle key '" + key + "' is not an index");
    }
    if (idx >= tri.tris.size())
      throw ParseError("triangle index " + key + " out of range");
    TriangleConfig cfg;
    int type = expect_int(expect(val, "type"), "type");
    if (type < 1 || type > 3) throw ParseError("type must be 1, 2 or 3");
    cfg.type = static_cast<TriangleType>(type);
    const Json& absent = expect(val, "absent");
    if (!absent.is_array()) throw ParseError("absent must be an array");
    for (const Json& a : absent) cfg.absent.push_back(expect_int(a, "corner"));
    std::sort(cfg.absent.begin(), cfg.absent.end());
    if (cfg.absent.size() != 3 - static_cast<std::size_t>(type))
      throw ParseError("absent count does not match type");
    t.config[idx] = std::move(cfg);
  }
  return t;
}

Json loop_to_json(const FlipWord& word, int power, const std::string& base) {
  Json steps = Json::array();
  for (const LoopStep& s : word) {
    if (s.is_flip)
      steps.push_back(Json{{"flip", s.flip_arc}});
    else
      steps.push_back(Json{{"perm", s.perm}});
  }
  return Json{{"base", base}, {"power", power}, {"word", std::move(steps)}};
}

LoopSpec loop_from_json(const Json& j) {
  LoopSpec spec;
  spec.base = expect_str(expect(j, "base"), "base");
  if (j.contains("power")) {
    spec.power = expect_int(j.at("power"), "power");
    if (spec.power < 1) throw ParseError("power must be positive");
  }
  const Json& word = expect(j, "word");
  if (!word.is_array()) throw ParseError("word must be an array");
  for (const Json& s : word) {
    LoopStep step;
    if (s.contains("flip")) {
      step.is_flip = true;
      step.flip_arc = expect_int(s.at("flip"), "flip");
    } else if (s.contains("perm")) {
      step.is_flip = false;
      const Json& perm = s.at("perm");
      if (!perm.is_array()) throw ParseError("perm must be an array");
      for (const Json& p : perm) step.perm.push_back(expect_int(p, "perm entry"));
    } else {
      throw ParseError("each word step needs \"flip\" or \"perm\"");
    }
    spec.word.push_back(std::move(step));
  }
  return spec;
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return j;
}

}  // namespace troptrack
