#include "urykit/io.hpp"

#include <fstream>
#include <sstream>

namespace urykit::io {

namespace {

template <class F>
auto guarded(const char* what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object with key '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing key '") + key + "'");
  return *it;
}

std::vector<std::string> labels_from(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of point labels");
  std::vector<std::string> out;
  for (const Json& e : j) {
    if (!e.is_string()) throw ParseError("point labels must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Json labels_json(const GrowingSpace& s, std::span<const PointId> ids) {
  Json out = Json::array();
  for (PointId p : ids) out.push_back(s.label(p));
  return out;
}

std::vector<PointId> ids_from(const GrowingSpace& s, const Json& j) {
  std::vector<PointId> out;
  for (const std::string& l : labels_from(j)) out.push_back(s.require(l));
  return out;
}

}  // namespace

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << dump(doc);
}

Json to_json(const Rat& r) { return r.str(); }

Rat rat_from_json(const Json& j) {
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  throw ParseError("rational values must be strings such as \"3/2\"");
}

Json space_to_json(const FinMetric& m) {
  Json out;
  out["points"] = m.labels();
  Json dist = Json::array();
  for (PointId p = 0; p < m.size(); ++p) {
    Json row = Json::array();
    for (PointId q = 0; q < m.size(); ++q) row.push_back(m.distance(p, q).str());
    dist.push_back(std::move(row));
  }
  out["dist"] = std::move(dist);
  return out;
}

FinMetric space_from_json(const Json& j) {
  return guarded("space", [&] {
    std::vector<std::string> labels = labels_from(field(j, "points"));
    const Json& dist = field(j, "dist");
    if (!dist.is_array()) throw ParseError("'dist' must be an array of rows");
    DistanceMatrix d;
    for (std::size_t r = 0; r < dist.size(); ++r) {
      if (!dist[r].is_array()) throw ParseError("row " + std::to_string(r) + " of 'dist' is not an array");
      std::vector<Rat> row;
      for (std::size_t c = 0; c < dist[r].size(); ++c) {
        try {
          row.push_back(rat_from_json(dist[r][c]));
        } catch (const ParseError& e) {
          throw ParseError("dist[" + std::to_string(r) + "][" + std::to_string(c) + "]: " + e.what());
        }
      }
      d.push_back(std::move(row));
    }
    return FinMetric::from_matrix(std::move(labels), d);
  });
}

FinMetric read_space(const std::filesystem::path& path) { return space_from_json(read_json(path)); }

Json growing_to_json(const GrowingSpace& s) {
  Json out;
  out["base"] = space_to_json(s.base());
  Json added = Json::array();
  for (PointId p = s.base_size(); p < s.size(); ++p) {
    const KatetovMap& f = *s.provenance(p);
    Json e;
    e["point"] = s.label(p);
    e["domain"] = labels_json(s, f.domain());
    Json values = Json::array();
    for (const Rat& v : f.values()) values.push_back(v.str());
    e["values"] = std::move(values);
    added.push_back(std::move(e));
  }
  out["added"] = std::move(added);
  return out;
}

GrowingSpace growing_from_json(const Json& j) {
  return guarded("growing space", [&] {
    GrowingSpace s(space_from_json(field(j, "base")));
    for (const Json& e : field(j, "added")) {
      const std::string label = field(e, "point").get<std::string>();
      KatetovMap f = map_from_json(s, e);
      s.append(std::move(f), label);
    }
    return s;
  });
}

GrowingSpace read_growing(const std::filesystem::path& path) {
  const Json j = read_json(path);
  if (j.is_object() && j.contains("base")) return growing_from_json(j);
  return GrowingSpace(space_from_json(j));
}

Json map_to_json(const GrowingSpace& s, const KatetovMap& f) {
  Json out;
  out["domain"] = labels_json(s, f.domain());
  Json values = Json::array();
  for (const Rat& v : f.values()) values.push_back(v.str());
  out["values"] = std::move(values);
  return out;
}

KatetovMap map_from_json(const GrowingSpace& s, const Json& j) {
  return guarded("Katetov map", [&] {
    const std::vector<PointId> domain = ids_from(s, field(j, "domain"));
    const Json& vals = field(j, "values");
    if (!vals.is_array() || vals.size() != domain.size()) {
      throw ParseError("'values' must list one value per domain point");
    }
    std::vector<Rat> values;
    for (const Json& v : vals) values.push_back(rat_from_json(v));
    try {
      return KatetovMap(domain, std::move(values));
    } catch (const ValidationError& e) {
      throw ParseError(e.what());
    }
  });
}

Json tuple_to_json(const GrowingSpace& s, std::span<const PointId> tuple) {
  return labels_json(s, tuple);
}

std::vector<PointId> tuple_from_json(const GrowingSpace& s, const Json& j) {
  return guarded("tuple", [&] {
    if (j.is_object()) return ids_from(s, field(j, "points"));
    return ids_from(s, j);
  });
}

std::vector<PointId> parse_label_list(const GrowingSpace& s, std::string_view text) {
  std::vector<PointId> out;
  std::stringstream in{std::string(text)};
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(s.require(item));
  }
  return out;
}

Json isometry_to_json(const GrowingSpace& s, const PartialIsometry& f) {
  Json out;
  out["domain"] = labels_json(s, f.domain);
  out["range"] = labels_json(s, f.range);
  out["fixed"] = std::string(to_string(f.tag));
  return out;
}

PartialIsometry isometry_from_json(const GrowingSpace& s, const Json& j) {
  return guarded("partial isometry", [&] {
    PartialIsometry f;
    f.domain = ids_from(s, field(j, "domain"));
    f.range = ids_from(s, field(j, "range"));
    if (j.contains("fixed") && !j["fixed"].is_null()) f.tag = parse_fixed_tag(j["fixed"].get<std::string>());
    if (f.domain.size() != f.range.size()) throw ParseError("domain and range differ in length");
    return f;
  });
}

std::pair<ExtensionSpec, std::vector<PointId>> spec_from_json(const GrowingSpace& s, const Json& j) {
  return guarded("extension spec", [&] {
    std::vector<PointId> base;
    if (j.contains("base_points")) {
      base = ids_from(s, j["base_points"]);
    } else {
      base = all_points(s.size());
    }
    ExtensionSpec spec;
    spec.base = s.snapshot(base);
    spec.pattern = space_from_json(field(j, "pattern"));
    const Json& cross = field(j, "cross");
    if (!cross.is_array()) throw ParseError("'cross' must be an array of rows");
    for (const Json& row : cross) {
      if (!row.is_array()) throw ParseError("cross rows must be arrays");
      std::vector<Rat> r;
      for (const Json& v : row) r.push_back(rat_from_json(v));
      spec.cross.push_back(std::move(r));
    }
    return std::make_pair(std::move(spec), std::move(base));
  });
}

Json open_set_to_json(const GrowingSpace& s, const BasicOpenSet& v) {
  Json anchors = Json::array();
  for (const Anchor& a : v.anchors) {
    Json e;
    e["index"] = a.index;
    e["target"] = s.label(a.target);
    e["radius"] = a.radius.str();
    anchors.push_back(std::move(e));
  }
  Json out;
  out["anchors"] = std::move(anchors);
  return out;
}

BasicOpenSet open_set_from_json(const GrowingSpace& s, const Json& j) {
  return guarded("open set", [&] {
    BasicOpenSet v;
    for (const Json& e : field(j, "anchors")) {
      Anchor a;
      a.index = field(e, "index").get<std::size_t>();
      a.target = s.require(field(e, "target").get<std::string>());
      a.radius = rat_from_json(field(e, "radius"));
      v.anchors.push_back(std::move(a));
    }
    return v;
  });
}

Json path_to_json(const GrowingSpace& s, const TuplePath& path) {
  Json out;
  Json grid = Json::array();
  for (const Rat& t : path.grid) grid.push_back(t.str());
  out["grid"] = std::move(grid);
  out["reference"] = labels_json(s, path.reference);
  out["lipschitz"] = path.lipschitz.str();
  Json samples = Json::array();
  for (std::size_t k = 0; k < path.tuples.size(); ++k) {
    Json e;
    e["t"] = path.grid[k].str();
    e["tuple"] = labels_json(s, path.tuples[k]);
    Json margins = Json::array();
    for (const Rat& m : path.margins[k]) margins.push_back(m.str());
    e["margins"] = std::move(margins);
    samples.push_back(std::move(e));
  }
  out["samples"] = std::move(samples);
  Json modulus = Json::array();
  for (const ModulusRow& row : path.modulus) {
    Json e;
    e["from"] = row.from;
    e["to"] = row.to;
    e["realized"] = row.realized.str();
    e["bound"] = row.bound.str();
    modulus.push_back(std::move(e));
  }
  out["modulus"] = std::move(modulus);
  out["space"] = growing_to_json(s);
  return out;
}

Json trace_to_json(const TraceDocument& doc) {
  const StabilizerInstance& inst = doc.instance;
  const GrowingSpace& s = inst.space;
  Json out;
  out["seed"] = doc.seed;
  out["A"] = labels_json(s, inst.a);
  out["B"] = labels_json(s, inst.b);
  out["k"] = inst.k;
  out["C"] = labels_json(s, inst.c);
  out["C_original"] = labels_json(s, doc.original_c);
  out["epsilon"] = inst.epsilon.str();
  if (doc.deflatten) {
    Json d;
    d["flat_before"] = doc.deflatten->flat_before;
    d["witnesses"] = doc.deflatten->witnesses;
    d["weight"] = doc.deflatten->weight.str();
    d["displacement"] = doc.deflatten->displacement.str();
    out["deflatten"] = std::move(d);
  } else {
    out["deflatten"] = nullptr;
  }
  out["start"] = labels_json(s, doc.trace.start);
  out["start_F"] = doc.trace.start_f.str();
  Json iterations = Json::array();
  for (const Move& m : doc.trace.iterations) {
    Json e;
    e["tuple"] = labels_json(s, m.tuple);
    e["F"] = m.f.str();
    e["move"] = std::string(to_string(m.tag));
    e["certificate"] = isometry_to_json(s, m.certificate);
    iterations.push_back(std::move(e));
  }
  out["iterations"] = std::move(iterations);
  out["converged"] = doc.trace.converged;
  out["failure"] = doc.trace.failure;
  out["space"] = growing_to_json(s);
  return out;
}

TraceDocument trace_from_json(const Json& j) {
  return guarded("trace", [&] {
    TraceDocument doc;
    doc.instance.space = growing_from_json(field(j, "space"));
    const GrowingSpace& s = doc.instance.space;
    doc.seed = j.value("seed", std::uint64_t{0});
    doc.instance.a = ids_from(s, field(j, "A"));
    doc.instance.b = ids_from(s, field(j, "B"));
    doc.instance.c = ids_from(s, field(j, "C"));
    doc.instance.k = field(j, "k").get<std::size_t>();
    doc.instance.epsilon = rat_from_json(field(j, "epsilon"));
    doc.original_c = ids_from(s, field(j, "C_original"));
    const Json& d = field(j, "deflatten");
    if (!d.is_null()) {
      DeflattenReport r;
      r.c = doc.instance.c;
      r.flat_before = field(d, "flat_before").get<std::size_t>();
      r.witnesses = field(d, "witnesses").get<std::size_t>();
      r.weight = rat_from_json(field(d, "weight"));
      r.displacement = rat_from_json(field(d, "displacement"));
      doc.deflatten = r;
    }
    doc.trace.start = ids_from(s, field(j, "start"));
    doc.trace.start_f = rat_from_json(field(j, "start_F"));
    for (const Json& e : field(j, "iterations")) {
      Move m;
      m.tuple = ids_from(s, field(e, "tuple"));
      m.f = rat_from_json(field(e, "F"));
      m.tag = parse_move_tag(field(e, "move").get<std::string>());
      m.certificate = isometry_from_json(s, field(e, "certificate"));
      doc.trace.iterations.push_back(std::move(m));
    }
    doc.trace.converged = field(j, "converged").get<bool>();
    doc.trace.failure = field(j, "failure").get<std::string>();
    validate_instance(doc.instance);
    return doc;
  });
}

}  // namespace urykit::io
