// urykit: command line front end.
//
// Exit codes: 0 success, 1 parse error, 2 validation failure or
// nonconvergence, 3 internal error.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "urykit/io.hpp"
#include "urykit/suite.hpp"

namespace {

using namespace urykit;
using io::Json;

enum ExitCode { kOk = 0, kParse = 1, kValidation = 2, kInternal = 3 };

struct RunConfig {
  std::uint64_t seed = 0;
  bool verbose = false;
};

void emit(const Json& doc, const std::string& out) {
  if (out.empty()) {
    std::cout << io::dump(doc);
  } else {
    io::write_json(out, doc);
  }
}

void note(const RunConfig& cfg, const std::string& text) {
  if (cfg.verbose) std::cerr << text << "\n";
}

std::vector<Rat> parse_rat_list(const std::string& text) {
  std::vector<Rat> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(Rat::parse(item));
  }
  if (out.empty()) throw ParseError("empty list of rationals");
  return out;
}


// ---------------------------------------------------------------------------

int cmd_validate(const std::string& space_path, const std::string& map_path) {
  const GrowingSpace s = io::read_growing(space_path);
  Json out;
  out["ok"] = true;
  out["points"] = s.size();
  out["diameter"] = s.materialize().diameter().str();
  if (!map_path.empty()) {
    const KatetovMap f = io::map_from_json(s, io::read_json(map_path));
    const KatetovReport r = check_katetov(s, f);
    if (!r.ok()) throw KatetovError(r);
    out["map"] = "katetov";
  }
  std::cout << io::dump(out);
  return kOk;
}

int cmd_extend(const std::string& space_path, const std::string& pattern_path,
               const std::string& spec_path, bool check_b, const std::string& out_path) {
  const GrowingSpace s = io::read_growing(space_path);
  Json spec_doc = io::read_json(spec_path);
  if (!pattern_path.empty()) spec_doc["pattern"] = io::read_json(pattern_path);
  const auto [spec, base_ids] = io::spec_from_json(s, spec_doc);
  require_spec(spec);
  ExtensionGraph graph(spec.base, spec.pattern);
  std::vector<GraphVertex> placed;
  Json vertices = Json::array();
  for (const EmbeddedVertex& v : embed_spec(spec)) {
    placed.push_back({v.copy, graph.add(v.copy, v.map)});
    Json e;
    e["copy"] = v.copy;
    e["alias"] = v.alias ? Json(spec.base.label(*v.alias)) : Json(nullptr);
    vertices.push_back(std::move(e));
  }
  const ClosureMetric closure = closure_metric(graph);
  std::vector<std::string> names = spec.base.labels();
  for (const std::string& l : spec.pattern.labels()) names.push_back(l + "'");
  std::vector<std::size_t> order = all_points(spec.base.size());
  for (const GraphVertex& v : placed) order.push_back(closure.position(v));
  Json dist = Json::array();
  bool round_trip = true;
  const DistanceMatrix joint = joint_matrix(spec);
  for (std::size_t u = 0; u < order.size(); ++u) {
    Json row = Json::array();
    for (std::size_t v = 0; v < order.size(); ++v) {
      const Rat& d = closure.distance(order[u], order[v]);
      round_trip = round_trip && d == joint[u][v];
      row.push_back(d.str());
    }
    dist.push_back(std::move(row));
  }
  Json out;
  out["vertices"] = std::move(vertices);
  out["points"] = names;
  out["dist"] = std::move(dist);
  out["round_trip"] = round_trip;
  int code = round_trip ? kOk : kInternal;
  if (check_b) {
    Json audits;
    const auto claim = audit_claim(graph, closure);
    const auto cond_b = audit_condition_b(graph, closure);
    const auto base = audit_base(graph, closure);
    audits["claim"] = claim ? Json(*claim) : Json("ok");
    audits["condition_b"] = cond_b ? Json(*cond_b) : Json("ok");
    audits["base"] = base ? Json(*base) : Json("ok");
    out["audits"] = std::move(audits);
    if (claim || cond_b || base) code = kValidation;
  }
  emit(out, out_path);
  return code;
}

int cmd_realize(const std::string& space_path, const std::string& map_path,
                const std::string& out_path) {
  GrowingSpace s = io::read_growing(space_path);
  const KatetovMap f = io::map_from_json(s, io::read_json(map_path));
  const std::size_t before = s.size();
  const PointId p = realize_katetov(s, f);
  Json out;
  out["point"] = s.label(p);
  out["new"] = s.size() > before;
  Json dist;
  for (PointId q = 0; q < s.size(); ++q) {
    if (q != p) dist[s.label(q)] = s.distance(p, q).str();
  }
  out["distances"] = std::move(dist);
  if (!out_path.empty()) io::write_json(out_path, io::growing_to_json(s));
  std::cout << io::dump(out);
  return kOk;
}

int cmd_backforth(const std::string& space_path, const std::string& phi_path,
                  const std::string& forth, const std::string& back, const std::string& out_path) {
  GrowingSpace s = io::read_growing(space_path);
  const PartialIsometry phi = io::isometry_from_json(s, io::read_json(phi_path));
  const auto fo = io::parse_label_list(s, forth);
  const auto ba = io::parse_label_list(s, back);
  const std::size_t before = s.size();
  const PartialIsometry ext = extend_isometry(s, phi, fo, ba);
  Json out;
  out["isometry"] = io::isometry_to_json(s, ext);
  out["added_points"] = s.size() - before;
  if (!out_path.empty()) io::write_json(out_path, io::growing_to_json(s));
  std::cout << io::dump(out);
  return kOk;
}

int cmd_urysohn_gen(const RunConfig& cfg, const std::string& distances, std::size_t rounds,
                    std::size_t cap, std::size_t max_points, const std::string& start_path,
                    const std::string& out_path) {
  UrysohnOptions options;
  options.seed = cfg.seed;
  options.rounds = rounds;
  options.distances = parse_rat_list(distances);
  options.subset_cap = cap;
  options.max_points = max_points;
  const FinMetric start = start_path.empty()
                              ? FinMetric::from_matrix({"p0"}, DistanceMatrix{{Rat()}})
                              : io::read_space(start_path);
  const GenerationReport r = generate_rational_urysohn(start, options);
  Json out;
  out["seed"] = cfg.seed;
  out["points"] = r.space.size();
  out["rounds_completed"] = r.rounds_completed;
  out["saturated"] = r.saturated;
  out["candidate_maps"] = r.candidate_maps;
  out["realized"] = r.realized;
  if (r.saturated && r.rounds_completed > 0) {
    const auto missing = saturation_audit(r.space, r.last_round_start, options.distances, cap);
    out["saturation_audit"] = missing ? io::map_to_json(r.space, *missing) : Json("ok");
  }
  if (!out_path.empty()) io::write_json(out_path, io::space_to_json(r.space.materialize()));
  std::cout << io::dump(out);
  note(cfg, "generated " + std::to_string(r.space.size()) + " points");
  return r.saturated ? kOk : kValidation;
}

int cmd_homotopy(const std::string& space_path, const std::string& phi0_path,
                 const std::string& phi1_path, std::size_t grid, const std::string& open_path,
                 const std::string& reference, const std::string& out_path) {
  GrowingSpace s = io::read_growing(space_path);
  const auto phi0 = io::tuple_from_json(s, io::read_json(phi0_path));
  const auto phi1 = io::tuple_from_json(s, io::read_json(phi1_path));
  const BasicOpenSet v = open_path.empty() ? BasicOpenSet{} : io::open_set_from_json(s, io::read_json(open_path));
  const std::vector<PointId> y =
      reference.empty() ? all_points(s.base_size()) : io::parse_label_list(s, reference);
  const TuplePath path = sample_path(s, phi0, phi1, y, uniform_grid(grid), v);
  emit(io::path_to_json(s, path), out_path);
  return kOk;
}

int cmd_stabilize(const RunConfig& cfg, const std::string& space_path, const std::string& a_list,
                  const std::string& b_list, const std::string& phi_path, const std::string& eps_text,
                  std::size_t max_iter, bool no_deflatten, const std::string& trace_path) {
  GrowingSpace s = io::read_growing(space_path);
  const auto a = io::parse_label_list(s, a_list);
  const auto b = io::parse_label_list(s, b_list);
  const PartialIsometry phi = io::isometry_from_json(s, io::read_json(phi_path));
  if (auto bad = check_partial_isometry(s, phi)) {
    throw ValidationError("phi is not an isometry on positions " + std::to_string(bad->first) + "," +
                          std::to_string(bad->second));
  }
  std::vector<PointId> c;
  for (PointId p : a) {
    const auto img = phi.image(p);
    if (!img) throw ValidationError("phi is undefined on " + s.label(p));
    c.push_back(*img);
  }
  const Rat eps = Rat::parse(eps_text);
  StabilizerInstance inst = normalize_instance(std::move(s), a, b, c, eps);
  io::TraceDocument doc;
  doc.seed = cfg.seed;
  doc.original_c = inst.c;
  if (!no_deflatten) {
    doc.deflatten = deflatten(inst, eps / Rat(2));
    inst.epsilon = eps / Rat(2);
  }
  DescentOptions options;
  options.max_iter = max_iter;
  doc.trace = descend(inst, options);
  if (auto problem = audit_trace(inst, doc.trace)) throw InternalError("trace audit: " + *problem);
  doc.instance = std::move(inst);

  Rat worst;
  std::vector<PartialIsometry> word;
  for (const Move& m : doc.trace.iterations) word.push_back(m.certificate);
  const auto image = apply_word(word, doc.instance.a);
  for (std::size_t i = 0; i < image.size(); ++i) {
    worst = std::max(worst, doc.instance.space.distance(image[i], doc.original_c[i]));
  }
  Json out;
  out["converged"] = doc.trace.converged;
  out["iterations"] = doc.trace.iterations.size();
  out["start_F"] = doc.trace.start_f.str();
  out["final_F"] = doc.trace.final_f().str();
  out["max_gap_to_phi_A"] = worst.str();
  out["epsilon"] = eps.str();
  if (!doc.trace.failure.empty()) out["failure"] = doc.trace.failure;
  if (!trace_path.empty()) io::write_json(trace_path, io::trace_to_json(doc));
  std::cout << io::dump(out);
  return doc.trace.converged ? kOk : kValidation;
}

int cmd_displacement(const std::string& space_path, const std::string& word_path,
                     const std::string& point) {
  const FinMetric base = io::read_space(space_path);
  const io::TraceDocument doc = io::trace_from_json(io::read_json(word_path));
  const GrowingSpace& s = doc.instance.space;
  if (!(s.base() == base)) throw ValidationError("the trace was not produced over this space");
  std::vector<PartialIsometry> word;
  for (const Move& m : doc.trace.iterations) word.push_back(m.certificate);
  const PointId x = s.require(point);
  const DisplacementReport r = displacement_audit(s, word, x, doc.instance.a, doc.instance.b);
  const auto generator_failure = audit_generators(s, word, doc.instance.a, doc.instance.b);
  Json steps = Json::array();
  for (const GeneratorCheck& c : r.steps) {
    Json e;
    e["generator"] = c.generator;
    e["point"] = s.label(c.point);
    e["displacement"] = c.displacement.str();
    e["bound"] = c.bound.str();
    e["margin"] = (c.bound - c.displacement).str();
    steps.push_back(std::move(e));
  }
  Json out;
  out["point"] = point;
  out["orbit_end"] = s.label(r.orbit.back());
  out["displacement"] = r.displacement.str();
  out["word_bound"] = r.word_bound.str();
  out["union_bound"] = r.union_bound.str();
  out["within_bounds"] = r.within_bounds;
  out["all_generators_within_bound"] = !generator_failure.has_value();
  out["steps"] = std::move(steps);
  std::cout << io::dump(out);
  return r.within_bounds && !generator_failure ? kOk : kValidation;
}

int cmd_check(const RunConfig& cfg, const std::string& suite, std::size_t budget,
              const std::string& out_path) {
  const SuiteReport r = run_suite(suite, cfg.seed, budget);
  emit(r.to_json(), out_path);
  return r.passed() ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"urykit: finite metric extensions, Urysohn approximations and stabilizer descent"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "Random seed (URYKIT_SEED overrides)");
  app.add_flag("-v,--verbose", cfg.verbose, "Diagnostics on stderr");

  std::string space, map, pattern, spec, out, phi, forth, back, distances = "1,2", start, phi0, phi1,
      open_set, reference, a_list, b_list, eps = "1/100", trace, word, point, suite = "all";
  std::size_t rounds = 1, cap = 1, max_points = 200000, grid = 8, max_iter = 10000, budget = 100;
  bool check_b = false, no_deflatten = false;
  std::function<int()> run;

  auto* validate = app.add_subcommand("validate", "Check a space file (and optionally a Katetov map)");
  validate->add_option("--space", space)->required();
  validate->add_option("--map", map);
  validate->callback([&] { run = [&] { return cmd_validate(space, map); }; });

  auto* extend = app.add_subcommand("extend", "Embed an extension spec and report the closure");
  extend->add_option("--space", space)->required();
  extend->add_option("--pattern", pattern, "Pattern space (otherwise taken from the spec file)");
  extend->add_option("--spec", spec)->required();
  extend->add_flag("--check-b", check_b, "Audit closure weights and same-copy distances");
  extend->add_option("--out", out);
  extend->callback([&] { run = [&] { return cmd_extend(space, pattern, spec, check_b, out); }; });

  auto* realize = app.add_subcommand("realize", "Realize a Katetov map by a point");
  realize->add_option("--space", space)->required();
  realize->add_option("--map", map)->required();
  realize->add_option("--out", out, "Write the grown space");
  realize->callback([&] { run = [&] { return cmd_realize(space, map, out); }; });

  auto* backforth = app.add_subcommand("backforth", "Extend a partial isometry forth and back");
  backforth->add_option("--space", space)->required();
  backforth->add_option("--phi", phi)->required();
  backforth->add_option("--forth", forth);
  backforth->add_option("--back", back);
  backforth->add_option("--out", out, "Write the grown space");
  backforth->callback([&] { run = [&] { return cmd_backforth(space, phi, forth, back, out); }; });

  auto* gen = app.add_subcommand("urysohn-gen", "Saturate a finite space over a distance set");
  gen->add_option("--distances", distances);
  gen->add_option("--rounds", rounds);
  gen->add_option("--cap", cap);
  gen->add_option("--max-points", max_points);
  gen->add_option("--space", start, "Start space (default: one point)");
  gen->add_option("--seed", cfg.seed);
  gen->add_option("--out", out);
  gen->callback([&] { run = [&] { return cmd_urysohn_gen(cfg, distances, rounds, cap, max_points, start, out); }; });

  auto* homotopy = app.add_subcommand("homotopy", "Sample a blend path between two tuples");
  homotopy->add_option("--space", space)->required();
  homotopy->add_option("--phi0", phi0)->required();
  homotopy->add_option("--phi1", phi1)->required();
  homotopy->add_option("--grid", grid);
  homotopy->add_option("--open-set", open_set);
  homotopy->add_option("--reference", reference, "Reference labels (default: all base points)");
  homotopy->add_option("--out", out);
  homotopy->callback([&] {
    run = [&] { return cmd_homotopy(space, phi0, phi1, grid, open_set, reference, out); };
  });

  auto* stabilize = app.add_subcommand("stabilize", "Approximate phi on A by moves fixing A or B");
  stabilize->add_option("--space", space)->required();
  stabilize->add_option("--A", a_list)->required();
  stabilize->add_option("--B", b_list)->required();
  stabilize->add_option("--phi", phi)->required();
  stabilize->add_option("--eps", eps);
  stabilize->add_option("--max-iter", max_iter);
  stabilize->add_option("--seed", cfg.seed);
  stabilize->add_flag("--no-deflatten", no_deflatten);
  stabilize->add_option("--trace", trace);
  stabilize->callback([&] {
    run = [&] {
      return cmd_stabilize(cfg, space, a_list, b_list, phi, eps, max_iter, no_deflatten, trace);
    };
  });

  auto* displacement = app.add_subcommand("displacement", "Audit displacement bounds along a trace");
  displacement->add_option("--space", space)->required();
  displacement->add_option("--word", word)->required();
  displacement->add_option("--point", point)->required();
  displacement->callback([&] { run = [&] { return cmd_displacement(space, word, point); }; });

  auto* check = app.add_subcommand("check", "Run the randomized property suites");
  check->add_option("--suite", suite);
  check->add_option("--budget", budget);
  check->add_option("--seed", cfg.seed);
  check->add_option("--out", out);
  check->callback([&] { run = [&] { return cmd_check(cfg, suite, budget, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }
  if (const char* env = std::getenv("URYKIT_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "parse error: URYKIT_SEED is not an unsigned integer\n";
      return kParse;
    }
  }
  try {
    return run();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
