#include "urykit/suite.hpp"

#include <algorithm>

#include "urykit/generators.hpp"

namespace urykit {

namespace {

using io::Json;
using Check = std::function<std::optional<Json>(Rng&, const SuiteHooks&)>;

struct Property {
  const char* suite;
  const char* name;
  Check check;
};

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return h;
}

Json maps_json(const GrowingSpace& s, std::initializer_list<const KatetovMap*> maps) {
  Json out = Json::array();
  for (const KatetovMap* f : maps) out.push_back(io::map_to_json(s, *f));
  return out;
}

std::vector<PointId> random_subset(Rng& rng, std::size_t n) {
  std::vector<PointId> out;
  while (out.empty()) {
    for (PointId p = 0; p < n; ++p) {
      if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) out.push_back(p);
    }
  }
  return out;
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

const std::vector<Rat>& halves() {
  static const std::vector<Rat> v = value_grid(6, 2);
  return v;
}

// ---- katetov suite ---------------------------------------------------------

std::optional<Json> sup_dist_oracle(Rng& rng, const SuiteHooks& hooks) {
  const FinMetric m = random_metric(rng, uniform(rng, 1, 6), halves());
  const GrowingSpace s(m);
  const auto dom = random_subset(rng, m.size());
  const KatetovMap f = random_katetov(rng, m, dom, halves());
  const KatetovMap g = random_katetov(rng, m, dom, halves());
  Rat expected;
  for (std::size_t i = 0; i < dom.size(); ++i) expected = std::max(expected, abs(f.values()[i] - g.values()[i]));
  const Rat fg = hooks.sup_dist(f, g);
  const Rat gf = hooks.sup_dist(g, f);
  if (fg == expected && gf == expected) return std::nullopt;
  Json ce;
  ce["space"] = io::space_to_json(m);
  ce["maps"] = maps_json(s, {&f, &g});
  ce["sup_dist(f,g)"] = fg.str();
  ce["sup_dist(g,f)"] = gf.str();
  ce["max|f-g|"] = expected.str();
  return ce;
}

std::optional<Json> extension_isometry(Rng& rng, const SuiteHooks& hooks) {
  const FinMetric m = random_metric(rng, uniform(rng, 1, 6), halves());
  const GrowingSpace s(m);
  const auto y = random_subset(rng, m.size());
  const KatetovMap f = random_katetov(rng, m, y, halves());
  const KatetovMap g = random_katetov(rng, m, y, halves());
  const KatetovMap fh = katetov_extension(m, f);
  const KatetovMap gh = katetov_extension(m, g);
  const Rat before = hooks.sup_dist(f, g);
  const Rat after = hooks.sup_dist(fh, gh);
  if (before == after) return std::nullopt;
  Json ce;
  ce["space"] = io::space_to_json(m);
  ce["maps"] = maps_json(s, {&f, &g});
  ce["before"] = before.str();
  ce["after"] = after.str();
  return ce;
}

std::optional<Json> extension_valid(Rng& rng, const SuiteHooks&) {
  const FinMetric m = random_metric(rng, uniform(rng, 1, 6), halves());
  const GrowingSpace s(m);
  const auto y = random_subset(rng, m.size());
  const KatetovMap f = random_katetov(rng, m, y, halves(), true);
  const KatetovMap fh = katetov_extension(m, f);
  bool ok = check_katetov(m, fh).ok() && is_supported_by(m, fh, y);
  for (PointId p : y) ok = ok && fh.value(p) == f.value(p);
  if (ok) return std::nullopt;
  Json ce;
  ce["space"] = io::space_to_json(m);
  ce["maps"] = maps_json(s, {&f, &fh});
  return ce;
}

std::optional<Json> minimal_value(Rng& rng, const SuiteHooks&) {
  const FinMetric m = random_metric(rng, uniform(rng, 2, 5), halves());
  const GrowingSpace s(m);
  const PointId p = uniform(rng, 0, m.size() - 1);
  std::vector<PointId> k;
  for (PointId q = 0; q < m.size(); ++q) {
    if (q != p) k.push_back(q);
  }
  const KatetovMap psi = random_katetov(rng, m, k, halves());
  const KatetovMap tau = minimal_value_extension(m, psi, p);
  Rat expected;
  for (PointId q : k) expected = std::max(expected, abs(m.distance(p, q) - psi.value(q)));
  bool ok = tau.value(p) == expected && check_katetov(m, tau).ok();
  for (PointId q : k) ok = ok && tau.value(q) == psi.value(q);
  if (tau.value(p).is_zero()) {
    for (PointId q : k) ok = ok && psi.value(q) == m.distance(p, q);
  }
  // No smaller value on the quarter grid keeps the inequalities.
  for (Rat v; ok && v < expected; v += Rat(1, 4)) {
    std::vector<std::pair<PointId, Rat>> pairs{{p, v}};
    for (PointId q : k) pairs.emplace_back(q, psi.value(q));
    ok = !check_katetov(m, KatetovMap::from_pairs(std::move(pairs))).ok();
  }
  if (ok) return std::nullopt;
  Json ce;
  ce["space"] = io::space_to_json(m);
  ce["point"] = m.label(p);
  ce["maps"] = maps_json(s, {&psi, &tau});
  return ce;
}

std::optional<Json> convexity(Rng& rng, const SuiteHooks&) {
  const FinMetric m = random_metric(rng, uniform(rng, 1, 6), halves());
  const GrowingSpace s(m);
  const auto dom = random_subset(rng, m.size());
  std::vector<KatetovMap> maps;
  std::vector<Rat> weights;
  const std::size_t count = uniform(rng, 1, 3);
  long total = 0;
  for (std::size_t i = 0; i < count; ++i) {
    maps.push_back(random_katetov(rng, m, dom, halves()));
    const long w = static_cast<long>(uniform(rng, 1, 5));
    weights.emplace_back(w);
    total += w;
  }
  for (Rat& w : weights) w /= Rat(total);
  const KatetovMap mix = convex_combination(maps, weights);
  if (check_katetov(m, mix).ok()) return std::nullopt;
  Json ce;
  ce["space"] = io::space_to_json(m);
  ce["combination"] = io::map_to_json(s, mix);
  return ce;
}

std::optional<Json> averaged_flatness(Rng& rng, const SuiteHooks&) {
  const std::size_t n = uniform(rng, 3, 5);
  FinMetric m1 = random_metric(rng, n, halves());
  const FinMetric m2 = random_metric(rng, n, halves());
  const Rat w(static_cast<long>(uniform(rng, 1, 3)), 4);
  const std::vector<FinMetric> ms{m1, m2};
  const std::vector<Rat> ws{w, Rat(1) - w};
  const FinMetric avg = average_metrics(ms, ws);
  bool ok = validate_metric(avg.labels(), avg.matrix()).ok();
  for (PointId a = 0; a < n && ok; ++a) {
    for (PointId b = a + 1; b < n && ok; ++b) {
      for (PointId c = b + 1; c < n && ok; ++c) {
        if (is_flat(a, b, c, avg)) ok = is_flat(a, b, c, m1) && is_flat(a, b, c, m2);
      }
    }
  }
  if (ok) return std::nullopt;
  Json ce;
  ce["first"] = io::space_to_json(m1);
  ce["second"] = io::space_to_json(m2);
  ce["weight"] = w.str();
  return ce;
}

std::optional<Json> amalgam_restricts(Rng& rng, const SuiteHooks&) {
  const std::size_t shared = uniform(rng, 0, 2);
  const std::size_t na = shared + uniform(rng, 1, 2);
  const std::size_t nb = shared + uniform(rng, 1, 2);
  const FinMetric whole = random_metric(rng, na + nb - shared, halves());
  std::vector<PointId> ia;
  std::vector<PointId> ib;
  for (PointId p = 0; p < na; ++p) ia.push_back(p);
  for (PointId p = 0; p < shared; ++p) ib.push_back(p);
  for (PointId p = na; p < na + nb - shared; ++p) ib.push_back(p);
  const FinMetric ma = whole.restrict(ia);
  const FinMetric mb = whole.restrict(ib);
  std::vector<std::string> common(whole.labels().begin(), whole.labels().begin() + static_cast<long>(shared));
  const FinMetric am = amalgamate_free(ma, mb, common);
  bool ok = validate_metric(am.labels(), am.matrix()).ok();
  for (PointId p = 0; p < ma.size() && ok; ++p) {
    for (PointId q = 0; q < ma.size() && ok; ++q) ok = am.distance(p, q) == ma.distance(p, q);
  }
  for (PointId p = 0; p < mb.size() && ok; ++p) {
    for (PointId q = 0; q < mb.size() && ok; ++q) {
      ok = am.distance(am.require(mb.label(p)), am.require(mb.label(q))) == mb.distance(p, q);
    }
  }
  if (ok) return std::nullopt;
  Json ce;
  ce["A"] = io::space_to_json(ma);
  ce["B"] = io::space_to_json(mb);
  return ce;
}

std::optional<Json> inverse_isometry(Rng& rng, const SuiteHooks&) {
  const FinMetric m = random_metric(rng, uniform(rng, 2, 6), halves());
  const GrowingSpace s(m);
  std::vector<PointId> perm = all_points(m.size());
  std::shuffle(perm.begin(), perm.end(), rng);
  const std::size_t len = uniform(rng, 1, m.size());
  PartialIsometry f;
  for (std::size_t i = 0; i < len; ++i) {
    f.domain.push_back(perm[i]);
    f.range.push_back(perm[(i + 1) % m.size()]);
  }
  if (check_partial_isometry(m, f).has_value() || !check_partial_isometry(m, f.inverse()).has_value()) {
    return std::nullopt;
  }
  Json ce;
  ce["space"] = io::space_to_json(m);
  ce["isometry"] = io::isometry_to_json(s, f);
  return ce;
}

// ---- lemma1 suite ----------------------------------------------------------

ExtensionGraph random_graph(Rng& rng, const FinMetric& x, const FinMetric& pattern) {
  ExtensionGraph g(x, pattern);
  const auto all = all_points(x.size());
  for (std::size_t c = 0; c < pattern.size(); ++c) {
    const std::size_t count = uniform(rng, 1, 3);
    for (std::size_t i = 0; i < count; ++i) g.add(c, random_katetov(rng, x, all, halves(), true));
  }
  return g;
}

Json graph_json(const ExtensionGraph& g) {
  const GrowingSpace s(g.base());
  Json out;
  out["base"] = io::space_to_json(g.base());
  out["pattern"] = io::space_to_json(g.pattern());
  Json catalogs = Json::array();
  for (std::size_t c = 0; c < g.copies(); ++c) {
    Json list = Json::array();
    for (const KatetovMap& f : g.catalog(c)) list.push_back(io::map_to_json(s, f));
    catalogs.push_back(std::move(list));
  }
  out["catalogs"] = std::move(catalogs);
  return out;
}

std::optional<Json> closure_audits(Rng& rng, const SuiteHooks&) {
  const FinMetric x = random_metric(rng, uniform(rng, 1, 5), halves());
  const FinMetric pattern = random_metric(rng, uniform(rng, 1, 3), halves());
  const ExtensionGraph g = random_graph(rng, x, pattern);
  const ClosureMetric cl = closure_metric(g);
  std::optional<std::string> problem = audit_claim(g, cl);
  if (!problem) problem = audit_condition_b(g, cl);
  if (!problem) problem = audit_base(g, cl);
  if (!problem) return std::nullopt;
  Json ce = graph_json(g);
  ce["problem"] = *problem;
  return ce;
}

std::optional<Json> embed_round_trip(Rng& rng, const SuiteHooks&) {
  const FinMetric x = random_metric(rng, uniform(rng, 1, 5), halves());
  const ExtensionSpec spec = random_spec(rng, x, uniform(rng, 1, 3), halves());
  ExtensionGraph g = random_graph(rng, x, spec.pattern);
  std::vector<GraphVertex> placed;
  for (const EmbeddedVertex& v : embed_spec(spec)) {
    placed.push_back({v.copy, g.add(v.copy, v.map)});
  }
  const ClosureMetric cl = closure_metric(g);
  bool ok = true;
  for (std::size_t i = 0; i < placed.size() && ok; ++i) {
    const std::size_t pi = cl.position(placed[i]);
    for (PointId y = 0; y < x.size() && ok; ++y) ok = cl.distance(pi, y) == spec.cross[i][y];
    for (std::size_t j = 0; j < placed.size() && ok; ++j) {
      ok = cl.distance(pi, cl.position(placed[j])) == spec.pattern.distance(i, j);
    }
  }
  if (ok) return std::nullopt;
  Json ce = graph_json(g);
  Json cross = Json::array();
  for (const auto& row : spec.cross) {
    Json r = Json::array();
    for (const Rat& v : row) r.push_back(v.str());
    cross.push_back(std::move(r));
  }
  ce["cross"] = std::move(cross);
  return ce;
}

std::optional<Json> dbar_bounds(Rng& rng, const SuiteHooks&) {
  const FinMetric x = random_metric(rng, uniform(rng, 1, 3), halves());
  const FinMetric pattern = random_metric(rng, 2, halves());
  ExtensionGraph g = random_graph(rng, x, pattern);
  const auto all = all_points(x.size());
  const KatetovMap f = random_katetov(rng, x, all, halves());
  const KatetovMap h = random_katetov(rng, x, all, halves());
  const GraphVertex vf{0, g.add(0, f)};
  const GraphVertex vh{1, g.add(1, h)};
  const ClosureMetric cl = closure_metric(g);
  const DbarResult r = dbar_exact(g, f, 0, h, 1);
  const Rat upper = cl.distance(cl.position(vf), cl.position(vh));
  if (r.bound_limited || (sup_dist(f, h) <= r.value && r.value <= upper)) return std::nullopt;
  Json ce = graph_json(g);
  ce["dbar"] = r.value.str();
  ce["closure"] = upper.str();
  return ce;
}

std::optional<Json> catalog_monotone(Rng& rng, const SuiteHooks&) {
  const FinMetric x = random_metric(rng, uniform(rng, 1, 4), halves());
  const FinMetric pattern = random_metric(rng, uniform(rng, 2, 3), halves());
  ExtensionGraph g = random_graph(rng, x, pattern);
  const ClosureMetric before = closure_metric(g);
  g.add(uniform(rng, 0, pattern.size() - 1), random_katetov(rng, x, all_points(x.size()), halves()));
  const ClosureMetric after = closure_metric(g);
  for (std::size_t u = 0; u < before.size(); ++u) {
    for (std::size_t v = 0; v < before.size(); ++v) {
      const std::size_t pu = after.position(before.vertices()[u]);
      const std::size_t pv = after.position(before.vertices()[v]);
      if (after.distance(pu, pv) > before.distance(u, v)) return graph_json(g);
    }
  }
  return std::nullopt;
}

// ---- homotopy suite --------------------------------------------------------

struct PathInstance {
  GrowingSpace space;
  std::vector<PointId> phi0;
  std::vector<PointId> phi1;
  std::vector<PointId> reference;
  BasicOpenSet open_set;
};

PathInstance random_path_instance(Rng& rng) {
  const FinMetric y = random_metric(rng, uniform(rng, 1, 4), halves());
  PathInstance inst{GrowingSpace(y), {}, {}, all_points(y.size()), {}};
  const ExtensionSpec s0 = random_spec(rng, y, uniform(rng, 1, 3), halves());
  inst.phi0 = realize_spec(inst.space, inst.reference, s0);
  // Second endpoint: same pattern, rows redrawn until the spec is valid.
  ExtensionSpec s1 = s0;
  for (int attempt = 0; attempt < 200; ++attempt) {
    ExtensionSpec trial = s0;
    for (auto& row : trial.cross) {
      for (Rat& v : row) v = pick(rng, halves());
    }
    if (check_spec(trial).ok()) {
      s1 = std::move(trial);
      break;
    }
  }
  inst.phi1 = realize_spec(inst.space, inst.reference, s1);
  for (std::size_t i = 0; i < inst.phi0.size(); ++i) {
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
    const PointId target = uniform(rng, 0, y.size() - 1);
    const Rat reach = std::max(inst.space.distance(inst.phi0[i], target),
                               inst.space.distance(inst.phi1[i], target));
    inst.open_set.anchors.push_back({i, target, reach + Rat(static_cast<long>(uniform(rng, 1, 4)), 8)});
  }
  // Keep every endpoint point in the reference set so the modulus is exact.
  for (PointId p : inst.phi0) inst.reference.push_back(p);
  for (PointId p : inst.phi1) inst.reference.push_back(p);
  std::sort(inst.reference.begin(), inst.reference.end());
  inst.reference.erase(std::unique(inst.reference.begin(), inst.reference.end()), inst.reference.end());
  return inst;
}

std::optional<Json> blend_validity(Rng& rng, const SuiteHooks&) {
  PathInstance inst = random_path_instance(rng);
  const Rat t(static_cast<long>(uniform(rng, 0, 12)), 12);
  const ExtensionSpec spec = blend_spec(inst.space, inst.phi0, inst.phi1, inst.reference, t);
  if (check_spec(spec).ok()) return std::nullopt;
  Json ce;
  ce["space"] = io::growing_to_json(inst.space);
  ce["t"] = t.str();
  return ce;
}

std::optional<Json> path_sampling(Rng& rng, const SuiteHooks&) {
  PathInstance inst = random_path_instance(rng);
  const auto grid = uniform_grid(uniform(rng, 1, 6));
  try {
    const TuplePath path = sample_path(inst.space, inst.phi0, inst.phi1, inst.reference, grid, inst.open_set);
    bool ok = true;
    for (const auto& margins : path.margins) {
      for (const Rat& r : margins) ok = ok && r.sign() > 0;
    }
    for (const ModulusRow& row : path.modulus) ok = ok && row.realized <= row.bound;
    if (ok) return std::nullopt;
  } catch (const InternalError&) {
  }
  Json ce;
  ce["space"] = io::growing_to_json(inst.space);
  ce["phi0"] = io::tuple_to_json(inst.space, inst.phi0);
  ce["phi1"] = io::tuple_to_json(inst.space, inst.phi1);
  ce["open_set"] = io::open_set_to_json(inst.space, inst.open_set);
  return ce;
}

// ---- stabilizer suite ------------------------------------------------------

const std::vector<Rat>& descent_values() {
  static const std::vector<Rat> v{Rat(1), Rat(3, 2), Rat(2), Rat(3)};
  return v;
}

std::optional<Json> descent_certificates(Rng& rng, const SuiteHooks&) {
  const Rat eps(1, 100);
  StabilizerInstance inst = random_instance(rng, random_shape(rng, 3), descent_values(), eps);
  const std::vector<PointId> original = inst.c;
  const DeflattenReport d = deflatten(inst, eps / Rat(2));
  inst.epsilon = eps / Rat(2);
  const DescentTrace trace = descend(inst);
  std::optional<std::string> problem;
  if (!flat_triangles(inst).empty()) problem = "flat triangle after deflatten";
  if (!problem && d.displacement > eps / Rat(2)) problem = "deflatten moved the target too far";
  if (!problem) problem = audit_trace(inst, trace);
  if (!problem && !trace.converged) problem = "no convergence: " + trace.failure;
  std::vector<PartialIsometry> word;
  for (const Move& m : trace.iterations) word.push_back(m.certificate);
  if (!problem) {
    const auto image = apply_word(word, inst.a);
    for (std::size_t i = 0; i < image.size() && !problem; ++i) {
      if (inst.space.distance(image[i], original[i]) > eps) problem = "word misses the target";
    }
  }
  if (!problem && audit_generators(inst.space, word, inst.a, inst.b)) problem = "displacement bound";
  if (!problem) return std::nullopt;
  io::TraceDocument doc{inst, original, d, trace, 0};
  Json ce = io::trace_to_json(doc);
  ce["problem"] = *problem;
  return ce;
}

std::optional<Json> single_generator(Rng& rng, const SuiteHooks&) {
  const FinMetric m = random_metric(rng, uniform(rng, 2, 5), halves());
  GrowingSpace s(m);
  const std::size_t na = uniform(rng, 1, m.size() - 1);
  std::vector<PointId> a = all_points(na);
  const PointId x = uniform(rng, na, m.size() - 1);
  // Image of x: same distances to A, random distance to x.
  std::vector<PointId> dom = a;
  dom.push_back(x);
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<Rat> values;
    for (PointId p : a) values.push_back(m.distance(x, p));
    values.push_back(Rat(static_cast<long>(uniform(rng, 0, 12)), 2));
    KatetovMap f(dom, std::move(values));
    if (!check_katetov(s, f).ok()) continue;
    const PointId y = realize_katetov(s, f);
    PartialIsometry g{dom, a, FixedTag::kFixesA};
    g.range.push_back(y);
    const std::vector<PartialIsometry> word{g};
    if (!audit_generators(s, word, a, {})) return std::nullopt;
    Json ce;
    ce["space"] = io::growing_to_json(s);
    ce["generator"] = io::isometry_to_json(s, g);
    return ce;
  }
  return std::nullopt;
}

std::optional<Json> move_optimality(Rng& rng, const SuiteHooks&) {
  // One free coordinate: no point at B-distances of x can beat the sup formula.
  StabilizerInstance inst = random_instance(rng, {1, uniform(rng, 1, 3), 0, false}, descent_values(), Rat(1, 100));
  const Rat predicted = predicted_move(inst, inst.a, true);
  std::vector<PointId> dom = inst.b;
  dom.push_back(inst.c[0]);
  for (Rat v; v < predicted; v += Rat(1, 4)) {
    std::vector<Rat> values;
    for (PointId q : inst.b) values.push_back(inst.space.distance(inst.a[0], q));
    values.push_back(v);
    if (check_katetov(inst.space, KatetovMap(dom, std::move(values))).ok()) {
      Json ce;
      ce["space"] = io::growing_to_json(inst.space);
      ce["beaten_by"] = v.str();
      return ce;
    }
  }
  const Move m = b_move(inst, inst.a);
  if (m.f == predicted) return std::nullopt;
  Json ce;
  ce["space"] = io::growing_to_json(inst.space);
  ce["predicted"] = predicted.str();
  ce["realized"] = m.f.str();
  return ce;
}

const std::vector<Property>& properties() {
  static const std::vector<Property> all{
      {"katetov", "sup_dist_oracle", sup_dist_oracle},
      {"katetov", "extension_isometry", extension_isometry},
      {"katetov", "extension_valid_and_supported", extension_valid},
      {"katetov", "minimal_value_extension", minimal_value},
      {"katetov", "convex_combination_valid", convexity},
      {"katetov", "average_flatness", averaged_flatness},
      {"katetov", "amalgam_restricts", amalgam_restricts},
      {"katetov", "inverse_isometry", inverse_isometry},
      {"lemma1", "closure_audits", closure_audits},
      {"lemma1", "embed_round_trip", embed_round_trip},
      {"lemma1", "dbar_between_bounds", dbar_bounds},
      {"lemma1", "catalog_monotone", catalog_monotone},
      {"homotopy", "blend_validity", blend_validity},
      {"homotopy", "path_sampling", path_sampling},
      {"stabilizer", "descent_certificates", descent_certificates},
      {"stabilizer", "single_generator_displacement", single_generator},
      {"stabilizer", "move_optimality", move_optimality},
  };
  return all;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.passed; });
}

io::Json SuiteReport::to_json() const {
  Json out;
  out["seed"] = seed;
  out["budget"] = budget;
  out["passed"] = passed();
  Json list = Json::array();
  for (const PropertyResult& r : results) {
    Json e;
    e["suite"] = r.suite;
    e["property"] = r.property;
    e["cases"] = r.cases;
    e["passed"] = r.passed;
    e["counterexample"] = r.counterexample ? *r.counterexample : Json(nullptr);
    list.push_back(std::move(e));
  }
  out["results"] = std::move(list);
  return out;
}

SuiteReport run_suite(std::string_view name, std::uint64_t seed, std::size_t budget,
                      const SuiteHooks& hooks) {
  static const std::vector<std::string_view> known{"katetov", "lemma1", "homotopy", "stabilizer", "all"};
  if (std::find(known.begin(), known.end(), name) == known.end()) {
    throw ParseError("unknown suite '" + std::string(name) + "'");
  }
  SuiteHooks effective = hooks;
  if (!effective.sup_dist) effective.sup_dist = [](const KatetovMap& f, const KatetovMap& g) { return sup_dist(f, g); };
  SuiteReport report;
  report.seed = seed;
  report.budget = budget;
  if (budget == 0) return report;
  for (const Property& p : properties()) {
    if (name != "all" && name != p.suite) continue;
    PropertyResult r{p.suite, p.name, 0, true, std::nullopt};
    Rng rng(seed ^ fnv1a(std::string(p.suite) + "/" + p.name));
    for (std::size_t c = 0; c < budget; ++c) {
      ++r.cases;
      if (auto ce = p.check(rng, effective)) {
        r.passed = false;
        r.counterexample = std::move(ce);
        break;
      }
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace urykit
