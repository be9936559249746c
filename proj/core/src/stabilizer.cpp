#include "urykit/stabilizer.hpp"

#include <algorithm>

#include "urykit/lp.hpp"

namespace urykit {

namespace {

bool contains(std::span<const PointId> set, PointId p) {
  return std::find(set.begin(), set.end(), p) != set.end();
}

void require_distinct(std::span<const PointId> tuple, const char* name) {
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    for (std::size_t j = i + 1; j < tuple.size(); ++j) {
      if (tuple[i] == tuple[j]) throw ValidationError(std::string(name) + " repeats a point");
    }
  }
}

// Builds a correspondence from pairs, dropping repeats of the same pair.
PartialIsometry correspondence(std::span<const PointId> from, std::span<const PointId> to,
                               FixedTag tag) {
  PartialIsometry f;
  f.tag = tag;
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (auto img = f.image(from[i])) {
      if (*img != to[i]) throw InternalError("certificate sends one point to two places");
      continue;
    }
    f.domain.push_back(from[i]);
    f.range.push_back(to[i]);
  }
  return f;
}

std::vector<Rat> row_over(const GrowingSpace& space, PointId p, std::span<const PointId> over) {
  std::vector<Rat> row;
  row.reserve(over.size());
  for (PointId q : over) row.push_back(space.distance(p, q));
  return row;
}

Rat move_term(const GrowingSpace& space, PointId x, PointId c, std::span<const PointId> s) {
  Rat best;
  for (PointId q : s) best = std::max(best, abs(space.distance(c, q) - space.distance(x, q)));
  return best;
}

Move side_move(StabilizerInstance& inst, std::span<const PointId> x, bool fix_b) {
  const std::vector<PointId>& s = fix_b ? inst.b : inst.a;
  const std::size_t n = inst.a.size();
  if (x.size() != n) throw ValidationError("tuple length differs from A");
  GrowingSpace& space = inst.space;
  ExtensionGraph graph(space.snapshot(s), space.snapshot(inst.a));
  const auto everything = all_points(s.size());
  for (std::size_t i = 0; i < n; ++i) {
    graph.add(i, KatetovMap(everything, row_over(space, inst.c[i], s)));
    graph.add(i, KatetovMap(everything, row_over(space, x[i], s)));
  }
  const ClosureMetric closure = closure_metric(graph);
  std::vector<std::optional<PointId>> pinned(closure.size());
  for (std::size_t i = 0; i < n; ++i) pinned[s.size() + 2 * i] = inst.c[i];
  const std::vector<PointId> placed = realize_closure(space, s, closure, pinned);

  Move m;
  m.tag = fix_b ? MoveTag::kBMove : MoveTag::kAMove;
  for (std::size_t i = 0; i < n; ++i) m.tuple.push_back(placed[s.size() + 2 * i + 1]);
  for (std::size_t i = 0; i < n; ++i) {
    const Rat d = space.distance(m.tuple[i], inst.c[i]);
    if (d != move_term(space, x[i], inst.c[i], s)) {
      throw InternalError("move did not reach the sup-norm distance to the target");
    }
    m.f += d;
  }
  std::vector<PointId> from(x.begin(), x.end());
  std::vector<PointId> to = m.tuple;
  from.insert(from.end(), s.begin(), s.end());
  to.insert(to.end(), s.begin(), s.end());
  m.certificate = correspondence(from, to, fix_b ? FixedTag::kFixesB : FixedTag::kFixesA);
  if (check_partial_isometry(space, m.certificate)) {
    throw InternalError("move certificate is not an isometry");
  }
  return m;
}

}  // namespace

void validate_instance(const StabilizerInstance& inst) {
  const GrowingSpace& space = inst.space;
  if (inst.a.empty() || inst.b.empty()) throw ValidationError("A and B must be nonempty");
  if (inst.c.size() != inst.a.size()) throw ValidationError("C must have one point per point of A");
  if (inst.k > inst.a.size() || inst.k > inst.b.size()) throw ValidationError("overlap k too large");
  if (inst.epsilon.sign() <= 0) throw ValidationError("epsilon must be positive");
  for (const auto* t : {&inst.a, &inst.b, &inst.c}) {
    for (PointId p : *t) {
      if (p >= space.size()) throw ValidationError("instance point outside the space");
    }
  }
  require_distinct(inst.a, "A");
  require_distinct(inst.b, "B");
  require_distinct(inst.c, "C");
  for (std::size_t i = 0; i < inst.a.size(); ++i) {
    if (i < inst.k) {
      if (inst.a[i] != inst.b[i]) throw ValidationError("a_i and b_i must coincide for i < k");
      if (inst.c[i] != inst.a[i]) throw ValidationError("phi must fix the points of A n B");
    } else if (contains(inst.b, inst.a[i])) {
      throw ValidationError("A and B share a point outside the first k");
    }
  }
  for (std::size_t i = 0; i < inst.a.size(); ++i) {
    for (std::size_t j = i + 1; j < inst.a.size(); ++j) {
      if (space.distance(inst.c[i], inst.c[j]) != space.distance(inst.a[i], inst.a[j])) {
        throw ValidationError("C is not isometric to A at positions " + std::to_string(i) + "," +
                              std::to_string(j));
      }
    }
  }
}

StabilizerInstance normalize_instance(GrowingSpace space, std::vector<PointId> a,
                                      std::vector<PointId> b, std::vector<PointId> c, Rat epsilon) {
  if (c.size() != a.size()) throw ValidationError("C must have one point per point of A");
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (contains(b, a[i])) order.push_back(i);
  }
  const std::size_t k = order.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!contains(b, a[i])) order.push_back(i);
  }
  StabilizerInstance inst;
  inst.k = k;
  inst.epsilon = std::move(epsilon);
  for (std::size_t i : order) {
    inst.a.push_back(a[i]);
    inst.c.push_back(c[i]);
  }
  for (std::size_t i = 0; i < k; ++i) inst.b.push_back(inst.a[i]);
  for (PointId p : b) {
    if (!contains(a, p)) inst.b.push_back(p);
  }
  inst.space = std::move(space);
  validate_instance(inst);
  return inst;
}

Rat objective(const StabilizerInstance& inst, std::span<const PointId> x) {
  if (x.size() != inst.c.size()) throw ValidationError("tuple length differs from C");
  Rat f;
  for (std::size_t i = 0; i < x.size(); ++i) f += inst.space.distance(x[i], inst.c[i]);
  return f;
}

std::string_view to_string(MoveTag tag) {
  switch (tag) {
    case MoveTag::kAMove:
      return "A-move";
    case MoveTag::kBMove:
      return "B-move";
    case MoveTag::kPerturb:
      return "perturb";
  }
  return "";
}

MoveTag parse_move_tag(std::string_view text) {
  if (text == "A-move") return MoveTag::kAMove;
  if (text == "B-move") return MoveTag::kBMove;
  if (text == "perturb") return MoveTag::kPerturb;
  throw ParseError("unknown move tag '" + std::string(text) + "'");
}

Rat predicted_move(const StabilizerInstance& inst, std::span<const PointId> x, bool fix_b) {
  const std::vector<PointId>& s = fix_b ? inst.b : inst.a;
  Rat f;
  for (std::size_t i = 0; i < x.size(); ++i) f += move_term(inst.space, x[i], inst.c[i], s);
  return f;
}

Move b_move(StabilizerInstance& inst, std::span<const PointId> x) { return side_move(inst, x, true); }
Move a_move(StabilizerInstance& inst, std::span<const PointId> x) { return side_move(inst, x, false); }

Move plateau_perturb(StabilizerInstance& inst, std::span<const PointId> x, std::size_t i0,
                     std::size_t j0, const Rat& delta, bool perturb_b) {
  GrowingSpace& space = inst.space;
  const std::vector<PointId>& moved = perturb_b ? inst.b : inst.a;
  const std::vector<PointId>& kept = perturb_b ? inst.a : inst.b;
  const FixedTag tag = perturb_b ? FixedTag::kFixesA : FixedTag::kFixesB;
  if (x.size() != inst.a.size()) throw ValidationError("tuple length differs from A");
  if (i0 >= x.size() || j0 >= moved.size()) throw ValidationError("perturbation index out of range");
  if (delta.sign() < 0) throw ValidationError("perturbation size must be non-negative");

  std::vector<PointId> from(x.begin(), x.end());
  from.insert(from.end(), kept.begin(), kept.end());
  Move m;
  m.tag = MoveTag::kPerturb;
  if (delta.is_zero()) {
    m.tuple.assign(x.begin(), x.end());
    m.f = objective(inst, x);
    m.certificate = correspondence(from, from, tag);
    return m;
  }
  if (i0 < inst.k) throw ValidationError("points of A n B cannot be perturbed");
  const PointId xi = x[i0];
  const PointId target = moved[j0];
  const Rat gap = space.distance(xi, inst.c[i0]);
  const Rat excess = space.distance(inst.c[i0], target) - space.distance(xi, target);
  int sign = 0;
  if (gap.sign() > 0 && excess == gap) sign = 1;
  if (gap.sign() > 0 && excess == -gap) sign = -1;
  if (sign == 0) throw ValidationError("no flat triangle through x, c and the perturbed point");

  std::vector<PointId> domain;
  for (const auto* set : {&inst.a, &inst.b, &inst.c}) domain.insert(domain.end(), set->begin(), set->end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i != i0) domain.push_back(x[i]);
  }
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());

  const Rat floor = delta / Rat(1L << 20);
  for (Rat step = delta; step >= floor; step /= 2) {
    std::vector<Rat> values;
    for (PointId p : domain) {
      Rat v = space.distance(xi, p);
      if (p == target) v += sign > 0 ? step : -step;
      values.push_back(std::move(v));
    }
    KatetovMap f(domain, std::move(values));
    if (f.zero() || !check_katetov(space, f).ok()) continue;
    const PointId z = space.append(std::move(f));
    m.tuple.assign(x.begin(), x.end());
    m.tuple[i0] = z;
    m.f = objective(inst, m.tuple);
    std::vector<PointId> to = m.tuple;
    to.insert(to.end(), kept.begin(), kept.end());
    m.certificate = correspondence(from, to, tag);
    if (check_partial_isometry(space, m.certificate)) {
      throw InternalError("perturbation certificate is not an isometry");
    }
    return m;
  }
  throw ValidationError("no valid perturbation of d(x_" + std::to_string(i0) + ", " +
                        space.label(target) + ") down to delta/2^20; a flat triangle remains");
}

namespace {

// Distances of the instance with the target rows replaced: rows[q][u] is
// d(c_q, U_u) where U is A followed by the points of B outside A.
struct TargetRows {
  std::vector<PointId> u;
  std::vector<std::vector<Rat>> rows;
};

std::vector<PointId> union_points(const StabilizerInstance& inst) {
  std::vector<PointId> u = inst.a;
  for (std::size_t j = inst.k; j < inst.b.size(); ++j) u.push_back(inst.b[j]);
  return u;
}

std::size_t b_index(const StabilizerInstance& inst, std::size_t r) {
  return r < inst.k ? r : inst.a.size() + (r - inst.k);
}

// A side is either a known rational or a single LP variable.
struct Side {
  std::optional<std::size_t> var;
  Rat value;
};

struct TriangleSides {
  Side s1, s2, s3;
};

template <class RowValue>
TriangleSides sides_of(const StabilizerInstance& inst, const FlatTriangle& t, RowValue&& row) {
  const GrowingSpace& space = inst.space;
  auto fixed = [](Rat v) { return Side{std::nullopt, std::move(v)}; };
  switch (t.family) {
    case TriangleFamily::kACB:
      return {row(t.q, t.p), row(t.q, b_index(inst, t.r)),
              fixed(space.distance(inst.a[t.p], inst.b[t.r]))};
    case TriangleFamily::kBCC:
      return {row(t.q, b_index(inst, t.p)), row(t.r, b_index(inst, t.p)),
              fixed(space.distance(inst.a[t.q], inst.a[t.r]))};
    case TriangleFamily::kACC:
      return {row(t.q, t.p), row(t.r, t.p), fixed(space.distance(inst.a[t.q], inst.a[t.r]))};
  }
  throw InternalError("unknown triangle family");
}

bool flat_in(const StabilizerInstance& inst, const FlatTriangle& t,
             const std::vector<std::vector<Rat>>& rows) {
  const auto s = sides_of(inst, t, [&](std::size_t q, std::size_t u) {
    return Side{std::nullopt, rows[q][u]};
  });
  return is_flat_triangle(s.s1.value, s.s2.value, s.s3.value);
}

template <class Visit>
void for_each_triangle(const StabilizerInstance& inst, Visit&& visit) {
  const std::size_t n = inst.a.size();
  const std::size_t k = inst.k;
  for (std::size_t q = k; q < n; ++q) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t r = 0; r < inst.b.size(); ++r) {
        if (std::max(p, r) < k) continue;
        visit(FlatTriangle{TriangleFamily::kACB, p, q, r});
      }
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == q) continue;
      for (std::size_t p = k; p < inst.b.size(); ++p) visit(FlatTriangle{TriangleFamily::kBCC, p, q, r});
      for (std::size_t p = k; p < n; ++p) visit(FlatTriangle{TriangleFamily::kACC, p, q, r});
    }
  }
}

std::vector<std::vector<Rat>> rows_of(const StabilizerInstance& inst, std::span<const PointId> c,
                                      std::span<const PointId> u) {
  std::vector<std::vector<Rat>> rows;
  for (PointId p : c) rows.push_back(row_over(inst.space, p, u));
  return rows;
}

// Spec in the admissible class (rows i < k pinned to a_i) making t non-flat,
// maximizing the smallest triangle slack (capped at 1).
std::optional<std::vector<std::vector<Rat>>> find_witness(const StabilizerInstance& inst,
                                                          std::span<const PointId> u,
                                                          const std::vector<std::vector<Rat>>& base_rows,
                                                          const FlatTriangle& t) {
  const GrowingSpace& space = inst.space;
  const std::size_t n = inst.a.size();
  const std::size_t k = inst.k;
  const std::size_t m = u.size();
  lp::Problem problem;
  auto var = [&](std::size_t q, std::size_t x) { return (q - k) * m + x; };
  for (std::size_t i = k * m; i < n * m; ++i) problem.add_variable();
  const std::size_t slack = problem.add_variable();

  using lp::Relation;
  // Row value as (optional variable, constant).
  auto row = [&](std::size_t q, std::size_t x) {
    if (q < k) return Side{std::nullopt, base_rows[q][x]};
    return Side{var(q, x), Rat()};
  };
  // sum of signs * sides  rel  rhs
  auto add = [&](std::initializer_list<std::pair<Side, int>> parts, Relation rel, const Rat& rhs,
                 bool with_slack = false) {
    std::vector<lp::Term> terms;
    Rat constant;
    for (const auto& [side, sign] : parts) {
      if (side.var) {
        terms.push_back({*side.var, Rat(sign)});
      } else {
        constant += Rat(sign) * side.value;
      }
    }
    if (with_slack) terms.push_back({slack, Rat(-1)});
    if (terms.empty()) return;
    problem.add(std::move(terms), rel, rhs - constant);
  };
  for (std::size_t q = k; q < n; ++q) {
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = x + 1; y < m; ++y) {
        const Rat d = space.distance(u[x], u[y]);
        add({{row(q, x), 1}, {row(q, y), -1}}, Relation::kLessEqual, d);
        add({{row(q, x), -1}, {row(q, y), 1}}, Relation::kLessEqual, d);
        add({{row(q, x), 1}, {row(q, y), 1}}, Relation::kGreaterEqual, d);
      }
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == q || (r >= k && r < q)) continue;
      const Rat d = space.distance(inst.a[q], inst.a[r]);
      for (std::size_t x = 0; x < m; ++x) {
        add({{row(q, x), 1}, {row(r, x), -1}}, Relation::kLessEqual, d);
        add({{row(q, x), -1}, {row(r, x), 1}}, Relation::kLessEqual, d);
        add({{row(q, x), 1}, {row(r, x), 1}}, Relation::kGreaterEqual, d);
      }
    }
  }
  const TriangleSides s = sides_of(inst, t, row);
  add({{s.s1, 1}, {s.s2, 1}, {s.s3, -1}}, Relation::kGreaterEqual, 0, true);
  add({{s.s1, 1}, {s.s3, 1}, {s.s2, -1}}, Relation::kGreaterEqual, 0, true);
  add({{s.s2, 1}, {s.s3, 1}, {s.s1, -1}}, Relation::kGreaterEqual, 0, true);
  problem.add({{slack, 1}}, Relation::kLessEqual, 1);
  problem.maximize({{slack, 1}});
  const lp::Solution sol = problem.solve();
  if (sol.status != lp::Status::kOptimal || sol.objective.sign() <= 0) return std::nullopt;
  std::vector<std::vector<Rat>> rows = base_rows;
  for (std::size_t q = k; q < n; ++q) {
    for (std::size_t x = 0; x < m; ++x) rows[q][x] = sol.values[var(q, x)];
  }
  return rows;
}

}  // namespace

std::vector<FlatTriangle> flat_triangles(const StabilizerInstance& inst) {
  return flat_triangles(inst, inst.c);
}

std::vector<FlatTriangle> flat_triangles(const StabilizerInstance& inst,
                                         std::span<const PointId> c) {
  const std::vector<PointId> u = union_points(inst);
  const auto rows = rows_of(inst, c, u);
  std::vector<FlatTriangle> out;
  for_each_triangle(inst, [&](const FlatTriangle& t) {
    if (flat_in(inst, t, rows)) out.push_back(t);
  });
  return out;
}

DeflattenReport deflatten(StabilizerInstance& inst, const Rat& delta) {
  validate_instance(inst);
  if (delta.sign() <= 0) throw ValidationError("deflatten needs a positive delta");
  GrowingSpace& space = inst.space;
  const std::vector<PointId> u = union_points(inst);
  const auto base_rows = rows_of(inst, inst.c, u);
  const std::vector<FlatTriangle> flat = flat_triangles(inst);

  DeflattenReport report;
  report.c = inst.c;
  report.flat_before = flat.size();
  if (flat.empty()) return report;

  std::vector<std::vector<std::vector<Rat>>> witnesses;
  for (const FlatTriangle& t : flat) {
    const bool covered = std::any_of(witnesses.begin(), witnesses.end(),
                                     [&](const auto& w) { return !flat_in(inst, t, w); });
    if (covered) continue;
    auto w = find_witness(inst, u, base_rows, t);
    if (!w) {
      throw ValidationError("no admissible target makes the triangle through c_" +
                            std::to_string(t.q) + " non-flat");
    }
    witnesses.push_back(std::move(*w));
  }
  report.witnesses = witnesses.size();

  const std::size_t n = inst.a.size();
  const Rat share(1, static_cast<long>(witnesses.size()));
  std::vector<std::vector<Rat>> mean(n, std::vector<Rat>(u.size()));
  for (const auto& w : witnesses) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t x = 0; x < u.size(); ++x) mean[i][x] += share * w[i][x];
    }
  }
  Rat spread;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x = 0; x < u.size(); ++x) spread = std::max(spread, abs(mean[i][x] - base_rows[i][x]));
  }
  report.weight = spread <= delta ? Rat(1) : delta / spread;
  const Rat keep = Rat(1) - report.weight;

  ExtensionGraph graph(space.snapshot(u), space.snapshot(inst.a));
  const auto everything = all_points(u.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rat> blended(u.size());
    for (std::size_t x = 0; x < u.size(); ++x) {
      blended[x] = keep * base_rows[i][x] + report.weight * mean[i][x];
    }
    graph.add(i, KatetovMap(everything, base_rows[i]));
    graph.add(i, KatetovMap(everything, std::move(blended)));
  }
  const ClosureMetric closure = closure_metric(graph);
  std::vector<std::optional<PointId>> pinned(closure.size());
  for (std::size_t i = 0; i < n; ++i) pinned[u.size() + 2 * i] = inst.c[i];
  const std::vector<PointId> placed = realize_closure(space, u, closure, pinned);

  std::vector<PointId> c2;
  for (std::size_t i = 0; i < n; ++i) c2.push_back(placed[u.size() + 2 * i + 1]);
  for (std::size_t i = 0; i < n; ++i) {
    report.displacement = std::max(report.displacement, space.distance(c2[i], inst.c[i]));
  }
  if (report.displacement > delta) throw InternalError("deflattened target moved more than delta");
  if (!flat_triangles(inst, c2).empty()) throw InternalError("deflattened target still has a flat triangle");
  report.c = c2;
  inst.c = std::move(c2);
  validate_instance(inst);
  return report;
}

namespace {

// Tries to unblock the descent at one coordinate by perturbing the distances
// to every tight point of S (B when fix_b), then moving over S.
bool resolve_plateau(StabilizerInstance& inst, std::vector<PointId>& x, Rat& f, bool fix_b,
                     std::vector<Move>& out) {
  const std::vector<PointId>& s = fix_b ? inst.b : inst.a;
  for (std::size_t i0 = inst.k; i0 < x.size(); ++i0) {
    const Rat gap = inst.space.distance(x[i0], inst.c[i0]);
    if (gap.sign() == 0) continue;
    std::vector<std::size_t> tight;
    for (std::size_t j = inst.k; j < s.size(); ++j) {
      if (abs(inst.space.distance(inst.c[i0], s[j]) - inst.space.distance(x[i0], s[j])) == gap) {
        tight.push_back(j);
      }
    }
    if (tight.empty()) continue;
    std::vector<Move> steps;
    std::vector<PointId> y = x;
    bool ok = true;
    for (std::size_t j : tight) {
      try {
        steps.push_back(plateau_perturb(inst, y, i0, j, gap, fix_b));
      } catch (const ValidationError&) {
        ok = false;
        break;
      }
      y = steps.back().tuple;
    }
    if (!ok || steps.back().f > f || predicted_move(inst, y, fix_b) >= f) continue;
    steps.push_back(side_move(inst, y, fix_b));
    for (Move& m : steps) out.push_back(std::move(m));
    x = out.back().tuple;
    f = out.back().f;
    return true;
  }
  return false;
}

}  // namespace

DescentTrace descend(StabilizerInstance& inst, const DescentOptions& options) {
  validate_instance(inst);
  DescentTrace trace;
  trace.start = inst.a;
  trace.start_f = objective(inst, inst.a);
  std::vector<PointId> x = inst.a;
  Rat f = trace.start_f;
  bool prefer_b = true;
  while (f > inst.epsilon) {
    if (trace.iterations.size() >= options.max_iter) {
      trace.failure = "iteration cap of " + std::to_string(options.max_iter) + " reached at F = " + f.str();
      return trace;
    }
    bool moved = false;
    for (const bool side : {prefer_b, !prefer_b}) {
      if (predicted_move(inst, x, side) < f) {
        trace.iterations.push_back(side_move(inst, x, side));
        x = trace.iterations.back().tuple;
        f = trace.iterations.back().f;
        prefer_b = !side;
        moved = true;
        break;
      }
    }
    if (moved) continue;
    if (resolve_plateau(inst, x, f, true, trace.iterations) ||
        resolve_plateau(inst, x, f, false, trace.iterations)) {
      continue;
    }
    trace.failure = "plateau at F = " + f.str() + " could not be perturbed";
    return trace;
  }
  trace.converged = true;
  return trace;
}

std::optional<std::string> audit_trace(const StabilizerInstance& inst, const DescentTrace& trace) {
  const GrowingSpace& space = inst.space;
  if (trace.start != inst.a) return "trace does not start at A";
  if (trace.start_f != objective(inst, trace.start)) return "start F does not match";
  const std::vector<PointId>* prev = &trace.start;
  const Rat* prev_f = &trace.start_f;
  for (std::size_t t = 0; t < trace.iterations.size(); ++t) {
    const Move& m = trace.iterations[t];
    const std::string at = "iteration " + std::to_string(t) + ": ";
    if (m.f != objective(inst, m.tuple)) return at + "recorded F does not match the tuple";
    if (m.f > *prev_f) return at + "F increased";
    const PartialIsometry& cert = m.certificate;
    if (cert.domain.size() != cert.range.size()) return at + "certificate tuples differ in length";
    if (check_partial_isometry(space, cert)) return at + "certificate is not an isometry";
    if (m.tag == MoveTag::kAMove && cert.tag != FixedTag::kFixesA) return at + "A-move not tagged FixesA";
    if (m.tag == MoveTag::kBMove && cert.tag != FixedTag::kFixesB) return at + "B-move not tagged FixesB";
    if (cert.tag == FixedTag::kFixesA && !fixes_pointwise(cert, inst.a)) return at + "A not fixed";
    if (cert.tag == FixedTag::kFixesB && !fixes_pointwise(cert, inst.b)) return at + "B not fixed";
    if (cert.tag == FixedTag::kNone) return at + "untagged certificate";
    for (std::size_t i = 0; i < prev->size(); ++i) {
      if (cert.image((*prev)[i]) != m.tuple[i]) return at + "certificate does not carry the tuple";
    }
    prev = &m.tuple;
    prev_f = &m.f;
  }
  if (trace.converged && *prev_f > inst.epsilon) return "trace claims convergence above epsilon";
  return std::nullopt;
}

std::vector<PointId> apply_word(std::span<const PartialIsometry> word,
                                std::span<const PointId> points) {
  std::vector<PointId> out(points.begin(), points.end());
  for (std::size_t t = 0; t < word.size(); ++t) {
    for (PointId& p : out) {
      const auto img = word[t].image(p);
      if (!img) throw ValidationError("word is undefined at a point after " + std::to_string(t) + " steps");
      p = *img;
    }
  }
  return out;
}

AlignedInstance align_instance(GrowingSpace& space, std::span<const PointId> x0,
                               std::span<const PointId> a, std::span<const PointId> b,
                               const PartialIsometry& phi, const Rat& eps) {
  if (eps.sign() <= 0) throw ValidationError("epsilon must be positive");
  for (PointId p : a) {
    if (!contains(x0, p)) throw ValidationError("X0 must contain A");
  }
  const Rat offset = eps / Rat(6);
  AlignedInstance out;
  std::vector<PointId> domain(x0.begin(), x0.end());
  domain.insert(domain.end(), b.begin(), b.end());
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  for (PointId p : x0) {
    const auto target = phi.image(p);
    if (!target) throw ValidationError("phi is undefined on " + space.label(p));
    out.open_set.anchors.push_back({out.x0.size(), *target, eps / Rat(3)});
    if (contains(a, p) || !contains(b, p)) {
      out.x0.push_back(p);
      continue;
    }
    std::vector<Rat> values;
    for (PointId q : domain) values.push_back(space.distance(p, q) + offset);
    const PointId moved = realize_katetov(space, KatetovMap(domain, std::move(values)));
    out.replaced.emplace_back(p, moved);
    out.x0.push_back(moved);
  }
  return out;
}

Duplicate duplicate_over(GrowingSpace& space, std::span<const PointId> x,
                         std::span<const PointId> common) {
  require_distinct(x, "X");
  for (PointId p : common) {
    if (!contains(x, p)) throw ValidationError("common points must lie in X");
  }
  const FinMetric mx = space.snapshot(x);
  std::vector<std::string> copy_labels;
  std::vector<std::string> common_labels;
  for (PointId p : x) {
    if (contains(common, p)) {
      copy_labels.push_back(space.label(p));
      common_labels.push_back(space.label(p));
    } else {
      copy_labels.push_back(space.label(p) + "~");
    }
  }
  const FinMetric copy = FinMetric::from_matrix(copy_labels, mx.matrix());
  const FinMetric amalgam = amalgamate_free(mx, copy, common_labels);

  std::vector<PointId> fresh;  // positions in x of points that get a new copy
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!contains(common, x[i])) fresh.push_back(i);
  }
  std::vector<PointId> new_ids;
  if (!fresh.empty()) {
    ExtensionSpec spec;
    spec.base = mx;
    spec.pattern = copy.restrict(fresh);
    for (std::size_t f = 0; f < fresh.size(); ++f) {
      std::vector<Rat> row;
      const PointId pos = x.size() + f;
      for (std::size_t i = 0; i < x.size(); ++i) row.push_back(amalgam.distance(pos, i));
      spec.cross.push_back(std::move(row));
    }
    new_ids = realize_spec(space, x, spec);
  }
  Duplicate out;
  std::size_t next = 0;
  for (PointId p : x) out.copy.push_back(contains(common, p) ? p : new_ids[next++]);
  out.correspondence = PartialIsometry{{x.begin(), x.end()}, out.copy, FixedTag::kNone};
  if (check_partial_isometry(space, out.correspondence)) {
    throw InternalError("duplicate is not isometric to X");
  }
  return out;
}

namespace {

std::optional<Rat> distance_to_fixed(const GrowingSpace& space, const PartialIsometry& g, PointId y,
                                     std::span<const PointId> a, std::span<const PointId> b) {
  std::span<const PointId> fixed;
  if (g.tag == FixedTag::kFixesA) fixed = a;
  if (g.tag == FixedTag::kFixesB) fixed = b;
  if (g.tag == FixedTag::kNone) throw ValidationError("generator carries no fixed-set tag");
  std::optional<Rat> best;
  for (PointId p : fixed) {
    if (g.image(p) != p) continue;
    Rat d = space.distance(y, p);
    if (!best || d < *best) best = std::move(d);
  }
  return best;
}

}  // namespace

DisplacementReport displacement_audit(const GrowingSpace& space,
                                      std::span<const PartialIsometry> word, PointId x,
                                      std::span<const PointId> a, std::span<const PointId> b) {
  DisplacementReport report;
  report.orbit.push_back(x);
  PointId y = x;
  for (std::size_t t = 0; t < word.size(); ++t) {
    const auto img = word[t].image(y);
    if (!img) {
      throw ValidationError("word is undefined at " + space.label(y) + " after " +
                            std::to_string(t) + " generators");
    }
    const auto fix = distance_to_fixed(space, word[t], y, a, b);
    if (!fix) throw ValidationError("generator " + std::to_string(t) + " fixes none of its tagged set");
    GeneratorCheck check{t, y, space.distance(y, *img), Rat(2) * *fix};
    if (check.displacement > check.bound) report.within_bounds = false;
    report.word_bound += check.bound;
    report.steps.push_back(std::move(check));
    y = *img;
    report.orbit.push_back(y);
  }
  report.displacement = space.distance(x, y);
  if (report.displacement > report.word_bound) report.within_bounds = false;
  std::optional<Rat> near;
  for (const auto set : {a, b}) {
    for (PointId p : set) {
      Rat d = space.distance(x, p);
      if (!near || d < *near) near = std::move(d);
    }
  }
  if (near) report.union_bound = Rat(2) * Rat(static_cast<long>(word.size())) * *near;
  return report;
}

std::optional<GeneratorCheck> audit_generators(const GrowingSpace& space,
                                               std::span<const PartialIsometry> word,
                                               std::span<const PointId> a,
                                               std::span<const PointId> b) {
  for (std::size_t t = 0; t < word.size(); ++t) {
    const PartialIsometry& g = word[t];
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto fix = distance_to_fixed(space, g, g.domain[i], a, b);
      if (!fix) throw ValidationError("generator " + std::to_string(t) + " fixes none of its tagged set");
      GeneratorCheck check{t, g.domain[i], space.distance(g.domain[i], g.range[i]), Rat(2) * *fix};
      if (check.displacement > check.bound) return check;
    }
  }
  return std::nullopt;
}

}  // namespace urykit
