#include "urykit/extension_space.hpp"

#include <algorithm>
#include <functional>

#include "urykit/lp.hpp"

namespace urykit {

KatetovMap ExtensionSpec::row(std::size_t i) const {
  return KatetovMap(all_points(base.size()), cross.at(i));
}

DistanceMatrix joint_matrix(const ExtensionSpec& spec) {
  const std::size_t nx = spec.base.size();
  const std::size_t nf = spec.pattern.size();
  DistanceMatrix d(nx + nf, std::vector<Rat>(nx + nf));
  for (std::size_t p = 0; p < nx; ++p) {
    for (std::size_t q = 0; q < nx; ++q) d[p][q] = spec.base.distance(p, q);
  }
  for (std::size_t i = 0; i < nf; ++i) {
    for (std::size_t j = 0; j < nf; ++j) d[nx + i][nx + j] = spec.pattern.distance(i, j);
    for (std::size_t x = 0; x < nx; ++x) {
      d[nx + i][x] = spec.cross.at(i).at(x);
      d[x][nx + i] = spec.cross.at(i).at(x);
    }
  }
  return d;
}

MetricReport check_spec(const ExtensionSpec& spec) {
  const std::size_t nx = spec.base.size();
  const std::size_t nf = spec.pattern.size();
  if (spec.cross.size() != nf) {
    return {MetricFault::kStructural, {}, "spec has " + std::to_string(spec.cross.size()) +
                                              " cross rows for a pattern of " + std::to_string(nf)};
  }
  for (std::size_t i = 0; i < nf; ++i) {
    if (spec.cross[i].size() != nx) {
      return {MetricFault::kStructural, {i}, "cross row " + std::to_string(i) + " has wrong length"};
    }
    for (std::size_t x = 0; x < nx; ++x) {
      if (spec.cross[i][x].sign() < 0) {
        return {MetricFault::kNonpositive, {nx + i, x}, "negative cross distance"};
      }
    }
  }
  const DistanceMatrix d = joint_matrix(spec);
  const std::size_t n = nx + nf;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t r = p + 1; r < n; ++r) {
      for (std::size_t q = 0; q < n; ++q) {
        if (q == p || q == r) continue;
        if (d[p][q] + d[q][r] < d[p][r]) {
          return {MetricFault::kTriangle, {p, q, r},
                  "spec breaks triangle (" + std::to_string(p) + "," + std::to_string(q) + "," +
                      std::to_string(r) + "): " + d[p][q].str() + "+" + d[q][r].str() + " < " +
                      d[p][r].str()};
        }
      }
    }
  }
  return {};
}

void require_spec(const ExtensionSpec& spec) {
  MetricReport report = check_spec(spec);
  if (report.structural()) throw ParseError(report.message);
  if (!report.ok()) throw MetricError(std::move(report));
}

std::optional<Rat> omega(const FinMetric& pattern, const KatetovMap& f, std::size_t i,
                         const KatetovMap& g, std::size_t j) {
  if (i == j) return sup_dist(f, g);
  const Rat& target = pattern.distance(i, j);
  if (!std::equal(f.domain().begin(), f.domain().end(), g.domain().begin(), g.domain().end())) {
    throw ValidationError("omega between maps with different domains");
  }
  for (std::size_t x = 0; x < f.size(); ++x) {
    const Rat& fx = f.values()[x];
    const Rat& gx = g.values()[x];
    if (abs(fx - gx) > target || fx + gx < target) return std::nullopt;
  }
  return target;
}

ExtensionGraph::ExtensionGraph(FinMetric base, FinMetric pattern)
    : base_(std::move(base)), pattern_(std::move(pattern)), catalogs_(pattern_.size()) {}

std::size_t ExtensionGraph::add(std::size_t copy, KatetovMap f) {
  if (copy >= catalogs_.size()) throw ValidationError("copy index out of range");
  if (f.size() != base_.size() || (!f.empty() && f.domain().back() != base_.size() - 1)) {
    throw ValidationError("catalog maps must be defined on every point of X");
  }
  require_katetov(base_, f);
  catalogs_[copy].push_back(std::move(f));
  return catalogs_[copy].size() - 1;
}

std::vector<GraphVertex> ExtensionGraph::vertices() const {
  std::vector<GraphVertex> out;
  for (std::size_t x = 0; x < base_.size(); ++x) out.push_back({std::nullopt, x});
  for (std::size_t c = 0; c < catalogs_.size(); ++c) {
    for (std::size_t k = 0; k < catalogs_[c].size(); ++k) out.push_back({c, k});
  }
  return out;
}

const KatetovMap& ExtensionGraph::map(const GraphVertex& v) const {
  if (!v.copy) throw ValidationError("base points carry no catalog map");
  return catalogs_.at(*v.copy).at(v.index);
}

std::optional<PointId> ExtensionGraph::as_base_point(const GraphVertex& v) const {
  if (!v.copy) return v.index;
  return map(v).zero();
}

std::optional<Rat> ExtensionGraph::weight(const GraphVertex& u, const GraphVertex& v) const {
  const auto bu = as_base_point(u);
  const auto bv = as_base_point(v);
  if (bu && bv) return base_.distance(*bu, *bv);
  if (bu) return map(v).value(*bu);
  if (bv) return map(u).value(*bv);
  return omega(pattern_, map(u), *u.copy, map(v), *v.copy);
}

ClosureMetric::ClosureMetric(std::vector<GraphVertex> vertices, std::vector<Rat> dist)
    : vertices_(std::move(vertices)), dist_(std::move(dist)) {}

std::size_t ClosureMetric::position(const GraphVertex& v) const {
  const auto it = std::find(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end()) throw ValidationError("vertex not in closure");
  return static_cast<std::size_t>(it - vertices_.begin());
}

ClosureMetric closure_metric(const ExtensionGraph& graph) {
  std::vector<GraphVertex> vs = graph.vertices();
  const std::size_t n = vs.size();
  std::vector<std::optional<Rat>> d(n * n);
  for (std::size_t u = 0; u < n; ++u) {
    d[u * n + u] = Rat();
    for (std::size_t v = u + 1; v < n; ++v) {
      d[u * n + v] = graph.weight(vs[u], vs[v]);
      d[v * n + u] = d[u * n + v];
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t u = 0; u < n; ++u) {
      const auto& uk = d[u * n + k];
      if (!uk) continue;
      for (std::size_t v = 0; v < n; ++v) {
        const auto& kv = d[k * n + v];
        if (!kv) continue;
        Rat via = *uk + *kv;
        auto& uv = d[u * n + v];
        if (!uv || via < *uv) uv = std::move(via);
      }
    }
  }
  std::vector<Rat> out(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    if (!d[i]) throw InternalError("extension graph is disconnected");
    out[i] = std::move(*d[i]);
  }
  return ClosureMetric(std::move(vs), std::move(out));
}

namespace {

// A relay slot is either one of the two fixed endpoint maps or a block of
// |X| LP variables.
struct Slot {
  const KatetovMap* fixed = nullptr;
  std::size_t offset = 0;
};

// value(slot, x) as (terms, constant).
struct Affine {
  std::vector<lp::Term> terms;
  Rat constant;
};

Affine value_of(const Slot& s, std::size_t x, const Rat& sign) {
  if (s.fixed) return {{}, sign * s.fixed->values()[x]};
  return {{{s.offset + x, sign}}, Rat()};
}

// sum of affine pieces `relation` rhs, constants moved across.
void add_row(lp::Problem& problem, std::initializer_list<Affine> parts, lp::Relation rel,
             const Rat& rhs) {
  std::vector<lp::Term> terms;
  Rat constant;
  for (const Affine& a : parts) {
    terms.insert(terms.end(), a.terms.begin(), a.terms.end());
    constant += a.constant;
  }
  if (terms.empty()) return;  // constant rows hold by construction of the endpoints
  problem.add(std::move(terms), rel, rhs - constant);
}

// Minimum over relay maps of the intra-copy sup-norm costs along a fixed
// copy sequence (pattern weights excluded).
Rat solve_chain(const ExtensionGraph& graph, const KatetovMap& f, const KatetovMap& g,
                const std::vector<std::size_t>& chain) {
  const FinMetric& base = graph.base();
  const std::size_t nx = base.size();
  const std::size_t m = chain.size() - 1;
  lp::Problem problem;
  // Entry and exit maps per copy visit.
  std::vector<Slot> entry(m + 1);
  std::vector<Slot> exit(m + 1);
  auto fresh = [&]() {
    Slot s;
    s.offset = problem.variables();
    for (std::size_t x = 0; x < nx; ++x) problem.add_variable();
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = x + 1; y < nx; ++y) {
        const Rat& dxy = base.distance(x, y);
        problem.add({{s.offset + x, 1}, {s.offset + y, -1}}, lp::Relation::kLessEqual, dxy);
        problem.add({{s.offset + x, -1}, {s.offset + y, 1}}, lp::Relation::kLessEqual, dxy);
        problem.add({{s.offset + x, 1}, {s.offset + y, 1}}, lp::Relation::kGreaterEqual, dxy);
      }
    }
    return s;
  };
  for (std::size_t t = 0; t <= m; ++t) {
    entry[t] = t == 0 ? Slot{&f, 0} : fresh();
    exit[t] = t == m ? Slot{&g, 0} : fresh();
  }
  std::vector<lp::Term> objective;
  for (std::size_t t = 0; t <= m; ++t) {
    const std::size_t s = problem.add_variable();
    objective.push_back({s, 1});
    const Affine slack{{{s, 1}}, Rat()};
    for (std::size_t x = 0; x < nx; ++x) {
      add_row(problem, {slack, value_of(entry[t], x, -1), value_of(exit[t], x, 1)},
              lp::Relation::kGreaterEqual, 0);
      add_row(problem, {slack, value_of(entry[t], x, 1), value_of(exit[t], x, -1)},
              lp::Relation::kGreaterEqual, 0);
    }
  }
  for (std::size_t t = 0; t < m; ++t) {
    const Rat& gap = graph.pattern().distance(chain[t], chain[t + 1]);
    for (std::size_t x = 0; x < nx; ++x) {
      add_row(problem, {value_of(exit[t], x, 1), value_of(entry[t + 1], x, -1)},
              lp::Relation::kLessEqual, gap);
      add_row(problem, {value_of(exit[t], x, -1), value_of(entry[t + 1], x, 1)},
              lp::Relation::kLessEqual, gap);
      add_row(problem, {value_of(exit[t], x, 1), value_of(entry[t + 1], x, 1)},
              lp::Relation::kGreaterEqual, gap);
    }
  }
  problem.minimize(std::move(objective));
  const lp::Solution sol = problem.solve();
  if (sol.status != lp::Status::kOptimal) {
    throw InternalError("relay chain program is not solvable to optimality");
  }
  return sol.objective;
}

}  // namespace

DbarResult dbar_exact(const ExtensionGraph& graph, const KatetovMap& f, std::size_t i,
                      const KatetovMap& g, std::size_t j, std::size_t depth_bound) {
  const FinMetric& base = graph.base();
  const auto everything = all_points(base.size());
  for (const KatetovMap* h : {&f, &g}) {
    if (!std::equal(h->domain().begin(), h->domain().end(), everything.begin(), everything.end())) {
      throw ValidationError("dbar_exact needs maps defined on all of X");
    }
    require_katetov(base, *h);
  }
  if (i >= graph.copies() || j >= graph.copies()) throw ValidationError("copy index out of range");

  DbarResult result;
  if (i == j) {
    result.value = sup_dist(f, g);
    return result;
  }
  if (auto x = f.zero()) {
    result.value = g.value(*x);
    return result;
  }
  if (auto x = g.zero()) {
    result.value = f.value(*x);
    return result;
  }
  if (auto w = omega(graph.pattern(), f, i, g, j)) {
    result.value = *w;
    return result;
  }

  const Rat lower = sup_dist(f, g);
  Rat best = f.values()[0] + g.values()[0];
  for (std::size_t x = 1; x < base.size(); ++x) best = std::min(best, f.values()[x] + g.values()[x]);

  const FinMetric& pattern = graph.pattern();
  std::vector<std::size_t> chain{i};
  bool done = best == lower;
  std::function<void(const Rat&)> explore = [&](const Rat& spent) {
    if (done) return;
    const std::size_t last = chain.back();
    if (last == j) {
      ++result.chains_solved;
      Rat value = spent + solve_chain(graph, f, g, chain);
      if (value < best) {
        best = std::move(value);
        result.best_chain = chain;
        if (best == lower) {
          done = true;
          return;
        }
      }
    }
    for (std::size_t c = 0; c < graph.copies(); ++c) {
      if (c == last) continue;
      Rat next = spent + pattern.distance(last, c);
      // Any continuation back to j costs at least d(a_c, a_j) more.
      const Rat floor = c == j ? next : next + pattern.distance(c, j);
      if (floor >= best) continue;
      if (chain.size() > depth_bound) {
        result.bound_limited = true;
        continue;
      }
      chain.push_back(c);
      explore(next);
      chain.pop_back();
      if (done) return;
    }
  };
  explore(Rat());
  result.value = best;
  return result;
}

std::vector<EmbeddedVertex> embed_spec(const ExtensionSpec& spec) {
  require_spec(spec);
  std::vector<EmbeddedVertex> out;
  for (std::size_t i = 0; i < spec.copies(); ++i) {
    KatetovMap row = spec.row(i);
    auto alias = row.zero();
    out.push_back({i, std::move(row), alias});
  }
  return out;
}

std::optional<std::string> audit_claim(const ExtensionGraph& graph, const ClosureMetric& closure) {
  const auto& vs = closure.vertices();
  for (std::size_t u = 0; u < vs.size(); ++u) {
    for (std::size_t v = u + 1; v < vs.size(); ++v) {
      const auto w = graph.weight(vs[u], vs[v]);
      if (w && *w != closure.distance(u, v)) {
        return "closure " + closure.distance(u, v).str() + " differs from weight " + w->str() +
               " on vertices " + std::to_string(u) + "," + std::to_string(v);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> audit_condition_b(const ExtensionGraph& graph,
                                             const ClosureMetric& closure) {
  const auto& vs = closure.vertices();
  for (std::size_t u = 0; u < vs.size(); ++u) {
    if (!vs[u].copy) continue;
    for (std::size_t v = u + 1; v < vs.size(); ++v) {
      if (vs[v].copy != vs[u].copy) continue;
      const Rat expected = sup_dist(graph.map(vs[u]), graph.map(vs[v]));
      if (closure.distance(u, v) != expected) {
        return "copy " + std::to_string(*vs[u].copy) + ": closure " +
               closure.distance(u, v).str() + " but sup distance " + expected.str();
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> audit_base(const ExtensionGraph& graph, const ClosureMetric& closure) {
  const auto& vs = closure.vertices();
  const FinMetric& base = graph.base();
  for (std::size_t x = 0; x < base.size(); ++x) {
    for (std::size_t y = 0; y < base.size(); ++y) {
      if (closure.distance(x, y) != base.distance(x, y)) {
        return "closure disagrees with X on " + base.label(x) + "," + base.label(y);
      }
    }
    for (std::size_t v = base.size(); v < vs.size(); ++v) {
      if (closure.distance(x, v) != graph.map(vs[v]).value(x)) {
        return "closure distance from " + base.label(x) + " to vertex " + std::to_string(v) +
               " is not the map value";
      }
    }
  }
  return std::nullopt;
}

}  // namespace urykit
