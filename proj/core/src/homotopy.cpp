#include "urykit/homotopy.hpp"

#include <algorithm>

namespace urykit {

namespace {

void require_isometric(const GrowingSpace& space, std::span<const PointId> phi0,
                       std::span<const PointId> phi1) {
  if (phi0.size() != phi1.size()) throw ValidationError("endpoint tuples differ in length");
  if (phi0.empty()) throw ValidationError("endpoint tuples are empty");
  PartialIsometry f{{phi0.begin(), phi0.end()}, {phi1.begin(), phi1.end()}, FixedTag::kNone};
  if (auto bad = check_partial_isometry(space, f)) {
    throw ValidationError("endpoint tuples are not isometric at positions " +
                          std::to_string(bad->first) + "," + std::to_string(bad->second));
  }
  for (std::size_t i = 0; i < phi0.size(); ++i) {
    for (std::size_t j = i + 1; j < phi0.size(); ++j) {
      if (phi0[i] == phi0[j]) throw ValidationError("endpoint tuple repeats a point");
    }
  }
}

FinMetric pattern_of(const GrowingSpace& space, std::span<const PointId> tuple) {
  std::vector<std::string> labels;
  DistanceMatrix d(tuple.size(), std::vector<Rat>(tuple.size()));
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    labels.push_back("a" + std::to_string(i));
    for (std::size_t j = 0; j < tuple.size(); ++j) d[i][j] = space.distance(tuple[i], tuple[j]);
  }
  return FinMetric::from_matrix(std::move(labels), d);
}

std::vector<Rat> blend_row(const GrowingSpace& space, PointId p0, PointId p1,
                           std::span<const PointId> y, const Rat& t) {
  std::vector<Rat> row;
  row.reserve(y.size());
  const Rat s = Rat(1) - t;
  for (PointId q : y) row.push_back(s * space.distance(p0, q) + t * space.distance(p1, q));
  return row;
}

}  // namespace

std::vector<Rat> open_set_margins(const GrowingSpace& space, std::span<const PointId> tuple,
                                  const BasicOpenSet& v) {
  std::vector<Rat> out;
  for (const Anchor& a : v.anchors) {
    if (a.index >= tuple.size()) throw ValidationError("anchor index outside the tuple");
    out.push_back(a.radius - space.distance(tuple[a.index], a.target));
  }
  return out;
}

void require_open_set(const GrowingSpace& space, const BasicOpenSet& v, std::size_t tuple_size) {
  for (const Anchor& a : v.anchors) {
    if (a.radius.sign() <= 0) throw ValidationError("open set radius must be positive");
    if (a.target >= space.size()) throw ValidationError("open set target outside the space");
    if (a.index >= tuple_size) throw ValidationError("anchor index outside the tuple");
  }
}

ExtensionSpec blend_spec(const GrowingSpace& space, std::span<const PointId> phi0,
                         std::span<const PointId> phi1, std::span<const PointId> y, const Rat& t) {
  require_isometric(space, phi0, phi1);
  if (t.sign() < 0 || t > 1) throw ValidationError("blend parameter outside [0,1]");
  ExtensionSpec spec{space.snapshot(y), pattern_of(space, phi0), {}};
  for (std::size_t i = 0; i < phi0.size(); ++i) {
    spec.cross.push_back(blend_row(space, phi0[i], phi1[i], y, t));
  }
  require_spec(spec);
  return spec;
}

std::vector<Rat> uniform_grid(std::size_t m) {
  if (m == 0) throw ValidationError("grid needs at least one step");
  std::vector<Rat> out;
  for (std::size_t k = 0; k <= m; ++k) out.emplace_back(static_cast<long>(k), static_cast<long>(m));
  return out;
}

TuplePath sample_path(GrowingSpace& space, std::span<const PointId> phi0,
                      std::span<const PointId> phi1, std::span<const PointId> y,
                      std::span<const Rat> grid, const BasicOpenSet& v) {
  require_isometric(space, phi0, phi1);
  require_open_set(space, v, phi0.size());
  if (grid.size() < 2 || grid.front() != 0 || grid.back() != 1) {
    throw ValidationError("grid must run from 0 to 1");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (grid[k] <= grid[k - 1]) throw ValidationError("grid must be strictly increasing");
  }
  for (std::span<const PointId> end : {phi0, phi1}) {
    const auto m = open_set_margins(space, end, v);
    for (std::size_t a = 0; a < m.size(); ++a) {
      if (m[a].sign() <= 0) {
        throw ValidationError("endpoint tuple is outside the open set at anchor " + std::to_string(a));
      }
    }
  }

  TuplePath path;
  path.grid.assign(grid.begin(), grid.end());
  path.reference.assign(y.begin(), y.end());
  auto add_ref = [&](PointId p) {
    if (std::find(path.reference.begin(), path.reference.end(), p) == path.reference.end()) {
      path.reference.push_back(p);
    }
  };
  for (PointId p : phi0) add_ref(p);
  for (PointId p : phi1) add_ref(p);
  for (const Anchor& a : v.anchors) add_ref(a.target);
  const auto& ref = path.reference;

  std::vector<Rat> lipschitz(phi0.size());
  for (std::size_t i = 0; i < phi0.size(); ++i) {
    for (PointId q : ref) {
      lipschitz[i] = std::max(lipschitz[i], abs(space.distance(phi0[i], q) - space.distance(phi1[i], q)));
    }
    path.lipschitz = std::max(path.lipschitz, lipschitz[i]);
  }

  ExtensionGraph graph(space.snapshot(ref), pattern_of(space, phi0));
  const auto everything = all_points(ref.size());
  for (std::size_t i = 0; i < phi0.size(); ++i) {
    for (const Rat& t : grid) graph.add(i, KatetovMap(everything, blend_row(space, phi0[i], phi1[i], ref, t)));
  }
  const ClosureMetric closure = closure_metric(graph);
  const std::vector<PointId> placed = realize_closure(space, ref, closure);

  const std::size_t m = grid.size();
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<PointId> tuple;
    for (std::size_t i = 0; i < phi0.size(); ++i) tuple.push_back(placed[ref.size() + i * m + k]);
    path.tuples.push_back(std::move(tuple));
  }

  for (std::size_t k = 0; k < m; ++k) {
    const auto& tuple = path.tuples[k];
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      for (std::size_t j = i + 1; j < tuple.size(); ++j) {
        if (space.distance(tuple[i], tuple[j]) != space.distance(phi0[i], phi0[j])) {
          throw InternalError("sample is not isometric to the pattern");
        }
      }
    }
    auto margins = open_set_margins(space, tuple, v);
    for (const Rat& r : margins) {
      if (r.sign() <= 0) throw InternalError("sample left the open set");
    }
    path.margins.push_back(std::move(margins));
    for (std::size_t l = 0; l < k; ++l) {
      const Rat gap = grid[k] - grid[l];
      Rat realized;
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        const Rat d = space.distance(tuple[i], path.tuples[l][i]);
        if (d != gap * lipschitz[i]) throw InternalError("sample distance differs from the blend modulus");
        realized = std::max(realized, d);
      }
      if (l + 1 == k) path.modulus.push_back({l, k, realized, gap * path.lipschitz});
    }
  }
  if (path.tuples.front() != std::vector<PointId>(phi0.begin(), phi0.end()) ||
      path.tuples.back() != std::vector<PointId>(phi1.begin(), phi1.end())) {
    throw InternalError("path endpoints are not the given tuples");
  }
  return path;
}

KatetovMap partition_blend(std::span<const KatetovMap> taus, std::span<const Rat> weights) {
  if (taus.size() != 3 || weights.size() != 3) {
    throw ValidationError("partition blend takes three maps and three weights");
  }
  return convex_combination(taus, weights);
}

}  // namespace urykit
