#include "urykit/generators.hpp"

#include <algorithm>

namespace urykit {

std::vector<Rat> value_grid(long count, long den) {
  std::vector<Rat> out;
  for (long i = 1; i <= count; ++i) out.emplace_back(i, den);
  return out;
}

const Rat& pick(Rng& rng, std::span<const Rat> values) {
  if (values.empty()) throw ValidationError("cannot pick from an empty value set");
  return values[std::uniform_int_distribution<std::size_t>(0, values.size() - 1)(rng)];
}

namespace {

// Row of distances from a new point to the first `existing` points of d,
// redrawn until it is a Katetov map over them.
bool draw_row(Rng& rng, DistanceMatrix& d, std::size_t existing, std::span<const Rat> values) {
  for (int attempt = 0; attempt < 500; ++attempt) {
    std::vector<Rat> row;
    for (std::size_t q = 0; q < existing; ++q) row.push_back(pick(rng, values));
    bool ok = true;
    for (std::size_t p = 0; p < existing && ok; ++p) {
      for (std::size_t q = p + 1; q < existing && ok; ++q) {
        ok = abs(row[p] - row[q]) <= d[p][q] && row[p] + row[q] >= d[p][q];
      }
    }
    if (!ok) continue;
    for (std::size_t q = 0; q < existing; ++q) {
      d[existing][q] = row[q];
      d[q][existing] = row[q];
    }
    return true;
  }
  return false;
}

}  // namespace

FinMetric random_metric(Rng& rng, std::size_t n, std::span<const Rat> values) {
  for (int restart = 0; restart < 100; ++restart) {
    DistanceMatrix d(n, std::vector<Rat>(n));
    bool ok = true;
    for (std::size_t p = 1; p < n && ok; ++p) ok = draw_row(rng, d, p, values);
    if (!ok) continue;
    std::vector<std::string> labels;
    for (std::size_t p = 0; p < n; ++p) labels.push_back("p" + std::to_string(p));
    return FinMetric::from_matrix(std::move(labels), d);
  }
  throw ValidationError("could not draw a random metric from the value set");
}

ExtensionSpec random_spec(Rng& rng, const FinMetric& base, std::size_t n,
                          std::span<const Rat> values) {
  const std::size_t nx = base.size();
  for (int restart = 0; restart < 100; ++restart) {
    DistanceMatrix d(nx + n, std::vector<Rat>(nx + n));
    for (std::size_t p = 0; p < nx; ++p) {
      for (std::size_t q = 0; q < nx; ++q) d[p][q] = base.distance(p, q);
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = draw_row(rng, d, nx + i, values);
    if (!ok) continue;
    ExtensionSpec spec;
    spec.base = base;
    std::vector<std::string> labels;
    DistanceMatrix pd(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back("a" + std::to_string(i));
      for (std::size_t j = 0; j < n; ++j) pd[i][j] = d[nx + i][nx + j];
      spec.cross.emplace_back(d[nx + i].begin(), d[nx + i].begin() + static_cast<long>(nx));
    }
    spec.pattern = FinMetric::from_matrix(std::move(labels), pd);
    return spec;
  }
  throw ValidationError("could not draw a random extension spec from the value set");
}

InstanceShape random_shape(Rng& rng, std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  InstanceShape shape;
  shape.a_size = size(rng);
  shape.b_size = size(rng);
  const std::size_t limit = std::min(shape.a_size, shape.b_size);
  // Keep at least one free coordinate in A most of the time.
  shape.shared = std::uniform_int_distribution<std::size_t>(0, limit)(rng);
  if (shape.shared == shape.a_size && std::uniform_int_distribution<int>(0, 3)(rng) != 0) {
    shape.shared = shape.a_size - 1;
  }
  return shape;
}

StabilizerInstance random_instance(Rng& rng, const InstanceShape& shape,
                                   std::span<const Rat> values, const Rat& epsilon) {
  const std::size_t na = shape.a_size;
  const std::size_t nb = shape.b_size;
  const std::size_t k = shape.shared;
  if (k > na || k > nb || na == 0 || nb == 0) throw ValidationError("bad instance shape");
  const std::size_t nu = na + nb - k;
  for (int restart = 0; restart < 100; ++restart) {
    const FinMetric u = random_metric(rng, nu, values);
    GrowingSpace space(u);
    StabilizerInstance inst;
    inst.k = k;
    inst.epsilon = epsilon;
    for (std::size_t i = 0; i < na; ++i) inst.a.push_back(i);
    for (std::size_t i = 0; i < k; ++i) inst.b.push_back(i);
    for (std::size_t i = na; i < nu; ++i) inst.b.push_back(i);
    const auto everything = all_points(nu);
    bool ok = true;
    for (std::size_t i = 0; i < na && ok; ++i) {
      if (i < k || shape.identity_target) {
        inst.c.push_back(inst.a[i]);
        continue;
      }
      ok = false;
      for (int attempt = 0; attempt < 500 && !ok; ++attempt) {
        std::vector<std::pair<PointId, Rat>> pairs;
        for (std::size_t j = 0; j < i; ++j) pairs.emplace_back(inst.c[j], u.distance(i, j));
        for (PointId p : everything) {
          if (std::find(inst.c.begin(), inst.c.end(), p) == inst.c.end()) {
            pairs.emplace_back(p, pick(rng, values));
          }
        }
        KatetovMap f = KatetovMap::from_pairs(std::move(pairs));
        if (!check_katetov(space, f).ok()) continue;
        inst.c.push_back(realize_katetov(space, f));
        ok = true;
      }
    }
    if (!ok) continue;
    inst.space = std::move(space);
    validate_instance(inst);
    return inst;
  }
  throw ValidationError("could not draw a random stabilizer instance");
}

}  // namespace urykit
