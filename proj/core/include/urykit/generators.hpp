#pragma once

// Seeded random instances for property tests, the suite runner and
// benchmarks. Values are drawn from a finite rational set; rows are built one
// point at a time and redrawn until they satisfy the Katetov inequalities.

#include <random>
#include <span>
#include <vector>

#include "urykit/extension_space.hpp"
#include "urykit/stabilizer.hpp"

namespace urykit {

using Rng = std::mt19937_64;

/// {1, 2, ..., count} / den.
std::vector<Rat> value_grid(long count, long den);

const Rat& pick(Rng& rng, std::span<const Rat> values);

/// Random metric on n points labelled p0..p{n-1} with distances in values.
/// Throws ValidationError if no row fits after many redraws.
FinMetric random_metric(Rng& rng, std::size_t n, std::span<const Rat> values);

/// Random Katetov map on the given domain with values in `values`
/// (0 allowed when allow_zero). Falls back to a shifted point map when
/// sampling keeps failing.
template <MetricSpace M>
KatetovMap random_katetov(Rng& rng, const M& space, std::span<const PointId> domain,
                          std::span<const Rat> values, bool allow_zero = false) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Rat> v;
    for (std::size_t i = 0; i < domain.size(); ++i) {
      if (allow_zero && std::uniform_int_distribution<int>(0, 9)(rng) == 0) {
        v.emplace_back();
      } else {
        v.push_back(pick(rng, values));
      }
    }
    KatetovMap f(std::vector<PointId>(domain.begin(), domain.end()), std::move(v));
    if (check_katetov(space, f).ok()) return f;
  }
  const PointId anchor = domain[std::uniform_int_distribution<std::size_t>(0, domain.size() - 1)(rng)];
  const Rat shift = pick(rng, values);
  std::vector<Rat> v;
  for (PointId y : domain) v.push_back(Rat(space.distance(anchor, y)) + shift);
  return KatetovMap(std::vector<PointId>(domain.begin(), domain.end()), std::move(v));
}

/// Random valid extension spec of `base` by a random pattern of n points.
ExtensionSpec random_spec(Rng& rng, const FinMetric& base, std::size_t n,
                          std::span<const Rat> values);

struct InstanceShape {
  std::size_t a_size = 2;
  std::size_t b_size = 2;
  std::size_t shared = 0;
  bool identity_target = false;
};

/// Random stabilizer instance: a metric on A u B with values in `values`,
/// then a target C isometric to A through a random extension fixing the
/// shared points.
StabilizerInstance random_instance(Rng& rng, const InstanceShape& shape,
                                   std::span<const Rat> values, const Rat& epsilon);

/// Shape with |A|, |B| in [1, max_size] and a random overlap.
InstanceShape random_shape(Rng& rng, std::size_t max_size);

}  // namespace urykit
