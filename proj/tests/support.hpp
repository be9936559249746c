#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "urykit/generators.hpp"
#include "urykit/io.hpp"

namespace urykit::test {

inline Rat R(const char* text) { return Rat::parse(text); }

inline std::vector<Rat> rats(std::initializer_list<const char*> items) {
  std::vector<Rat> out;
  for (const char* s : items) out.push_back(R(s));
  return out;
}

inline DistanceMatrix matrix(std::initializer_list<std::initializer_list<const char*>> rows) {
  DistanceMatrix out;
  for (const auto& row : rows) out.push_back(rats(row));
  return out;
}

inline FinMetric space(std::vector<std::string> labels,
                       std::initializer_list<std::initializer_list<const char*>> rows) {
  return FinMetric::from_matrix(std::move(labels), matrix(rows));
}

inline FinMetric one_point(const std::string& label = "x") {
  return FinMetric::from_matrix({label}, DistanceMatrix{{Rat()}});
}

inline FinMetric segment(const char* d) {
  return space({"a1", "a2"}, {{"0", d}, {d, "0"}});
}

inline KatetovMap map_on(std::vector<PointId> domain, std::initializer_list<const char*> values) {
  return KatetovMap(std::move(domain), rats(values));
}

struct PathCase {
  GrowingSpace space;
  std::vector<PointId> phi0;
  std::vector<PointId> phi1;
  std::vector<PointId> reference;
  BasicOpenSet open_set;
};

/// Two isometric tuples realized over a random base Y, and an open set whose
/// anchors both endpoints satisfy with slack.
inline PathCase random_path_case(Rng& rng, std::size_t max_base = 4, std::size_t max_tuple = 3) {
  const auto values = value_grid(6, 2);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  const FinMetric y = random_metric(rng, uniform(1, max_base), values);
  PathCase c{GrowingSpace(y), {}, {}, all_points(y.size()), {}};
  const ExtensionSpec s0 = random_spec(rng, y, uniform(1, max_tuple), values);
  ExtensionSpec s1 = s0;
  for (int attempt = 0; attempt < 500; ++attempt) {
    ExtensionSpec trial = s0;
    for (auto& row : trial.cross) {
      for (Rat& v : row) v = pick(rng, values);
    }
    if (check_spec(trial).ok()) {
      s1 = std::move(trial);
      break;
    }
  }
  c.phi0 = realize_spec(c.space, c.reference, s0);
  c.phi1 = realize_spec(c.space, c.reference, s1);
  for (std::size_t i = 0; i < c.phi0.size(); ++i) {
    const PointId target = uniform(0, y.size() - 1);
    const Rat reach = std::max(c.space.distance(c.phi0[i], target), c.space.distance(c.phi1[i], target));
    c.open_set.anchors.push_back({i, target, reach + Rat(static_cast<long>(uniform(1, 4)), 8)});
  }
  return c;
}

}  // namespace urykit::test
