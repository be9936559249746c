#include "urykit/katetov.hpp"

#include <numeric>

namespace urykit {

KatetovMap::KatetovMap(std::vector<PointId> domain, std::vector<Rat> values) {
  if (domain.size() != values.size()) {
    throw ValidationError("Katetov map domain and value list differ in length");
  }
  std::vector<std::pair<PointId, Rat>> pairs;
  pairs.reserve(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) pairs.emplace_back(domain[i], std::move(values[i]));
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].first == pairs[i - 1].first) {
      throw ValidationError("point " + std::to_string(pairs[i].first) +
                            " listed twice in a Katetov map domain");
    }
  }
  for (auto& [p, v] : pairs) {
    domain_.push_back(p);
    values_.push_back(std::move(v));
  }
}

KatetovMap KatetovMap::from_pairs(std::vector<std::pair<PointId, Rat>> pairs) {
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  KatetovMap f;
  for (auto& [p, v] : pairs) {
    if (!f.domain_.empty() && f.domain_.back() == p) {
      if (f.values_.back() != v) {
        throw ValidationError("conflicting values " + f.values_.back().str() + " and " + v.str() +
                              " at point " + std::to_string(p));
      }
      continue;
    }
    f.domain_.push_back(p);
    f.values_.push_back(std::move(v));
  }
  return f;
}

bool KatetovMap::contains(PointId p) const {
  return std::binary_search(domain_.begin(), domain_.end(), p);
}

std::optional<Rat> KatetovMap::at(PointId p) const {
  const auto it = std::lower_bound(domain_.begin(), domain_.end(), p);
  if (it == domain_.end() || *it != p) return std::nullopt;
  return values_[static_cast<std::size_t>(it - domain_.begin())];
}

const Rat& KatetovMap::value(PointId p) const {
  const auto it = std::lower_bound(domain_.begin(), domain_.end(), p);
  if (it == domain_.end() || *it != p) {
    throw ValidationError("point " + std::to_string(p) + " outside the Katetov map's domain");
  }
  return values_[static_cast<std::size_t>(it - domain_.begin())];
}

std::optional<PointId> KatetovMap::zero() const {
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    if (values_[i].is_zero()) return domain_[i];
  }
  return std::nullopt;
}

KatetovMap KatetovMap::restrict(std::span<const PointId> points) const {
  std::vector<std::pair<PointId, Rat>> pairs;
  for (PointId p : points) pairs.emplace_back(p, value(p));
  return from_pairs(std::move(pairs));
}

Rat sup_dist(const KatetovMap& f, const KatetovMap& g) {
  if (!std::equal(f.domain().begin(), f.domain().end(), g.domain().begin(), g.domain().end())) {
    throw ValidationError("sup distance between maps with different domains");
  }
  Rat best;
  for (std::size_t i = 0; i < f.size(); ++i) {
    best = std::max(best, abs(f.values()[i] - g.values()[i]));
  }
  return best;
}

std::vector<PointId> all_points(std::size_t n) {
  std::vector<PointId> out(n);
  std::iota(out.begin(), out.end(), PointId{0});
  return out;
}

KatetovMap convex_combination(std::span<const KatetovMap> maps, std::span<const Rat> weights) {
  if (maps.empty()) throw ValidationError("convex combination of no maps");
  if (maps.size() != weights.size()) throw ValidationError("one weight per map required");
  Rat total;
  for (const Rat& w : weights) {
    if (w.sign() < 0) throw ValidationError("negative convex weight " + w.str());
    total += w;
  }
  if (total != 1) throw ValidationError("convex weights sum to " + total.str() + ", not 1");
  const auto dom = maps.front().domain();
  for (const KatetovMap& f : maps) {
    if (!std::equal(dom.begin(), dom.end(), f.domain().begin(), f.domain().end())) {
      throw ValidationError("convex combination of maps with different domains");
    }
  }
  std::vector<Rat> values(dom.size());
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (weights[k].is_zero()) continue;
    for (std::size_t i = 0; i < dom.size(); ++i) values[i] += weights[k] * maps[k].values()[i];
  }
  return KatetovMap(std::vector<PointId>(dom.begin(), dom.end()), std::move(values));
}

}  // namespace urykit
