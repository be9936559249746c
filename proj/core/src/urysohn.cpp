#include "urykit/urysohn.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace urykit {

GrowingSpace::GrowingSpace(FinMetric base) : base_(std::move(base)), labels_(base_.labels()) {
  for (PointId p = 0; p < labels_.size(); ++p) index_.emplace(labels_[p], p);
}

GrowingSpace::GrowingSpace(const GrowingSpace& other)
    : base_(other.base_),
      labels_(other.labels_),
      index_(other.index_),
      maps_(other.maps_),
      next_label_(other.next_label_) {
  std::lock_guard lock(*other.cache_mutex_);
  cache_ = other.cache_;
}

GrowingSpace& GrowingSpace::operator=(const GrowingSpace& other) {
  if (this == &other) return *this;
  GrowingSpace copy(other);
  *this = std::move(copy);
  return *this;
}

GrowingSpace::GrowingSpace(GrowingSpace&&) noexcept = default;
GrowingSpace& GrowingSpace::operator=(GrowingSpace&&) noexcept = default;
GrowingSpace::~GrowingSpace() = default;

std::optional<PointId> GrowingSpace::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PointId GrowingSpace::require(std::string_view label) const {
  if (auto p = find(label)) return *p;
  throw ParseError("unknown point label '" + std::string(label) + "'");
}

Rat GrowingSpace::distance(PointId p, PointId q) const {
  if (p >= size() || q >= size()) throw ValidationError("point id out of range");
  if (p == q) return Rat();
  if (p < q) std::swap(p, q);
  if (p < base_.size()) return base_.distance(p, q);
  const KatetovMap& f = maps_[p - base_.size()];
  if (auto v = f.at(q)) return *v;
  const std::uint64_t key = (static_cast<std::uint64_t>(p) << 32) | q;
  {
    std::lock_guard lock(*cache_mutex_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  std::optional<Rat> best;
  for (std::size_t k = 0; k < f.size(); ++k) {
    Rat via = f.values()[k] + distance(f.domain()[k], q);
    if (!best || via < *best) best = std::move(via);
  }
  std::lock_guard lock(*cache_mutex_);
  cache_.emplace(key, *best);
  return *best;
}

const KatetovMap* GrowingSpace::provenance(PointId p) const {
  if (p < base_.size() || p >= size()) return nullptr;
  return &maps_[p - base_.size()];
}

std::string GrowingSpace::fresh_label() {
  for (;;) {
    std::string label = "u" + std::to_string(next_label_++);
    if (!index_.contains(label)) return label;
  }
}

PointId GrowingSpace::append(KatetovMap f, std::string label) {
  if (f.empty()) throw ValidationError("cannot realize a map with empty domain");
  require_katetov(*this, f);
  if (auto z = f.zero()) {
    throw ValidationError("map vanishes at existing point " + labels_[*z]);
  }
  if (label.empty()) label = fresh_label();
  if (index_.contains(label)) throw ValidationError("duplicate point label '" + label + "'");
  const PointId id = size();
  index_.emplace(label, id);
  labels_.push_back(std::move(label));
  maps_.push_back(std::move(f));
  return id;
}

FinMetric GrowingSpace::materialize() const {
  const auto everything = all_points(size());
  return snapshot(everything);
}

FinMetric GrowingSpace::snapshot(std::span<const PointId> points) const {
  std::vector<std::string> labels;
  DistanceMatrix d(points.size(), std::vector<Rat>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    labels.push_back(label(points[i]));
    for (std::size_t j = 0; j < i; ++j) {
      d[i][j] = distance(points[i], points[j]);
      d[j][i] = d[i][j];
    }
  }
  return FinMetric::from_matrix(std::move(labels), d);
}

PointId realize_katetov(GrowingSpace& space, const KatetovMap& f) {
  require_katetov(space, f);
  if (auto z = f.zero()) return *z;
  return space.append(f);
}

std::vector<PointId> realize_spec(GrowingSpace& space, std::span<const PointId> base_ids,
                                  const ExtensionSpec& spec) {
  require_spec(spec);
  if (base_ids.size() != spec.base.size()) {
    throw ValidationError("spec base has " + std::to_string(spec.base.size()) +
                          " points but " + std::to_string(base_ids.size()) + " ids were given");
  }
  for (std::size_t x = 0; x < base_ids.size(); ++x) {
    for (std::size_t y = x + 1; y < base_ids.size(); ++y) {
      if (space.distance(base_ids[x], base_ids[y]) != spec.base.distance(x, y)) {
        throw ValidationError("spec base does not match the space on " +
                              space.label(base_ids[x]) + "," + space.label(base_ids[y]));
      }
    }
  }
  std::vector<PointId> placed;
  for (std::size_t i = 0; i < spec.copies(); ++i) {
    std::vector<std::pair<PointId, Rat>> pairs;
    for (std::size_t x = 0; x < base_ids.size(); ++x) pairs.emplace_back(base_ids[x], spec.cross[i][x]);
    for (std::size_t j = 0; j < i; ++j) pairs.emplace_back(placed[j], spec.pattern.distance(i, j));
    placed.push_back(realize_katetov(space, KatetovMap::from_pairs(std::move(pairs))));
  }
  return placed;
}

std::vector<PointId> realize_closure(GrowingSpace& space, std::span<const PointId> base_ids,
                                     const ClosureMetric& closure,
                                     const std::vector<std::optional<PointId>>& pinned) {
  const auto& vs = closure.vertices();
  std::vector<std::optional<PointId>> at(vs.size());
  for (std::size_t v = 0; v < vs.size(); ++v) {
    if (!vs[v].copy) {
      if (vs[v].index >= base_ids.size()) throw ValidationError("closure base exceeds base ids");
      at[v] = base_ids[vs[v].index];
    } else if (v < pinned.size() && pinned[v]) {
      at[v] = pinned[v];
    }
  }
  for (std::size_t u = 0; u < vs.size(); ++u) {
    for (std::size_t v = u + 1; v < vs.size(); ++v) {
      if (at[u] && at[v] && space.distance(*at[u], *at[v]) != closure.distance(u, v)) {
        throw ValidationError("pinned point " + space.label(*at[u]) + " or " +
                              space.label(*at[v]) + " disagrees with the closure");
      }
    }
  }
  for (std::size_t v = 0; v < vs.size(); ++v) {
    if (at[v]) continue;
    std::vector<std::pair<PointId, Rat>> pairs;
    for (std::size_t u = 0; u < vs.size(); ++u) {
      if (at[u]) pairs.emplace_back(*at[u], closure.distance(u, v));
    }
    at[v] = realize_katetov(space, KatetovMap::from_pairs(std::move(pairs)));
  }
  std::vector<PointId> out;
  out.reserve(at.size());
  for (const auto& p : at) out.push_back(*p);
  return out;
}

namespace {

bool realized_by(const GrowingSpace& space, const KatetovMap& f, PointId w) {
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (space.distance(w, f.domain()[k]) != f.values()[k]) return false;
  }
  return true;
}

// An existing point with distance profile f (preferring `hint`), or a new one.
PointId find_or_realize(GrowingSpace& space, const KatetovMap& f, PointId hint) {
  require_katetov(space, f);
  if (realized_by(space, f, hint)) return hint;
  for (PointId w = 0; w < space.size(); ++w) {
    if (realized_by(space, f, w)) return w;
  }
  return realize_katetov(space, f);
}

}  // namespace

PartialIsometry extend_isometry(GrowingSpace& space, const PartialIsometry& phi,
                                std::span<const PointId> forth, std::span<const PointId> back) {
  if (auto bad = check_partial_isometry(space, phi)) {
    throw ValidationError("phi is not an isometry on pair (" + std::to_string(bad->first) + "," +
                          std::to_string(bad->second) + ")");
  }
  PartialIsometry out = phi;
  for (PointId z : forth) {
    if (out.image(z)) continue;
    if (out.domain.empty()) {
      out.domain.push_back(z);
      out.range.push_back(z);
      continue;
    }
    std::vector<std::pair<PointId, Rat>> pairs;
    for (std::size_t k = 0; k < out.size(); ++k) {
      pairs.emplace_back(out.range[k], space.distance(z, out.domain[k]));
    }
    const PointId w = find_or_realize(space, KatetovMap::from_pairs(std::move(pairs)), z);
    out.domain.push_back(z);
    out.range.push_back(w);
  }
  for (PointId w : back) {
    if (out.preimage(w)) continue;
    if (out.domain.empty()) {
      out.domain.push_back(w);
      out.range.push_back(w);
      continue;
    }
    std::vector<std::pair<PointId, Rat>> pairs;
    for (std::size_t k = 0; k < out.size(); ++k) {
      pairs.emplace_back(out.domain[k], space.distance(w, out.range[k]));
    }
    const PointId z = find_or_realize(space, KatetovMap::from_pairs(std::move(pairs)), w);
    out.domain.push_back(z);
    out.range.push_back(w);
  }
  if (check_partial_isometry(space, out)) {
    throw InternalError("extended correspondence is not an isometry");
  }
  return out;
}

namespace {

std::vector<Rat> sorted_distances(std::span<const Rat> distances) {
  std::vector<Rat> ds(distances.begin(), distances.end());
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  if (ds.empty()) throw ValidationError("distance set is empty");
  if (ds.front().sign() <= 0) throw ValidationError("distance set must be positive");
  return ds;
}

// Calls visit(subset) for every increasing subset of {0..n-1} of size 1..cap
// in lexicographic order.
template <class Visit>
void for_each_subset(std::size_t n, std::size_t cap, Visit&& visit) {
  std::vector<PointId> current;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t p = from; p < n; ++p) {
      current.push_back(p);
      visit(current);
      if (current.size() < cap) self(self, p + 1);
      current.pop_back();
    }
  };
  if (cap > 0) rec(rec, 0);
}

}  // namespace

std::vector<KatetovMap> enumerate_katetov_maps(const GrowingSpace& space, std::size_t prefix,
                                               std::span<const Rat> distances, std::size_t cap) {
  const std::vector<Rat> ds = sorted_distances(distances);
  if (prefix > space.size()) throw ValidationError("prefix exceeds the space");
  std::vector<KatetovMap> out;
  for_each_subset(prefix, cap, [&](const std::vector<PointId>& subset) {
    std::vector<std::size_t> digits(subset.size(), 0);
    for (;;) {
      std::vector<Rat> values;
      for (std::size_t d : digits) values.push_back(ds[d]);
      KatetovMap f(subset, std::move(values));
      if (check_katetov(space, f).ok()) out.push_back(std::move(f));
      std::size_t pos = digits.size();
      while (pos > 0 && digits[pos - 1] + 1 == ds.size()) digits[--pos] = 0;
      if (pos == 0) break;
      ++digits[pos - 1];
    }
  });
  return out;
}

GenerationReport generate_rational_urysohn(const FinMetric& start, const UrysohnOptions& options) {
  if (start.empty()) throw ValidationError("generation needs a nonempty start space");
  GenerationReport report;
  report.space = GrowingSpace(start);
  report.last_round_start = start.size();
  std::mt19937_64 rng(options.seed);
  for (std::size_t round = 0; round < options.rounds; ++round) {
    const std::size_t prefix = report.space.size();
    std::vector<KatetovMap> maps =
        enumerate_katetov_maps(report.space, prefix, options.distances, options.subset_cap);
    report.candidate_maps += maps.size();
    std::shuffle(maps.begin(), maps.end(), rng);
    for (const KatetovMap& f : maps) {
      bool present = false;
      if (f.zero()) {
        present = true;
      } else {
        for (PointId w = 0; w < report.space.size() && !present; ++w) {
          present = realized_by(report.space, f, w);
        }
      }
      if (present) continue;
      if (report.space.size() >= options.max_points) {
        report.saturated = false;
        return report;
      }
      realize_katetov(report.space, f);
      ++report.realized;
    }
    report.last_round_start = prefix;
    ++report.rounds_completed;
  }
  return report;
}

std::optional<KatetovMap> saturation_audit(const GrowingSpace& space, std::size_t prefix,
                                           std::span<const Rat> distances, std::size_t cap) {
  for (const KatetovMap& f : enumerate_katetov_maps(space, prefix, distances, cap)) {
    bool present = false;
    for (PointId w = 0; w < space.size() && !present; ++w) present = realized_by(space, f, w);
    if (!present) return f;
  }
  return std::nullopt;
}

HomogeneityAudit homogeneity_audit(const GrowingSpace& space, std::size_t prefix,
                                   std::span<const Rat> distances, std::size_t cap) {
  const std::vector<Rat> ds = sorted_distances(distances);
  if (prefix > space.size()) throw ValidationError("prefix exceeds the space");
  const std::size_t n = space.size();
  // code[z][u]: index into ds of d(z,u) for u < prefix, or -1.
  std::vector<std::vector<int>> code(n, std::vector<int>(prefix, -1));
  for (PointId z = 0; z < n; ++z) {
    for (PointId u = 0; u < prefix; ++u) {
      if (z == u) continue;
      const Rat d = space.distance(z, u);
      const auto it = std::lower_bound(ds.begin(), ds.end(), d);
      if (it != ds.end() && *it == d) code[z][u] = static_cast<int>(it - ds.begin());
    }
  }
  HomogeneityAudit audit;
  // Ordered tuples of distinct points grouped by their internal distances;
  // two tuples are isometric exactly when they share a group. An isometry
  // u -> v extends to every eligible z iff profiles(u) is inside profiles(v),
  // so within a group all profile sets must coincide.
  std::vector<PointId> tuple;
  std::map<std::vector<int>, std::vector<std::pair<std::vector<PointId>, std::set<std::vector<int>>>>>
      groups;
  auto rec = [&](auto&& self) -> void {
    if (!tuple.empty()) {
      std::vector<int> signature;
      for (std::size_t a = 0; a < tuple.size(); ++a) {
        for (std::size_t b = a + 1; b < tuple.size(); ++b) {
          const int c = code[tuple[a]][tuple[b]];
          if (c < 0) return;  // distances outside the set are out of scope
          signature.push_back(c);
        }
      }
      std::set<std::vector<int>> profiles;
      for (PointId z = 0; z < n; ++z) {
        std::vector<int> profile;
        for (PointId u : tuple) {
          if (code[z][u] < 0) break;
          profile.push_back(code[z][u]);
        }
        if (profile.size() == tuple.size()) profiles.insert(std::move(profile));
      }
      signature.push_back(static_cast<int>(tuple.size()) * -1 - 1);
      groups[signature].emplace_back(tuple, std::move(profiles));
    }
    if (tuple.size() == cap) return;
    for (PointId p = 0; p < prefix; ++p) {
      if (std::find(tuple.begin(), tuple.end(), p) != tuple.end()) continue;
      tuple.push_back(p);
      self(self);
      tuple.pop_back();
    }
  };
  rec(rec);
  for (const auto& [signature, members] : groups) {
    for (const auto& [u, pu] : members) {
      for (const auto& [v, pv] : members) {
        ++audit.isometries_checked;
        audit.extensions_checked += pu.size();
        if (audit.failure) continue;
        for (const auto& profile : pu) {
          if (pv.contains(profile)) continue;
          PartialIsometry phi{u, v, FixedTag::kNone};
          for (PointId z = 0; z < n; ++z) {
            std::vector<int> pz;
            for (PointId x : u) pz.push_back(code[z][x]);
            if (pz == profile) {
              audit.failure = std::make_pair(phi, z);
              break;
            }
          }
          break;
        }
      }
    }
  }
  return audit;
}

}  // namespace urykit
