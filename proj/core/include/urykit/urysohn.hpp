#pragma once

// Growing finite approximations of the rational Urysohn space.
//
// A GrowingSpace starts from a finite base space and only ever appends
// points. Each appended point is recorded by the Katetov map it realizes,
// over points that existed when it was added; distances to the remaining
// earlier points are the Katetov extension of that map and are evaluated on
// demand. Previously assigned distances never change.

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "urykit/extension_space.hpp"
#include "urykit/katetov.hpp"
#include "urykit/metric.hpp"

namespace urykit {

class GrowingSpace {
 public:
  GrowingSpace() = default;
  explicit GrowingSpace(FinMetric base);
  GrowingSpace(const GrowingSpace& other);
  GrowingSpace& operator=(const GrowingSpace& other);
  GrowingSpace(GrowingSpace&&) noexcept;
  GrowingSpace& operator=(GrowingSpace&&) noexcept;
  ~GrowingSpace();

  [[nodiscard]] std::size_t size() const { return labels_.size(); }
  [[nodiscard]] std::size_t base_size() const { return base_.size(); }
  [[nodiscard]] const FinMetric& base() const { return base_; }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
  [[nodiscard]] const std::string& label(PointId p) const { return labels_.at(p); }
  [[nodiscard]] std::optional<PointId> find(std::string_view label) const;
  [[nodiscard]] PointId require(std::string_view label) const;

  [[nodiscard]] Rat distance(PointId p, PointId q) const;

  /// The map recorded for an appended point; nullopt for base points.
  [[nodiscard]] const KatetovMap* provenance(PointId p) const;

  /// Appends a point realizing f (a valid Katetov map on existing points
  /// with no zero value). Does not deduplicate; see realize_katetov.
  PointId append(KatetovMap f, std::string label = {});

  /// Full distance matrix as a validated finite metric space.
  [[nodiscard]] FinMetric materialize() const;
  [[nodiscard]] FinMetric snapshot(std::span<const PointId> points) const;

 private:
  std::string fresh_label();

  FinMetric base_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, PointId> index_;
  std::vector<KatetovMap> maps_;  // maps_[p - base_size()]
  std::size_t next_label_ = 0;
  mutable std::unordered_map<std::uint64_t, Rat> cache_;
  mutable std::unique_ptr<std::mutex> cache_mutex_ = std::make_unique<std::mutex>();
};

/// Point whose distances to the domain of f are exactly f. Reuses an existing
/// point iff the Katetov extension of f is the distance row of that point,
/// which happens exactly when f vanishes somewhere on its domain.
PointId realize_katetov(GrowingSpace& space, const KatetovMap& f);

/// Realizes spec over the points `base_ids` (spec.base must equal the
/// subspace on them). Points are placed one at a time, each over the base
/// and the previously placed points.
std::vector<PointId> realize_spec(GrowingSpace& space, std::span<const PointId> base_ids,
                                  const ExtensionSpec& spec);

/// Realizes every vertex of a closure metric whose base vertices sit at
/// `base_ids`. `pinned[v]`, when set, is an existing point that must already
/// have the closure distances to the base and to other pinned vertices.
/// Returns one point per closure vertex.
std::vector<PointId> realize_closure(GrowingSpace& space, std::span<const PointId> base_ids,
                                     const ClosureMetric& closure,
                                     const std::vector<std::optional<PointId>>& pinned = {});

/// Extends phi so that its domain contains `forth` and its range contains
/// `back`. An existing point with the required distances is used when there
/// is one (the point itself first), otherwise a new point is realized. The
/// tag of phi is kept.
PartialIsometry extend_isometry(GrowingSpace& space, const PartialIsometry& phi,
                                std::span<const PointId> forth, std::span<const PointId> back);

struct UrysohnOptions {
  std::uint64_t seed = 0;
  std::size_t rounds = 1;
  std::vector<Rat> distances;
  std::size_t subset_cap = 1;
  std::size_t max_points = 200000;
};

struct GenerationReport {
  GrowingSpace space;
  std::size_t rounds_completed = 0;
  bool saturated = true;  // false when max_points stopped a round early
  std::size_t candidate_maps = 0;
  std::size_t realized = 0;
  // Number of points that existed when the last completed round started.
  std::size_t last_round_start = 0;
};

/// Rounds of saturation: every Katetov map with values in the distance set
/// over every subset of at most subset_cap points existing at the start of
/// the round gets realized. The seed only permutes realization order.
GenerationReport generate_rational_urysohn(const FinMetric& start, const UrysohnOptions& options);

/// Katetov maps with values in `distances` over all subsets (size 1..cap) of
/// the first `prefix` points, in lexicographic order of (subset, values).
std::vector<KatetovMap> enumerate_katetov_maps(const GrowingSpace& space, std::size_t prefix,
                                               std::span<const Rat> distances, std::size_t cap);

/// First in-scope map (as enumerate_katetov_maps) not realized by any point.
std::optional<KatetovMap> saturation_audit(const GrowingSpace& space, std::size_t prefix,
                                           std::span<const Rat> distances, std::size_t cap);

struct HomogeneityAudit {
  std::size_t isometries_checked = 0;
  std::size_t extensions_checked = 0;
  // A partial isometry (domain -> range) and a point z of the space with
  // distances in the set that has no image.
  std::optional<std::pair<PartialIsometry, PointId>> failure;
};

/// For every partial isometry between subsets of size 1..cap of the first
/// `prefix` points, and every point z whose distances to its domain lie in
/// the distance set, checks that some point w extends it by z -> w, and the
/// same for the inverse.
HomogeneityAudit homogeneity_audit(const GrowingSpace& space, std::size_t prefix,
                                   std::span<const Rat> distances, std::size_t cap);

}  // namespace urykit
