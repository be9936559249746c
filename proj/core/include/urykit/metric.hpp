#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "urykit/errors.hpp"
#include "urykit/rational.hpp"

namespace urykit {

using PointId = std::size_t;

/// Anything that can answer distance queries between enumerated points.
/// Satisfied by FinMetric and GrowingSpace.
template <class M>
concept MetricSpace = requires(const M& m, PointId p) {
  { m.size() } -> std::convertible_to<std::size_t>;
  { m.distance(p, p) } -> std::convertible_to<Rat>;
};

using DistanceMatrix = std::vector<std::vector<Rat>>;

enum class MetricFault {
  kNone,
  kStructural,      // non-square, asymmetric, label count mismatch
  kNonzeroDiagonal,
  kNonpositive,     // d(p,q) <= 0 for p != q
  kTriangle,        // d(p,r) > d(p,q) + d(q,r)
};

struct MetricReport {
  MetricFault fault = MetricFault::kNone;
  // Offending indices: a pair for diagonal/positivity/asymmetry faults, the
  // triple (p, q, r) with d(p,r) > d(p,q) + d(q,r) for triangle faults.
  std::vector<std::size_t> where;
  std::string message;

  [[nodiscard]] bool ok() const { return fault == MetricFault::kNone; }
  [[nodiscard]] bool structural() const { return fault == MetricFault::kStructural; }
};

/// Checks a candidate labelled distance matrix against the metric axioms.
/// Triples are scanned with p < r outer and q inner, so the first violation
/// reported is deterministic.
MetricReport validate_metric(std::span<const std::string> labels, const DistanceMatrix& dist);

class MetricError : public ValidationError {
 public:
  explicit MetricError(MetricReport report);
  [[nodiscard]] const MetricReport& report() const { return report_; }

 private:
  MetricReport report_;
};

/// Enumerated finite metric space with exact rational distances. Stored as a
/// packed strict lower triangle so appending a point is amortized linear.
class FinMetric {
 public:
  FinMetric() = default;

  /// Validated construction. Throws ParseError on structural faults and
  /// MetricError on axiom violations.
  static FinMetric from_matrix(std::vector<std::string> labels, const DistanceMatrix& dist);

  [[nodiscard]] std::size_t size() const { return labels_.size(); }
  [[nodiscard]] bool empty() const { return labels_.empty(); }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
  [[nodiscard]] const std::string& label(PointId p) const { return labels_.at(p); }
  [[nodiscard]] std::optional<PointId> find(std::string_view label) const;
  [[nodiscard]] PointId require(std::string_view label) const;

  [[nodiscard]] const Rat& distance(PointId p, PointId q) const;
  [[nodiscard]] Rat diameter() const;
  [[nodiscard]] DistanceMatrix matrix() const;

  /// Sub-space on the given points, in the given order. Duplicates are an error.
  [[nodiscard]] FinMetric restrict(std::span<const PointId> points) const;

  /// Appends a point with the given distances to all existing points. The
  /// row must be positive and a Katetov map on the current space; this is
  /// checked and MetricError is thrown otherwise.
  void append(std::string label, std::span<const Rat> row);

  friend bool operator==(const FinMetric&, const FinMetric&) = default;

 private:
  void index_labels();

  std::vector<std::string> labels_;
  std::vector<Rat> lower_;
  std::unordered_map<std::string, PointId> index_;
};

/// True iff one of the three triangle inequalities of {a,b,c} is an equality.
/// Throws ValidationError unless a, b, c are distinct.
bool is_flat(PointId a, PointId b, PointId c, const FinMetric& m);

/// Same test on three side lengths, where zero sides count as flat.
bool is_flat_triangle(const Rat& ab, const Rat& bc, const Rat& ac);

/// Entrywise convex combination of metrics on identical label lists.
FinMetric average_metrics(std::span<const FinMetric> metrics, std::span<const Rat> weights);

/// Free amalgam of two spaces over the points named in `common`. Cross
/// distances go through the common part (min over w of d(u,w) + d(w,v));
/// with no common point every cross distance is max(diam A, diam B, 1).
/// Result labels: all of mA, then the points of mB outside `common`.
FinMetric amalgamate_free(const FinMetric& a, const FinMetric& b,
                          std::span<const std::string> common);

enum class FixedTag { kNone, kFixesA, kFixesB };

std::string_view to_string(FixedTag tag);
FixedTag parse_fixed_tag(std::string_view text);

/// Finite correspondence domain[i] -> range[i].
struct PartialIsometry {
  std::vector<PointId> domain;
  std::vector<PointId> range;
  FixedTag tag = FixedTag::kNone;

  [[nodiscard]] std::size_t size() const { return domain.size(); }
  [[nodiscard]] std::optional<PointId> image(PointId p) const;
  [[nodiscard]] std::optional<PointId> preimage(PointId p) const;
  [[nodiscard]] PartialIsometry inverse() const;

  friend bool operator==(const PartialIsometry&, const PartialIsometry&) = default;
};

/// Returns the first index pair (i, j) with d(dom_i, dom_j) != d(rng_i, rng_j),
/// or nullopt when the correspondence preserves all distances. Throws
/// ValidationError when the tuples differ in length.
template <MetricSpace D, MetricSpace R>
std::optional<std::pair<std::size_t, std::size_t>> check_partial_isometry(
    const D& domain_space, const R& range_space, const PartialIsometry& f) {
  if (f.domain.size() != f.range.size()) {
    throw ValidationError("partial isometry tuples differ in length (" +
                          std::to_string(f.domain.size()) + " vs " +
                          std::to_string(f.range.size()) + ")");
  }
  for (std::size_t i = 0; i < f.domain.size(); ++i) {
    for (std::size_t j = i + 1; j < f.domain.size(); ++j) {
      if (Rat(domain_space.distance(f.domain[i], f.domain[j])) !=
          Rat(range_space.distance(f.range[i], f.range[j]))) {
        return std::make_pair(i, j);
      }
    }
  }
  return std::nullopt;
}

template <MetricSpace M>
std::optional<std::pair<std::size_t, std::size_t>> check_partial_isometry(
    const M& space, const PartialIsometry& f) {
  return check_partial_isometry(space, space, f);
}

/// True iff every point of `fixed` lies in the domain and maps to itself.
bool fixes_pointwise(const PartialIsometry& f, std::span<const PointId> fixed);

}  // namespace urykit
