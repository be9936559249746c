#pragma once

// Katetov maps over finite spaces. A Katetov map f on a subset of a metric
// space satisfies |f(x) - f(y)| <= d(x,y) <= f(x) + f(y) on every pair; it is
// the distance profile of a one-point extension.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "urykit/metric.hpp"

namespace urykit {

/// Rational-valued map on a finite set of points of some base space. The
/// domain is kept sorted by point id and free of duplicates.
class KatetovMap {
 public:
  KatetovMap() = default;
  KatetovMap(std::vector<PointId> domain, std::vector<Rat> values);

  /// Builds from (point, value) pairs. Repeated points must carry equal
  /// values and are merged; conflicting repeats throw ValidationError.
  static KatetovMap from_pairs(std::vector<std::pair<PointId, Rat>> pairs);

  [[nodiscard]] std::size_t size() const { return domain_.size(); }
  [[nodiscard]] bool empty() const { return domain_.empty(); }
  [[nodiscard]] std::span<const PointId> domain() const { return domain_; }
  [[nodiscard]] std::span<const Rat> values() const { return values_; }
  [[nodiscard]] bool contains(PointId p) const;
  [[nodiscard]] std::optional<Rat> at(PointId p) const;
  /// Value at p; throws ValidationError when p is outside the domain.
  [[nodiscard]] const Rat& value(PointId p) const;
  /// First domain point where the map vanishes, if any.
  [[nodiscard]] std::optional<PointId> zero() const;
  [[nodiscard]] KatetovMap restrict(std::span<const PointId> points) const;

  friend bool operator==(const KatetovMap&, const KatetovMap&) = default;

 private:
  std::vector<PointId> domain_;
  std::vector<Rat> values_;
};

enum class KatetovFault { kNone, kNegative, kLipschitz, kSum, kOutOfRange };

struct KatetovReport {
  KatetovFault fault = KatetovFault::kNone;
  PointId first = 0;
  PointId second = 0;
  std::string message;

  [[nodiscard]] bool ok() const { return fault == KatetovFault::kNone; }
};

class KatetovError : public ValidationError {
 public:
  explicit KatetovError(KatetovReport report)
      : ValidationError(report.message), report_(std::move(report)) {}
  [[nodiscard]] const KatetovReport& report() const { return report_; }

 private:
  KatetovReport report_;
};

/// Negative values are reported before any pair violation.
template <MetricSpace M>
KatetovReport check_katetov(const M& space, const KatetovMap& f) {
  const auto dom = f.domain();
  const auto val = f.values();
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (dom[i] >= space.size()) {
      return {KatetovFault::kOutOfRange, dom[i], dom[i], "domain point outside the base space"};
    }
    if (val[i].sign() < 0) {
      return {KatetovFault::kNegative, dom[i], dom[i],
              "negative value " + val[i].str() + " at point " + std::to_string(dom[i])};
    }
  }
  for (std::size_t i = 0; i < dom.size(); ++i) {
    for (std::size_t j = i + 1; j < dom.size(); ++j) {
      const Rat d = space.distance(dom[i], dom[j]);
      if (abs(val[i] - val[j]) > d) {
        return {KatetovFault::kLipschitz, dom[i], dom[j],
                "|" + val[i].str() + "-" + val[j].str() + "| > " + d.str()};
      }
      if (val[i] + val[j] < d) {
        return {KatetovFault::kSum, dom[i], dom[j],
                val[i].str() + "+" + val[j].str() + " < " + d.str()};
      }
    }
  }
  return {};
}

template <MetricSpace M>
void require_katetov(const M& space, const KatetovMap& f) {
  KatetovReport report = check_katetov(space, f);
  if (!report.ok()) throw KatetovError(std::move(report));
}

/// Sup-norm distance max |f(x) - g(x)|; domains must coincide.
Rat sup_dist(const KatetovMap& f, const KatetovMap& g);

/// The map y -> d(p, y) on the given points.
template <MetricSpace M>
KatetovMap point_map(const M& space, PointId p, std::span<const PointId> points) {
  std::vector<std::pair<PointId, Rat>> pairs;
  pairs.reserve(points.size());
  for (PointId y : points) pairs.emplace_back(y, Rat(space.distance(p, y)));
  return KatetovMap::from_pairs(std::move(pairs));
}

std::vector<PointId> all_points(std::size_t n);

/// Katetov extension x -> min over y in dom(f) of f(y) + d(x, y), evaluated
/// at every point of `target`. Points of dom(f) inside target keep f's value.
template <MetricSpace M>
KatetovMap katetov_extension(const M& space, const KatetovMap& f,
                             std::span<const PointId> target) {
  if (f.empty()) throw ValidationError("Katetov extension of a map with empty domain");
  std::vector<std::pair<PointId, Rat>> pairs;
  pairs.reserve(target.size());
  const auto dom = f.domain();
  const auto val = f.values();
  for (PointId x : target) {
    if (auto v = f.at(x)) {
      pairs.emplace_back(x, *v);
      continue;
    }
    Rat best = val[0] + Rat(space.distance(x, dom[0]));
    for (std::size_t i = 1; i < dom.size(); ++i) {
      Rat via = val[i] + Rat(space.distance(x, dom[i]));
      if (via < best) best = std::move(via);
    }
    pairs.emplace_back(x, std::move(best));
  }
  return KatetovMap::from_pairs(std::move(pairs));
}

template <MetricSpace M>
KatetovMap katetov_extension(const M& space, const KatetovMap& f) {
  const auto everything = all_points(space.size());
  return katetov_extension(space, f, everything);
}

/// True iff f(x) = min over s in S of f(s) + d(x, s) for every x in dom(f).
template <MetricSpace M>
bool is_supported_by(const M& space, const KatetovMap& f, std::span<const PointId> support) {
  if (support.empty()) throw ValidationError("support set must be nonempty");
  for (PointId s : support) {
    if (!f.contains(s)) throw ValidationError("support point outside the map's domain");
  }
  const auto dom = f.domain();
  const auto val = f.values();
  for (std::size_t i = 0; i < dom.size(); ++i) {
    std::optional<Rat> best;
    for (PointId s : support) {
      Rat via = f.value(s) + Rat(space.distance(dom[i], s));
      if (!best || via < *best) best = std::move(via);
    }
    if (*best != val[i]) return false;
  }
  return true;
}

/// Extends psi (on K) to all of the space so that the value at p is the
/// least one compatible with psi: max over y in K of |d(p,y) - psi(y)|. The
/// result is the Katetov extension of psi together with that value at p.
template <MetricSpace M>
KatetovMap minimal_value_extension(const M& space, const KatetovMap& psi, PointId p) {
  if (psi.empty()) throw ValidationError("minimal value extension needs a nonempty K");
  if (p >= space.size()) throw ValidationError("point outside the base space");
  std::vector<std::pair<PointId, Rat>> pairs;
  const auto dom = psi.domain();
  const auto val = psi.values();
  for (std::size_t i = 0; i < dom.size(); ++i) pairs.emplace_back(dom[i], val[i]);
  if (!psi.contains(p)) {
    Rat low;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      low = std::max(low, abs(Rat(space.distance(p, dom[i])) - val[i]));
    }
    pairs.emplace_back(p, std::move(low));
  }
  return katetov_extension(space, KatetovMap::from_pairs(std::move(pairs)));
}

/// Pointwise combination sum_k w_k f_k. Weights must be non-negative and sum
/// to 1; all maps must share one domain.
KatetovMap convex_combination(std::span<const KatetovMap> maps, std::span<const Rat> weights);

}  // namespace urykit
