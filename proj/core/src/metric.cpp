#include "urykit/metric.hpp"

#include <algorithm>
#include <set>

namespace urykit {
namespace {

std::size_t tri_offset(PointId p) { return p * (p - 1) / 2; }

std::string name(std::span<const std::string> labels, std::size_t i) {
  return i < labels.size() ? labels[i] : "#" + std::to_string(i);
}

MetricReport fault(MetricFault kind, std::vector<std::size_t> where, std::string message) {
  return MetricReport{kind, std::move(where), std::move(message)};
}

}  // namespace

MetricReport validate_metric(std::span<const std::string> labels, const DistanceMatrix& dist) {
  const std::size_t n = dist.size();
  if (labels.size() != n) {
    return fault(MetricFault::kStructural, {},
                 "label count " + std::to_string(labels.size()) + " does not match matrix size " +
                     std::to_string(n));
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (dist[p].size() != n) {
      return fault(MetricFault::kStructural, {p},
                   "row " + std::to_string(p) + " has " + std::to_string(dist[p].size()) +
                       " entries, expected " + std::to_string(n));
    }
  }
  {
    std::set<std::string_view> seen;
    for (std::size_t p = 0; p < n; ++p) {
      if (!seen.insert(labels[p]).second) {
        return fault(MetricFault::kStructural, {p}, "duplicate label '" + labels[p] + "'");
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dist[p][q] != dist[q][p]) {
        return fault(MetricFault::kStructural, {p, q},
                     "asymmetric entry (" + name(labels, p) + "," + name(labels, q) + "): " +
                         dist[p][q].str() + " vs " + dist[q][p].str());
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (!dist[p][p].is_zero()) {
      return fault(MetricFault::kNonzeroDiagonal, {p, p},
                   "nonzero self-distance at " + name(labels, p));
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dist[p][q].sign() <= 0) {
        return fault(MetricFault::kNonpositive, {p, q},
                     (dist[p][q].is_zero() ? "zero distance between distinct points "
                                           : "negative distance between ") +
                         name(labels, p) + " and " + name(labels, q));
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t r = p + 1; r < n; ++r) {
      for (std::size_t q = 0; q < n; ++q) {
        if (q == p || q == r) continue;
        if (dist[p][q] + dist[q][r] < dist[p][r]) {
          return fault(MetricFault::kTriangle, {p, q, r},
                       "triangle (" + name(labels, p) + "," + name(labels, q) + "," +
                           name(labels, r) + "): " + dist[p][q].str() + "+" + dist[q][r].str() +
                           " < " + dist[p][r].str());
        }
      }
    }
  }
  return {};
}

MetricError::MetricError(MetricReport report)
    : ValidationError(report.message), report_(std::move(report)) {}

FinMetric FinMetric::from_matrix(std::vector<std::string> labels, const DistanceMatrix& dist) {
  MetricReport report = validate_metric(labels, dist);
  if (report.structural()) throw ParseError(report.message);
  if (!report.ok()) throw MetricError(std::move(report));
  FinMetric m;
  m.labels_ = std::move(labels);
  m.lower_.reserve(tri_offset(m.labels_.size()));
  for (std::size_t p = 1; p < m.labels_.size(); ++p) {
    for (std::size_t q = 0; q < p; ++q) m.lower_.push_back(dist[p][q]);
  }
  m.index_labels();
  return m;
}

void FinMetric::index_labels() {
  index_.clear();
  for (std::size_t p = 0; p < labels_.size(); ++p) index_.emplace(labels_[p], p);
}

std::optional<PointId> FinMetric::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PointId FinMetric::require(std::string_view label) const {
  if (auto p = find(label)) return *p;
  throw ParseError("unknown point '" + std::string(label) + "'");
}

const Rat& FinMetric::distance(PointId p, PointId q) const {
  static const Rat kZero;
  if (p >= size() || q >= size()) throw ValidationError("point index out of range");
  if (p == q) return kZero;
  if (p < q) std::swap(p, q);
  return lower_[tri_offset(p) + q];
}

Rat FinMetric::diameter() const {
  Rat best;
  for (const Rat& d : lower_) best = std::max(best, d);
  return best;
}

DistanceMatrix FinMetric::matrix() const {
  DistanceMatrix out(size(), std::vector<Rat>(size()));
  for (std::size_t p = 0; p < size(); ++p) {
    for (std::size_t q = 0; q < size(); ++q) out[p][q] = distance(p, q);
  }
  return out;
}

FinMetric FinMetric::restrict(std::span<const PointId> points) const {
  FinMetric m;
  std::set<PointId> seen;
  for (PointId p : points) {
    if (p >= size()) throw ValidationError("point index out of range");
    if (!seen.insert(p).second) throw ValidationError("duplicate point in restriction");
    m.labels_.push_back(labels_[p]);
  }
  m.lower_.reserve(tri_offset(points.size()));
  for (std::size_t i = 1; i < points.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) m.lower_.push_back(distance(points[i], points[j]));
  }
  m.index_labels();
  return m;
}

void FinMetric::append(std::string label, std::span<const Rat> row) {
  if (row.size() != size()) throw ValidationError("appended row has wrong length");
  if (index_.contains(label)) throw ValidationError("duplicate label '" + label + "'");
  for (std::size_t p = 0; p < row.size(); ++p) {
    if (row[p].sign() <= 0) {
      throw MetricError(fault(MetricFault::kNonpositive, {p, size()},
                              "appended point '" + label + "' at non-positive distance from '" +
                                  labels_[p] + "'"));
    }
    for (std::size_t q = 0; q < p; ++q) {
      const Rat& d = distance(p, q);
      if (abs(row[p] - row[q]) > d || d > row[p] + row[q]) {
        throw MetricError(fault(MetricFault::kTriangle, {q, size(), p},
                                "appended point '" + label + "' breaks triangle with '" +
                                    labels_[q] + "','" + labels_[p] + "'"));
      }
    }
  }
  for (const Rat& d : row) lower_.push_back(d);
  index_.emplace(label, labels_.size());
  labels_.push_back(std::move(label));
}

bool is_flat_triangle(const Rat& ab, const Rat& bc, const Rat& ac) {
  return ab + bc == ac || ac + bc == ab || ab + ac == bc;
}

bool is_flat(PointId a, PointId b, PointId c, const FinMetric& m) {
  if (a == b || b == c || a == c) throw ValidationError("is_flat needs three distinct points");
  return is_flat_triangle(m.distance(a, b), m.distance(b, c), m.distance(a, c));
}

FinMetric average_metrics(std::span<const FinMetric> metrics, std::span<const Rat> weights) {
  if (metrics.empty()) throw ValidationError("average of an empty list of metrics");
  if (metrics.size() != weights.size()) throw ValidationError("one weight per metric required");
  Rat total;
  for (const Rat& w : weights) {
    if (w.sign() <= 0) throw ValidationError("averaging weights must be positive");
    total += w;
  }
  if (total != 1) throw ValidationError("averaging weights sum to " + total.str() + ", not 1");
  const auto& labels = metrics.front().labels();
  for (const FinMetric& m : metrics) {
    if (m.labels() != labels) throw ValidationError("averaged metrics have different labels");
  }
  const std::size_t n = labels.size();
  DistanceMatrix out(n, std::vector<Rat>(n));
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      Rat acc;
      for (std::size_t k = 0; k < metrics.size(); ++k) acc += weights[k] * metrics[k].distance(p, q);
      out[p][q] = acc;
      out[q][p] = acc;
    }
  }
  return FinMetric::from_matrix(labels, out);
}

FinMetric amalgamate_free(const FinMetric& a, const FinMetric& b,
                          std::span<const std::string> common) {
  std::set<std::string> common_set(common.begin(), common.end());
  if (common_set.size() != common.size()) throw ValidationError("duplicate common label");
  std::vector<PointId> ca;
  std::vector<PointId> cb;
  for (const std::string& label : common) {
    const auto pa = a.find(label);
    const auto pb = b.find(label);
    if (!pa || !pb) throw ValidationError("common point '" + label + "' missing from a factor");
    ca.push_back(*pa);
    cb.push_back(*pb);
  }
  for (std::size_t i = 0; i < ca.size(); ++i) {
    for (std::size_t j = i + 1; j < ca.size(); ++j) {
      if (a.distance(ca[i], ca[j]) != b.distance(cb[i], cb[j])) {
        throw ValidationError("common points '" + common[i] + "','" + common[j] +
                              "' disagree: " + a.distance(ca[i], ca[j]).str() + " vs " +
                              b.distance(cb[i], cb[j]).str());
      }
    }
  }
  std::vector<PointId> b_only;
  for (PointId q = 0; q < b.size(); ++q) {
    if (common_set.contains(b.label(q))) continue;
    if (a.find(b.label(q))) {
      throw ValidationError("label '" + b.label(q) + "' occurs in both factors outside the common part");
    }
    b_only.push_back(q);
  }

  const Rat empty_gap = std::max({a.diameter(), b.diameter(), Rat(1)});
  std::vector<std::string> labels = a.labels();
  for (PointId q : b_only) labels.push_back(b.label(q));
  const std::size_t n = labels.size();
  DistanceMatrix d(n, std::vector<Rat>(n));
  for (PointId p = 0; p < a.size(); ++p) {
    for (PointId q = 0; q < a.size(); ++q) d[p][q] = a.distance(p, q);
  }
  auto b_index = [&](std::size_t k) { return b_only[k]; };
  for (std::size_t k = 0; k < b_only.size(); ++k) {
    const std::size_t row = a.size() + k;
    for (std::size_t l = 0; l < b_only.size(); ++l) {
      d[row][a.size() + l] = b.distance(b_index(k), b_index(l));
    }
    for (PointId p = 0; p < a.size(); ++p) {
      Rat value;
      const auto in_common = std::find(ca.begin(), ca.end(), p);
      if (in_common != ca.end()) {
        value = b.distance(cb[static_cast<std::size_t>(in_common - ca.begin())], b_index(k));
      } else if (ca.empty()) {
        value = empty_gap;
      } else {
        bool first = true;
        for (std::size_t w = 0; w < ca.size(); ++w) {
          Rat via = a.distance(p, ca[w]) + b.distance(cb[w], b_index(k));
          if (first || via < value) value = via;
          first = false;
        }
      }
      d[row][p] = value;
      d[p][row] = value;
    }
  }
  return FinMetric::from_matrix(std::move(labels), d);
}

std::string_view to_string(FixedTag tag) {
  switch (tag) {
    case FixedTag::kFixesA:
      return "FixesA";
    case FixedTag::kFixesB:
      return "FixesB";
    case FixedTag::kNone:
      break;
  }
  return "None";
}

FixedTag parse_fixed_tag(std::string_view text) {
  if (text == "FixesA" || text == "A") return FixedTag::kFixesA;
  if (text == "FixesB" || text == "B") return FixedTag::kFixesB;
  if (text == "None" || text.empty()) return FixedTag::kNone;
  throw ParseError("unknown fixed tag '" + std::string(text) + "'");
}

std::optional<PointId> PartialIsometry::image(PointId p) const {
  const auto it = std::find(domain.begin(), domain.end(), p);
  if (it == domain.end()) return std::nullopt;
  return range[static_cast<std::size_t>(it - domain.begin())];
}

std::optional<PointId> PartialIsometry::preimage(PointId p) const {
  const auto it = std::find(range.begin(), range.end(), p);
  if (it == range.end()) return std::nullopt;
  return domain[static_cast<std::size_t>(it - range.begin())];
}

PartialIsometry PartialIsometry::inverse() const { return {range, domain, tag}; }

bool fixes_pointwise(const PartialIsometry& f, std::span<const PointId> fixed) {
  return std::all_of(fixed.begin(), fixed.end(), [&](PointId p) {
    const auto img = f.image(p);
    return img && *img == p;
  });
}

}  // namespace urykit
