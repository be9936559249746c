#pragma once

// Extensions of a finite space X by an enumerated finite pattern F.
//
// The extension space keeps one copy of E(X) per pattern point, glued along
// X. Inside a copy, vertices are at sup-norm distance; across copies i != j
// a vertex pair gets weight d(a_i, a_j) whenever that value is compatible
// with the triangle inequalities through X. Distances are the shortest-path
// closure of these weights. Only a finite catalog of vertices per copy is
// materialized.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "urykit/katetov.hpp"
#include "urykit/metric.hpp"

namespace urykit {

/// Abstract extension X u {a'_1..a'_n} of X by a copy of the pattern.
/// cross[i][x] = d(a'_i, x), indexed by pattern point then base point.
struct ExtensionSpec {
  FinMetric base;
  FinMetric pattern;
  std::vector<std::vector<Rat>> cross;

  [[nodiscard]] std::size_t copies() const { return pattern.size(); }
  [[nodiscard]] KatetovMap row(std::size_t i) const;
};

/// Joint matrix on X followed by the pattern copies.
DistanceMatrix joint_matrix(const ExtensionSpec& spec);

/// Validity of the joint matrix. Zero is accepted for a cross entry (the
/// copy then coincides with that point of X); everything else must be a
/// genuine metric.
MetricReport check_spec(const ExtensionSpec& spec);
void require_spec(const ExtensionSpec& spec);

/// Sup-metric style lookup of the edge weight between f in copy i and g in
/// copy j. Same copy: sup_dist. Different copies: d(a_i, a_j) if
/// |f(x) - g(x)| <= d(a_i, a_j) <= f(x) + g(x) for all x, else undefined.
std::optional<Rat> omega(const FinMetric& pattern, const KatetovMap& f, std::size_t i,
                         const KatetovMap& g, std::size_t j);

struct GraphVertex {
  std::optional<std::size_t> copy;  // empty for points of X
  std::size_t index = 0;            // base point, or position in the catalog

  friend bool operator==(const GraphVertex&, const GraphVertex&) = default;
};

class ExtensionGraph {
 public:
  ExtensionGraph(FinMetric base, FinMetric pattern);

  [[nodiscard]] const FinMetric& base() const { return base_; }
  [[nodiscard]] const FinMetric& pattern() const { return pattern_; }
  [[nodiscard]] std::size_t copies() const { return pattern_.size(); }
  [[nodiscard]] const std::vector<KatetovMap>& catalog(std::size_t copy) const {
    return catalogs_.at(copy);
  }

  /// Adds a vertex to copy `copy`. The map must be a valid Katetov map
  /// defined on every point of X. Returns its position in the catalog.
  std::size_t add(std::size_t copy, KatetovMap f);

  /// Vertex list in closure order: points of X, then copy 0's catalog, ...
  [[nodiscard]] std::vector<GraphVertex> vertices() const;
  [[nodiscard]] const KatetovMap& map(const GraphVertex& v) const;

  /// Edge weight between two vertices, identifying a catalog map that
  /// vanishes at x with the point x itself.
  [[nodiscard]] std::optional<Rat> weight(const GraphVertex& u, const GraphVertex& v) const;

  /// If the vertex stands for a point of X, that point.
  [[nodiscard]] std::optional<PointId> as_base_point(const GraphVertex& v) const;

 private:
  FinMetric base_;
  FinMetric pattern_;
  std::vector<std::vector<KatetovMap>> catalogs_;
};

/// All-pairs shortest paths over the finite vertex set of a graph.
class ClosureMetric {
 public:
  ClosureMetric() = default;
  ClosureMetric(std::vector<GraphVertex> vertices, std::vector<Rat> dist);

  [[nodiscard]] std::size_t size() const { return vertices_.size(); }
  [[nodiscard]] const std::vector<GraphVertex>& vertices() const { return vertices_; }
  [[nodiscard]] const Rat& distance(std::size_t u, std::size_t v) const {
    return dist_[u * vertices_.size() + v];
  }
  /// Position of a vertex in the closure order.
  [[nodiscard]] std::size_t position(const GraphVertex& v) const;

 private:
  std::vector<GraphVertex> vertices_;
  std::vector<Rat> dist_;
};

ClosureMetric closure_metric(const ExtensionGraph& graph);

struct DbarResult {
  Rat value;
  // The depth bound cut off some chain that could still have improved value.
  bool bound_limited = false;
  std::size_t chains_solved = 0;
  // Copy sequence of the best relay chain; empty when the route through X
  // (or a direct answer) is optimal.
  std::vector<std::size_t> best_chain;
};

/// Infimum of path weights between f in copy i and g in copy j over the
/// whole (infinite) extension space, including relay vertices that are not in
/// any catalog. Each copy sequence is a linear program in the relay values;
/// sequences are enumerated depth-first and pruned once their pattern
/// weight reaches the incumbent.
DbarResult dbar_exact(const ExtensionGraph& graph, const KatetovMap& f, std::size_t i,
                      const KatetovMap& g, std::size_t j, std::size_t depth_bound = 12);

struct EmbeddedVertex {
  std::size_t copy = 0;
  KatetovMap map;
  std::optional<PointId> alias;  // the point of X this vertex coincides with
};

/// One vertex per pattern point realizing the spec: row i placed in copy i.
std::vector<EmbeddedVertex> embed_spec(const ExtensionSpec& spec);

/// Exhaustive audits of a closure against the graph weights. Each returns a
/// description of the first failure.
std::optional<std::string> audit_claim(const ExtensionGraph& graph, const ClosureMetric& closure);
std::optional<std::string> audit_condition_b(const ExtensionGraph& graph,
                                             const ClosureMetric& closure);
std::optional<std::string> audit_base(const ExtensionGraph& graph, const ClosureMetric& closure);

}  // namespace urykit
