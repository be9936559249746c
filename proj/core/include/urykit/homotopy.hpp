#pragma once

// Paths of embedded tuples obtained by blending distance profiles.
//
// Two tuples phi0, phi1 isometric to a common pattern are joined by the
// family of extensions whose distance to each reference point y is
// (1-t) d(phi0_i, y) + t d(phi1_i, y). All samples of one path are realized
// together through a single extension graph, so samples of the same pattern
// point sit at the sup-norm distance of their profiles.

#include <span>
#include <vector>

#include "urykit/extension_space.hpp"
#include "urykit/urysohn.hpp"

namespace urykit {

/// d(tuple[index], target) < radius.
struct Anchor {
  std::size_t index = 0;
  PointId target = 0;
  Rat radius;
};

struct BasicOpenSet {
  std::vector<Anchor> anchors;
};

/// radius - d(tuple[index], target) for each anchor; membership is all > 0.
std::vector<Rat> open_set_margins(const GrowingSpace& space, std::span<const PointId> tuple,
                                  const BasicOpenSet& v);
void require_open_set(const GrowingSpace& space, const BasicOpenSet& v, std::size_t tuple_size);

/// Extension spec of the blend at parameter t over the reference points Y.
ExtensionSpec blend_spec(const GrowingSpace& space, std::span<const PointId> phi0,
                         std::span<const PointId> phi1, std::span<const PointId> y, const Rat& t);

/// {0, 1/m, ..., 1}.
std::vector<Rat> uniform_grid(std::size_t m);

struct ModulusRow {
  std::size_t from = 0;  // grid positions
  std::size_t to = 0;
  Rat realized;  // max_i d(z_i(t_from), z_i(t_to))
  Rat bound;     // |t_from - t_to| * max_i max_y |d(phi0_i,y) - d(phi1_i,y)|
};

struct TuplePath {
  std::vector<Rat> grid;
  std::vector<std::vector<PointId>> tuples;
  std::vector<std::vector<Rat>> margins;  // per sample, per anchor
  std::vector<ModulusRow> modulus;        // consecutive samples
  // Reference points actually used: Y followed by any endpoint or anchor
  // target points not already in Y.
  std::vector<PointId> reference;
  Rat lipschitz;  // max_i max_y |d(phi0_i,y) - d(phi1_i,y)| over the reference
};

/// Samples the blend path at every grid value. Both endpoints must lie in V
/// strictly. Every returned sample is checked: pattern distances, V
/// membership and the modulus bound against every other sample.
TuplePath sample_path(GrowingSpace& space, std::span<const PointId> phi0,
                      std::span<const PointId> phi1, std::span<const PointId> y,
                      std::span<const Rat> grid, const BasicOpenSet& v);

/// f tau_1 + g tau_2 + h tau_3 for non-negative weights summing to 1.
KatetovMap partition_blend(std::span<const KatetovMap> taus, std::span<const Rat> weights);

}  // namespace urykit
