#pragma once

// Approximating an isometry that fixes A n B by words in isometries fixing A
// and isometries fixing B.
//
// The current tuple X starts at A and is moved towards the target C = phi(A).
// A B-move keeps every distance from X to B and to itself, and pulls each
// x_i as close to c_i as those constraints allow; an A-move does the same
// over A. When neither strictly lowers F = sum d(x_i, c_i), a small
// perturbation of one distance (legal for the other generator) breaks the
// flat triangle that blocks progress. Every move carries a certificate: a
// finite partial isometry that fixes A or B pointwise.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urykit/homotopy.hpp"
#include "urykit/urysohn.hpp"

namespace urykit {

/// a_i = b_i exactly for i < k, and no other point is shared by A and B.
/// c_i = a_i for i < k and d(c_i, c_j) = d(a_i, a_j).
struct StabilizerInstance {
  GrowingSpace space;
  std::vector<PointId> a;
  std::vector<PointId> b;
  std::vector<PointId> c;
  std::size_t k = 0;
  Rat epsilon;
};

void validate_instance(const StabilizerInstance& inst);

/// Reorders A and B so that the points they share come first (in A's
/// order), and returns the instance with k set accordingly. C is permuted
/// along with A.
StabilizerInstance normalize_instance(GrowingSpace space, std::vector<PointId> a,
                                      std::vector<PointId> b, std::vector<PointId> c, Rat epsilon);

/// sum_i d(x_i, c_i).
Rat objective(const StabilizerInstance& inst, std::span<const PointId> x);

enum class MoveTag { kAMove, kBMove, kPerturb };
std::string_view to_string(MoveTag tag);
MoveTag parse_move_tag(std::string_view text);

struct Move {
  std::vector<PointId> tuple;
  Rat f;
  MoveTag tag = MoveTag::kBMove;
  PartialIsometry certificate;
};

/// The F value a B-move (fix_b) or A-move would reach, without realizing it:
/// sum_i max_j |d(c_i, s_j) - d(x_i, s_j)| over the fixed set S.
Rat predicted_move(const StabilizerInstance& inst, std::span<const PointId> x, bool fix_b);

/// New tuple Z with the distances from X to B and within X kept, and
/// d(z_i, c_i) = max_j |d(c_i, b_j) - d(x_i, b_j)|. Certificate X u B -> Z u B.
Move b_move(StabilizerInstance& inst, std::span<const PointId> x);
/// Same with A in place of B.
Move a_move(StabilizerInstance& inst, std::span<const PointId> x);

/// Changes d(x_{i0}, s_{j0}) by +-delta, where s is B (certificate fixes A)
/// or, with perturb_b false, A (certificate fixes B). Every other distance
/// from x_{i0} to A, B, C and the other x_i is kept. The sign follows which
/// side of |d(c_{i0}, s_{j0}) - d(x_{i0}, s_{j0})| = d(x_{i0}, c_{i0}) holds.
/// delta is halved until the new distance profile is valid, down to
/// delta * 2^-20; past that a ValidationError is thrown.
Move plateau_perturb(StabilizerInstance& inst, std::span<const PointId> x, std::size_t i0,
                     std::size_t j0, const Rat& delta, bool perturb_b = true);

enum class TriangleFamily { kACB, kBCC, kACC };

struct FlatTriangle {
  TriangleFamily family = TriangleFamily::kACB;
  std::size_t p = 0;
  std::size_t q = 0;  // index of the C point whose row is free
  std::size_t r = 0;
};

/// Flat (or degenerate) triangles among {a_p, c_q, b_r} with q >= k and
/// max(p, r) >= k, {b_p, c_q, c_r} and {a_p, c_q, c_r} with p, q >= k and
/// r != q. Indices are 0-based.
std::vector<FlatTriangle> flat_triangles(const StabilizerInstance& inst);
std::vector<FlatTriangle> flat_triangles(const StabilizerInstance& inst,
                                         std::span<const PointId> c);

struct DeflattenReport {
  std::vector<PointId> c;  // the new target tuple
  std::size_t flat_before = 0;
  std::size_t witnesses = 0;
  Rat weight;        // blend weight of the averaged witness spec
  Rat displacement;  // max_i d(c'_i, c_i)
};

/// Replaces C by a nearby tuple with no flat triangle in the families above
/// and d(c'_i, c_i) <= delta. The new C is an extension of A u B isometric to
/// A and agreeing with A on the first k points.
DeflattenReport deflatten(StabilizerInstance& inst, const Rat& delta);

struct DescentOptions {
  std::size_t max_iter = 10000;
};

struct DescentTrace {
  std::vector<PointId> start;
  Rat start_f;
  std::vector<Move> iterations;
  bool converged = false;
  std::string failure;  // empty unless the descent stopped without reaching epsilon

  [[nodiscard]] const std::vector<PointId>& final_tuple() const {
    return iterations.empty() ? start : iterations.back().tuple;
  }
  [[nodiscard]] const Rat& final_f() const {
    return iterations.empty() ? start_f : iterations.back().f;
  }
};

/// Moves from X = A towards C until F <= epsilon or the iteration cap.
DescentTrace descend(StabilizerInstance& inst, const DescentOptions& options = {});

/// Exhaustive check of a trace: F non-increasing and matching the tuples,
/// each certificate an isometry fixing its tagged set and carrying the
/// previous tuple onto the next. Returns the first problem found.
std::optional<std::string> audit_trace(const StabilizerInstance& inst, const DescentTrace& trace);

/// Image of `points` under the certificates composed in trace order.
std::vector<PointId> apply_word(std::span<const PartialIsometry> word,
                                std::span<const PointId> points);

struct AlignedInstance {
  std::vector<PointId> x0;
  BasicOpenSet open_set;  // anchors at phi of the original points
  std::vector<std::pair<PointId, PointId>> replaced;  // (old, new)
};

/// Moves every point of X0 outside A that lies in B to a fresh point at
/// distance eps/6 from it, and shrinks the radii to eps/3. phi must be
/// defined on X0.
AlignedInstance align_instance(GrowingSpace& space, std::span<const PointId> x0,
                               std::span<const PointId> a, std::span<const PointId> b,
                               const PartialIsometry& phi, const Rat& eps);

struct Duplicate {
  std::vector<PointId> copy;
  PartialIsometry correspondence;  // X -> copy
};

/// Realizes an isometric copy of X meeting X exactly in `common`, placed by
/// free amalgamation over `common`.
Duplicate duplicate_over(GrowingSpace& space, std::span<const PointId> x,
                         std::span<const PointId> common);

struct GeneratorCheck {
  std::size_t generator = 0;
  PointId point = 0;
  Rat displacement;  // d(y, phi(y))
  Rat bound;         // 2 d(y, Fix)
};

struct DisplacementReport {
  std::vector<PointId> orbit;       // x, w_1(x), w_2 w_1(x), ...
  std::vector<GeneratorCheck> steps;
  Rat displacement;                 // d(x, w(x))
  Rat word_bound;                   // sum of the step bounds
  Rat union_bound;                  // 2 * len * d(x, A u B), informational
  bool within_bounds = true;
};

/// Follows x through the word and checks each generator's displacement
/// against twice the distance to the set it fixes (A for FixesA, B for
/// FixesB), then the whole word against the sum.
DisplacementReport displacement_audit(const GrowingSpace& space,
                                      std::span<const PartialIsometry> word, PointId x,
                                      std::span<const PointId> a, std::span<const PointId> b);

/// Per-generator bound at every domain point of every generator. Returns
/// the first violation.
std::optional<GeneratorCheck> audit_generators(const GrowingSpace& space,
                                               std::span<const PartialIsometry> word,
                                               std::span<const PointId> a,
                                               std::span<const PointId> b);

}  // namespace urykit
