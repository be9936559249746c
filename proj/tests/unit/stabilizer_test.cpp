#include <gtest/gtest.h>

#include "support.hpp"

namespace urykit {
namespace {

using test::R;
using test::space;

const Rat kEps(1, 100);

// A = {a}, B = {b}, C = {c} with the given distances d(a,b), d(a,c), d(b,c).
StabilizerInstance triangle(const char* ab, const char* ac, const char* bc) {
  GrowingSpace s(space({"a", "b", "c"}, {{"0", ab, ac}, {ab, "0", bc}, {ac, bc, "0"}}));
  return normalize_instance(std::move(s), {0}, {1}, {2}, kEps);
}

bool certificate_ok(const GrowingSpace& s, const Move& m, std::span<const PointId> fixed) {
  return !check_partial_isometry(s, m.certificate).has_value() && fixes_pointwise(m.certificate, fixed);
}

TEST(Instance, ValidationAndNormalization) {
  GrowingSpace s(space({"p", "q", "r", "t"}, {{"0", "1", "1", "1"},
                                             {"1", "0", "2", "2"},
                                             {"1", "2", "0", "2"},
                                             {"1", "2", "2", "0"}}));
  const StabilizerInstance inst = normalize_instance(s, {1, 0}, {2, 0}, {3, 0}, kEps);
  EXPECT_EQ(inst.k, 1u);
  EXPECT_EQ(inst.a, (std::vector<PointId>{0, 1}));
  EXPECT_EQ(inst.b, (std::vector<PointId>{0, 2}));
  EXPECT_EQ(inst.c, (std::vector<PointId>{0, 3}));
  // C not isometric to A.
  EXPECT_THROW(normalize_instance(s, {1, 0}, {2}, {3, 2}, kEps), ValidationError);
  // Shared point not fixed.
  EXPECT_THROW(normalize_instance(s, {0, 1}, {0, 2}, {3, 1}, kEps), ValidationError);
}

TEST(Objective, SumOfDistances) {
  const StabilizerInstance inst = triangle("2", "2", "2");
  const std::vector<PointId> x{0};
  EXPECT_EQ(objective(inst, x), Rat(2));
  const std::vector<PointId> at_c{2};
  EXPECT_EQ(objective(inst, at_c), Rat(0));
}

TEST(BMove, EquilateralReachesTarget) {
  StabilizerInstance inst = triangle("2", "2", "2");
  const std::vector<PointId> x = inst.a;
  EXPECT_EQ(predicted_move(inst, x, true), Rat(0));
  const Move m = b_move(inst, x);
  EXPECT_EQ(m.tuple, inst.c);
  EXPECT_EQ(m.f, Rat(0));
  EXPECT_EQ(m.certificate.tag, FixedTag::kFixesB);
  EXPECT_TRUE(certificate_ok(inst.space, m, inst.b));
  EXPECT_EQ(inst.space.distance(m.tuple[0], inst.b[0]), Rat(2));
}

TEST(BMove, FlatTriangleIsAPlateau) {
  StabilizerInstance inst = triangle("3", "1", "2");
  const std::vector<PointId> x = inst.a;
  EXPECT_EQ(objective(inst, x), Rat(1));
  EXPECT_EQ(predicted_move(inst, x, true), Rat(1));
  const Move m = b_move(inst, x);
  EXPECT_EQ(m.f, Rat(1));
}

TEST(BMove, MatchingProfileGivesZero) {
  // x has the same distance to b as c does.
  GrowingSpace s(space({"a", "b", "c", "x"}, {{"0", "2", "2", "2"},
                                             {"2", "0", "1", "1"},
                                             {"2", "1", "0", "1"},
                                             {"2", "1", "1", "0"}}));
  StabilizerInstance inst = normalize_instance(std::move(s), {0}, {1}, {2}, kEps);
  const std::vector<PointId> x{3};
  EXPECT_EQ(b_move(inst, x).f, Rat(0));
}

TEST(Moves, SymmetricInstanceGivesEqualValues) {
  StabilizerInstance inst = triangle("2", "3/2", "3/2");
  const std::vector<PointId> x = inst.a;
  const std::vector<PointId> c = inst.c;
  EXPECT_EQ(predicted_move(inst, c, true), Rat(0));
  EXPECT_EQ(predicted_move(inst, c, false), Rat(0));
  // A and B play symmetric roles around c.
  StabilizerInstance swapped = normalize_instance(inst.space, inst.b, inst.a, inst.c, kEps);
  EXPECT_EQ(predicted_move(inst, x, true), predicted_move(swapped, swapped.b, false));
}

TEST(Moves, TargetTupleStaysPut) {
  StabilizerInstance inst = triangle("2", "2", "2");
  const std::vector<PointId> c = inst.c;
  EXPECT_EQ(b_move(inst, c).f, Rat(0));
  EXPECT_EQ(a_move(inst, c).f, Rat(0));
}

TEST(Moves, RandomCertificatesAndPredictions) {
  Rng rng(73);
  const auto values = test::rats({"1", "3/2", "2", "3"});
  for (int trial = 0; trial < 150; ++trial) {
    StabilizerInstance inst = random_instance(rng, random_shape(rng, 3), values, kEps);
    const std::vector<PointId> x = inst.a;
    const Rat predicted_b = predicted_move(inst, x, true);
    const Move mb = b_move(inst, x);
    EXPECT_EQ(mb.f, predicted_b);
    EXPECT_EQ(mb.f, objective(inst, mb.tuple));
    EXPECT_TRUE(certificate_ok(inst.space, mb, inst.b));
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_EQ(mb.certificate.image(x[i]), std::optional<PointId>(mb.tuple[i]));
      Rat best;
      for (PointId bj : inst.b) {
        best = std::max(best, abs(inst.space.distance(inst.c[i], bj) - inst.space.distance(x[i], bj)));
      }
      EXPECT_EQ(inst.space.distance(mb.tuple[i], inst.c[i]), best);
    }
    const Move ma = a_move(inst, mb.tuple);
    EXPECT_TRUE(certificate_ok(inst.space, ma, inst.a));
    EXPECT_LE(ma.f, mb.f);
  }
}

TEST(PlateauPerturb, ZeroDeltaIsIdentity) {
  StabilizerInstance inst = triangle("3", "1", "2");
  const std::vector<PointId> x = inst.a;
  const Move m = plateau_perturb(inst, x, 0, 0, Rat(0));
  EXPECT_EQ(m.tuple, x);
  EXPECT_EQ(m.certificate.domain, m.certificate.range);
}

TEST(PlateauPerturb, BreaksFlatTriangleAndUnblocksBMove) {
  // x sits on a flat triangle x-c-b: d(x,c) = 1, d(c,b) = 2, d(x,b) = 3.
  GrowingSpace s(space({"a", "b", "c", "x"}, {{"0", "2", "2", "2"},
                                             {"2", "0", "2", "3"},
                                             {"2", "2", "0", "1"},
                                             {"2", "3", "1", "0"}}));
  StabilizerInstance inst = normalize_instance(std::move(s), {0}, {1}, {2}, kEps);
  const std::vector<PointId> x{3};
  EXPECT_EQ(predicted_move(inst, x, true), objective(inst, x));
  const Move p = plateau_perturb(inst, x, 0, 0, R("1/4"));
  const PointId moved = p.tuple[0];
  EXPECT_EQ(inst.space.distance(moved, 1), R("11/4"));
  EXPECT_EQ(inst.space.distance(moved, 0), Rat(2));
  EXPECT_EQ(inst.space.distance(moved, 2), Rat(1));
  EXPECT_EQ(p.f, Rat(1));
  EXPECT_TRUE(certificate_ok(inst.space, p, inst.a));
  EXPECT_EQ(p.certificate.tag, FixedTag::kFixesA);
  EXPECT_EQ(predicted_move(inst, p.tuple, true), R("3/4"));
  EXPECT_LT(b_move(inst, p.tuple).f, p.f);
}

TEST(PlateauPerturb, RefusesWithoutFlatTriangle) {
  StabilizerInstance inst = triangle("2", "2", "2");
  const std::vector<PointId> c = inst.c;
  EXPECT_THROW(plateau_perturb(inst, c, 0, 0, R("1/4")), ValidationError);
}

TEST(FlatTriangles, Families) {
  const StabilizerInstance flat = triangle("3", "1", "2");
  const auto found = flat_triangles(flat);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].family, TriangleFamily::kACB);
  EXPECT_TRUE(flat_triangles(triangle("2", "2", "2")).empty());
}

TEST(Deflatten, NoFlatTriangleLeavesTargetAlone) {
  StabilizerInstance inst = triangle("2", "2", "2");
  const std::vector<PointId> before = inst.c;
  const DeflattenReport r = deflatten(inst, R("1/2"));
  EXPECT_EQ(r.flat_before, 0u);
  EXPECT_EQ(inst.c, before);
  EXPECT_EQ(r.displacement, Rat(0));
}

TEST(Deflatten, WitnessArithmeticForOneFlatTriangle) {
  // Witness placement of c: d(a,c~) = 1, d(c~,b) = 5/2. Blending the row of c
  // halfway towards it gives d(c',b) = 9/4.
  const std::vector<std::string> labels{"a", "b", "w"};
  const auto witness = test::matrix({{"0", "3", "1"}, {"3", "0", "5/2"}, {"1", "5/2", "0"}});
  EXPECT_TRUE(validate_metric(labels, witness).ok());
  EXPECT_FALSE(is_flat_triangle(witness[0][2], witness[2][1], witness[0][1]));
  const Rat blended = (Rat(2) + R("5/2")) / Rat(2);
  EXPECT_EQ(blended, R("9/4"));
  const auto mixed = test::matrix({{"0", "3", "1"}, {"3", "0", "9/4"}, {"1", "9/4", "0"}});
  EXPECT_TRUE(validate_metric(labels, mixed).ok());
  EXPECT_FALSE(is_flat_triangle(Rat(1), blended, Rat(3)));
}

TEST(Deflatten, OneFlatTriangle) {
  StabilizerInstance inst = triangle("3", "1", "2");
  const std::vector<PointId> before = inst.c;
  const DeflattenReport r = deflatten(inst, R("1/2"));
  EXPECT_EQ(r.flat_before, 1u);
  EXPECT_TRUE(flat_triangles(inst).empty());
  EXPECT_LE(inst.space.distance(inst.c[0], before[0]), R("1/2"));
  EXPECT_EQ(r.displacement, inst.space.distance(inst.c[0], before[0]));
  EXPECT_NO_THROW(validate_instance(inst));
}

TEST(Deflatten, RandomInstancesStayClose) {
  Rng rng(79);
  const auto values = test::rats({"1", "3/2", "2", "3"});
  for (int trial = 0; trial < 100; ++trial) {
    StabilizerInstance inst = random_instance(rng, random_shape(rng, 3), values, kEps);
    const std::vector<PointId> before = inst.c;
    const Rat delta(1 + trial % 4, 8);
    deflatten(inst, delta);
    EXPECT_TRUE(flat_triangles(inst).empty());
    for (std::size_t i = 0; i < before.size(); ++i) {
      EXPECT_LE(inst.space.distance(inst.c[i], before[i]), delta);
      if (i < inst.k) EXPECT_EQ(inst.c[i], before[i]);
    }
    EXPECT_NO_THROW(validate_instance(inst));
  }
}

TEST(Descend, TargetEqualToAStopsImmediately) {
  GrowingSpace s(space({"a", "b"}, {{"0", "2"}, {"2", "0"}}));
  StabilizerInstance inst = normalize_instance(std::move(s), {0}, {1}, {0}, kEps);
  const DescentTrace t = descend(inst);
  EXPECT_TRUE(t.converged);
  EXPECT_TRUE(t.iterations.empty());
  EXPECT_EQ(t.final_f(), Rat(0));
}

TEST(Descend, EquilateralInOneMove) {
  StabilizerInstance inst = triangle("2", "2", "2");
  const DescentTrace t = descend(inst);
  EXPECT_TRUE(t.converged);
  ASSERT_EQ(t.iterations.size(), 1u);
  EXPECT_EQ(t.iterations[0].tag, MoveTag::kBMove);
  EXPECT_FALSE(audit_trace(inst, t).has_value());
}

TEST(Descend, FlatExampleAfterDeflatten) {
  StabilizerInstance inst = triangle("3", "1", "2");
  deflatten(inst, kEps / Rat(2));
  inst.epsilon = kEps / Rat(2);
  const DescentTrace t = descend(inst);
  EXPECT_TRUE(t.converged);
  ASSERT_FALSE(t.iterations.empty());
  EXPECT_LT(t.iterations[0].f, t.start_f);
  EXPECT_FALSE(audit_trace(inst, t).has_value());
}

TEST(Descend, RandomInstancesConvergeWithMonotoneTraces) {
  Rng rng(83);
  const auto values = test::rats({"1", "3/2", "2", "3"});
  for (int trial = 0; trial < 40; ++trial) {
    StabilizerInstance inst = random_instance(rng, random_shape(rng, 3), values, kEps);
    const std::vector<PointId> original = inst.c;
    deflatten(inst, kEps / Rat(2));
    inst.epsilon = kEps / Rat(2);
    const DescentTrace t = descend(inst);
    ASSERT_TRUE(t.converged) << t.failure;
    EXPECT_FALSE(audit_trace(inst, t).has_value());
    Rat previous = t.start_f;
    for (const Move& m : t.iterations) {
      EXPECT_LE(m.f, previous);
      previous = m.f;
    }
    std::vector<PartialIsometry> word;
    for (const Move& m : t.iterations) word.push_back(m.certificate);
    const auto image = apply_word(word, inst.a);
    for (std::size_t i = 0; i < image.size(); ++i) {
      EXPECT_LE(inst.space.distance(image[i], original[i]), kEps);
    }
  }
}

TEST(AuditTrace, DetectsTamperedCertificate) {
  StabilizerInstance inst = triangle("2", "2", "2");
  DescentTrace t = descend(inst);
  ASSERT_EQ(t.iterations.size(), 1u);
  t.iterations[0].certificate.tag = FixedTag::kFixesA;
  EXPECT_TRUE(audit_trace(inst, t).has_value());
}

TEST(AlignInstance, NothingToMove) {
  GrowingSpace s(space({"a", "b", "x"}, {{"0", "2", "1"}, {"2", "0", "2"}, {"1", "2", "0"}}));
  const std::vector<PointId> x0{0, 2};
  const std::vector<PointId> a{0};
  const std::vector<PointId> b{1};
  const PartialIsometry phi{{0, 2}, {0, 2}};
  const AlignedInstance r = align_instance(s, x0, a, b, phi, R("3/10"));
  EXPECT_EQ(r.x0, x0);
  EXPECT_TRUE(r.replaced.empty());
  for (const Anchor& an : r.open_set.anchors) EXPECT_EQ(an.radius, R("1/10"));
}

TEST(AlignInstance, ReplacesPointsOfB) {
  GrowingSpace s(space({"a", "b", "b2"}, {{"0", "2", "1"}, {"2", "0", "2"}, {"1", "2", "0"}}));
  const std::vector<PointId> x0{0, 1};
  const std::vector<PointId> a{0};
  const std::vector<PointId> b{1, 2};
  const PartialIsometry phi{{0, 1}, {0, 1}};
  const Rat eps = R("3/10");
  const AlignedInstance r = align_instance(s, x0, a, b, phi, eps);
  ASSERT_EQ(r.replaced.size(), 1u);
  const PointId fresh = r.x0[1];
  EXPECT_EQ(s.distance(fresh, 1), eps / Rat(6));
  for (PointId q : b) EXPECT_GT(s.distance(fresh, q), Rat(0));
  EXPECT_EQ(r.x0[0], 0u);
  for (PointId p : r.x0) {
    const bool in_b = std::find(b.begin(), b.end(), p) != b.end();
    const bool in_a = std::find(a.begin(), a.end(), p) != a.end();
    EXPECT_TRUE(!in_b || in_a);
  }
}

TEST(DuplicateOver, CommonEverything) {
  GrowingSpace s(space({"o", "a"}, {{"0", "1"}, {"1", "0"}}));
  const std::vector<PointId> x{0, 1};
  const Duplicate d = duplicate_over(s, x, x);
  EXPECT_EQ(d.copy, x);
}

TEST(DuplicateOver, FreeAmalgamOverOnePoint) {
  GrowingSpace s(space({"o", "a"}, {{"0", "1"}, {"1", "0"}}));
  const std::vector<PointId> x{0, 1};
  const std::vector<PointId> common{0};
  const Duplicate d = duplicate_over(s, x, common);
  const PointId twin = d.copy[1];
  EXPECT_NE(twin, 1u);
  EXPECT_EQ(s.distance(0, twin), Rat(1));
  EXPECT_EQ(s.distance(1, twin), Rat(2));
  EXPECT_FALSE(check_partial_isometry(s, d.correspondence).has_value());
  EXPECT_TRUE(fixes_pointwise(d.correspondence, common));
}

TEST(Displacement, IdentityWord) {
  GrowingSpace s(space({"a", "b", "x"}, {{"0", "2", "1"}, {"2", "0", "2"}, {"1", "2", "0"}}));
  const std::vector<PointId> a{0};
  const std::vector<PointId> b{1};
  const std::vector<PartialIsometry> word{PartialIsometry{{0, 2}, {0, 2}, FixedTag::kFixesA}};
  const DisplacementReport r = displacement_audit(s, word, 2, a, b);
  EXPECT_EQ(r.displacement, Rat(0));
  EXPECT_TRUE(r.within_bounds);
}

TEST(Displacement, SingleGeneratorFixingA) {
  GrowingSpace s(space({"a", "b", "x", "y"}, {{"0", "3", "1", "1"},
                                             {"3", "0", "3", "3"},
                                             {"1", "3", "0", "2"},
                                             {"1", "3", "2", "0"}}));
  const std::vector<PointId> a{0};
  const std::vector<PointId> b{1};
  const std::vector<PartialIsometry> word{PartialIsometry{{0, 2}, {0, 3}, FixedTag::kFixesA}};
  const DisplacementReport r = displacement_audit(s, word, 2, a, b);
  EXPECT_EQ(r.displacement, Rat(2));
  EXPECT_EQ(r.word_bound, Rat(2));
  EXPECT_TRUE(r.within_bounds);
  EXPECT_FALSE(audit_generators(s, word, a, b).has_value());
}

TEST(Displacement, RandomCertificatesRespectBounds) {
  Rng rng(89);
  const auto values = test::rats({"1", "3/2", "2", "3"});
  for (int trial = 0; trial < 30; ++trial) {
    StabilizerInstance inst = random_instance(rng, random_shape(rng, 3), values, kEps);
    deflatten(inst, kEps / Rat(2));
    inst.epsilon = kEps / Rat(2);
    const DescentTrace t = descend(inst);
    std::vector<PartialIsometry> word;
    for (const Move& m : t.iterations) word.push_back(m.certificate);
    EXPECT_FALSE(audit_generators(inst.space, word, inst.a, inst.b).has_value());
    for (PointId x : inst.a) {
      EXPECT_TRUE(displacement_audit(inst.space, word, x, inst.a, inst.b).within_bounds);
    }
  }
}

}  // namespace
}  // namespace urykit
