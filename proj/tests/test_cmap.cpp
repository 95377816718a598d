#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "cmapkernel/abelian.hpp"
#include "cmapkernel/cmap.hpp"

using namespace cmapkernel;

namespace {

/// Literal all-pairs commutation oracle, written independently of the
/// library's scan (no early exit, ordered pairs, no witness logic).
bool commutes_everywhere(const AbelianShape& A, const AbelianShape& B,
                         const Homomorphism& lam) {
  HomEnumerator homs(B, A);
  for (uint64_t i = 0; i < homs.size(); ++i)
    for (uint64_t j = 0; j < homs.size(); ++j) {
      Homomorphism f = homs.at(i), g = homs.at(j);
      Homomorphism fg = hom_compose(f, hom_compose(lam, g));
      Homomorphism gf = hom_compose(g, hom_compose(lam, f));
      if (fg.mat != gf.mat) return false;
    }
  return true;
}

/// Literal "f lambda g = 0 always" oracle.
bool annihilates_everywhere(const AbelianShape& A, const AbelianShape& B,
                            const Homomorphism& lam) {
  HomEnumerator homs(B, A);
  for (uint64_t i = 0; i < homs.size(); ++i)
    for (uint64_t j = 0; j < homs.size(); ++j)
      if (!is_zero_hom(hom_compose(homs.at(i), hom_compose(lam, homs.at(j)))))
        return false;
  return true;
}

}  // namespace

TEST_CASE("profile of the cyclic-to-two-factor example") {
  AbelianShape A(3, {3}), B(3, {2, 1});
  Homomorphism lam = hom_validate({{1}, {0}}, A, B);
  CMapProfile pr = profile(A, B, lam);
  CHECK(pr.a == 3);
  CHECK(pr.b == 2);
  CHECK(pr.n1 == 2);
  CHECK(pr.n2 == 0);
  CHECK(pr.beta2 == 1);
  CHECK(pr.c == 1);
  CHECK(pr.kprime == 1);
  REQUIRE(pr.r.size() == 1);
  CHECK(pr.r[0] == Element{3});  // r_1 = 3 a_1
  CHECK(pr.R.size() == 9);
  CHECK(subgroup_eq(pr.R, span(A, {Element{3}})));
}

TEST_CASE("profile of the identity on a cyclic group") {
  AbelianShape A(5, {1});
  Homomorphism id = hom_identity(A);
  CMapProfile pr = profile(A, A, id);
  CHECK(pr.a == 1);
  CHECK(pr.b == 1);
  CHECK(pr.n1 == 1);
  CHECK(pr.n2 == 0);
  CHECK(pr.beta2 == 0);
  CHECK(pr.c == 0);
  CHECK(pr.kprime == 0);
  CHECK(pr.r[0] == Element{1});
}

TEST_CASE("profile of the two-factor-to-cyclic example") {
  AbelianShape A(3, {2, 2}), B(3, {2});
  Homomorphism lam = hom_validate({{1, 0}}, A, B);
  CMapProfile pr = profile(A, B, lam);
  CHECK(pr.n1 == 2);
  CHECK(pr.n2 == 2);
  CHECK(pr.kprime == 2);
  CHECK(pr.c == 2);  // kernel is 0 + Z_9, exponent 9
  CHECK(pr.R.size() == 81);
}

TEST_CASE("definition scan: zero map and cyclic endomorphisms commute") {
  AbelianShape A(3, {3}), B(3, {2, 1});
  CHECK(is_cmap_definition(A, B, hom_zero(A, B)).is_cmap);

  AbelianShape z27(3, {3});
  HomEnumerator endos(z27, z27);
  for (uint64_t k = 0; k < endos.size(); ++k)
    CHECK(is_cmap_definition(z27, z27, endos.at(k)).is_cmap);
}

TEST_CASE("definition scan finds the frozen witness on the failing example") {
  AbelianShape A(3, {2, 2}), B(3, {2});
  Homomorphism lam = hom_validate({{1, 0}}, A, B);
  DefinitionResult res = is_cmap_definition(A, B, lam);
  CHECK(!res.is_cmap);
  REQUIRE(res.witness.has_value());
  // Enumeration of Hom(B, A) is lexicographic in the matrix entries, so the
  // first failing unordered pair is (index 1, index 9): the maps
  // b_1 -> a_2 and b_1 -> a_1.
  CHECK(res.witness->f_index == 1);
  CHECK(res.witness->g_index == 9);
  CHECK(res.witness->f.mat == std::vector<int64_t>{0, 1});
  CHECK(res.witness->g.mat == std::vector<int64_t>{1, 0});
  // and the pair genuinely fails to commute: g lambda f = 0 (lambda kills
  // a_2), while f lambda g sends b_1 through a_1 and back out to a_2
  Homomorphism f = res.witness->f, g = res.witness->g;
  CHECK(is_zero_hom(hom_compose(g, hom_compose(lam, f))));
  Homomorphism fg = hom_compose(f, hom_compose(lam, g));
  CHECK(!is_zero_hom(fg));
  CHECK(hom_apply(fg, unit_element(B, 0)) == Element{0, 1});
}

TEST_CASE("definition scan pair guard trips") {
  AbelianShape A(3, {1, 1, 1}), B(3, {1, 1, 1});
  Homomorphism lam = hom_zero(A, B);
  CHECK_THROWS_AS(is_cmap_definition(A, B, lam, /*pair_guard=*/10), GuardExceeded);
}

TEST_CASE("basis criterion on the named examples") {
  AbelianShape A(3, {3}), B(3, {2, 1});
  CHECK(is_cmap_basis(A, B, hom_zero(A, B)).is_cmap);
  CHECK(is_cmap_basis(A, B, hom_validate({{1}, {0}}, A, B)).is_cmap);

  AbelianShape A2(3, {2, 2}), B2(3, {2});
  BasisResult res = is_cmap_basis(A2, B2, hom_validate({{1, 0}}, A2, B2));
  CHECK(!res.is_cmap);
  REQUIRE(res.witness.has_value());
  CHECK(*res.witness == BasisWitness{1, 1, 2, 1});
}

TEST_CASE("structural criterion on the named examples") {
  AbelianShape A(3, {3}), B(3, {2, 1});
  Homomorphism lam = hom_validate({{1}, {0}}, A, B);
  StructuralResult st = is_cmap_structural(A, B, lam);
  CHECK(st.is_cmap);
  CHECK(!st.failed_condition.has_value());
  REQUIRE(st.conditions.size() == 3);
  for (const auto& cond : st.conditions) CHECK(cond.holds);

  AbelianShape A2(3, {2, 2}), B2(3, {2});
  StructuralResult st2 = is_cmap_structural(A2, B2, hom_validate({{1, 0}}, A2, B2));
  CHECK(!st2.is_cmap);
  REQUIRE(st2.failed_condition.has_value());
  CHECK(*st2.failed_condition == "leading_coordinate");

  CHECK(is_cmap_structural(A, B, hom_zero(A, B)).is_cmap);
}

TEST_CASE("triviality detection") {
  AbelianShape A(3, {3}), B(3, {2, 1});
  CHECK(is_trivial_cmap(A, B, hom_zero(A, B)));
  CHECK(!is_trivial_cmap(A, B, hom_validate({{1}, {0}}, A, B)));
  // a_1 -> b_2 is trivial: r_1 = 3 a_1 maps to 3 b_2 = 0
  CHECK(is_trivial_cmap(A, B, hom_validate({{0}, {1}}, A, B)));
  // and "trivial" really means f lambda g = 0 for all pairs
  CHECK(annihilates_everywhere(A, B, hom_validate({{0}, {1}}, A, B)));
  CHECK(!annihilates_everywhere(A, B, hom_validate({{1}, {0}}, A, B)));
}

TEST_CASE("classification of the named examples") {
  AbelianShape A(3, {3}), B(3, {2, 1});
  CMapVerdict v0 = classify(A, B, hom_zero(A, B));
  CHECK(v0.kind == CMapKind::TrivialCMap);

  CMapVerdict v1 = classify(A, B, hom_validate({{1}, {0}}, A, B));
  CHECK(v1.kind == CMapKind::NontrivialCMap);
  CHECK(v1.k == 1);

  AbelianShape A2(3, {2, 2}), B2(3, {2});
  CMapVerdict v2 = classify(A2, B2, hom_validate({{1, 0}}, A2, B2));
  CHECK(v2.kind == CMapKind::NotCMap);
  REQUIRE(v2.witness.has_value());
  CHECK(*v2.witness == BasisWitness{1, 1, 2, 1});
}

TEST_CASE("nontrivial classification pins the image subgroup") {
  AbelianShape A(3, {3}), B(3, {2, 1});
  Homomorphism lam = hom_validate({{1}, {0}}, A, B);
  CMapProfile pr = profile(A, B, lam);
  CMapVerdict v = classify(A, B, lam, pr);
  REQUIRE(v.kind == CMapKind::NontrivialCMap);
  CHECK(subgroup_eq(image_of(lam, pr.R), power_subgroup(B, v.k)));
  CHECK(v.k >= pr.c);
  CHECK(v.k < pr.n1);
  CHECK(quotient_is_cyclic(pr.R, kernel(lam)));
}

TEST_CASE("three routes agree on every map of a small pair") {
  AbelianShape A(2, {2, 1}), B(2, {2, 1});
  CMapWorkspace ws(A, B);
  HomEnumerator all(A, B);
  for (uint64_t k = 0; k < all.size(); ++k) {
    Homomorphism lam = all.at(k);
    CMapProfile pr = ws.profile_for(lam);
    bool by_def = ws.definition(lam).is_cmap;
    bool by_basis = ws.basis(lam).is_cmap;
    bool by_structure = ws.structural(lam, pr).is_cmap;
    INFO("map index " << k);
    CHECK(by_def == by_basis);
    CHECK(by_basis == by_structure);
    CHECK(by_def == commutes_everywhere(A, B, lam));
  }
}

TEST_CASE("classification is sound on every map of a small pair") {
  AbelianShape A(2, {2, 1}), B(2, {2, 1});
  CMapWorkspace ws(A, B);
  HomEnumerator all(A, B);
  for (uint64_t k = 0; k < all.size(); ++k) {
    Homomorphism lam = all.at(k);
    CMapProfile pr = ws.profile_for(lam);
    CMapVerdict v = ws.classify(lam, pr);
    INFO("map index " << k);
    switch (v.kind) {
      case CMapKind::NotCMap:
        CHECK(!commutes_everywhere(A, B, lam));
        CHECK(!ws.structural(lam, pr).is_cmap);
        break;
      case CMapKind::TrivialCMap:
        CHECK(annihilates_everywhere(A, B, lam));
        break;
      case CMapKind::NontrivialCMap:
        CHECK(commutes_everywhere(A, B, lam));
        CHECK(!annihilates_everywhere(A, B, lam));
        CHECK(subgroup_eq(image_of(lam, pr.R), power_subgroup(B, v.k)));
        break;
    }
  }
}

TEST_CASE("lemma suite is consistent across a small exhaustive pair") {
  AbelianShape A(2, {2, 1}), B(2, {2, 1});
  CMapWorkspace ws(A, B);
  HomEnumerator all(A, B);
  for (uint64_t k = 0; k < all.size(); ++k) {
    Homomorphism lam = all.at(k);
    LemmaSuite suite = ws.lemma_suite(lam, ws.profile_for(lam));
    INFO("map index " << k);
    CHECK(suite.violations() == 0);
    for (const LemmaCheck& chk : suite.checks) CHECK(!chk.skipped);
  }
}

TEST_CASE("lemma suite on the named nontrivial example") {
  AbelianShape A(3, {3}), B(3, {2, 1});
  Homomorphism lam = hom_validate({{1}, {0}}, A, B);
  LemmaSuite suite = run_lemma_suite(A, B, lam);
  CHECK(suite.all_consistent());
  // spot-check a few instantiated statements
  for (const LemmaCheck& chk : suite.checks) {
    if (chk.name == "kernel_in_torsion_iff_c_le_n1") {
      CHECK(chk.hypothesis);  // ker = <9 a_1> inside R = <3 a_1>
      CHECK(chk.conclusion);  // c = 1 <= n1 = 2
    }
    if (chk.name == "cmap_image_in_power_c") {
      CHECK(chk.hypothesis);
      CHECK(chk.conclusion);  // lambda(R) = <3 b_1> inside 3B
    }
    if (chk.name == "nontrivial_shape") {
      CHECK(chk.hypothesis);
      CHECK(chk.conclusion);
    }
    if (chk.name == "cyclic_image_form") {
      CHECK(chk.hypothesis);
      CHECK(chk.conclusion);
    }
  }
}

TEST_CASE("repeated top target exponent forces triviality") {
  // beta_1 = beta_2: every commuting map must be trivial
  AbelianShape A(2, {2}), B(2, {1, 1});
  HomEnumerator all(A, B);
  REQUIRE(all.size() == 4);
  CMapWorkspace ws(A, B);
  for (uint64_t k = 0; k < all.size(); ++k) {
    Homomorphism lam = all.at(k);
    CMapProfile pr = ws.profile_for(lam);
    if (ws.basis(lam).is_cmap) CHECK(ws.trivial(lam, pr));
    LemmaSuite suite = ws.lemma_suite(lam, pr);
    CHECK(suite.violations() == 0);
  }
}

TEST_CASE("basis-pair annihilation equals enumerated annihilation") {
  AbelianShape A(2, {2, 1}), B(2, {2});
  CMapWorkspace ws(A, B);
  HomEnumerator all(A, B);
  for (uint64_t k = 0; k < all.size(); ++k) {
    Homomorphism lam = all.at(k);
    CMapProfile pr = ws.profile_for(lam);
    LemmaSuite suite = ws.lemma_suite(lam, pr);
    bool lhs_from_suite = false;
    for (const LemmaCheck& chk : suite.checks)
      if (chk.name == "trivial_iff_image_in_power_n1") lhs_from_suite = chk.hypothesis;
    CHECK(lhs_from_suite == annihilates_everywhere(A, B, lam));
  }
}

TEST_CASE("cyclic power subgroups") {
  AbelianShape B(3, {2, 1});
  Subgroup c = cyclic_power_subgroup(B, 1, 0);
  CHECK(c.size() == 3);
  CHECK(c.contains(Element{3, 0}));
  CHECK(!c.contains(Element{0, 1}));
  CHECK(subgroup_eq(cyclic_power_subgroup(B, 2, 0), trivial_subgroup(B)));
  CHECK(cyclic_power_subgroup(B, 0, 1).size() == 3);
}

TEST_CASE("profile rejects mismatched shapes") {
  AbelianShape A(3, {3}), B(3, {2, 1}), C(2, {1});
  Homomorphism lam = hom_validate({{1}, {0}}, A, B);
  CHECK_THROWS_AS(profile(B, A, lam), ShapeMismatch);
  CHECK_THROWS_AS(profile(A, C, lam), ShapeMismatch);
}
