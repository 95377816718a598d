#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "cmapkernel/catalog.hpp"
#include "cmapkernel/cayley.hpp"

using namespace cmapkernel;

namespace {

int count_of_order(const CayleyGroup& G, int ord) {
  int c = 0;
  for (int g = 0; g < G.order; ++g)
    if (element_order(G, g) == ord) ++c;
  return c;
}

}  // namespace

TEST_CASE("cyclic builder is plain modular addition") {
  CayleyGroup z8 = build_cyclic(2, 3);
  CHECK(z8.order == 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(z8.mul(i, j) == (i + j) % 8);
  CHECK_THROWS_AS(build_cyclic(4, 1), InvalidRecipe);
  CHECK_THROWS_AS(build_cyclic(2, 0), InvalidRecipe);
  CHECK_THROWS_AS(build_cyclic(2, 10), InvalidRecipe);  // order 1024 > 512
}

TEST_CASE("abelian builders decompose back to their declared exponents") {
  struct Case {
    const char* recipe;
    std::vector<int> want;
  };
  for (const Case& c : std::vector<Case>{{"abelian:2:3", {3}},
                                         {"abelian:2:2:1", {2, 1}},
                                         {"abelian:3:1:1", {1, 1}},
                                         {"abelian:2:2:2:1", {2, 2, 1}},
                                         {"abelian:5:2", {2}},
                                         {"abelian:7:1:1:1", {1, 1, 1}},
                                         {"cyclic:3:4", {4}}}) {
    CayleyGroup H = build(c.recipe);
    CHECK(is_abelian(H));
    CHECK(abelian_decompose(H).shape.alphas == c.want);
  }
  CHECK_THROWS_AS(build_abelian(2, {}), InvalidRecipe);
  CHECK_THROWS_AS(build_abelian(2, {3, 0}), InvalidRecipe);
  CHECK_THROWS_AS(build_abelian(2, {8, 2}), InvalidRecipe);  // order 1024
}

TEST_CASE("the two-power families have the right element-order signatures") {
  // D_8: five involutions, two elements of order 4
  CayleyGroup d8 = build_dihedral(8);
  CHECK(count_of_order(d8, 2) == 5);
  CHECK(count_of_order(d8, 4) == 2);
  CHECK_FALSE(is_abelian(d8));

  // Q_8: exactly one involution
  CayleyGroup q8 = build_quaternion(8);
  CHECK(count_of_order(q8, 2) == 1);
  CHECK(count_of_order(q8, 4) == 6);
  CHECK_FALSE(is_abelian(q8));
  // y^2 = x^2 = the unique involution; indices: x = 2, y = 1
  CHECK(q8.mul(1, 1) == q8.mul(2, 2));

  // D_16 / SD_16 / Q_16 are distinguished by involution counts 9 / 5 / 1
  CHECK(count_of_order(build_dihedral(16), 2) == 9);
  CHECK(count_of_order(build_semidihedral(16), 2) == 5);
  CHECK(count_of_order(build_quaternion(16), 2) == 1);

  // semidihedral relation: s r s^{-1} = r^{N/4 - 1}; r = index 2, s = index 1
  CayleyGroup sd = build_semidihedral(16);
  int conj = sd.mul(sd.mul(1, 2), sd.inv(1));
  CHECK(conj == 2 * 3);  // r^3

  CHECK_THROWS_AS(build_dihedral(6), InvalidRecipe);
  CHECK_THROWS_AS(build_dihedral(4), InvalidRecipe);
  CHECK_THROWS_AS(build_quaternion(12), InvalidRecipe);
  CHECK_THROWS_AS(build_semidihedral(8), InvalidRecipe);
}

TEST_CASE("modular groups obey their defining relation") {
  CayleyGroup m16 = build_modular(2, 4);
  CHECK(m16.order == 16);
  // a = index 2, b = index 1; b a b^{-1} = a^5 = index 10
  CHECK(element_order(m16, 2) == 8);
  CHECK(element_order(m16, 1) == 2);
  CHECK(m16.mul(m16.mul(1, 2), m16.inv(1)) == 10);
  CHECK(center(m16).size() == 4);
  CHECK(derived_subgroup(m16).size() == 2);

  CayleyGroup m27 = build_modular(3, 3);
  CHECK(m27.order == 27);
  // b a b^{-1} = a^4 = index 12 (a = index 3, b = index 1, index = 3i + j)
  CHECK(m27.mul(m27.mul(1, 3), m27.inv(1)) == 12);

  CHECK_THROWS_AS(build_modular(2, 3), InvalidRecipe);
  CHECK_THROWS_AS(build_modular(2, 2), InvalidRecipe);
  CHECK_THROWS_AS(build_modular(3, 6), InvalidRecipe);  // 729 > 512
}

TEST_CASE("heisenberg and extraspecial builders give the two order-p^3 types") {
  CayleyGroup h27 = build_heisenberg(3);
  CHECK(h27.order == 27);
  CHECK_FALSE(is_abelian(h27));
  CHECK(count_of_order(h27, 3) == 26);  // exponent 3
  CHECK(center(h27).size() == 3);
  CHECK(derived_subgroup(h27) == center(h27));

  CayleyGroup e27 = build_extraspecial_exp_p2(3);
  CHECK(e27.order == 27);
  CHECK_FALSE(is_abelian(e27));
  CHECK(count_of_order(e27, 9) > 0);  // exponent 9: the other type
  CHECK(e27.table == build_modular(3, 3).table);

  // heisenberg over F_2 is a valid order-8 group (dihedral type: 5 involutions)
  CayleyGroup h8 = build_heisenberg(2);
  CHECK(h8.order == 8);
  CHECK(count_of_order(h8, 2) == 5);

  CHECK_THROWS_AS(build_extraspecial_exp_p2(2), InvalidRecipe);
  CHECK_THROWS_AS(build_heisenberg(4), InvalidRecipe);
  CHECK_THROWS_AS(build_heisenberg(11), InvalidRecipe);  // 1331 > 512
}

TEST_CASE("semidirect products validate their twist") {
  // t = 3 = -1 mod 4 gives the dihedral relation
  CHECK(build_semidirect(2, 2, 1, 3).table == build_dihedral(8).table);
  // t = 5 = 1 + 2^2 mod 8 gives the modular relation
  CHECK(build_semidirect(2, 3, 1, 5).table == build_modular(2, 4).table);
  CHECK(build_semidirect(3, 2, 1, 4).table == build_modular(3, 3).table);

  CayleyGroup g = build_semidirect(2, 2, 3, 3);  // Z_4 x| Z_8, y x y^{-1} = x^3
  CHECK(g.order == 32);
  // x = index 8, y = index 1; conjugation sends x to x^3 = index 24
  CHECK(g.mul(g.mul(1, 8), g.inv(1)) == 24);

  // twist must be a unit mod p^a
  CHECK_THROWS_AS(build_semidirect(2, 2, 1, 2), InvalidRecipe);
  // twist whose order does not divide p^b: 2^3 = 8 != 1 mod 9
  CHECK_THROWS_AS(build_semidirect(3, 2, 1, 2), InvalidRecipe);
  CHECK_THROWS_AS(build_semidirect(2, 5, 5, 3), InvalidRecipe);  // order 1024
}

TEST_CASE("direct products multiply componentwise") {
  CayleyGroup k4 = build_direct_product(build_cyclic(2, 1), build_cyclic(2, 1));
  CHECK(k4.order == 4);
  CHECK(abelian_decompose(k4).shape.alphas == std::vector<int>{1, 1});
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      CHECK(k4.mul(x, y) == ((x / 2 + y / 2) % 2) * 2 + (x % 2 + y % 2) % 2);

  CayleyGroup big = build("dp(dp(cyclic:2:1,cyclic:2:1),cyclic:2:2)");
  CHECK(big.order == 16);
  CHECK(abelian_decompose(big).shape.alphas == std::vector<int>{2, 1, 1});

  CHECK_THROWS_AS(build("dp(modular:2:4,dp(modular:2:4,cyclic:2:2))"), InvalidRecipe);
}

TEST_CASE("recipe grammar round-trips and rejects malformed strings") {
  GroupRecipe r = parse_recipe("modular:2:4");
  CHECK(r.kind == "modular");
  CHECK(r.params == std::vector<int64_t>{2, 4});
  CHECK(recipe_to_string(r) == "modular:2:4");

  GroupRecipe dp = parse_recipe(" dp( modular:2:4 , dihedral:8 ) ");
  CHECK(dp.kind == "direct_product");
  REQUIRE(dp.children.size() == 2);
  CHECK(dp.children[0].kind == "modular");
  CHECK(dp.children[1].kind == "dihedral");
  CHECK(recipe_to_string(dp) == "dp(modular:2:4,dihedral:8)");
  CHECK(build(dp).order == 128);

  GroupRecipe nested = parse_recipe("direct_product(dp(cyclic:2:1,cyclic:2:1),cyclic:2:1)");
  CHECK(recipe_to_string(nested) == "dp(dp(cyclic:2:1,cyclic:2:1),cyclic:2:1)");
  CHECK(build(nested).order == 8);

  CHECK_THROWS_AS(parse_recipe(""), InvalidRecipe);
  CHECK_THROWS_AS(parse_recipe("modular:2:x"), InvalidRecipe);
  CHECK_THROWS_AS(parse_recipe("modular::4"), InvalidRecipe);
  CHECK_THROWS_AS(parse_recipe("dp(cyclic:2:1,cyclic:2:2"), InvalidRecipe);
  CHECK_THROWS_AS(parse_recipe("dp(cyclic:2:1)"), InvalidRecipe);
  CHECK_THROWS_AS(build("frobnicate:3"), InvalidRecipe);
  CHECK_THROWS_AS(build("modular:2"), InvalidRecipe);
  CHECK_THROWS_AS(build("abelian:2"), InvalidRecipe);
  CHECK_THROWS_AS(build("cyclic:2:3:4"), InvalidRecipe);
}

TEST_CASE("group table ingestion") {
  std::istringstream good(
      "# the cyclic group of order 4\n"
      "order 4\n"
      "\n"
      "1 2 3 4\n"
      "2 3 4 1   # second row\n"
      "3 4 1 2\n"
      "4 1 2 3\n");
  CayleyGroup G = ingest_group(good);
  CHECK(G.order == 4);
  CHECK(G.table == build_cyclic(2, 2).table);

  std::istringstream nonperm(
      "order 3\n"
      "1 2 3\n"
      "2 2 1\n"
      "3 1 2\n");
  CHECK_THROWS_AS(ingest_group(nonperm), NotAGroup);

  std::istringstream shifted_id(
      "order 2\n"
      "2 1\n"
      "1 2\n");
  CHECK_THROWS_AS(ingest_group(shifted_id), NotAGroup);

  std::istringstream out_of_range(
      "order 2\n"
      "1 2\n"
      "2 5\n");
  CHECK_THROWS_AS(ingest_group(out_of_range), ParseError);

  std::istringstream short_table(
      "order 3\n"
      "1 2 3\n"
      "2 3 1\n");
  CHECK_THROWS_AS(ingest_group(short_table), ParseError);

  std::istringstream trailing(
      "order 2\n"
      "1 2\n"
      "2 1\n"
      "9 9\n");
  CHECK_THROWS_AS(ingest_group(trailing), ParseError);

  std::istringstream not_order("hello 2\n1 2\n2 1\n");
  CHECK_THROWS_AS(ingest_group(not_order), ParseError);

  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(ingest_group(empty), ParseError);

  std::istringstream huge("order 600\n");
  CHECK_THROWS_AS(ingest_group(huge), GuardExceeded);

  // line numbers in errors point at the offending line
  std::istringstream badline(
      "order 2\n"
      "1 2\n"
      "2 x\n");
  try {
    ingest_group(badline);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("homomorphism problem ingestion") {
  std::istringstream good(
      "# the cyclic-to-two-factor example\n"
      "p 3\n"
      "A 3\n"
      "B 2 1\n"
      "lambda\n"
      "1\n"
      "0\n");
  LambdaProblem prob = ingest_lambda_problem(good);
  CHECK(prob.A.p == 3);
  CHECK(prob.A.alphas == std::vector<int>{3});
  CHECK(prob.B.alphas == std::vector<int>{2, 1});
  CHECK(prob.lam.mat == std::vector<int64_t>{1, 0});

  std::istringstream unsorted(
      "p 2\n"
      "A 1 2\n"
      "B 1\n"
      "lambda\n"
      "0 0\n");
  CHECK_THROWS_AS(ingest_lambda_problem(unsorted), ParseError);

  std::istringstream missing_stmt(
      "p 2\n"
      "B 1\n"
      "lambda\n"
      "0\n");
  CHECK_THROWS_AS(ingest_lambda_problem(missing_stmt), ParseError);

  std::istringstream short_matrix(
      "p 2\n"
      "A 1\n"
      "B 1 1\n"
      "lambda\n"
      "1\n");
  CHECK_THROWS_AS(ingest_lambda_problem(short_matrix), ParseError);

  std::istringstream wide_row(
      "p 2\n"
      "A 1\n"
      "B 1\n"
      "lambda\n"
      "1 1\n");
  CHECK_THROWS_AS(ingest_lambda_problem(wide_row), ParseError);

  std::istringstream trailing(
      "p 2\n"
      "A 1\n"
      "B 1\n"
      "lambda\n"
      "1\n"
      "1\n");
  CHECK_THROWS_AS(ingest_lambda_problem(trailing), ParseError);

  std::istringstream not_prime(
      "p 6\n"
      "A 1\n"
      "B 1\n"
      "lambda\n"
      "0\n");
  CHECK_THROWS_AS(ingest_lambda_problem(not_prime), ShapeMismatch);

  // an entry breaking divisibility propagates the validation error
  std::istringstream indivisible(
      "p 2\n"
      "A 1\n"
      "B 2\n"
      "lambda\n"
      "1\n");
  CHECK_THROWS_AS(ingest_lambda_problem(indivisible), DivisibilityViolation);
}

TEST_CASE("canonical serialization round-trips") {
  CayleyGroup q8 = build_quaternion(8);
  std::string text = canonical_group_text(q8);
  std::istringstream back(text);
  CHECK(ingest_group(back).table == q8.table);
  // stable across calls
  CHECK(canonical_group_text(q8) == text);

  AbelianShape A(3, {3});
  AbelianShape B(3, {2, 1});
  Homomorphism lam = hom_validate({{1}, {0}}, A, B);
  std::string ltext = canonical_lambda_text(A, B, lam);
  CHECK(ltext == "p 3\nA 3\nB 2 1\nlambda\n1\n0\n");
  std::istringstream lback(ltext);
  LambdaProblem prob = ingest_lambda_problem(lback);
  CHECK(prob.A == A);
  CHECK(prob.B == B);
  CHECK(prob.lam.mat == lam.mat);
}

TEST_CASE("every catalog family builds valid purely non-abelian candidates") {
  // every recipe here must build; validation runs inside the builders
  for (const char* recipe :
       {"dihedral:8", "dihedral:16", "dihedral:32", "dihedral:64", "dihedral:128",
        "quaternion:8", "quaternion:16", "quaternion:32", "quaternion:64", "quaternion:128",
        "semidihedral:16", "semidihedral:32", "semidihedral:64", "semidihedral:128",
        "modular:2:4", "modular:2:5", "modular:2:6", "modular:2:7", "modular:3:3",
        "modular:3:4", "modular:5:3", "heisenberg:3", "heisenberg:5", "heisenberg:7",
        "extraspecial_exp_p2:3", "extraspecial_exp_p2:5", "extraspecial_exp_p2:7",
        "semidirect:2:2:3:3", "semidirect:2:3:2:3", "semidirect:3:2:2:4",
        "dp(dihedral:8,dihedral:8)", "dp(modular:2:4,dihedral:8)",
        "dp(modular:2:4,modular:2:4)", "dp(heisenberg:3,dihedral:8)"}) {
    CayleyGroup G = build(recipe);
    CHECK(G.order >= 8);
    CHECK_FALSE(is_abelian(G));
  }
}
