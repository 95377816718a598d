#pragma once

/*
 * Machine-readable reports: canonical JSON serialization of every analysis
 * object, an input digest over the canonicalized input text, phase timings,
 * and the command-level entry points shared by the CLI and the tests.
 */

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"

#include "cmapkernel/abelian.hpp"
#include "cmapkernel/catalog.hpp"
#include "cmapkernel/cayley.hpp"
#include "cmapkernel/cmap.hpp"
#include "cmapkernel/errors.hpp"

namespace cmapkernel {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0.0";

// ---------------------------------------------------------------------------
// digest and timings

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string digest_hex(std::string_view s) {
  static const char* hex = "0123456789abcdef";
  uint64_t h = fnv1a64(s);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[size_t(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

/// Wall-clock phase timings in integer milliseconds.
class Timings {
public:
  void start(const std::string& phase) {
    phase_ = phase;
    begin_ = std::chrono::steady_clock::now();
  }
  void stop() {
    if (phase_.empty()) return;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - begin_)
                  .count();
    data_[phase_] = int64_t(ms);
    phase_.clear();
  }
  json to_json() const {
    json j = json::object();
    int64_t total = 0;
    for (const auto& [k, v] : data_) {
      j[k] = v;
      total += v;
    }
    j["total"] = total;
    return j;
  }

private:
  std::map<std::string, int64_t> data_;
  std::string phase_;
  std::chrono::steady_clock::time_point begin_;
};

// ---------------------------------------------------------------------------
// serializers

inline json shape_to_json(const AbelianShape& s) { return json(s.alphas); }

inline json element_to_json(const Element& x) { return json(x); }

inline json matrix_to_json(const Homomorphism& h) {
  json rows = json::array();
  for (int i = 0; i < h.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < h.cols(); ++j) row.push_back(h.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json profile_to_json(const CMapProfile& pr, const AbelianShape& A) {
  json r = json::array();
  for (const Element& x : pr.r) r.push_back(element_to_json(x));
  json shape = json::array();  // invariant factors of R = A[p^b]
  for (int alpha : A.alphas) shape.push_back(std::min(alpha, pr.b));
  return json{{"a", pr.a},         {"b", pr.b},   {"n1", pr.n1}, {"n2", pr.n2},
              {"beta2", pr.beta2}, {"c", pr.c},   {"kprime", pr.kprime},
              {"r", std::move(r)}, {"R", std::move(shape)}};
}

inline json basis_witness_to_json(const BasisWitness& w) {
  return json{{"i1", w.i1}, {"j1", w.j1}, {"i2", w.i2}, {"j2", w.j2}};
}

inline json basis_result_to_json(const BasisResult& r) {
  json j{{"is_cmap", r.is_cmap}};
  if (r.witness) j["witness"] = basis_witness_to_json(*r.witness);
  return j;
}

inline json structural_result_to_json(const StructuralResult& r) {
  json conds = json::array();
  for (const StructuralCondition& c : r.conditions)
    conds.push_back(json{{"name", c.name}, {"holds", c.holds}});
  json j{{"is_cmap", r.is_cmap}, {"conditions", std::move(conds)}};
  if (r.failed_condition) j["failed_condition"] = *r.failed_condition;
  return j;
}

inline json classification_to_json(const CMapVerdict& v) {
  json j{{"kind", to_string(v.kind)}};
  if (v.kind == CMapKind::NontrivialCMap) j["k"] = v.k;
  if (v.witness) j["witness"] = basis_witness_to_json(*v.witness);
  return j;
}

inline json definition_result_to_json(const DefinitionResult& r) {
  json j{{"is_cmap", r.is_cmap}, {"pairs_checked", r.pairs_checked}};
  if (r.witness)
    j["witness"] = json{{"f_index", r.witness->f_index},
                        {"g_index", r.witness->g_index},
                        {"f", matrix_to_json(r.witness->f)},
                        {"g", matrix_to_json(r.witness->g)}};
  return j;
}

inline json lemma_suite_to_json(const LemmaSuite& suite) {
  json checks = json::array();
  for (const LemmaCheck& c : suite.checks)
    checks.push_back(json{{"name", c.name},
                          {"hypothesis", c.hypothesis},
                          {"conclusion", c.conclusion},
                          {"iff", c.iff},
                          {"skipped", c.skipped},
                          {"consistent", c.consistent()}});
  return json{{"checks", std::move(checks)},
              {"violations", suite.violations()},
              {"all_consistent", suite.all_consistent()}};
}

/// Element subsets are reported 1-based, matching the table file format.
inline json subset_to_json(const GroupSubset& S) {
  json j = json::array();
  for (int g : S) j.push_back(g + 1);
  return j;
}

// ---------------------------------------------------------------------------
// report envelope and command plumbing

inline json make_report(const std::string& command, const std::string& canonical_input,
                        json result, const Timings& timings) {
  return json{{"schema_version", kSchemaVersion},
              {"input_digest", digest_hex(canonical_input)},
              {"command", command},
              {"result", std::move(result)},
              {"timings", timings.to_json()}};
}

struct CommandOutcome {
  json report;
  int exit_code = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitMismatch = 4;

namespace detail {

inline json error_report(const std::string& command, const std::string& type,
                         const std::string& message) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"error", json{{"type", type}, {"message", message}}}};
}

/// Run a command body, mapping thrown domain errors onto the exit-code
/// contract: 2 for invalid input, 3 for tripped guards, 1 for library bugs.
template <typename Body>
CommandOutcome run_command(const std::string& command, Body&& body) {
  try {
    return body();
  } catch (const GuardExceeded& e) {
    return {error_report(command, "GuardExceeded", e.what()), kExitGuard};
  } catch (const InternalInconsistency& e) {
    return {error_report(command, "InternalInconsistency", e.what()), kExitInternal};
  } catch (const ParseError& e) {
    return {error_report(command, "ParseError", e.what()), kExitInvalidInput};
  } catch (const DivisibilityViolation& e) {
    return {error_report(command, "DivisibilityViolation", e.what()), kExitInvalidInput};
  } catch (const NotAGroup& e) {
    return {error_report(command, "NotAGroup", e.what()), kExitInvalidInput};
  } catch (const NotClass2& e) {
    return {error_report(command, "NotClass2", e.what()), kExitInvalidInput};
  } catch (const InvalidRecipe& e) {
    return {error_report(command, "InvalidRecipe", e.what()), kExitInvalidInput};
  } catch (const ShapeMismatch& e) {
    return {error_report(command, "ShapeMismatch", e.what()), kExitInvalidInput};
  } catch (const NotASubgroup& e) {
    return {error_report(command, "NotASubgroup", e.what()), kExitInvalidInput};
  } catch (const NotNormal& e) {
    return {error_report(command, "NotNormal", e.what()), kExitInvalidInput};
  } catch (const NotAbelian& e) {
    return {error_report(command, "NotAbelian", e.what()), kExitInvalidInput};
  } catch (const NotPPower& e) {
    return {error_report(command, "NotPPower", e.what()), kExitInvalidInput};
  } catch (const std::filesystem::filesystem_error& e) {
    return {error_report(command, "FilesystemError", e.what()), kExitInvalidInput};
  } catch (const std::invalid_argument& e) {
    return {error_report(command, "InvalidInput", e.what()), kExitInvalidInput};
  } catch (const std::exception& e) {
    return {error_report(command, "Error", e.what()), kExitInternal};
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// cmap command

struct CmapOptions {
  bool oracle = false;
  bool lemmas = false;
  uint64_t hom_guard = HomEnumerator::kDefaultHomGuard;
  uint64_t pair_guard = kDefaultPairGuard;
};

/// Analyze one homomorphism problem given as problem-file text.
inline CommandOutcome cmd_cmap(const std::string& input_text, const CmapOptions& opt = {}) {
  return detail::run_command("cmap", [&]() -> CommandOutcome {
    Timings timings;
    timings.start("parse");
    std::istringstream in(input_text);
    LambdaProblem prob = ingest_lambda_problem(in);
    std::string canonical = canonical_lambda_text(prob.A, prob.B, prob.lam);
    timings.stop();

    timings.start("analysis");
    CMapWorkspace ws(prob.A, prob.B, opt.hom_guard, opt.pair_guard);
    CMapProfile pr = ws.profile_for(prob.lam);
    BasisResult basis = ws.basis(prob.lam);
    StructuralResult structural = ws.structural(prob.lam, pr);
    bool trivial = ws.trivial(prob.lam, pr);
    CMapVerdict cls = ws.classify(prob.lam, pr);
    timings.stop();

    json verdicts{{"basis", basis_result_to_json(basis)},
                  {"structural", structural_result_to_json(structural)},
                  {"trivial", trivial},
                  {"classification", classification_to_json(cls)}};
    if (opt.oracle) {
      timings.start("definition_oracle");
      DefinitionResult def = ws.definition(prob.lam);
      timings.stop();
      verdicts["definition"] = definition_result_to_json(def);
    }

    json result{{"problem", json{{"p", prob.A.p},
                                 {"A", shape_to_json(prob.A)},
                                 {"B", shape_to_json(prob.B)},
                                 {"lambda", matrix_to_json(prob.lam)}}},
                {"profile", profile_to_json(pr, prob.A)},
                {"verdicts", std::move(verdicts)}};
    if (opt.lemmas) {
      timings.start("lemma_suite");
      LemmaSuite suite = ws.lemma_suite(prob.lam, pr);
      timings.stop();
      result["lemma_suite"] = lemma_suite_to_json(suite);
    }
    if (cls.witness) result["witness"] = basis_witness_to_json(*cls.witness);

    return {make_report("cmap", canonical, std::move(result), timings), kExitOk};
  });
}

// ---------------------------------------------------------------------------
// group command

struct GroupOptions {
  bool oracle = false;
  bool class2 = false;
  bool allow_non_pn = false;
  int order_guard = kDefaultOrderGuard;
  uint64_t aut_guard = kDefaultAutGuard;
  uint64_t seed = 0;
};

/// Analyze one group already in table form.
inline CommandOutcome cmd_group(const CayleyGroup& G, const GroupOptions& opt = {}) {
  return detail::run_command("group", [&]() -> CommandOutcome {
    Timings timings;
    std::string canonical = canonical_group_text(G);

    timings.start("analysis");
    GroupSubset Z = center(G);
    GroupSubset Gp = derived_subgroup(G);
    json result{{"order", G.order},
                {"center_order", Z.size()},
                {"derived_order", Gp.size()}};

    GroupVerdict v = verdict(G, opt.seed);
    json jv{{"kind", to_string(v.kind)}, {"reason", v.reason}};
    if (v.pn_witness)
      jv["pn_witness"] = json{{"abelian_factor", subset_to_json(v.pn_witness->abelian_factor)},
                              {"complement", subset_to_json(v.pn_witness->complement)}};
    if (v.kind != VerdictKind::NotPPower) result["pn"] = v.kind != VerdictKind::NotPN;

    // for non-PN p-groups the connecting map is still well-defined; compute
    // it on request even though the verdict stays NotPN
    std::optional<LambdaContext> ctx;
    std::optional<CMapProfile> pr;
    if (v.ctx) {
      ctx = std::move(v.ctx);
      pr = std::move(v.prof);
    } else if (opt.allow_non_pn && v.kind == VerdictKind::NotPN) {
      ctx = lambda_map(G, opt.seed);
      pr = profile(ctx->Apres.shape, ctx->Bpres.shape, ctx->lam);
      v.cmap = classify(ctx->Apres.shape, ctx->Bpres.shape, ctx->lam, *pr);
    }
    if (ctx) {
      result["A"] = shape_to_json(ctx->Apres.shape);
      result["B"] = shape_to_json(ctx->Bpres.shape);
      result["lambda"] = matrix_to_json(ctx->lam);
      result["profile"] = profile_to_json(*pr, ctx->Apres.shape);
      if (v.cmap) jv["classification"] = classification_to_json(*v.cmap);
    }
    result["verdict"] = std::move(jv);
    timings.stop();

    if (opt.oracle && ctx) {
      timings.start("oracle");
      std::vector<CentralAutomorphism> autos = central_automorphisms(G, *ctx, opt.aut_guard);
      OracleResult oracle = autc_is_abelian_oracle(G, autos);
      json jo{{"autc_count", autos.size()}, {"abelian", oracle.abelian}};
      if (oracle.witness)
        jo["witness"] = json{{"i", oracle.witness->first}, {"j", oracle.witness->second}};
      if (v.kind == VerdictKind::AutcAbelian || v.kind == VerdictKind::AutcNonAbelian)
        jo["agrees"] = oracle.abelian == (v.kind == VerdictKind::AutcAbelian);
      result["oracle"] = std::move(jo);
      timings.stop();
    }

    if (opt.class2) {
      timings.start("class2");
      Class2Report rep = class2_consistency_check(G, opt.seed);
      result["class2"] = json{{"nilpotency_class", 2},
                              {"exponent_match", rep.exponent_match},
                              {"kernel_match", rep.kernel_match},
                              {"image_pinned", rep.image_pinned},
                              {"consistent", rep.consistent()}};
      timings.stop();
    }

    return {make_report("group", canonical, std::move(result), timings), kExitOk};
  });
}

/// Analyze a group given as table-file text.
inline CommandOutcome cmd_group_text(const std::string& table_text, const GroupOptions& opt = {}) {
  return detail::run_command("group", [&]() -> CommandOutcome {
    std::istringstream in(table_text);
    CayleyGroup G = ingest_group(in, opt.order_guard);
    return cmd_group(G, opt);
  });
}

/// Analyze a group given as a recipe string.
inline CommandOutcome cmd_group_recipe(const std::string& recipe, const GroupOptions& opt = {}) {
  return detail::run_command("group", [&]() -> CommandOutcome {
    CayleyGroup G = build(recipe);
    if (G.order > opt.order_guard)
      throw GuardExceeded("group order from recipe", uint64_t(G.order),
                          uint64_t(opt.order_guard));
    return cmd_group(G, opt);
  });
}

}  // namespace cmapkernel
