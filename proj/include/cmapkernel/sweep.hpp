#pragma once

/*
 * Exhaustive agreement sweeps. The shapes mode enumerates every homomorphism
 * between every ordered pair of abelian shapes up to a size bound and checks
 * that all analysis routes agree on every instance; the tables mode runs the
 * whole-group verdict against the brute-force automorphism oracle over a
 * directory of multiplication tables. Any disagreement is a mismatch: it is
 * counted, reported, and optionally dumped as a re-runnable reproducer file.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "cmapkernel/report.hpp"

namespace cmapkernel {

struct SweepOptions {
  int64_t p = 2;
  uint64_t max_order = 16;  // per-side bound on |A| and |B|
  int max_factors = 3;
  uint64_t hom_guard = HomEnumerator::kDefaultHomGuard;
  uint64_t pair_guard = kDefaultPairGuard;
  // run the definition scan on a pair (A, B) only when the total cost
  // |Hom(A,B)| * |Hom(B,A)|^2 stays within this budget
  uint64_t definition_budget = 10'000'000;
  std::string tables_dir;      // non-empty selects the tables mode
  std::string reproducer_dir;  // non-empty: write one file per mismatch
  int threads = 0;             // 0 = CMAPKERNEL_THREADS, else 1
  uint64_t seed = 0;
  int order_guard = kDefaultOrderGuard;
  uint64_t aut_guard = kDefaultAutGuard;
};

struct SweepCounts {
  uint64_t instances = 0;
  uint64_t cmaps = 0;
  uint64_t trivial = 0;
  uint64_t nontrivial = 0;
  uint64_t mismatches = 0;

  void merge(const SweepCounts& o) {
    instances += o.instances;
    cmaps += o.cmaps;
    trivial += o.trivial;
    nontrivial += o.nontrivial;
    mismatches += o.mismatches;
  }
};

struct Mismatch {
  std::string criterion;   // which agreement check failed
  std::string instance;    // human-readable tag of the failing instance
  std::string reproducer;  // canonical input text that reproduces it
};

/// Threads to use: an explicit request wins but CMAPKERNEL_THREADS caps it;
/// with no request the environment value (default 1) decides.
inline int resolve_threads(int requested) {
  int env_cap = 0;
  if (const char* env = std::getenv("CMAPKERNEL_THREADS")) {
    env_cap = std::atoi(env);
    if (env_cap < 1) env_cap = 0;
  }
  int t = requested > 0 ? requested : (env_cap > 0 ? env_cap : 1);
  if (env_cap > 0 && t > env_cap) t = env_cap;
  return t;
}

// ---------------------------------------------------------------------------
// shape enumeration

/// All non-increasing positive exponent tuples with at most max_factors
/// entries whose group order p^(sum) stays within max_order, listed by
/// (length, lexicographic) — a canonical order the sweep indexing relies on.
inline std::vector<std::vector<int>> enumerate_shapes(int64_t p, uint64_t max_order,
                                                      int max_factors) {
  int budget = 0;
  for (uint64_t v = uint64_t(p); v <= max_order; v *= uint64_t(p)) {
    ++budget;
    if (v > max_order / uint64_t(p)) break;  // next multiply would overflow past the bound
  }
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int len_left, int max_part, int left) -> void {
    if (len_left == 0) {
      out.push_back(cur);
      return;
    }
    int hi = std::min(max_part, left - (len_left - 1));
    for (int v = 1; v <= hi; ++v) {
      cur.push_back(v);
      self(self, len_left - 1, v, left - v);
      cur.pop_back();
    }
  };
  for (int len = 1; len <= max_factors && len <= budget; ++len) rec(rec, len, budget, budget);
  return out;
}

inline std::string shape_tag(const std::vector<int>& alphas) {
  std::string s = "[";
  for (size_t i = 0; i < alphas.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(alphas[i]);
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// shapes mode

struct PairResult {
  SweepCounts counts;
  uint64_t definition_checked = 0;  // instances the definition scan covered
  std::vector<Mismatch> mismatches;
};

/// Analyze every homomorphism A -> B: the basis and structural routes must
/// agree, the classification must be sound against direct subgroup
/// recomputation, the lemma suite must be violation-free, and — when the
/// pair fits the budget — the definition scan must agree with the basis.
inline PairResult analyze_pair(const AbelianShape& A, const AbelianShape& B,
                               const SweepOptions& opt) {
  PairResult res;
  CMapWorkspace ws(A, B, opt.hom_guard, opt.pair_guard);
  HomEnumerator homs(A, B, opt.hom_guard);
  unsigned __int128 fwd = hom_count(A, B), bwd = hom_count(B, A);
  bool run_definition = fwd * bwd * bwd <= (unsigned __int128)opt.definition_budget;

  for (uint64_t idx = 0; idx < homs.size(); ++idx) {
    Homomorphism lam = homs.at(idx);
    ++res.counts.instances;
    std::string tag =
        "A=" + shape_tag(A.alphas) + " B=" + shape_tag(B.alphas) + " lambda=" + std::to_string(idx);
    auto note = [&](const std::string& criterion) {
      ++res.counts.mismatches;
      res.mismatches.push_back(Mismatch{criterion, tag, canonical_lambda_text(A, B, lam)});
    };

    CMapProfile pr = ws.profile_for(lam);
    BasisResult basis = ws.basis(lam);
    StructuralResult structural = ws.structural(lam, pr);
    if (basis.is_cmap != structural.is_cmap) note("basis_vs_structural");
    if (basis.is_cmap) ++res.counts.cmaps;

    bool classified = false;
    CMapVerdict cls;
    try {
      cls = ws.classify(lam, pr);
      classified = true;
    } catch (const InternalInconsistency&) {
      note("classification_internal");
    }
    if (classified) {
      switch (cls.kind) {
        case CMapKind::NotCMap:
          if (basis.is_cmap || !cls.witness || !structural.failed_condition)
            note("classification_soundness");
          break;
        case CMapKind::TrivialCMap: {
          ++res.counts.trivial;
          bool ok = basis.is_cmap && ws.trivial(lam, pr) &&
                    subgroup_le(image_of(lam, ws.R()), ws.powerB(pr.n1));
          if (!ok) note("classification_soundness");
          break;
        }
        case CMapKind::NontrivialCMap: {
          ++res.counts.nontrivial;
          bool ok = basis.is_cmap && !ws.trivial(lam, pr) && pr.c <= cls.k && cls.k < pr.n1 &&
                    subgroup_eq(image_of(lam, ws.R()), ws.powerB(cls.k));
          if (ok) {
            Subgroup ker = kernel(lam);
            ok = subgroup_le(ker, ws.R()) && quotient_is_cyclic(ws.R(), ker);
          }
          if (!ok) note("classification_soundness");
          break;
        }
      }
    }

    LemmaSuite suite = ws.lemma_suite(lam, pr);
    for (const LemmaCheck& c : suite.checks)
      if (!c.consistent()) note("lemma:" + c.name);

    if (run_definition) {
      DefinitionResult def = ws.definition(lam);
      ++res.definition_checked;
      if (def.is_cmap != basis.is_cmap) note("definition_vs_basis");
    }
  }
  return res;
}

struct ShapeSweepResult {
  std::vector<std::vector<int>> shapes;
  SweepCounts counts;
  uint64_t definition_checked = 0;
  std::vector<Mismatch> mismatches;  // canonical (pair index, lambda index) order
};

inline ShapeSweepResult run_shape_sweep(const SweepOptions& opt) {
  ShapeSweepResult out;
  out.shapes = enumerate_shapes(opt.p, opt.max_order, opt.max_factors);

  std::vector<AbelianShape> shapes;
  shapes.reserve(out.shapes.size());
  for (const auto& alphas : out.shapes) shapes.emplace_back(opt.p, alphas);

  const size_t pairs = shapes.size() * shapes.size();
  std::vector<PairResult> results(pairs);
  int threads = std::min<int>(resolve_threads(opt.threads), int(std::max<size_t>(pairs, 1)));

  auto worker = [&](size_t first) {
    for (size_t t = first; t < pairs; t += size_t(threads)) {
      const AbelianShape& A = shapes[t / shapes.size()];
      const AbelianShape& B = shapes[t % shapes.size()];
      results[t] = analyze_pair(A, B, opt);
    }
  };
  if (threads <= 1) {
    if (pairs > 0) worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(size_t(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, size_t(t));
    for (std::thread& th : pool) th.join();
  }

  for (PairResult& r : results) {  // ascending pair index: deterministic order
    out.counts.merge(r.counts);
    out.definition_checked += r.definition_checked;
    for (Mismatch& m : r.mismatches) out.mismatches.push_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// tables mode

struct TableEntry {
  std::string name;
  CayleyGroup group;
};

struct TableReport {
  std::string name;
  int order = 0;
  VerdictKind kind = VerdictKind::NotPPower;
  std::string reason;
  bool compared = false;  // oracle comparison ran (verdict reached a decision)
  uint64_t autc_count = 0;
  bool oracle_abelian = false;
  bool agrees = false;
  bool bridge_ok = false;
};

struct TableSweepResult {
  std::vector<TableReport> groups;
  SweepCounts counts;  // instances = groups compared, mismatches as usual
  std::vector<Mismatch> mismatches;
};

/// Run the verdict against the oracle on each listed group. Groups outside
/// the hypothesis (not a p-group, not purely non-abelian) are listed but not
/// compared. For compared groups the enumerated central automorphisms also
/// exercise the commutation bridge: the abelian-side test must agree with
/// literal permutation commutation on every pair.
inline TableSweepResult run_table_sweep(const std::vector<TableEntry>& entries,
                                        const SweepOptions& opt) {
  TableSweepResult out;
  for (const TableEntry& e : entries) {
    TableReport rep;
    rep.name = e.name;
    rep.order = e.group.order;
    GroupVerdict v = verdict(e.group, opt.seed);
    rep.kind = v.kind;
    rep.reason = v.reason;
    if (v.kind == VerdictKind::AutcAbelian || v.kind == VerdictKind::AutcNonAbelian) {
      rep.compared = true;
      ++out.counts.instances;
      std::vector<CentralAutomorphism> autos = central_automorphisms(e.group, *v.ctx, opt.aut_guard);
      OracleResult oracle = autc_is_abelian_oracle(e.group, autos);
      rep.autc_count = autos.size();
      rep.oracle_abelian = oracle.abelian;
      rep.agrees = oracle.abelian == (v.kind == VerdictKind::AutcAbelian);
      rep.bridge_ok = true;
      for (size_t i = 0; i < autos.size() && rep.bridge_ok; ++i)
        for (size_t j = i + 1; j < autos.size(); ++j)
          if (commutes_via_cmap(autos[i], autos[j], v.ctx->lam) !=
              permutations_commute(e.group, autos[i].sigma, autos[j].sigma)) {
            rep.bridge_ok = false;
            break;
          }
      if (v.cmap) {
        if (v.cmap->kind == CMapKind::TrivialCMap) ++out.counts.trivial;
        if (v.cmap->kind == CMapKind::NontrivialCMap) ++out.counts.nontrivial;
        if (v.cmap->kind != CMapKind::NotCMap) ++out.counts.cmaps;
      }
      if (!rep.agrees) {
        ++out.counts.mismatches;
        out.mismatches.push_back(
            Mismatch{"verdict_vs_oracle", e.name, canonical_group_text(e.group)});
      }
      if (!rep.bridge_ok) {
        ++out.counts.mismatches;
        out.mismatches.push_back(
            Mismatch{"commutation_bridge", e.name, canonical_group_text(e.group)});
      }
    }
    out.groups.push_back(std::move(rep));
  }
  return out;
}

/// Load every regular file of a directory as a multiplication table, in
/// filename order. An unreadable or invalid table is an input error and
/// propagates. An empty or missing-as-empty directory yields no entries.
inline std::vector<TableEntry> load_table_dir(const std::string& dir, int order_guard) {
  namespace fs = std::filesystem;
  std::vector<fs::path> paths;
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw ParseError(0, "not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file()) paths.push_back(entry.path());
  } else {
    throw ParseError(0, "no such directory: " + dir);
  }
  std::sort(paths.begin(), paths.end());
  std::vector<TableEntry> out;
  for (const fs::path& p : paths)
    out.push_back(TableEntry{p.filename().string(), ingest_group_file(p.string(), order_guard)});
  return out;
}

// ---------------------------------------------------------------------------
// command

namespace detail {

inline std::string sanitize_criterion(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return out;
}

/// One file per mismatch, re-runnable as CLI input (headers are comments).
inline std::vector<std::string> write_reproducers(const std::vector<Mismatch>& mismatches,
                                                  const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> written;
  if (dir.empty() || mismatches.empty()) return written;
  fs::create_directories(dir);
  for (size_t i = 0; i < mismatches.size(); ++i) {
    const Mismatch& m = mismatches[i];
    fs::path path = fs::path(dir) / ("mismatch_" + std::to_string(i) + "_" +
                                     sanitize_criterion(m.criterion) + ".txt");
    std::ofstream f(path);
    if (!f) throw ParseError(0, "cannot write reproducer file: " + path.string());
    f << "# criterion: " << m.criterion << "\n# instance: " << m.instance << "\n" << m.reproducer;
    written.push_back(path.string());
  }
  return written;
}

}  // namespace detail

inline json counts_to_json(const SweepCounts& c) {
  return json{{"instances", c.instances},
              {"cmaps", c.cmaps},
              {"trivial", c.trivial},
              {"nontrivial", c.nontrivial},
              {"mismatches", c.mismatches}};
}

inline CommandOutcome cmd_sweep(const SweepOptions& opt = {}) {
  return detail::run_command("sweep", [&]() -> CommandOutcome {
    Timings timings;
    json result;
    SweepCounts counts;
    std::vector<Mismatch> mismatches;
    std::string canonical;

    if (opt.tables_dir.empty()) {
      canonical = "sweep shapes p=" + std::to_string(opt.p) +
                  " max_order=" + std::to_string(opt.max_order) +
                  " max_factors=" + std::to_string(opt.max_factors) +
                  " definition_budget=" + std::to_string(opt.definition_budget);
      timings.start("analysis");
      ShapeSweepResult r = run_shape_sweep(opt);
      timings.stop();
      counts = r.counts;
      mismatches = std::move(r.mismatches);

      json shapes = json::array();
      for (const auto& alphas : r.shapes) shapes.push_back(json(alphas));
      result = json{{"mode", "shapes"},
                    {"params", json{{"p", opt.p},
                                    {"max_order", opt.max_order},
                                    {"max_factors", opt.max_factors},
                                    {"definition_budget", opt.definition_budget},
                                    {"threads", resolve_threads(opt.threads)}}},
                    {"shapes", std::move(shapes)},
                    {"counts", counts_to_json(counts)},
                    {"definition_checked", r.definition_checked}};
    } else {
      timings.start("load");
      std::vector<TableEntry> entries = load_table_dir(opt.tables_dir, opt.order_guard);
      for (const TableEntry& e : entries)
        canonical += "# " + e.name + "\n" + canonical_group_text(e.group);
      timings.stop();
      timings.start("analysis");
      TableSweepResult r = run_table_sweep(entries, opt);
      timings.stop();
      counts = r.counts;
      mismatches = std::move(r.mismatches);

      json groups = json::array();
      for (const TableReport& g : r.groups) {
        json jg{{"name", g.name},
                {"order", g.order},
                {"verdict", to_string(g.kind)},
                {"reason", g.reason}};
        if (g.compared) {
          jg["autc_count"] = g.autc_count;
          jg["oracle_abelian"] = g.oracle_abelian;
          jg["agrees"] = g.agrees;
          jg["bridge_ok"] = g.bridge_ok;
        }
        groups.push_back(std::move(jg));
      }
      result = json{{"mode", "tables"},
                    {"directory", opt.tables_dir},
                    {"counts", counts_to_json(counts)},
                    {"groups", std::move(groups)}};
    }

    json mm = json::array();
    for (const Mismatch& m : mismatches)
      mm.push_back(json{{"criterion", m.criterion}, {"instance", m.instance}});
    result["mismatch_list"] = std::move(mm);
    if (!opt.reproducer_dir.empty()) {
      timings.start("write_reproducers");
      std::vector<std::string> written = detail::write_reproducers(mismatches, opt.reproducer_dir);
      timings.stop();
      result["mismatch_reproducers"] = json(written);
    }

    return {make_report("sweep", canonical, std::move(result), timings),
            counts.mismatches > 0 ? kExitMismatch : kExitOk};
  });
}

}  // namespace cmapkernel
