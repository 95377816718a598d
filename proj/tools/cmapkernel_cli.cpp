// Command-line front end: analyze a single homomorphism problem, analyze a
// whole group given by its multiplication table or a recipe, or run an
// exhaustive agreement sweep. Every run emits a canonical JSON report
// (--json) or a short human summary; exit codes are part of the contract:
//   0 analysis completed (all verdicts, including NotCMap / NotPN, are data)
//   1 internal error        2 invalid input        3 guard exceeded
//   4 sweep found mismatches

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cmapkernel/report.hpp"
#include "cmapkernel/sweep.hpp"

namespace {

using cmapkernel::CommandOutcome;
using cmapkernel::json;

std::string read_source(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw cmapkernel::ParseError(0, "cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void print_human(const json& report) {
  if (report.contains("error")) {
    const json& e = report["error"];
    std::cout << "error [" << e["type"].get<std::string>()
              << "]: " << e["message"].get<std::string>() << "\n";
    return;
  }
  const json& r = report["result"];
  const std::string cmd = report["command"].get<std::string>();
  if (cmd == "cmap") {
    const json& cls = r["verdicts"]["classification"];
    std::cout << "classification: " << cls["kind"].get<std::string>();
    if (cls.contains("k")) std::cout << " (k=" << cls["k"].get<int>() << ")";
    std::cout << "\n";
    if (cls.contains("witness")) {
      const json& w = cls["witness"];
      std::cout << "witness basis pair: (i1=" << w["i1"] << ", j1=" << w["j1"]
                << ", i2=" << w["i2"] << ", j2=" << w["j2"] << ")\n";
    }
    if (r["verdicts"].contains("definition")) {
      const json& d = r["verdicts"]["definition"];
      std::cout << "definition scan: " << (d["is_cmap"].get<bool>() ? "commutes" : "fails") << " ("
                << d["pairs_checked"] << " pairs)\n";
    }
    if (r.contains("lemma_suite"))
      std::cout << "lemma suite: " << r["lemma_suite"]["violations"].get<uint64_t>()
                << " violation(s)\n";
  } else if (cmd == "group") {
    const json& v = r["verdict"];
    std::cout << "order " << r["order"] << ", |Z|=" << r["center_order"]
              << ", |G'|=" << r["derived_order"] << "\n";
    std::cout << "verdict: " << v["kind"].get<std::string>();
    if (!v["reason"].get<std::string>().empty())
      std::cout << " (" << v["reason"].get<std::string>() << ")";
    std::cout << "\n";
    if (v.contains("classification")) {
      const json& cls = v["classification"];
      std::cout << "connecting map: " << cls["kind"].get<std::string>();
      if (cls.contains("k")) std::cout << " (k=" << cls["k"].get<int>() << ")";
      std::cout << "\n";
    }
    if (r.contains("oracle")) {
      const json& o = r["oracle"];
      std::cout << "oracle: |Aut_c| = " << o["autc_count"] << ", "
                << (o["abelian"].get<bool>() ? "abelian" : "non-abelian");
      if (o.contains("agrees"))
        std::cout << ", " << (o["agrees"].get<bool>() ? "agrees" : "DISAGREES");
      std::cout << "\n";
    }
    if (r.contains("class2"))
      std::cout << "class-2 consistency: "
                << (r["class2"]["consistent"].get<bool>() ? "consistent" : "INCONSISTENT") << "\n";
  } else if (cmd == "sweep") {
    const json& c = r["counts"];
    std::cout << "mode: " << r["mode"].get<std::string>() << "\n";
    std::cout << "instances=" << c["instances"] << " cmaps=" << c["cmaps"]
              << " trivial=" << c["trivial"] << " nontrivial=" << c["nontrivial"]
              << " mismatches=" << c["mismatches"] << "\n";
    if (r.contains("definition_checked"))
      std::cout << "definition scan covered " << r["definition_checked"] << " instance(s)\n";
    for (const json& m : r["mismatch_list"])
      std::cout << "MISMATCH [" << m["criterion"].get<std::string>() << "] "
                << m["instance"].get<std::string>() << "\n";
    if (r.contains("mismatch_reproducers"))
      for (const json& p : r["mismatch_reproducers"])
        std::cout << "reproducer: " << p.get<std::string>() << "\n";
  }
}

int finish(const CommandOutcome& out, bool as_json) {
  if (as_json)
    std::cout << out.report.dump(2) << "\n";
  else
    print_human(out.report);
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cmapkernel: decides whether the central automorphism group of a finite\n"
      "p-group is abelian, by classifying the connecting homomorphism between\n"
      "the center and the abelianization; also analyzes such homomorphisms\n"
      "between finite abelian p-groups directly."};
  app.require_subcommand(1);
  bool as_json = false;

  // cmap
  std::string cmap_file;
  cmapkernel::CmapOptions copt;
  CLI::App* cmap = app.add_subcommand(
      "cmap", "analyze one homomorphism problem (file format: 'p <prime>', 'A <exponents...>',\n"
              "'B <exponents...>', 'lambda' followed by the matrix rows; '-' reads stdin)");
  cmap->add_flag("--json", as_json, "emit the full canonical JSON report");
  cmap->add_option("file", cmap_file, "problem file, or '-' for stdin")->required();
  cmap->add_flag("--oracle", copt.oracle, "also run the definitional all-pairs scan");
  cmap->add_flag("--lemmas", copt.lemmas, "also evaluate the full lemma suite");
  cmap->add_option("--guard-hom", copt.hom_guard, "max homomorphisms to enumerate");
  cmap->add_option("--guard-pairs", copt.pair_guard, "max pairs for the definitional scan");

  // group
  std::string group_source;
  bool force_recipe = false, force_file = false;
  cmapkernel::GroupOptions gopt;
  CLI::App* group = app.add_subcommand(
      "group", "analyze a finite group given as a multiplication table file ('order N' plus an\n"
               "N x N table of 1-based indices) or a recipe such as modular:2:4, dihedral:8,\n"
               "heisenberg:3, semidirect:2:2:3:3, dp(modular:2:4,modular:2:4)");
  group->add_flag("--json", as_json, "emit the full canonical JSON report");
  group->add_option("source", group_source, "table file, recipe, or '-' for stdin")->required();
  group->add_flag("--recipe", force_recipe, "treat the source as a recipe");
  group->add_flag("--file", force_file, "treat the source as a file path");
  group->add_flag("--oracle", gopt.oracle,
                  "enumerate the central automorphisms and cross-check the verdict");
  group->add_flag("--class2", gopt.class2, "run the class-2 consistency report");
  group->add_flag("--allow-non-pn", gopt.allow_non_pn,
                  "still compute the connecting map when the group is not purely non-abelian");
  group->add_option("--guard-order", gopt.order_guard, "max group order to accept");
  group->add_option("--guard-aut", gopt.aut_guard, "max automorphism candidates to enumerate");
  group->add_option("--seed", gopt.seed, "seed for the generator-selection tie-break");

  // sweep
  cmapkernel::SweepOptions sopt;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "exhaustive agreement sweep: every homomorphism between all shape pairs up to a\n"
               "bound (default), or every table in a directory (--tables); any disagreement\n"
               "between analysis routes is a mismatch and exits with code 4");
  sweep->add_flag("--json", as_json, "emit the full canonical JSON report");
  sweep->add_option("--p", sopt.p, "prime for the shape sweep")->check(CLI::PositiveNumber);
  sweep->add_option("--max-order", sopt.max_order, "per-side bound on the group order");
  sweep->add_option("--max-factors", sopt.max_factors, "max cyclic factors per shape");
  sweep->add_option("--definition-budget", sopt.definition_budget,
                    "run the definitional scan on pairs within this total cost");
  sweep->add_option("--tables", sopt.tables_dir, "directory of multiplication table files");
  sweep->add_option("--reproducer-dir", sopt.reproducer_dir,
                    "write one re-runnable input file per mismatch");
  sweep->add_option("--threads", sopt.threads,
                    "worker threads (0: CMAPKERNEL_THREADS, else 1); results are deterministic");
  sweep->add_option("--seed", sopt.seed, "seed for the generator-selection tie-break");
  sweep->add_option("--guard-hom", sopt.hom_guard, "max homomorphisms to enumerate per pair");
  sweep->add_option("--guard-pairs", sopt.pair_guard, "max pairs for one definitional scan");
  sweep->add_option("--guard-order", sopt.order_guard, "max group order to accept");
  sweep->add_option("--guard-aut", sopt.aut_guard, "max automorphism candidates to enumerate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmap->parsed()) return finish(cmapkernel::cmd_cmap(read_source(cmap_file), copt), as_json);
    if (group->parsed()) {
      bool is_file = force_file || group_source == "-" ||
                     (!force_recipe && std::filesystem::exists(group_source));
      if (is_file)
        return finish(cmapkernel::cmd_group_text(read_source(group_source), gopt), as_json);
      return finish(cmapkernel::cmd_group_recipe(group_source, gopt), as_json);
    }
    if (sweep->parsed()) return finish(cmapkernel::cmd_sweep(sopt), as_json);
  } catch (const cmapkernel::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cmapkernel::kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cmapkernel::kExitInternal;
  }
  return cmapkernel::kExitInternal;
}
