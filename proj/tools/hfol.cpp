// Command-line front end over the C API.

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hfol/hfol.h"

namespace {

struct Global {
  std::string backend = "auto";
  std::uint64_t seed = 1;
  std::size_t max_fiber = 10000;
  std::string format = "human";
};

struct Failure {
  hfol_status status;
};

void ok(hfol_status s) {
  if (s != HFOL_OK) throw Failure{s};
}

template <typename T, void (*Free)(T*)>
struct Owned {
  T* p = nullptr;
  ~Owned() { Free(p); }
};

using Options = Owned<hfol_options, hfol_options_free>;
using Sig = Owned<hfol_signature, hfol_signature_free>;
using Struct = Owned<hfol_structure, hfol_structure_free>;
using Text = Owned<char, hfol_string_free>;

void options(const Global& g, Options& o) {
  ok(hfol_options_new(&o.p));
  ok(hfol_options_set_backend(o.p, g.backend.c_str()));
  ok(hfol_options_set_seed(o.p, g.seed));
  ok(hfol_options_set_max_fiber(o.p, g.max_fiber));
}

void load(const std::string& path, Struct& s) { ok(hfol_structure_load(path.c_str(), &s.p)); }

// Signature from a signature file, else from a structure file.
void signature(const std::string& sig_path, const std::string& structure_path,
               Sig& sig) {
  if (!sig_path.empty()) {
    Text text;
    ok(hfol_read_file(sig_path.c_str(), &text.p));
    ok(hfol_signature_parse(text.p, &sig.p));
    return;
  }
  if (structure_path.empty()) {
    std::cerr << "hfol: give --signature or --structure\n";
    throw Failure{HFOL_ERR_USAGE};
  }
  Struct s;
  load(structure_path, s);
  ok(hfol_signature_of(s.p, &sig.p));
}

// Prints the report and returns the command's status. A verification failure
// still prints.
int emit(const Global& g, hfol_status status, Text& report) {
  if (status != HFOL_OK && status != HFOL_ERR_VERIFICATION) throw Failure{status};
  if (g.format == "json") {
    std::fputs(report.p, stdout);
  } else {
    Text text;
    ok(hfol_report_to_text(report.p, &text.p));
    std::fputs(text.p, stdout);
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpreter for many-sorted intuitionistic first-order logic in the set and groupoid models"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(hfol_version()));
  Global g;
  app.add_option("--backend", g.backend, "set, groupoid or auto")
      ->envname("HFOL_BACKEND")
      ->check(CLI::IsMember({"auto", "set", "groupoid"}));
  app.add_option("--seed", g.seed, "random seed")->envname("HFOL_SEED");
  app.add_option("--max-fiber", g.max_fiber, "largest fiber built before giving up")
      ->envname("HFOL_MAX_FIBER")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "human or json")
      ->envname("HFOL_FORMAT")
      ->check(CLI::IsMember({"human", "json"}));

  std::string formula, context, sig_path, structure_path, proof_path;
  std::string m_path, n_path, eq_path;
  std::vector<std::string> formulas;
  std::size_t per_family = 20, pool_size = 50, pool_depth = 3;

  auto* check = app.add_subcommand("check", "parse, sort-check and canonicalize a formula");
  check->add_option("formula", formula)->required();
  check->add_option("--context", context, "declarations such as \"x:A, y:B\"");
  check->add_option("--signature", sig_path);
  check->add_option("--structure", structure_path);

  auto* eval = app.add_subcommand("eval", "interpret a formula in a structure");
  eval->add_option("formula", formula)->required();
  eval->add_option("--structure", structure_path)->required();
  eval->add_option("--context", context);

  auto* prove = app.add_subcommand("prove-check", "typecheck a proof file, optionally evaluate it");
  prove->add_option("proof", proof_path)->required();
  prove->add_option("--signature", sig_path);
  prove->add_option("--structure", structure_path, "evaluate in this structure")
      ;

  auto* rel = app.add_subcommand("relations", "relation-soundness suite");
  rel->add_option("--structure", structure_path);
  rel->add_option("--per-family", per_family)->check(CLI::PositiveNumber);

  auto* inv = app.add_subcommand("invariance", "invariance under a homotopy equivalence");
  inv->add_option("--from", m_path)->required();
  inv->add_option("--to", n_path)->required();
  inv->add_option("--equivalence", eq_path)->required();
  inv->add_option("--formula", formulas, "repeatable; default is a generated closed pool");
  inv->add_option("--context", context);
  inv->add_option("--pool-size", pool_size)->check(CLI::PositiveNumber);
  inv->add_option("--pool-depth", pool_depth);

  auto* ex = app.add_subcommand("examples", "homotopical example suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : HFOL_ERR_USAGE;
  }

  try {
    Options o;
    options(g, o);
    Text report;
    if (check->parsed()) {
      Sig sig;
      signature(sig_path, structure_path, sig);
      return emit(g, hfol_check(sig.p, formula.c_str(), context.c_str(), &report.p), report);
    }
    if (eval->parsed()) {
      Struct s;
      load(structure_path, s);
      return emit(g, hfol_eval(s.p, formula.c_str(), context.c_str(), o.p, &report.p), report);
    }
    if (prove->parsed()) {
      Sig sig;
      signature(sig_path, structure_path, sig);
      Struct s;
      if (!structure_path.empty()) load(structure_path, s);
      Text text;
      ok(hfol_read_file(proof_path.c_str(), &text.p));
      return emit(g, hfol_prove_check(sig.p, text.p, s.p, o.p, &report.p), report);
    }
    if (rel->parsed()) {
      Struct s;
      if (!structure_path.empty()) load(structure_path, s);
      return emit(g, hfol_relations(s.p, per_family, o.p, &report.p), report);
    }
    if (inv->parsed()) {
      Struct m, n;
      load(m_path, m);
      load(n_path, n);
      Text eq;
      ok(hfol_read_file(eq_path.c_str(), &eq.p));
      std::vector<const char*> fs;
      for (const auto& f : formulas) fs.push_back(f.c_str());
      return emit(g,
                  hfol_invariance(m.p, n.p, eq.p, fs.data(), fs.size(), context.c_str(),
                                  pool_size, pool_depth, o.p, &report.p),
                  report);
    }
    if (ex->parsed()) return emit(g, hfol_examples(o.p, &report.p), report);
  } catch (const Failure& f) {
    const char* msg = hfol_last_error();
    if (*msg) std::cerr << "hfol: " << hfol_status_name(f.status) << ": " << msg << "\n";
    return f.status;
  }
  return HFOL_ERR_USAGE;
}
