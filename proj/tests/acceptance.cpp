// Acceptance runner: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hfol/groupoid_model.hpp"
#include "hfol/parser.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace hfol;
using gpd::FinGroup;
using gpd::FinGroupoid;

namespace {

// Pinned limits.
constexpr std::uint64_t kSeed = 20240601;
constexpr std::size_t kSyntaxInstances = 1000;
constexpr std::size_t kSyntaxDepth = 4;
constexpr double kSyntaxSeconds = 60;
constexpr double kTermCategorySeconds = 60;
constexpr std::size_t kRelationInstances = 20;
constexpr double kRelationSeconds = 300;
constexpr std::size_t kTarskiDepth = 3;
constexpr std::size_t kTarskiQuantifiers = 2;
constexpr std::size_t kMinPathCarriers = 6;
constexpr std::size_t kEquivalences = 10;
constexpr std::size_t kPool = 50;
constexpr double kInvarianceSeconds = 600;
constexpr std::size_t kModelPairs = 200;

struct Line {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

void require_laws(Line& line, const std::vector<props::LawResult>& rs, std::size_t min_instances,
                  std::string& summary) {
  std::size_t least = SIZE_MAX;
  for (const auto& r : rs) {
    line.require(r.ok(), r.name + ": " + r.first_failure);
    line.require(r.instances >= min_instances,
                 r.name + ": only " + std::to_string(r.instances) + " instances");
    least = std::min(least, r.instances);
  }
  summary = std::to_string(rs.size()) + " laws, >= " + std::to_string(least) + " instances each";
}

FinGroupoid bz(std::size_t n) { return FinGroupoid::delooping(FinGroup::cyclic(n)); }

Signature one_sort() {
  Signature sig;
  sig.add_sort("A");
  return sig;
}

bool inhabited_on(const std::string& text, const FinGroupoid& carrier) {
  const Signature sig = one_sort();
  return groupoid_inhabited(parse_formula(text, sig), GroupoidStructure{sig, {{"A", carrier}}, {}, {}});
}

Line syntax() {
  Line l;
  std::string s;
  require_laws(l, props::syntax_laws(kSeed, kSyntaxInstances, kSyntaxDepth), kSyntaxInstances, s);
  l.detail = l.pass ? s : l.detail;
  return l;
}

Line term_category() {
  Line l;
  std::string s;
  require_laws(l, props::term_category_laws(), 1, s);
  l.detail = l.pass ? s : l.detail;
  return l;
}

Line relations() {
  Line l;
  std::size_t total = 0;
  for (const char* b : {"set", "groupoid"}) {
    const auto rs = props::relation_soundness(b, kSeed, kRelationInstances);
    std::string s;
    require_laws(l, rs, kRelationInstances, s);
    for (const auto& r : rs) total += r.instances;
  }
  if (l.pass) l.detail = std::to_string(total) + " instances, both backends";
  return l;
}

Line tarski() {
  Line l;
  const auto r = props::tarski_lauchli(kTarskiDepth, kTarskiQuantifiers);
  l.require(r.law.ok(), r.law.first_failure);
  l.require(r.structures == 18, "wrong structure count");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.0f closed formulas, %zu representatives, %zu structures",
                r.closed_formulas, r.representatives, r.structures);
  if (l.pass) l.detail = buf;
  return l;
}

Line contractible() {
  Line l;
  const std::string phi = "exists x. forall y. x = y";
  l.require(inhabited_on(phi, FinGroupoid::terminal()), "terminal");
  l.require(inhabited_on(phi, FinGroupoid::indiscrete(2)), "indiscrete 2");
  l.require(!inhabited_on(phi, FinGroupoid::discrete(2)), "discrete 2");
  l.require(!inhabited_on(phi, bz(2)), "B(Z/2)");
  if (l.pass) l.detail = "terminal, indiscrete 2 yes; discrete 2, B(Z/2) no";
  return l;
}

Line path_connected() {
  Line l;
  auto carriers = testing::small_carriers();
  carriers.emplace_back("terminal", FinGroupoid::terminal());
  carriers.emplace_back("discrete 2", FinGroupoid::discrete(2));
  carriers.emplace_back("indiscrete 3", FinGroupoid::indiscrete(3));
  std::size_t yes = 0;
  for (const auto& [name, g] : carriers) {
    const bool expect = g.num_objects() > 0 && g.num_components() == 1;
    const bool got = inhabited_on("exists x. forall y. ~~(x = y)", g);
    l.require(got == expect, name);
    yes += got;
  }
  l.require(carriers.size() >= kMinPathCarriers, "too few carriers");
  if (l.pass) {
    l.detail = std::to_string(carriers.size()) + " carriers, " + std::to_string(yes) + " connected";
  }
  return l;
}

Line classical() {
  Line l;
  l.require(!inhabited_on("(exists x. forall y. ~~(x = y)) -> (exists x. forall y. x = y)", bz(2)),
            "classical sentence inhabited on B(Z/2)");
  std::size_t n = 0;
  for (const char* b : {"set", "groupoid"}) {
    const auto r = props::deduction_soundness(b, kSeed, 4);
    l.require(r.ok(), r.name + ": " + r.first_failure);
    n += r.instances;
  }
  const auto closed = props::closed_deductions({
      "context () Lambda[A](Refl[A])",
      "context () Lambda[A](Lambda[A](Curry(Comp(Xi[x2 = x1](Refl[A]), Proj2[T; x1 = x2]))))",
      "context () Lambda[A](Comp(Reindex[x1; x1](ExistsUnit[x1 = x2]), Refl[A]))",
      "context () Curry(Proj2[T; F])",
  });
  l.require(closed.ok(), closed.first_failure);
  if (l.pass) {
    l.detail = "uninhabited on B(Z/2); " + std::to_string(n) + " deduction points, " +
               std::to_string(closed.instances) + " closed proofs inhabited";
  }
  return l;
}

Line homotopy() {
  Line l;
  const auto r = props::homotopy_sentences(testing::small_carriers());
  l.require(r.homotopy.ok(), r.homotopy.first_failure);
  l.require(r.equivalence.ok(), r.equivalence.first_failure);
  if (l.pass) {
    l.detail = std::to_string(r.homotopy.instances) + " functor pairs (" +
               std::to_string(r.positive_homotopy) + " homotopic), " +
               std::to_string(r.equivalence.instances) + " opposing pairs (" +
               std::to_string(r.positive_equivalence) + " equivalences)";
  }
  return l;
}

Line invariance() {
  Line l;
  const auto r = props::invariance_suite(kSeed, kEquivalences, kPool);
  l.require(r.law.ok(), r.law.first_failure);
  l.require(r.equivalences >= kEquivalences && r.pool >= kPool, "suite too small");
  l.require(r.law.instances - r.law.skipped >= kEquivalences * kPool,
            std::to_string(r.law.skipped) + " formulas skipped by the size guard");
  const auto s = props::set_iso_invariance(kSeed, 10, 40);
  l.require(s.ok(), s.first_failure);
  if (l.pass) {
    l.detail = std::to_string(r.equivalences) + " equivalences x " + std::to_string(r.pool) +
               " formulas (" + std::to_string(r.inhabited) + " inhabited); " +
               std::to_string(s.instances) + " set relabellings";
  }
  return l;
}

Line model_laws() {
  Line l;
  std::size_t least = SIZE_MAX;
  for (const char* b : {"set", "groupoid"}) {
    std::string s;
    const auto rs = props::model_laws(b, kSeed, kModelPairs);
    require_laws(l, rs, kModelPairs, s);
    for (const auto& r : rs) least = std::min(least, r.instances);
  }
  if (l.pass) l.detail = "Frobenius, BC exists, BC forall; >= " + std::to_string(least) + " pairs";
  return l;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    double limit;  // seconds, 0 for none
    std::function<Line()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "syntax laws", kSyntaxSeconds, syntax},
      {2, "term category laws", kTermCategorySeconds, term_category},
      {3, "relation soundness", kRelationSeconds, relations},
      {4, "Tarski-Lauchli agreement", 0, tarski},
      {5, "contractibility", 0, contractible},
      {6, "path-connectedness", 0, path_connected},
      {7, "classical failure and soundness", 0, classical},
      {8, "homotopy sentences", 0, homotopy},
      {9, "invariance", kInvarianceSeconds, invariance},
      {10, "model laws", 0, model_laws},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Line l;
    try {
      l = c.run();
    } catch (const std::exception& e) {
      l.pass = false;
      l.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit > 0 && secs > c.limit) {
      l.pass = false;
      l.detail = "over the time limit; " + l.detail;
    }
    all = all && l.pass;
    std::printf("%s %2d %-32s %7.2fs  %s\n", l.pass ? "PASS" : "FAIL", c.number, c.name, secs,
                l.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
