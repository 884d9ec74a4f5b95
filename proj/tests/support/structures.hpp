#pragma once

// Fixed structures shared by the law checks.

#include "hfol/groupoid_model.hpp"
#include "hfol/set_model.hpp"

namespace hfol::testing {

using gpd::FinGroup;
using gpd::FinGroupoid;
using gpd::Mor;
using gpd::Obj;

inline FinGroupoid bz(std::size_t n) { return FinGroupoid::delooping(FinGroup::cyclic(n)); }

inline Signature binary_sig() {
  Signature sig;
  sig.add_sort("A");
  sig.add_function({"f", {"A", "A"}, "A"});
  sig.add_function({"c", {}, "A"});
  return sig;
}

// B(Z/2) + 1, f the first projection, c the isolated point.
inline GroupoidStructure projection_structure() {
  const FinGroupoid g = FinGroupoid::coproduct(bz(2), FinGroupoid::terminal());
  const FinGroupoid gg = FinGroupoid::product(g, g);
  GroupoidStructure m;
  m.sig = binary_sig();
  m.carriers["A"] = g;
  std::vector<Obj> first;
  for (Obj x = 0; x < gg.num_objects(); ++x) {
    first.push_back(FinGroupoid::split_object(g, x).first);
  }
  m.functions["f"] = make_functor(gg, g, first, [&](const Mor& x) {
    return FinGroupoid::split_mor(g, g, x).first;
  });
  m.functions["c"] = make_functor(FinGroupoid::terminal(), g, {1},
                                  [&](const Mor&) { return g.id(1); });
  m.validate();
  return m;
}

// B(Z/3), f the group law, c the base point.
inline GroupoidStructure group_law_structure() {
  const FinGroupoid g = bz(3);
  const FinGroupoid gg = FinGroupoid::product(g, g);
  GroupoidStructure m;
  m.sig = binary_sig();
  m.carriers["A"] = g;
  m.functions["f"] = make_functor(gg, g, {0}, [&](const Mor& x) {
    auto [a, b] = FinGroupoid::split_mor(g, g, x);
    return Mor{0, 0, g.group(0).mul(a.elem, b.elem)};
  });
  m.functions["c"] = make_functor(FinGroupoid::terminal(), g, {0},
                                  [&](const Mor&) { return g.id(0); });
  m.validate();
  return m;
}


// Every set structure on the signature f : A A -> A with at most max_size
// elements, by carrier size then table code.
inline std::vector<SetStructure> all_magmas(std::size_t max_size) {
  Signature sig;
  sig.add_sort("A");
  sig.add_function({"f", {"A", "A"}, "A"});
  std::vector<SetStructure> out;
  for (std::size_t n = 0; n <= max_size; ++n) {
    const std::size_t cells = n * n;
    std::size_t tables = 1;
    for (std::size_t i = 0; i < cells; ++i) tables *= n;
    for (std::size_t code = 0; code < tables; ++code) {
      SetStructure m{sig, {{"A", {}}}, {{"f", {}}}};
      for (std::size_t i = 0; i < n; ++i) m.carriers["A"].push_back(std::to_string(i));
      std::size_t c = code;
      for (std::size_t i = 0; i < cells; ++i) {
        m.tables["f"].push_back(c % n);
        c /= n;
      }
      out.push_back(m);
    }
  }
  return out;
}

}  // namespace hfol::testing
