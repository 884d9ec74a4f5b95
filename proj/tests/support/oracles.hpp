#pragma once

// Brute-force oracles over finite groupoids. They enumerate raw morphism
// assignments and check the laws directly, without the normal forms the
// library uses.

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "hfol/groupoid.hpp"

namespace hfol::testing {

// A functor as raw tables.
struct RawFunctor {
  std::vector<gpd::Obj> obj;
  std::map<gpd::Mor, gpd::Mor> mor;
};

// Every functor src → dst: object maps, then morphism images chosen one at a
// time, rejecting as soon as an assigned composite disagrees.
inline std::vector<RawFunctor> brute_functors(const gpd::FinGroupoid& src,
                                              const gpd::FinGroupoid& dst) {
  using gpd::Mor;
  std::vector<RawFunctor> out;
  const std::size_t n = src.num_objects(), m = dst.num_objects();
  if (n > 0 && m == 0) return out;
  const std::vector<Mor> mors = src.all_morphisms();
  std::map<Mor, std::size_t> index;
  for (std::size_t i = 0; i < mors.size(); ++i) index[mors[i]] = i;
  std::vector<gpd::Obj> obj(n, 0);
  std::vector<Mor> image(mors.size());
  std::vector<std::vector<Mor>> choices(mors.size());

  // Composable pairs (g, f) and the index of g ∘ f, keyed by the largest
  // index among the three.
  std::vector<std::vector<std::array<std::size_t, 3>>> checks(mors.size());
  for (std::size_t i = 0; i < mors.size(); ++i) {
    for (std::size_t j = 0; j < mors.size(); ++j) {
      if (mors[j].src != mors[i].dst) continue;
      const std::size_t k = index.at(src.compose(mors[j], mors[i]));
      checks[std::max({i, j, k})].push_back({j, i, k});
    }
  }

  std::function<void(std::size_t)> assign = [&](std::size_t i) {
    if (i == mors.size()) {
      RawFunctor f{obj, {}};
      for (std::size_t k = 0; k < mors.size(); ++k) f.mor[mors[k]] = image[k];
      out.push_back(std::move(f));
      return;
    }
    for (const Mor& c : choices[i]) {
      image[i] = c;
      bool ok = true;
      for (const auto& [g, f, gf] : checks[i]) {
        if (dst.compose(image[g], image[f]) != image[gf]) {
          ok = false;
          break;
        }
      }
      if (ok) assign(i + 1);
    }
  };

  while (true) {
    bool possible = true;
    for (std::size_t i = 0; i < mors.size(); ++i) {
      const Mor& f = mors[i];
      if (f == src.id(f.src)) {
        choices[i] = {dst.id(obj[f.src])};
      } else {
        choices[i] = dst.hom(obj[f.src], obj[f.dst]);
      }
      possible = possible && !choices[i].empty();
    }
    if (possible) assign(0);
    std::size_t i = 0;
    while (i < n && ++obj[i] == m) obj[i++] = 0;
    if (i == n) break;
  }
  return out;
}

inline gpd::Functor to_functor(const gpd::FinGroupoid& src,
                               const gpd::FinGroupoid& dst,
                               const RawFunctor& f) {
  return gpd::make_functor(src, dst, f.obj,
                           [&](const gpd::Mor& m) { return f.mor.at(m); });
}

inline RawFunctor compose_raw(const gpd::FinGroupoid& a, const RawFunctor& g,
                              const RawFunctor& f) {
  RawFunctor r;
  for (gpd::Obj x = 0; x < a.num_objects(); ++x) r.obj.push_back(g.obj[f.obj[x]]);
  for (const auto& [m, fm] : f.mor) r.mor[m] = g.mor.at(fm);
  return r;
}

inline RawFunctor identity_raw(const gpd::FinGroupoid& a) {
  RawFunctor r;
  for (gpd::Obj x = 0; x < a.num_objects(); ++x) r.obj.push_back(x);
  for (const auto& m : a.all_morphisms()) r.mor[m] = m;
  return r;
}

// Whether some family θ_a : F a → G a is natural.
inline bool brute_natural_iso(const gpd::FinGroupoid& src,
                              const gpd::FinGroupoid& dst, const RawFunctor& f,
                              const RawFunctor& g) {
  using gpd::Mor;
  const std::size_t n = src.num_objects();
  std::vector<std::vector<Mor>> choices;
  for (gpd::Obj a = 0; a < n; ++a) {
    choices.push_back(dst.hom(f.obj[a], g.obj[a]));
    if (choices.back().empty()) return false;
  }
  const std::vector<Mor> mors = src.all_morphisms();
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    bool ok = true;
    for (const Mor& m : mors) {
      const Mor& ta = choices[m.src][idx[m.src]];
      const Mor& tb = choices[m.dst][idx[m.dst]];
      if (dst.compose(tb, f.mor.at(m)) != dst.compose(g.mor.at(m), ta)) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
    std::size_t i = 0;
    while (i < n && ++idx[i] == choices[i].size()) idx[i++] = 0;
    if (i == n) return false;
  }
}

// Whether f : A → B and g : B → A form an equivalence.
inline bool brute_equivalence_pair(const gpd::FinGroupoid& a,
                                   const gpd::FinGroupoid& b,
                                   const RawFunctor& f, const RawFunctor& g) {
  return brute_natural_iso(a, a, compose_raw(a, g, f), identity_raw(a)) &&
         brute_natural_iso(b, b, compose_raw(b, f, g), identity_raw(b));
}

// Whether any equivalence A ≃ B exists.
inline bool brute_equivalent(const gpd::FinGroupoid& a,
                             const gpd::FinGroupoid& b) {
  const auto fs = brute_functors(a, b);
  const auto gs = brute_functors(b, a);
  for (const auto& f : fs) {
    for (const auto& g : gs) {
      if (brute_equivalence_pair(a, b, f, g)) return true;
    }
  }
  return false;
}

// Small carriers: every groupoid with at most 2 objects and hom sets of at
// most 4 elements, up to isomorphism.
inline std::vector<std::pair<std::string, gpd::FinGroupoid>> small_carriers() {
  using gpd::FinGroup;
  using gpd::FinGroupoid;
  std::vector<std::pair<std::string, FinGroupoid>> out;
  const std::vector<std::pair<std::string, FinGroup>> groups = {
      {"1", FinGroup()},
      {"Z2", FinGroup::cyclic(2)},
      {"Z3", FinGroup::cyclic(3)},
      {"Z4", FinGroup::cyclic(4)},
      {"Z2xZ2", FinGroup::product(FinGroup::cyclic(2), FinGroup::cyclic(2))},
  };
  out.emplace_back("empty", FinGroupoid());
  for (const auto& [name, g] : groups) {
    out.emplace_back("B(" + name + ")", FinGroupoid::delooping(g));
    // Two isomorphic objects.
    out.emplace_back("2B(" + name + ")~",
                     FinGroupoid({0, 0}, {0}, {g}));
  }
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i; j < groups.size(); ++j) {
      out.emplace_back("B(" + groups[i].first + ")+B(" + groups[j].first + ")",
                       FinGroupoid::coproduct(FinGroupoid::delooping(groups[i].second),
                                              FinGroupoid::delooping(groups[j].second)));
    }
  }
  return out;
}

}  // namespace hfol::testing
