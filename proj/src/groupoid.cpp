#include "hfol/groupoid.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

#include "hfol/error.hpp"

namespace hfol::gpd {

// ---------------------------------------------------------------------------
// FinGroup

FinGroup::FinGroup() { finish(); }

FinGroup FinGroup::from_table(std::size_t order, std::vector<Elem> mul) {
  if (order == 0) throw_usage("a group has at least one element");
  if (order > kMaxTableOrder) {
    throw SizeGuardError("group of order " + std::to_string(order) +
                         " exceeds the table bound " +
                         std::to_string(kMaxTableOrder));
  }
  if (mul.size() != order * order) throw_usage("group table has wrong size");
  for (auto e : mul) {
    if (e >= order) throw_usage("group table entry out of range");
  }
  FinGroup g;
  g.order_ = order;
  g.mul_ = std::move(mul);
  for (Elem a = 0; a < order; ++a) {
    if (g.mul(0, a) != a || g.mul(a, 0) != a) {
      throw_usage("element 0 is not the identity of the group table");
    }
  }
  g.inv_.assign(order, 0);
  for (Elem a = 0; a < order; ++a) {
    bool found = false;
    for (Elem b = 0; b < order; ++b) {
      if (g.mul(a, b) == 0) {
        if (g.mul(b, a) != 0) throw_usage("group table: inverses differ");
        g.inv_[a] = b;
        found = true;
        break;
      }
    }
    if (!found) throw_usage("group table: element without inverse");
  }
  if (order <= 64) {
    for (Elem a = 0; a < order; ++a) {
      for (Elem b = 0; b < order; ++b) {
        for (Elem c = 0; c < order; ++c) {
          if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
            throw_usage("group table is not associative");
          }
        }
      }
    }
  }
  g.finish();
  return g;
}

FinGroup FinGroup::cyclic(std::size_t n) {
  std::vector<Elem> mul(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      mul[a * n + b] = static_cast<Elem>((a + b) % n);
    }
  }
  return from_table(n, std::move(mul));
}

FinGroup FinGroup::from_permutations(
    const std::vector<std::vector<std::uint32_t>>& gens) {
  if (gens.empty()) return FinGroup();
  const std::size_t n = gens.front().size();
  using Perm = std::vector<std::uint32_t>;
  Perm id(n);
  std::iota(id.begin(), id.end(), 0u);
  std::vector<Perm> elems{id};
  std::map<Perm, Elem> index{{id, 0}};
  auto after = [](const Perm& p, const Perm& q) {  // p ∘ q
    Perm r(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
    return r;
  };
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& s : gens) {
      Perm p = after(elems[i], s);
      if (index.emplace(p, static_cast<Elem>(elems.size())).second) {
        elems.push_back(std::move(p));
        if (elems.size() > kMaxTableOrder) {
          throw SizeGuardError("permutation group exceeds the table bound");
        }
      }
    }
  }
  const std::size_t order = elems.size();
  std::vector<Elem> mul(order * order);
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) {
      mul[a * order + b] = index.at(after(elems[a], elems[b]));
    }
  }
  return from_table(order, std::move(mul));
}

FinGroup FinGroup::symmetric(std::size_t n) {
  if (n <= 1) return FinGroup();
  std::vector<std::uint32_t> swap(n), cycle(n);
  std::iota(swap.begin(), swap.end(), 0u);
  std::swap(swap[0], swap[1]);
  for (std::size_t i = 0; i < n; ++i) cycle[i] = static_cast<std::uint32_t>((i + 1) % n);
  return from_permutations({swap, cycle});
}

FinGroup FinGroup::product(const FinGroup& g, const FinGroup& h) {
  const std::size_t n = g.order() * h.order();
  if (n > kMaxTableOrder) {
    throw SizeGuardError("product group of order " + std::to_string(n) +
                         " exceeds the table bound " +
                         std::to_string(kMaxTableOrder));
  }
  if (h.order() == 1) return g;
  if (g.order() == 1) return h;
  FinGroup p;
  p.order_ = n;
  p.mul_.resize(n * n);
  p.inv_.resize(n);
  const std::size_t m = h.order();
  for (std::size_t a = 0; a < n; ++a) {
    p.inv_[a] = static_cast<Elem>(g.inv(a / m) * m + h.inv(a % m));
    for (std::size_t b = 0; b < n; ++b) {
      p.mul_[a * n + b] = static_cast<Elem>(
          g.mul(a / m, b / m) * m + h.mul(a % m, b % m));
    }
  }
  p.finish();
  return p;
}

void FinGroup::finish() {
  gens_.clear();
  std::vector<bool> reached(order_, false);
  reached[0] = true;
  std::size_t count = 1;
  std::vector<Elem> members{0};
  while (count < order_) {
    Elem pick = 0;
    for (Elem a = 1; a < order_; ++a) {
      if (!reached[a]) {
        pick = a;
        break;
      }
    }
    gens_.push_back(pick);
    // Closure of the subgroup generated so far.
    members.assign(1, 0);
    std::fill(reached.begin(), reached.end(), false);
    reached[0] = true;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (Elem s : gens_) {
        Elem e = mul(members[i], s);
        if (!reached[e]) {
          reached[e] = true;
          members.push_back(e);
        }
      }
    }
    count = members.size();
  }
}

std::size_t FinGroup::element_order(Elem a) const {
  std::size_t k = 1;
  for (Elem e = a; e != 0; e = mul(e, a)) ++k;
  return k;
}

bool FinGroup::is_abelian() const {
  for (Elem a : gens_) {
    for (Elem b : gens_) {
      if (mul(a, b) != mul(b, a)) return false;
    }
  }
  return true;
}

namespace {

std::vector<std::size_t> order_histogram(const FinGroup& g) {
  std::vector<std::size_t> h(g.order() + 1, 0);
  for (Elem a = 0; a < g.order(); ++a) ++h[g.element_order(a)];
  return h;
}

}  // namespace

std::optional<std::vector<Elem>> group_isomorphism(const FinGroup& g,
                                                   const FinGroup& h,
                                                   std::size_t max_steps) {
  if (g.order() != h.order()) return std::nullopt;
  if (g.is_abelian() != h.is_abelian()) return std::nullopt;
  if (order_histogram(g) != order_histogram(h)) return std::nullopt;
  const std::size_t n = g.order();
  const auto& gens = g.generators();
  std::vector<std::vector<Elem>> candidates(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::size_t k = g.element_order(gens[i]);
    for (Elem b = 0; b < n; ++b) {
      if (h.element_order(b) == k) candidates[i].push_back(b);
    }
  }
  // Backtracking over generator images. After fixing the images of
  // gens[0..i], the map is extended to the subgroup they generate; any clash
  // prunes the branch.
  std::vector<Elem> image(gens.size());
  std::size_t steps = 0;
  const auto closure = [&](std::size_t upto, std::vector<Elem>& map, std::vector<bool>& set,
                           std::vector<bool>& used) {
    std::fill(set.begin(), set.end(), false);
    std::fill(used.begin(), used.end(), false);
    map[0] = 0;
    set[0] = used[0] = true;
    std::vector<Elem> queue{0};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const Elem e = queue[q];
      for (std::size_t i = 0; i <= upto; ++i) {
        const Elem ge = g.mul(e, gens[i]);
        const Elem he = h.mul(map[e], image[i]);
        if (set[ge]) {
          if (map[ge] != he) return std::size_t(0);
        } else if (used[he]) {
          return std::size_t(0);
        } else {
          map[ge] = he;
          set[ge] = used[he] = true;
          queue.push_back(ge);
        }
      }
    }
    return queue.size();
  };
  std::vector<Elem> map(n);
  std::vector<bool> set(n), used(n);
  const std::function<bool(std::size_t)> extend = [&](std::size_t i) {
    if (i == gens.size()) return true;
    for (Elem b : candidates[i]) {
      if (++steps > max_steps) {
        throw SizeGuardError("group isomorphism search for order " + std::to_string(n) +
                             " exceeds " + std::to_string(max_steps) + " steps");
      }
      image[i] = b;
      if (closure(i, map, set, used) != 0 && extend(i + 1)) return true;
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;
  if (gens.empty()) return std::vector<Elem>{0};
  closure(gens.size() - 1, map, set, used);
  return map;
}

// ---------------------------------------------------------------------------
// FinGroupoid

FinGroupoid::FinGroupoid(std::vector<std::uint32_t> component_of,
                         std::vector<Obj> roots, std::vector<FinGroup> groups)
    : component_of_(std::move(component_of)),
      roots_(std::move(roots)),
      groups_(std::move(groups)) {
  if (roots_.size() != groups_.size()) {
    throw_usage("groupoid: one group per component required");
  }
  std::vector<bool> seen(roots_.size(), false);
  for (auto c : component_of_) {
    if (c >= roots_.size()) throw_usage("groupoid: component index out of range");
    seen[c] = true;
  }
  for (std::size_t c = 0; c < roots_.size(); ++c) {
    if (!seen[c]) throw_usage("groupoid: empty component");
    if (roots_[c] >= component_of_.size() || component_of_[roots_[c]] != c) {
      throw_usage("groupoid: root outside its component");
    }
  }
}

FinGroupoid FinGroupoid::terminal() { return discrete(1); }

FinGroupoid FinGroupoid::discrete(std::size_t n) {
  std::vector<std::uint32_t> comp(n);
  std::vector<Obj> roots(n);
  std::iota(comp.begin(), comp.end(), 0u);
  std::iota(roots.begin(), roots.end(), 0u);
  return FinGroupoid(std::move(comp), std::move(roots),
                     std::vector<FinGroup>(n));
}

FinGroupoid FinGroupoid::indiscrete(std::size_t n) {
  if (n == 0) return FinGroupoid();
  return FinGroupoid(std::vector<std::uint32_t>(n, 0), {0}, {FinGroup()});
}

FinGroupoid FinGroupoid::delooping(FinGroup g) {
  return FinGroupoid({0}, {0}, {std::move(g)});
}

std::pair<Obj, Obj> FinGroupoid::split_object(const FinGroupoid& b, Obj ab) {
  const auto nb = static_cast<Obj>(b.num_objects());
  return {ab / nb, ab % nb};
}

Obj FinGroupoid::pair_object(const FinGroupoid& b, Obj a, Obj bo) {
  return a * static_cast<Obj>(b.num_objects()) + bo;
}

Mor FinGroupoid::pair_mor(const FinGroupoid& a, const FinGroupoid& b,
                          const Mor& f, const Mor& g) {
  (void)a;
  const auto m = static_cast<Elem>(b.group_at(g.src).order());
  return Mor{pair_object(b, f.src, g.src), pair_object(b, f.dst, g.dst),
             f.elem * m + g.elem};
}

std::pair<Mor, Mor> FinGroupoid::split_mor(const FinGroupoid& a,
                                           const FinGroupoid& b,
                                           const Mor& m) {
  (void)a;
  auto [s1, s2] = split_object(b, m.src);
  auto [d1, d2] = split_object(b, m.dst);
  const auto k = static_cast<Elem>(b.group_at(s2).order());
  return {Mor{s1, d1, m.elem / k}, Mor{s2, d2, m.elem % k}};
}

FinGroupoid FinGroupoid::product(const FinGroupoid& a, const FinGroupoid& b) {
  const std::size_t na = a.num_objects(), nb = b.num_objects();
  const std::size_t cb = b.num_components();
  std::vector<std::uint32_t> comp(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      comp[i * nb + j] =
          static_cast<std::uint32_t>(a.component(i) * cb + b.component(j));
    }
  }
  std::vector<Obj> roots;
  std::vector<FinGroup> groups;
  for (std::size_t c1 = 0; c1 < a.num_components(); ++c1) {
    for (std::size_t c2 = 0; c2 < cb; ++c2) {
      roots.push_back(static_cast<Obj>(a.root(c1) * nb + b.root(c2)));
      groups.push_back(FinGroup::product(a.group(c1), b.group(c2)));
    }
  }
  return FinGroupoid(std::move(comp), std::move(roots), std::move(groups));
}

FinGroupoid FinGroupoid::product(
    const std::vector<const FinGroupoid*>& factors) {
  FinGroupoid out = terminal();
  for (const auto* f : factors) out = product(out, *f);
  return out;
}

FinGroupoid FinGroupoid::coproduct(const FinGroupoid& a,
                                   const FinGroupoid& b) {
  auto comp = a.component_of_;
  const auto ca = static_cast<std::uint32_t>(a.num_components());
  const auto na = static_cast<Obj>(a.num_objects());
  for (auto c : b.component_of_) comp.push_back(c + ca);
  auto roots = a.roots_;
  for (auto r : b.roots_) roots.push_back(r + na);
  auto groups = a.groups_;
  groups.insert(groups.end(), b.groups_.begin(), b.groups_.end());
  return FinGroupoid(std::move(comp), std::move(roots), std::move(groups));
}

Mor FinGroupoid::compose(const Mor& g, const Mor& f) const {
  if (f.dst != g.src) throw_usage("groupoid: composing non-composable morphisms");
  return Mor{f.src, g.dst, group_at(f.src).mul(g.elem, f.elem)};
}

Mor FinGroupoid::inverse(const Mor& f) const {
  return Mor{f.dst, f.src, group_at(f.src).inv(f.elem)};
}

std::size_t FinGroupoid::hom_size(Obj a, Obj b) const {
  return connected(a, b) ? group_at(a).order() : 0;
}

std::vector<Mor> FinGroupoid::hom(Obj a, Obj b) const {
  std::vector<Mor> out;
  for (Elem x = 0; x < hom_size(a, b); ++x) out.push_back(Mor{a, b, x});
  return out;
}

std::size_t FinGroupoid::num_morphisms() const {
  std::vector<std::size_t> size(num_components(), 0);
  for (auto c : component_of_) ++size[c];
  std::size_t total = 0;
  for (std::size_t c = 0; c < size.size(); ++c) {
    total += size[c] * size[c] * groups_[c].order();
  }
  return total;
}

std::vector<Mor> FinGroupoid::all_morphisms() const {
  std::vector<Mor> out;
  for (Obj a = 0; a < num_objects(); ++a) {
    for (Obj b = 0; b < num_objects(); ++b) {
      auto h = hom(a, b);
      out.insert(out.end(), h.begin(), h.end());
    }
  }
  return out;
}

std::vector<Mor> FinGroupoid::generators() const {
  std::vector<Mor> out;
  for (Obj a = 0; a < num_objects(); ++a) {
    if (roots_[component_of_[a]] != a) out.push_back(gamma(a));
  }
  for (std::size_t c = 0; c < num_components(); ++c) {
    for (Elem x : groups_[c].generators()) {
      out.push_back(Mor{roots_[c], roots_[c], x});
    }
  }
  return out;
}

std::string describe(const FinGroupoid& g) {
  std::string out = std::to_string(g.num_objects()) + " object(s), " +
                    std::to_string(g.num_components()) + " component(s)";
  if (g.num_components() > 0) {
    out += ", automorphism group orders [";
    for (std::size_t c = 0; c < g.num_components(); ++c) {
      if (c > 0) out += ",";
      out += std::to_string(g.group(c).order());
    }
    out += "]";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Functors

Mor Functor::apply(const FinGroupoid& src, const FinGroupoid& dst,
                   const Mor& m) const {
  const auto c = src.component(m.src);
  const FinGroup& h = dst.group_at(obj[m.src]);
  const Elem e =
      h.mul(gamma[m.dst], h.mul(phi[c][m.elem], h.inv(gamma[m.src])));
  return Mor{obj[m.src], obj[m.dst], e};
}

Functor make_functor(const FinGroupoid& src, const FinGroupoid& dst,
                     const std::vector<Obj>& obj_map, const MorFn& mor) {
  Functor f;
  f.obj = obj_map;
  f.gamma.resize(src.num_objects());
  for (Obj a = 0; a < src.num_objects(); ++a) {
    const Mor img = mor(src.gamma(a));
    const Obj r = src.root(src.component(a));
    if (img.src != obj_map[r] || img.dst != obj_map[a] ||
        !dst.connected(img.src, img.dst)) {
      throw_usage("functor: morphism image has wrong endpoints");
    }
    f.gamma[a] = img.elem;
  }
  f.phi.resize(src.num_components());
  for (std::uint32_t c = 0; c < src.num_components(); ++c) {
    const Obj r = src.root(c);
    const FinGroup& g = src.group(c);
    f.phi[c].resize(g.order());
    for (Elem x = 0; x < g.order(); ++x) {
      const Mor img = mor(Mor{r, r, x});
      if (img.src != obj_map[r] || img.dst != obj_map[r]) {
        throw_usage("functor: automorphism image has wrong endpoints");
      }
      f.phi[c][x] = img.elem;
    }
  }
  return f;
}

Functor identity_functor(const FinGroupoid& g) {
  Functor f;
  f.obj.resize(g.num_objects());
  std::iota(f.obj.begin(), f.obj.end(), 0u);
  f.gamma.assign(g.num_objects(), 0);
  f.phi.resize(g.num_components());
  for (std::size_t c = 0; c < g.num_components(); ++c) {
    f.phi[c].resize(g.group(c).order());
    std::iota(f.phi[c].begin(), f.phi[c].end(), 0u);
  }
  return f;
}

Functor compose(const FinGroupoid& a, const FinGroupoid& b,
                const FinGroupoid& c, const Functor& h, const Functor& f) {
  std::vector<Obj> obj(a.num_objects());
  for (Obj x = 0; x < obj.size(); ++x) obj[x] = h.obj[f.obj[x]];
  return make_functor(a, c, obj, [&](const Mor& m) {
    return h.apply(b, c, f.apply(a, b, m));
  });
}

Functor inverse_iso(const FinGroupoid& a, const FinGroupoid& b,
                    const Functor& f) {
  if (a.num_objects() != b.num_objects()) {
    throw_usage("inverse_iso: not an isomorphism");
  }
  std::vector<Obj> inv(b.num_objects(), 0);
  std::vector<bool> hit(b.num_objects(), false);
  for (Obj x = 0; x < a.num_objects(); ++x) {
    if (hit[f.obj[x]]) throw_usage("inverse_iso: not injective on objects");
    hit[f.obj[x]] = true;
    inv[f.obj[x]] = x;
  }
  std::vector<std::vector<Elem>> phi_inv(a.num_components());
  for (std::uint32_t c = 0; c < a.num_components(); ++c) {
    phi_inv[c].assign(a.group(c).order(), 0);
    for (Elem x = 0; x < a.group(c).order(); ++x) phi_inv[c][f.phi[c][x]] = x;
  }
  return make_functor(b, a, inv, [&](const Mor& n) {
    const Obj s = inv[n.src], t = inv[n.dst];
    const FinGroup& h = b.group_at(n.src);
    const Elem y =
        h.mul(h.inv(f.gamma[t]), h.mul(n.elem, f.gamma[s]));
    return Mor{s, t, phi_inv[a.component(s)][y]};
  });
}

bool is_functor(const FinGroupoid& src, const FinGroupoid& dst,
                const std::vector<Obj>& obj_map, const MorFn& mor) {
  if (obj_map.size() != src.num_objects()) return false;
  for (Obj x : obj_map) {
    if (x >= dst.num_objects()) return false;
  }
  const auto all = src.all_morphisms();
  for (Obj a = 0; a < src.num_objects(); ++a) {
    if (mor(src.id(a)) != dst.id(obj_map[a])) return false;
  }
  for (const auto& f : all) {
    const Mor img = mor(f);
    if (img.src != obj_map[f.src] || img.dst != obj_map[f.dst]) return false;
  }
  for (const auto& f : all) {
    for (Obj c = 0; c < src.num_objects(); ++c) {
      for (const auto& g : src.hom(f.dst, c)) {
        if (mor(src.compose(g, f)) != dst.compose(mor(g), mor(f))) {
          return false;
        }
      }
    }
  }
  return true;
}

std::optional<std::string> functor_defect(const FinGroupoid& src,
                                          const FinGroupoid& dst,
                                          const Functor& f) {
  if (f.obj.size() != src.num_objects() || f.gamma.size() != src.num_objects() ||
      f.phi.size() != src.num_components()) {
    return "wrong shape";
  }
  for (std::size_t c = 0; c < src.num_components(); ++c) {
    if (f.phi[c].size() != src.group(c).order()) return "wrong shape";
  }
  for (Obj o : f.obj) {
    if (o >= dst.num_objects()) return "object image outside the codomain";
  }
  for (Obj a = 0; a < src.num_objects(); ++a) {
    const Obj r = src.root(src.component(a));
    if (!dst.connected(f.obj[r], f.obj[a]) ||
        f.gamma[a] >= dst.group_at(f.obj[a]).order()) {
      return "morphism image outside the codomain";
    }
    if (a == r && f.gamma[a] != 0) return "root identity not sent to an identity";
  }
  for (std::size_t c = 0; c < src.num_components(); ++c) {
    for (Elem e : f.phi[c]) {
      if (e >= dst.group_at(f.obj[src.root(c)]).order()) {
        return "automorphism image outside the codomain group";
      }
    }
  }
  const MorFn mor = [&](const Mor& m) { return f.apply(src, dst, m); };
  if (!is_functor(src, dst, f.obj, mor)) return "functor laws fail";
  return std::nullopt;
}

bool is_natural(const FinGroupoid& src, const FinGroupoid& dst,
                const Functor& f, const Functor& g, const NatTrans& theta) {
  if (theta.size() != src.num_objects()) return false;
  for (Obj a = 0; a < src.num_objects(); ++a) {
    if (theta[a].src != f.obj[a] || theta[a].dst != g.obj[a]) return false;
  }
  for (const auto& m : src.generators()) {
    if (dst.compose(g.apply(src, dst, m), theta[m.src]) !=
        dst.compose(theta[m.dst], f.apply(src, dst, m))) {
      return false;
    }
  }
  return true;
}

std::vector<std::vector<Mor>> natural_root_choices(const FinGroupoid& src,
                                           const FinGroupoid& dst,
                                           const Functor& f,
                                           const Functor& g) {
  std::vector<std::vector<Mor>> out(src.num_components());
  for (std::uint32_t c = 0; c < src.num_components(); ++c) {
    const Obj r = src.root(c);
    for (const auto& t : dst.hom(f.obj[r], g.obj[r])) {
      bool ok = true;
      for (Elem x : src.group(c).generators()) {
        const Mor m{r, r, x};
        if (dst.compose(g.apply(src, dst, m), t) !=
            dst.compose(t, f.apply(src, dst, m))) {
          ok = false;
          break;
        }
      }
      if (ok) out[c].push_back(t);
    }
  }
  return out;
}

NatTrans extend_natural(const FinGroupoid& src, const FinGroupoid& dst,
                           const Functor& f, const Functor& g,
                           const std::vector<Mor>& at_root) {
  NatTrans theta(src.num_objects());
  for (Obj a = 0; a < src.num_objects(); ++a) {
    const Mor ga = src.gamma(a);
    theta[a] = dst.compose(
        g.apply(src, dst, ga),
        dst.compose(at_root[src.component(a)],
                    dst.inverse(f.apply(src, dst, ga))));
  }
  return theta;
}

std::optional<NatTrans> find_natural_iso(const FinGroupoid& src,
                                         const FinGroupoid& dst,
                                         const Functor& f, const Functor& g) {
  for (Obj a = 0; a < src.num_objects(); ++a) {
    if (!dst.connected(f.obj[a], g.obj[a])) return std::nullopt;
  }
  auto choices = natural_root_choices(src, dst, f, g);
  std::vector<Mor> at_root;
  for (const auto& c : choices) {
    if (c.empty()) return std::nullopt;
    at_root.push_back(c.front());
  }
  return extend_natural(src, dst, f, g, at_root);
}

std::vector<NatTrans> natural_isos(const FinGroupoid& src,
                                   const FinGroupoid& dst, const Functor& f,
                                   const Functor& g) {
  std::vector<NatTrans> out;
  for (Obj a = 0; a < src.num_objects(); ++a) {
    if (!dst.connected(f.obj[a], g.obj[a])) return out;
  }
  auto choices = natural_root_choices(src, dst, f, g);
  for (const auto& c : choices) {
    if (c.empty()) return out;
  }
  std::vector<std::size_t> pick(choices.size(), 0);
  while (true) {
    std::vector<Mor> at_root;
    for (std::size_t c = 0; c < choices.size(); ++c) {
      at_root.push_back(choices[c][pick[c]]);
    }
    out.push_back(extend_natural(src, dst, f, g, at_root));
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == choices[i].size()) {
      pick[i] = 0;
      ++i;
    }
    if (i == pick.size()) return out;
  }
}

std::optional<Equivalence> groupoid_equivalent(const FinGroupoid& g,
                                               const FinGroupoid& h,
                                               std::size_t max_steps) {
  if (g.num_components() != h.num_components()) return std::nullopt;
  const std::size_t n = g.num_components();
  std::vector<int> match(n, -1);
  std::vector<bool> used(n, false);
  std::vector<std::vector<Elem>> isos(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t d = 0; d < n; ++d) {
      if (used[d]) continue;
      auto iso = group_isomorphism(g.group(c), h.group(d), max_steps);
      if (iso) {
        match[c] = static_cast<int>(d);
        used[d] = true;
        isos[c] = std::move(*iso);
        break;
      }
    }
    if (match[c] < 0) return std::nullopt;
  }
  Equivalence eq;
  eq.forward.obj.resize(g.num_objects());
  eq.forward.gamma.assign(g.num_objects(), 0);
  for (Obj a = 0; a < g.num_objects(); ++a) {
    eq.forward.obj[a] = h.root(static_cast<std::uint32_t>(match[g.component(a)]));
  }
  eq.forward.phi = isos;
  std::vector<std::uint32_t> back(n);
  for (std::size_t c = 0; c < n; ++c) back[static_cast<std::size_t>(match[c])] = static_cast<std::uint32_t>(c);
  eq.backward.obj.resize(h.num_objects());
  eq.backward.gamma.assign(h.num_objects(), 0);
  for (Obj b = 0; b < h.num_objects(); ++b) {
    eq.backward.obj[b] = g.root(back[h.component(b)]);
  }
  eq.backward.phi.resize(n);
  for (std::size_t d = 0; d < n; ++d) {
    const auto& iso = isos[back[d]];
    eq.backward.phi[d].assign(iso.size(), 0);
    for (Elem x = 0; x < iso.size(); ++x) eq.backward.phi[d][iso[x]] = x;
  }
  return eq;
}

// ---------------------------------------------------------------------------
// Normalization

Normalized::Normalized(RawGroupoid raw) : raw_(std::move(raw)) {
  const std::size_t n = raw_.num_objects;
  std::vector<std::uint32_t> comp(n);
  std::vector<Obj> roots;
  gamma_.resize(n);
  for (Obj a = 0; a < n; ++a) {
    bool placed = false;
    for (std::uint32_t c = 0; c < roots.size() && !placed; ++c) {
      if (auto k = raw_.find(roots[c], a)) {
        comp[a] = c;
        gamma_[a] = std::move(*k);
        placed = true;
      }
    }
    if (!placed) {
      comp[a] = static_cast<std::uint32_t>(roots.size());
      roots.push_back(a);
      gamma_[a] = raw_.identity(a);
    }
  }
  gamma_inv_.resize(n);
  for (Obj a = 0; a < n; ++a) {
    gamma_inv_[a] = raw_.inverse(roots[comp[a]], a, gamma_[a]);
  }
  std::vector<FinGroup> groups;
  root_aut_.resize(roots.size());
  index_.resize(roots.size());
  for (std::uint32_t c = 0; c < roots.size(); ++c) {
    const Obj r = roots[c];
    auto keys = raw_.automorphisms(r);
    const Key id = raw_.identity(r);
    auto it = std::find(keys.begin(), keys.end(), id);
    if (it == keys.end()) throw_usage("normalization: identity missing");
    std::rotate(keys.begin(), it, it + 1);
    const std::size_t order = keys.size();
    if (order > kMaxTableOrder) {
      throw SizeGuardError("automorphism group of order " +
                           std::to_string(order) + " exceeds the table bound");
    }
    for (Elem x = 0; x < order; ++x) index_[c].emplace(keys[x], x);
    std::vector<Elem> mul(order * order);
    for (Elem x = 0; x < order; ++x) {
      for (Elem y = 0; y < order; ++y) {
        mul[x * order + y] = index_[c].at(raw_.compose(r, r, r, keys[x], keys[y]));
      }
    }
    groups.push_back(FinGroup::from_table(order, std::move(mul)));
    root_aut_[c] = std::move(keys);
  }
  groupoid_ = FinGroupoid(std::move(comp), std::move(roots), std::move(groups));
}

Mor Normalized::to_normal(Obj a, Obj b, const Key& m) const {
  const auto c = groupoid_.component(a);
  if (groupoid_.component(b) != c) {
    throw_usage("normalization: morphism between disconnected objects");
  }
  const Obj r = groupoid_.root(c);
  const Key t = raw_.compose(r, a, b, m, gamma_[a]);
  const Key x = raw_.compose(r, b, r, gamma_inv_[b], t);
  return Mor{a, b, index_[c].at(x)};
}

Key Normalized::to_raw(const Mor& m) const {
  const auto c = groupoid_.component(m.src);
  const Obj r = groupoid_.root(c);
  const Key t = raw_.compose(m.src, r, r, root_aut_[c][m.elem],
                            gamma_inv_[m.src]);
  return raw_.compose(m.src, r, m.dst, gamma_[m.dst], t);
}

}  // namespace hfol::gpd
