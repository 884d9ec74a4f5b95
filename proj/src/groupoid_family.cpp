#include "hfol/groupoid_family.hpp"

#include <numeric>

#include "hfol/error.hpp"

namespace hfol::gpd {

namespace {

void guard(std::size_t count, const FamilyOptions& opts, const char* what) {
  if (count > opts.max_fiber) {
    throw SizeGuardError(std::string(what) + " fiber would have " +
                         std::to_string(count) + " objects, above the bound " +
                         std::to_string(opts.max_fiber));
  }
}

// Saturating product for size estimates.
std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  constexpr std::size_t kCap = std::size_t{1} << 62;
  if (a > kCap / b) return kCap;
  return a * b;
}

Functor empty_functor() { return Functor{}; }

Functor terminal_functor() { return Functor{{0}, {0}, {{0}}}; }

// Functor into the terminal groupoid.
Functor to_terminal(const FinGroupoid& g) {
  Functor f;
  f.obj.assign(g.num_objects(), 0);
  f.gamma.assign(g.num_objects(), 0);
  f.phi.resize(g.num_components());
  for (std::size_t c = 0; c < g.num_components(); ++c) {
    f.phi[c].assign(g.group(c).order(), 0);
  }
  return f;
}

Functor product_functor(const FinGroupoid& a1, const FinGroupoid& a2,
                        const FinGroupoid& b1, const FinGroupoid& b2,
                        const Functor& f1, const Functor& f2) {
  const FinGroupoid src = FinGroupoid::product(a1, a2);
  const FinGroupoid dst = FinGroupoid::product(b1, b2);
  std::vector<Obj> obj(src.num_objects());
  for (Obj o = 0; o < obj.size(); ++o) {
    auto [x, y] = FinGroupoid::split_object(a2, o);
    obj[o] = FinGroupoid::pair_object(b2, f1.obj[x], f2.obj[y]);
  }
  return make_functor(src, dst, obj, [&](const Mor& m) {
    auto [m1, m2] = FinGroupoid::split_mor(a1, a2, m);
    return FinGroupoid::pair_mor(b1, b2, f1.apply(a1, b1, m1),
                                 f2.apply(a2, b2, m2));
  });
}

Functor sum_functor(const FinGroupoid& a1, const FinGroupoid& a2,
                    const FinGroupoid& b1, const FinGroupoid& b2,
                    const Functor& f1, const Functor& f2) {
  const FinGroupoid src = FinGroupoid::coproduct(a1, a2);
  const FinGroupoid dst = FinGroupoid::coproduct(b1, b2);
  const auto n1 = static_cast<Obj>(a1.num_objects());
  const auto m1 = static_cast<Obj>(b1.num_objects());
  std::vector<Obj> obj(src.num_objects());
  for (Obj o = 0; o < obj.size(); ++o) {
    obj[o] = o < n1 ? f1.obj[o] : m1 + f2.obj[o - n1];
  }
  return make_functor(src, dst, obj, [&](const Mor& m) {
    if (m.src < n1) return f1.apply(a1, b1, m);
    Mor r = f2.apply(a2, b2, Mor{m.src - n1, m.dst - n1, m.elem});
    return Mor{r.src + m1, r.dst + m1, r.elem};
  });
}

}  // namespace

// ---------------------------------------------------------------------------
// Family

Family::Family(BasePtr base, std::vector<FinGroupoid> fibers,
               TransportFn direct, FamilyData data)
    : base_(std::move(base)),
      fibers_(std::move(fibers)),
      direct_(std::move(direct)),
      data_(std::move(data)) {
  if (fibers_.size() != base_->num_objects()) {
    throw_usage("family: one fiber per base object required");
  }
}

const Functor& Family::transport(const Mor& m) const {
  auto it = memo_.find(m);
  if (it != memo_.end()) return it->second;
  Functor f = direct_(*this, m);
  return memo_.emplace(m, std::move(f)).first->second;
}

Mor Family::transport_mor(const Mor& m, const Mor& f) const {
  return transport(m).apply(fibers_[m.src], fibers_[m.dst], f);
}

bool check_split(const Family& p) {
  const FinGroupoid& base = p.base();
  const auto all = base.all_morphisms();
  for (const auto& m : all) {
    const Functor& t = p.transport(m);
    const auto& src = p.fiber(m.src);
    const auto& dst = p.fiber(m.dst);
    if (!is_functor(src, dst, t.obj,
                    [&](const Mor& f) { return t.apply(src, dst, f); })) {
      return false;
    }
    if (src.num_objects() != dst.num_objects()) return false;
  }
  for (Obj a = 0; a < base.num_objects(); ++a) {
    if (!(p.transport(base.id(a)) == identity_functor(p.fiber(a)))) {
      return false;
    }
  }
  for (const auto& f : all) {
    for (Obj c = 0; c < base.num_objects(); ++c) {
      for (const auto& g : base.hom(f.dst, c)) {
        const Functor lhs = p.transport(base.compose(g, f));
        const Functor rhs = compose(p.fiber(f.src), p.fiber(f.dst),
                                    p.fiber(c), p.transport(g),
                                    p.transport(f));
        if (!(lhs == rhs)) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Vertical maps

FamMor make_fammor(FamilyPtr dom, FamilyPtr cod, const FunctorFn& at,
                   const CoherenceFn& coh) {
  FamMor f;
  const FinGroupoid& base = dom->base();
  f.at.resize(base.num_objects());
  for (Obj a = 0; a < base.num_objects(); ++a) f.at[a] = at(a);
  auto value = [&](const Mor& m, Obj p) {
    if (coh) return coh(m, p);
    const Obj q = f.at[m.dst].obj[dom->transport_obj(m, p)];
    return Mor{q, q, 0};
  };
  f.coh_gamma.resize(base.num_objects());
  for (Obj a = 0; a < base.num_objects(); ++a) {
    const Obj r = base.root(base.component(a));
    const std::size_t n = dom->fiber(r).num_objects();
    for (Obj p = 0; p < n; ++p) {
      f.coh_gamma[a].push_back(value(base.gamma(a), p));
    }
  }
  f.coh_root.resize(base.num_components());
  for (std::uint32_t c = 0; c < base.num_components(); ++c) {
    const Obj r = base.root(c);
    const std::size_t n = dom->fiber(r).num_objects();
    f.coh_root[c].resize(base.group(c).order());
    for (Elem x = 0; x < base.group(c).order(); ++x) {
      for (Obj p = 0; p < n; ++p) {
        f.coh_root[c][x].push_back(value(Mor{r, r, x}, p));
      }
    }
  }
  f.dom = std::move(dom);
  f.cod = std::move(cod);
  return f;
}

Mor coherence(const FamMor& f, const Mor& m, Obj q) {
  const Family& P = *f.dom;
  const Family& Q = *f.cod;
  const FinGroupoid& base = P.base();
  const auto c = base.component(m.src);
  const Obj r = base.root(c);
  const Obj a = m.src, b = m.dst;
  const Mor ga_inv{a, r, 0};
  const Mor gb{r, b, 0};
  const Mor x{r, r, m.elem};
  const Mor gbx{r, b, m.elem};
  // f_{γ_a⁻¹}(q) = Q(γ_a⁻¹)(f_{γ_a}(P(γ_a⁻¹) q))⁻¹
  const Obj p1 = P.transport_obj(ga_inv, q);
  const Mor first = Q.fiber(r).inverse(
      Q.transport_mor(ga_inv, f.coh_gamma[a][p1]));
  const Mor second = f.coh_root[c][m.elem][p1];
  const Obj p2 = P.transport_obj(x, p1);
  const Mor third = f.coh_gamma[b][p2];
  const FinGroupoid& qb = Q.fiber(b);
  return qb.compose(third, qb.compose(Q.transport_mor(gb, second),
                                      Q.transport_mor(gbx, first)));
}

Mor apply_at(const FamMor& f, Obj a, const Mor& m) {
  return f.at[a].apply(f.dom->fiber(a), f.cod->fiber(a), m);
}

bool check_fammor(const FamMor& f) {
  const Family& P = *f.dom;
  const Family& Q = *f.cod;
  const FinGroupoid& base = P.base();
  for (Obj a = 0; a < base.num_objects(); ++a) {
    const auto& pa = P.fiber(a);
    const auto& qa = Q.fiber(a);
    if (f.at[a].obj.size() != pa.num_objects()) return false;
    if (!is_functor(pa, qa, f.at[a].obj,
                    [&](const Mor& m) { return apply_at(f, a, m); })) {
      return false;
    }
  }
  const auto all = base.all_morphisms();
  for (const auto& m : all) {
    const auto& pa = P.fiber(m.src);
    const auto& qb = Q.fiber(m.dst);
    for (Obj p = 0; p < pa.num_objects(); ++p) {
      const Mor h = coherence(f, m, p);
      if (h.src != Q.transport_obj(m, f.at[m.src].obj[p]) ||
          h.dst != f.at[m.dst].obj[P.transport_obj(m, p)]) {
        return false;
      }
      if (m.src == m.dst && m.elem == 0 && h != qb.id(h.src)) return false;
    }
    for (const auto& phi : pa.all_morphisms()) {
      const Mor lhs = qb.compose(coherence(f, m, phi.dst),
                                 Q.transport_mor(m, apply_at(f, m.src, phi)));
      const Mor rhs = qb.compose(apply_at(f, m.dst, P.transport_mor(m, phi)),
                                 coherence(f, m, phi.src));
      if (lhs != rhs) return false;
    }
  }
  for (const auto& m1 : all) {
    for (Obj c = 0; c < base.num_objects(); ++c) {
      for (const auto& m2 : base.hom(m1.dst, c)) {
        const auto& qc = Q.fiber(c);
        for (Obj p = 0; p < P.fiber(m1.src).num_objects(); ++p) {
          const Mor lhs = coherence(f, base.compose(m2, m1), p);
          const Mor rhs =
              qc.compose(coherence(f, m2, P.transport_obj(m1, p)),
                         Q.transport_mor(m2, coherence(f, m1, p)));
          if (lhs != rhs) return false;
        }
      }
    }
  }
  return true;
}

bool homotopic(const FamMor& f, const FamMor& g) {
  if (f == g) return true;
  const Family& P = *f.dom;
  const Family& Q = *f.cod;
  const FinGroupoid& base = P.base();
  for (std::uint32_t c = 0; c < base.num_components(); ++c) {
    const Obj r = base.root(c);
    const auto& pr = P.fiber(r);
    const auto& qr = Q.fiber(r);
    const auto candidates = natural_isos(pr, qr, f.at[r], g.at[r]);
    bool found = false;
    for (const auto& theta : candidates) {
      bool ok = true;
      for (Elem x : base.group(c).generators()) {
        const Mor m{r, r, x};
        for (Obj p = 0; p < pr.num_objects() && ok; ++p) {
          const Mor lhs = qr.compose(coherence(g, m, p),
                                     Q.transport_mor(m, theta[p]));
          const Mor rhs = qr.compose(theta[P.transport_obj(m, p)],
                                     coherence(f, m, p));
          ok = lhs == rhs;
        }
        if (!ok) break;
      }
      if (ok) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Fiberwise structure

FamilyPtr fam_top(const BasePtr& base) {
  std::vector<FinGroupoid> fibers(base->num_objects(), FinGroupoid::terminal());
  return std::make_shared<Family>(
      base, std::move(fibers),
      [](const Family&, const Mor&) { return terminal_functor(); });
}

FamilyPtr fam_bot(const BasePtr& base) {
  std::vector<FinGroupoid> fibers(base->num_objects());
  return std::make_shared<Family>(
      base, std::move(fibers),
      [](const Family&, const Mor&) { return empty_functor(); });
}

FamilyPtr fam_and(const FamilyPtr& p, const FamilyPtr& q,
                  const FamilyOptions& opts) {
  std::vector<FinGroupoid> fibers;
  for (Obj a = 0; a < p->base().num_objects(); ++a) {
    guard(sat_mul(p->fiber(a).num_objects(), q->fiber(a).num_objects()), opts,
          "conjunction");
    fibers.push_back(FinGroupoid::product(p->fiber(a), q->fiber(a)));
  }
  return std::make_shared<Family>(
      p->base_ptr(), std::move(fibers),
      [p, q](const Family&, const Mor& m) {
        return product_functor(p->fiber(m.src), q->fiber(m.src),
                               p->fiber(m.dst), q->fiber(m.dst),
                               p->transport(m), q->transport(m));
      },
      ProductData{p, q});
}

FamilyPtr fam_or(const FamilyPtr& p, const FamilyPtr& q) {
  std::vector<FinGroupoid> fibers;
  for (Obj a = 0; a < p->base().num_objects(); ++a) {
    fibers.push_back(FinGroupoid::coproduct(p->fiber(a), q->fiber(a)));
  }
  return std::make_shared<Family>(
      p->base_ptr(), std::move(fibers),
      [p, q](const Family&, const Mor& m) {
        return sum_functor(p->fiber(m.src), q->fiber(m.src), p->fiber(m.dst),
                           q->fiber(m.dst), p->transport(m), q->transport(m));
      },
      SumData{p, q});
}

FamilyPtr fam_reindex(const BasePtr& base, const Functor& u,
                      const FamilyPtr& p) {
  std::vector<FinGroupoid> fibers;
  for (Obj d = 0; d < base->num_objects(); ++d) {
    fibers.push_back(p->fiber(u.obj[d]));
  }
  return std::make_shared<Family>(
      base, std::move(fibers), [base, u, p](const Family&, const Mor& m) {
        return p->transport(u.apply(*base, p->base(), m));
      });
}

FamilyPtr fam_paths(const BasePtr& bb, const BasePtr& b) {
  std::vector<FinGroupoid> fibers;
  for (Obj o = 0; o < bb->num_objects(); ++o) {
    auto [x, y] = FinGroupoid::split_object(*b, o);
    fibers.push_back(FinGroupoid::discrete(b->hom_size(x, y)));
  }
  return std::make_shared<Family>(
      bb, std::move(fibers), [b](const Family& self, const Mor& m) {
        auto [k, k2] = FinGroupoid::split_mor(*b, *b, m);
        const auto& src = self.fiber(m.src);
        std::vector<Obj> obj(src.num_objects());
        for (Obj p = 0; p < obj.size(); ++p) {
          const Mor path{k.src, k2.src, p};
          obj[p] = b->compose(k2, b->compose(path, b->inverse(k))).elem;
        }
        Functor f;
        f.obj = obj;
        f.gamma.assign(obj.size(), 0);
        f.phi.assign(obj.size(), std::vector<Elem>{0});
        return f;
      });
}

// ---------------------------------------------------------------------------
// Exponentials

namespace {

// All group homomorphisms G → H, as element tables.
std::vector<std::vector<Elem>> group_homs(const FinGroup& g,
                                          const FinGroup& h) {
  std::vector<std::vector<Elem>> out;
  const auto& gens = g.generators();
  std::vector<Elem> pick(gens.size(), 0);
  const std::size_t n = g.order();
  std::vector<Elem> map(n);
  std::vector<bool> set(n);
  while (true) {
    std::fill(set.begin(), set.end(), false);
    map[0] = 0;
    set[0] = true;
    std::vector<Elem> queue{0};
    bool ok = true;
    for (std::size_t i = 0; i < queue.size() && ok; ++i) {
      const Elem e = queue[i];
      for (std::size_t k = 0; k < gens.size() && ok; ++k) {
        const Elem ge = g.mul(e, gens[k]);
        const Elem he = h.mul(map[e], pick[k]);
        if (set[ge]) {
          ok = map[ge] == he;
        } else {
          set[ge] = true;
          map[ge] = he;
          queue.push_back(ge);
        }
      }
    }
    if (ok) out.push_back(map);
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == h.order()) {
      pick[k] = 0;
      ++k;
    }
    if (k == pick.size()) return out;
  }
}

// Objects of each component of g, root first.
std::vector<std::vector<Obj>> component_members(const FinGroupoid& g) {
  std::vector<std::vector<Obj>> out(g.num_components());
  for (std::uint32_t c = 0; c < g.num_components(); ++c) {
    out[c].push_back(g.root(c));
  }
  for (Obj a = 0; a < g.num_objects(); ++a) {
    if (g.root(g.component(a)) != a) out[g.component(a)].push_back(a);
  }
  return out;
}

std::vector<Functor> enumerate_functors(const FinGroupoid& src,
                                        const FinGroupoid& dst,
                                        const FamilyOptions& opts) {
  const auto members = component_members(src);
  const auto dst_members = component_members(dst);
  // Per source component: list of (root image, hom table, per-member choices)
  struct Partial {
    std::vector<Obj> obj;
    std::vector<Elem> gamma;
    std::vector<Elem> phi;
  };
  std::vector<std::vector<Partial>> per_comp(src.num_components());
  std::size_t total = 1;
  for (std::uint32_t c = 0; c < src.num_components(); ++c) {
    const auto& mem = members[c];
    std::size_t count = 0;
    for (Obj y = 0; y < dst.num_objects(); ++y) {
      const auto& hgroup = dst.group_at(y);
      auto homs = group_homs(src.group(c), hgroup);
      const auto& ymem = dst_members[dst.component(y)];
      const std::size_t choices = ymem.size() * hgroup.order();
      std::size_t n = homs.size();
      for (std::size_t i = 1; i < mem.size(); ++i) n = sat_mul(n, choices);
      count += n;
      guard(sat_mul(total, count), opts, "implication");
      for (const auto& hom : homs) {
        std::vector<std::size_t> pick(mem.size(), 0);
        while (true) {
          Partial part;
          part.obj.push_back(y);
          part.gamma.push_back(0);
          for (std::size_t i = 1; i < mem.size(); ++i) {
            part.obj.push_back(ymem[pick[i] / hgroup.order()]);
            part.gamma.push_back(static_cast<Elem>(pick[i] % hgroup.order()));
          }
          part.phi = hom;
          per_comp[c].push_back(std::move(part));
          std::size_t i = 1;
          while (i < pick.size() && ++pick[i] == choices) {
            pick[i] = 0;
            ++i;
          }
          if (i >= pick.size()) break;
        }
      }
    }
    total = sat_mul(total, count);
  }
  guard(total, opts, "implication");
  std::vector<Functor> out;
  std::vector<std::size_t> pick(src.num_components(), 0);
  for (const auto& pc : per_comp) {
    if (pc.empty()) return out;
  }
  while (true) {
    Functor f;
    f.obj.assign(src.num_objects(), 0);
    f.gamma.assign(src.num_objects(), 0);
    f.phi.resize(src.num_components());
    for (std::uint32_t c = 0; c < src.num_components(); ++c) {
      const Partial& part = per_comp[c][pick[c]];
      for (std::size_t i = 0; i < members[c].size(); ++i) {
        f.obj[members[c][i]] = part.obj[i];
        f.gamma[members[c][i]] = part.gamma[i];
      }
      f.phi[c] = part.phi;
    }
    out.push_back(std::move(f));
    std::size_t c = 0;
    while (c < pick.size() && ++pick[c] == per_comp[c].size()) {
      pick[c] = 0;
      ++c;
    }
    if (c == pick.size()) return out;
  }
}

struct ExpFiberData {
  FinGroupoid src, dst;
  std::vector<Functor> objects;
};

std::shared_ptr<const Normalized> normalize_exp(
    std::shared_ptr<const ExpFiberData> d) {
  RawGroupoid raw;
  raw.num_objects = d->objects.size();
  const std::size_t comps = d->src.num_components();
  raw.identity = [comps](Obj) { return Key(comps, 0); };
  raw.find = [d](Obj a, Obj b) -> std::optional<Key> {
    const auto& f = d->objects[a];
    const auto& g = d->objects[b];
    for (Obj p = 0; p < d->src.num_objects(); ++p) {
      if (!d->dst.connected(f.obj[p], g.obj[p])) return std::nullopt;
    }
    auto choices = natural_root_choices(d->src, d->dst, f, g);
    Key k;
    for (const auto& c : choices) {
      if (c.empty()) return std::nullopt;
      k.push_back(c.front().elem);
    }
    return k;
  };
  raw.automorphisms = [d](Obj a) {
    const auto& f = d->objects[a];
    auto choices = natural_root_choices(d->src, d->dst, f, f);
    std::vector<Key> out;
    std::vector<std::size_t> pick(choices.size(), 0);
    while (true) {
      Key k;
      for (std::size_t c = 0; c < choices.size(); ++c) {
        k.push_back(choices[c][pick[c]].elem);
      }
      out.push_back(std::move(k));
      std::size_t c = 0;
      while (c < pick.size() && ++pick[c] == choices[c].size()) {
        pick[c] = 0;
        ++c;
      }
      if (c == pick.size()) return out;
    }
  };
  raw.compose = [d](Obj a, Obj, Obj, const Key& g, const Key& f) {
    Key out(g.size());
    for (std::uint32_t c = 0; c < g.size(); ++c) {
      const Obj y = d->objects[a].obj[d->src.root(c)];
      out[c] = d->dst.group_at(y).mul(g[c], f[c]);
    }
    return out;
  };
  raw.inverse = [d](Obj a, Obj, const Key& f) {
    Key out(f.size());
    for (std::uint32_t c = 0; c < f.size(); ++c) {
      const Obj y = d->objects[a].obj[d->src.root(c)];
      out[c] = d->dst.group_at(y).inv(f[c]);
    }
    return out;
  };
  return std::make_shared<const Normalized>(std::move(raw));
}

std::vector<Mor> key_to_roots(const FinGroupoid& src, const Functor& f,
                              const Functor& g, const Key& k) {
  std::vector<Mor> out;
  for (std::uint32_t c = 0; c < src.num_components(); ++c) {
    const Obj r = src.root(c);
    out.push_back(Mor{f.obj[r], g.obj[r], k[c]});
  }
  return out;
}

}  // namespace

FamilyPtr fam_implies(const FamilyPtr& p, const FamilyPtr& q,
                      const FamilyOptions& opts) {
  ExpData data{p, q, {}};
  std::vector<FinGroupoid> fibers;
  for (Obj a = 0; a < p->base().num_objects(); ++a) {
    auto d = std::make_shared<ExpFiberData>();
    d->src = p->fiber(a);
    d->dst = q->fiber(a);
    d->objects = enumerate_functors(d->src, d->dst, opts);
    ExpFiber fiber;
    fiber.objects = d->objects;
    for (Obj i = 0; i < fiber.objects.size(); ++i) {
      fiber.index.emplace(fiber.objects[i], i);
    }
    fiber.norm = normalize_exp(d);
    fibers.push_back(fiber.norm->groupoid());
    data.fibers.push_back(std::move(fiber));
  }
  auto shared = std::make_shared<ExpData>(data);
  return std::make_shared<Family>(
      p->base_ptr(), std::move(fibers),
      [shared](const Family& self, const Mor& m) {
        const Family& P = *shared->dom;
        const Family& Q = *shared->cod;
        const auto& pa = P.fiber(m.src);
        const auto& pb = P.fiber(m.dst);
        const auto& qa = Q.fiber(m.src);
        const auto& qb = Q.fiber(m.dst);
        const Functor& pm = P.transport(m);
        const Functor pm_inv = inverse_iso(pa, pb, pm);
        const Functor& qm = Q.transport(m);
        const ExpFiber& fa = shared->fibers[m.src];
        const ExpFiber& fb = shared->fibers[m.dst];
        std::vector<Functor> moved;
        std::vector<Obj> obj;
        for (const auto& f : fa.objects) {
          Functor g = compose(pb, qa, qb, qm, compose(pb, pa, qa, f, pm_inv));
          obj.push_back(fb.index.at(g));
          moved.push_back(std::move(g));
        }
        return make_functor(
            self.fiber(m.src), self.fiber(m.dst), obj, [&](const Mor& n) {
              const Functor& f = fa.objects[n.src];
              const Functor& g = fa.objects[n.dst];
              const NatTrans theta = extend_natural(
                  pa, qa, f, g, key_to_roots(pa, f, g, fa.norm->to_raw(n)));
              Key k;
              for (std::uint32_t c = 0; c < pb.num_components(); ++c) {
                const Obj r = pb.root(c);
                k.push_back(qm.apply(qa, qb, theta[pm_inv.obj[r]]).elem);
              }
              return fb.norm->to_normal(obj[n.src], obj[n.dst], k);
            });
      },
      data);
}

// ---------------------------------------------------------------------------
// Quantifiers

namespace {

// Shared description of a quantifier over base × factor.
struct QuantCtx {
  BasePtr base, factor;
  FamilyPtr body;

  Obj at(Obj a, Obj b) const { return FinGroupoid::pair_object(*factor, a, b); }
  Mor along(const Mor& k, const Mor& g) const {
    return FinGroupoid::pair_mor(*base, *factor, k, g);
  }
  // body(id_a, g)
  const Functor& vertical(Obj a, const Mor& g) const {
    return body->transport(along(base->id(a), g));
  }
  const FinGroupoid& fiber(Obj a, Obj b) const {
    return body->fiber(at(a, b));
  }
};

struct ExistsFiberData {
  QuantCtx q;
  Obj a;
  std::vector<std::pair<Obj, Obj>> objects;
};

std::shared_ptr<const Normalized> normalize_exists(
    std::shared_ptr<const ExistsFiberData> d) {
  RawGroupoid raw;
  raw.num_objects = d->objects.size();
  raw.identity = [](Obj) { return Key{0, 0}; };
  raw.find = [d](Obj i, Obj j) -> std::optional<Key> {
    auto [b, p] = d->objects[i];
    auto [b2, p2] = d->objects[j];
    const FinGroupoid& fac = *d->q.factor;
    for (const auto& g : fac.hom(b, b2)) {
      const Obj t = d->q.vertical(d->a, g).obj[p];
      if (d->q.fiber(d->a, b2).connected(t, p2)) return Key{g.elem, 0};
    }
    return std::nullopt;
  };
  raw.automorphisms = [d](Obj i) {
    auto [b, p] = d->objects[i];
    std::vector<Key> out;
    for (const auto& g : d->q.factor->hom(b, b)) {
      const Obj t = d->q.vertical(d->a, g).obj[p];
      const auto& fib = d->q.fiber(d->a, b);
      for (const auto& phi : fib.hom(t, p)) out.push_back(Key{g.elem, phi.elem});
    }
    return out;
  };
  // (g2, φ2) ∘ (g1, φ1) = (g2 g1, φ2 ∘ P(id, g2)(φ1))
  raw.compose = [d](Obj i, Obj j, Obj k, const Key& second, const Key& first) {
    const FinGroupoid& fac = *d->q.factor;
    auto [b1, p1] = d->objects[i];
    auto [b2, p2] = d->objects[j];
    auto [b3, p3] = d->objects[k];
    const Mor g1{b1, b2, first[0]};
    const Mor g2{b2, b3, second[0]};
    const Obj t1 = d->q.vertical(d->a, g1).obj[p1];
    const Mor phi1{t1, p2, first[1]};
    const Obj t2 = d->q.vertical(d->a, g2).obj[p2];
    const Mor phi2{t2, p3, second[1]};
    const Mor moved = d->q.vertical(d->a, g2).apply(d->q.fiber(d->a, b2),
                                                    d->q.fiber(d->a, b3), phi1);
    const Mor phi = d->q.fiber(d->a, b3).compose(phi2, moved);
    return Key{fac.compose(g2, g1).elem, phi.elem};
  };
  // (g, φ)⁻¹ = (g⁻¹, P(id, g⁻¹)(φ⁻¹))
  raw.inverse = [d](Obj i, Obj j, const Key& f) {
    const FinGroupoid& fac = *d->q.factor;
    auto [b1, p1] = d->objects[i];
    auto [b2, p2] = d->objects[j];
    const Mor g{b1, b2, f[0]};
    const Mor gi = fac.inverse(g);
    const Obj t = d->q.vertical(d->a, g).obj[p1];
    const Mor phi_inv = d->q.fiber(d->a, b2).inverse(Mor{t, p2, f[1]});
    const Mor moved = d->q.vertical(d->a, gi).apply(
        d->q.fiber(d->a, b2), d->q.fiber(d->a, b1), phi_inv);
    return Key{gi.elem, moved.elem};
  };
  return std::make_shared<const Normalized>(std::move(raw));
}

}  // namespace

FamilyPtr fam_exists(const BasePtr& base, const BasePtr& factor,
                     const FamilyPtr& p, const FamilyOptions& opts) {
  QuantCtx q{base, factor, p};
  QuantData data{p, factor, {}, {}};
  std::vector<FinGroupoid> fibers;
  for (Obj a = 0; a < base->num_objects(); ++a) {
    auto d = std::make_shared<ExistsFiberData>();
    d->q = q;
    d->a = a;
    std::size_t count = 0;
    for (Obj b = 0; b < factor->num_objects(); ++b) {
      count += q.fiber(a, b).num_objects();
    }
    guard(count, opts, "existential");
    ExistsFiber fiber;
    for (Obj b = 0; b < factor->num_objects(); ++b) {
      for (Obj x = 0; x < q.fiber(a, b).num_objects(); ++x) {
        fiber.index.emplace(std::make_pair(b, x),
                            static_cast<Obj>(fiber.objects.size()));
        fiber.objects.emplace_back(b, x);
      }
    }
    d->objects = fiber.objects;
    fiber.norm = normalize_exists(d);
    fibers.push_back(fiber.norm->groupoid());
    data.exists.push_back(std::move(fiber));
  }
  auto shared = std::make_shared<QuantData>(data);
  return std::make_shared<Family>(
      base, std::move(fibers),
      [shared, q](const Family& self, const Mor& k) {
        const ExistsFiber& fa = shared->exists[k.src];
        const ExistsFiber& fb = shared->exists[k.dst];
        std::vector<Obj> obj;
        for (const auto& [b, x] : fa.objects) {
          const Obj t = q.body->transport(q.along(k, q.factor->id(b))).obj[x];
          obj.push_back(fb.index.at({b, t}));
        }
        return make_functor(
            self.fiber(k.src), self.fiber(k.dst), obj, [&](const Mor& n) {
              const Key key = fa.norm->to_raw(n);
              const Obj b2 = fa.objects[n.dst].first;
              const auto& tr = q.body->transport(q.along(k, q.factor->id(b2)));
              const Obj p2 = fa.objects[n.dst].second;
              const Obj b1 = fa.objects[n.src].first;
              const Obj t1 =
                  q.vertical(k.src, Mor{b1, b2, key[0]}).obj[fa.objects[n.src].second];
              const Mor phi = tr.apply(q.fiber(k.src, b2), q.fiber(k.dst, b2),
                                       Mor{t1, p2, key[1]});
              return fb.norm->to_normal(obj[n.src], obj[n.dst],
                                        Key{key[0], phi.elem});
            });
      },
      data);
}

namespace {

struct ForallFiberData {
  QuantCtx q;
  Obj a;
  std::vector<Section> objects;
  std::vector<std::vector<Obj>> members;  // factor components
};

// s(g) for an arbitrary factor morphism g : b → b', a morphism in the fiber
// over (a, b') from P(id, g) s(b) to s(b').
Mor section_mor(const QuantCtx& q, Obj a, const Section& s, const Mor& g) {
  const FinGroupoid& fac = *q.factor;
  const auto d = fac.component(g.src);
  const Obj r = fac.root(d);
  const Obj b = g.src, b2 = g.dst;
  // s(γ_b⁻¹) = P(id, γ_b⁻¹)(s(γ_b))⁻¹
  const Mor sgb{q.vertical(a, fac.gamma(b)).obj[s.obj[r]], s.obj[b],
                s.gamma[b]};
  const Mor gb_inv{b, r, 0};
  const Mor first = q.fiber(a, r).inverse(
      q.vertical(a, gb_inv).apply(q.fiber(a, b), q.fiber(a, r), sgb));
  const Mor x{r, r, g.elem};
  const Mor sx{q.vertical(a, x).obj[s.obj[r]], s.obj[r], s.aut[d][g.elem]};
  const Mor gb2{r, b2, 0};
  const Mor gb2x{r, b2, g.elem};
  const Mor sgb2{q.vertical(a, gb2).obj[s.obj[r]], s.obj[b2], s.gamma[b2]};
  const auto& fr = q.fiber(a, r);
  const auto& fb2 = q.fiber(a, b2);
  return fb2.compose(
      sgb2, fb2.compose(q.vertical(a, gb2).apply(fr, fb2, sx),
                        q.vertical(a, gb2x).apply(fr, fb2, first)));
}

// Valid root components θ_r : s(r) → s'(r) of a modification, per factor
// component.
std::vector<std::vector<Elem>> modification_choices(const QuantCtx& q, Obj a,
                                                    const Section& s,
                                                    const Section& t) {
  const FinGroupoid& fac = *q.factor;
  std::vector<std::vector<Elem>> out(fac.num_components());
  for (std::uint32_t d = 0; d < fac.num_components(); ++d) {
    const Obj r = fac.root(d);
    const auto& fr = q.fiber(a, r);
    for (const auto& theta : fr.hom(s.obj[r], t.obj[r])) {
      bool ok = true;
      for (Elem x : fac.group(d).generators()) {
        const Mor xm{r, r, x};
        const auto& tr = q.vertical(a, xm);
        const Mor sx{tr.obj[s.obj[r]], s.obj[r], s.aut[d][x]};
        const Mor tx{tr.obj[t.obj[r]], t.obj[r], t.aut[d][x]};
        if (fr.compose(tx, tr.apply(fr, fr, theta)) != fr.compose(theta, sx)) {
          ok = false;
          break;
        }
      }
      if (ok) out[d].push_back(theta.elem);
    }
  }
  return out;
}

std::vector<Section> enumerate_sections(const QuantCtx& q, Obj a,
                                        const FamilyOptions& opts) {
  const FinGroupoid& fac = *q.factor;
  const auto members = component_members(fac);
  std::vector<std::vector<Section>> per_comp(fac.num_components());
  std::size_t total = 1;
  for (std::uint32_t d = 0; d < fac.num_components(); ++d) {
    const Obj r = fac.root(d);
    const FinGroup& h = fac.group(d);
    const auto& fr = q.fiber(a, r);
    std::size_t count = 0;
    for (Obj p0 = 0; p0 < fr.num_objects(); ++p0) {
      // Cocycles s(x) : P(x) p0 → p0 via generator images.
      const auto& gens = h.generators();
      std::vector<std::vector<Elem>> gen_choices;
      bool possible = true;
      for (Elem x : gens) {
        const Obj t = q.vertical(a, Mor{r, r, x}).obj[p0];
        if (!fr.connected(t, p0)) {
          possible = false;
          break;
        }
        std::vector<Elem> c(fr.group_at(p0).order());
        std::iota(c.begin(), c.end(), 0u);
        gen_choices.push_back(std::move(c));
      }
      if (!possible) continue;
      std::vector<std::vector<Elem>> cocycles;
      std::vector<std::size_t> pick(gens.size(), 0);
      while (true) {
        std::vector<Elem> s(h.order(), 0);
        std::vector<bool> set(h.order(), false);
        set[0] = true;
        std::vector<Elem> queue{0};
        bool ok = true;
        for (std::size_t i = 0; i < queue.size() && ok; ++i) {
          const Elem e = queue[i];
          const Mor em{r, r, e};
          const auto& tre = q.vertical(a, em);
          for (std::size_t k = 0; k < gens.size() && ok; ++k) {
            const Elem ex = h.mul(e, gens[k]);
            // s(e x) = s(e) ∘ P(e)(s(x))
            const Obj tx = q.vertical(a, Mor{r, r, gens[k]}).obj[p0];
            const Mor sx{tx, p0, gen_choices[k][pick[k]]};
            const Mor se{tre.obj[p0], p0, s[e]};
            const Mor v = fr.compose(se, tre.apply(fr, fr, sx));
            if (set[ex]) {
              ok = s[ex] == v.elem;
            } else {
              set[ex] = true;
              s[ex] = v.elem;
              queue.push_back(ex);
            }
          }
        }
        if (ok) cocycles.push_back(std::move(s));
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == gen_choices[k].size()) {
          pick[k] = 0;
          ++k;
        }
        if (k == pick.size()) break;
      }
      if (cocycles.empty()) continue;
      // Choices for the other members: an object of the class of P(γ_b) p0
      // and a morphism into it.
      std::vector<std::vector<std::pair<Obj, Elem>>> member_choices;
      std::size_t n = cocycles.size();
      for (std::size_t i = 1; i < members[d].size(); ++i) {
        const Obj b = members[d][i];
        const auto& fb = q.fiber(a, b);
        const Obj t = q.vertical(a, fac.gamma(b)).obj[p0];
        std::vector<std::pair<Obj, Elem>> c;
        for (Obj y = 0; y < fb.num_objects(); ++y) {
          if (!fb.connected(t, y)) continue;
          for (Elem e = 0; e < fb.group_at(y).order(); ++e) c.emplace_back(y, e);
        }
        n = sat_mul(n, c.size());
        member_choices.push_back(std::move(c));
      }
      count += n;
      guard(sat_mul(total, count), opts, "universal");
      for (const auto& cocycle : cocycles) {
        std::vector<std::size_t> mp(member_choices.size(), 0);
        while (true) {
          Section s;
          s.obj.resize(members[d].size());
          s.gamma.resize(members[d].size());
          s.obj[0] = p0;
          s.gamma[0] = 0;
          for (std::size_t i = 1; i < members[d].size(); ++i) {
            s.obj[i] = member_choices[i - 1][mp[i - 1]].first;
            s.gamma[i] = member_choices[i - 1][mp[i - 1]].second;
          }
          s.aut = {cocycle};
          per_comp[d].push_back(std::move(s));
          std::size_t k = 0;
          while (k < mp.size() && ++mp[k] == member_choices[k].size()) {
            mp[k] = 0;
            ++k;
          }
          if (k == mp.size()) break;
        }
      }
    }
    total = sat_mul(total, count);
  }
  guard(total, opts, "universal");
  std::vector<Section> out;
  for (const auto& pc : per_comp) {
    if (pc.empty()) return out;
  }
  std::vector<std::size_t> pick(per_comp.size(), 0);
  while (true) {
    Section s;
    s.obj.assign(fac.num_objects(), 0);
    s.gamma.assign(fac.num_objects(), 0);
    s.aut.resize(fac.num_components());
    for (std::uint32_t d = 0; d < per_comp.size(); ++d) {
      const Section& part = per_comp[d][pick[d]];
      for (std::size_t i = 0; i < members[d].size(); ++i) {
        s.obj[members[d][i]] = part.obj[i];
        s.gamma[members[d][i]] = part.gamma[i];
      }
      s.aut[d] = part.aut[0];
    }
    out.push_back(std::move(s));
    std::size_t d = 0;
    while (d < pick.size() && ++pick[d] == per_comp[d].size()) {
      pick[d] = 0;
      ++d;
    }
    if (d == pick.size()) return out;
  }
}

std::shared_ptr<const Normalized> normalize_forall(
    std::shared_ptr<const ForallFiberData> d) {
  RawGroupoid raw;
  raw.num_objects = d->objects.size();
  const std::size_t comps = d->q.factor->num_components();
  raw.identity = [comps](Obj) { return Key(comps, 0); };
  raw.find = [d](Obj i, Obj j) -> std::optional<Key> {
    auto choices =
        modification_choices(d->q, d->a, d->objects[i], d->objects[j]);
    Key k;
    for (const auto& c : choices) {
      if (c.empty()) return std::nullopt;
      k.push_back(c.front());
    }
    return k;
  };
  raw.automorphisms = [d](Obj i) {
    auto choices =
        modification_choices(d->q, d->a, d->objects[i], d->objects[i]);
    std::vector<Key> out;
    std::vector<std::size_t> pick(choices.size(), 0);
    while (true) {
      Key k;
      for (std::size_t c = 0; c < choices.size(); ++c) {
        k.push_back(choices[c][pick[c]]);
      }
      out.push_back(std::move(k));
      std::size_t c = 0;
      while (c < pick.size() && ++pick[c] == choices[c].size()) {
        pick[c] = 0;
        ++c;
      }
      if (c == pick.size()) return out;
    }
  };
  raw.compose = [d](Obj i, Obj, Obj, const Key& g, const Key& f) {
    Key out(g.size());
    for (std::uint32_t c = 0; c < g.size(); ++c) {
      const Obj r = d->q.factor->root(c);
      const Obj y = d->objects[i].obj[r];
      out[c] = d->q.fiber(d->a, r).group_at(y).mul(g[c], f[c]);
    }
    return out;
  };
  raw.inverse = [d](Obj i, Obj, const Key& f) {
    Key out(f.size());
    for (std::uint32_t c = 0; c < f.size(); ++c) {
      const Obj r = d->q.factor->root(c);
      const Obj y = d->objects[i].obj[r];
      out[c] = d->q.fiber(d->a, r).group_at(y).inv(f[c]);
    }
    return out;
  };
  return std::make_shared<const Normalized>(std::move(raw));
}

// Transport of a section along k : a → a' of the base.
Section move_section(const QuantCtx& q, const Mor& k, const Section& s) {
  const FinGroupoid& fac = *q.factor;
  Section t = s;
  for (Obj b = 0; b < fac.num_objects(); ++b) {
    const auto& tr = q.body->transport(q.along(k, fac.id(b)));
    t.obj[b] = tr.obj[s.obj[b]];
    const Obj r = fac.root(fac.component(b));
    const Mor sg{q.vertical(k.src, fac.gamma(b)).obj[s.obj[r]], s.obj[b],
                 s.gamma[b]};
    t.gamma[b] = tr.apply(q.fiber(k.src, b), q.fiber(k.dst, b), sg).elem;
  }
  for (std::uint32_t d = 0; d < fac.num_components(); ++d) {
    const Obj r = fac.root(d);
    const auto& tr = q.body->transport(q.along(k, fac.id(r)));
    for (Elem x = 0; x < fac.group(d).order(); ++x) {
      const Mor sx{q.vertical(k.src, Mor{r, r, x}).obj[s.obj[r]], s.obj[r],
                   s.aut[d][x]};
      t.aut[d][x] = tr.apply(q.fiber(k.src, r), q.fiber(k.dst, r), sx).elem;
    }
  }
  return t;
}

}  // namespace

FamilyPtr fam_forall(const BasePtr& base, const BasePtr& factor,
                     const FamilyPtr& p, const FamilyOptions& opts) {
  QuantCtx q{base, factor, p};
  QuantData data{p, factor, {}, {}};
  std::vector<FinGroupoid> fibers;
  for (Obj a = 0; a < base->num_objects(); ++a) {
    auto d = std::make_shared<ForallFiberData>();
    d->q = q;
    d->a = a;
    d->objects = enumerate_sections(q, a, opts);
    ForallFiber fiber;
    fiber.objects = d->objects;
    for (Obj i = 0; i < fiber.objects.size(); ++i) {
      fiber.index.emplace(fiber.objects[i], i);
    }
    fiber.norm = normalize_forall(d);
    fibers.push_back(fiber.norm->groupoid());
    data.forall.push_back(std::move(fiber));
  }
  auto shared = std::make_shared<QuantData>(data);
  return std::make_shared<Family>(
      base, std::move(fibers),
      [shared, q](const Family& self, const Mor& k) {
        const ForallFiber& fa = shared->forall[k.src];
        const ForallFiber& fb = shared->forall[k.dst];
        std::vector<Obj> obj;
        for (const auto& s : fa.objects) {
          obj.push_back(fb.index.at(move_section(q, k, s)));
        }
        return make_functor(
            self.fiber(k.src), self.fiber(k.dst), obj, [&](const Mor& n) {
              const Key key = fa.norm->to_raw(n);
              const Section& s = fa.objects[n.src];
              const Section& t = fa.objects[n.dst];
              Key out;
              for (std::uint32_t d = 0; d < q.factor->num_components(); ++d) {
                const Obj r = q.factor->root(d);
                const auto& tr = q.body->transport(q.along(k, q.factor->id(r)));
                out.push_back(tr.apply(q.fiber(k.src, r), q.fiber(k.dst, r),
                                       Mor{s.obj[r], t.obj[r], key[d]})
                                  .elem);
              }
              return fb.norm->to_normal(obj[n.src], obj[n.dst], out);
            });
      },
      data);
}

// ---------------------------------------------------------------------------
// Morphism layer

FamMor fm_identity(const FamilyPtr& p) {
  return make_fammor(
      p, p, [&](Obj a) { return identity_functor(p->fiber(a)); }, nullptr);
}

FamMor fm_compose(const FamMor& g, const FamMor& f) {
  const Family& P = *f.dom;
  const Family& Q = *f.cod;
  const Family& R = *g.cod;
  return make_fammor(
      f.dom, g.cod,
      [&](Obj a) {
        return compose(P.fiber(a), Q.fiber(a), R.fiber(a), g.at[a], f.at[a]);
      },
      [&](const Mor& m, Obj p) {
        const Obj fp = f.at[m.src].obj[p];
        return R.fiber(m.dst).compose(apply_at(g, m.dst, coherence(f, m, p)),
                                      coherence(g, m, fp));
      });
}

FamMor fm_reindex(const FamilyPtr& dom, const FamilyPtr& cod, const Functor& u,
                  const FamMor& f) {
  const FinGroupoid& base = dom->base();
  const FinGroupoid& target = f.dom->base();
  return make_fammor(
      dom, cod, [&](Obj d) { return f.at[u.obj[d]]; },
      [&](const Mor& m, Obj p) {
        return coherence(f, u.apply(base, target, m), p);
      });
}

FamMor fm_bang(const FamilyPtr& p, const FamilyPtr& top) {
  return make_fammor(
      p, top, [&](Obj a) { return to_terminal(p->fiber(a)); }, nullptr);
}

FamMor fm_absurd(const FamilyPtr& bot, const FamilyPtr& p) {
  return make_fammor(
      bot, p, [](Obj) { return empty_functor(); }, nullptr);
}

namespace {

FamMor projection(const FamilyPtr& pq, bool second) {
  const auto& data = std::get<ProductData>(pq->data());
  const FamilyPtr& target = second ? data.right : data.left;
  return make_fammor(
      pq, target,
      [&](Obj a) {
        const auto& l = data.left->fiber(a);
        const auto& r = data.right->fiber(a);
        std::vector<Obj> obj(pq->fiber(a).num_objects());
        for (Obj o = 0; o < obj.size(); ++o) {
          auto [x, y] = FinGroupoid::split_object(r, o);
          obj[o] = second ? y : x;
        }
        return make_functor(pq->fiber(a), target->fiber(a), obj,
                            [&](const Mor& m) {
                              auto [m1, m2] = FinGroupoid::split_mor(l, r, m);
                              return second ? m2 : m1;
                            });
      },
      nullptr);
}

FamMor injection(const FamilyPtr& part, const FamilyPtr& pq, bool second) {
  const auto& data = std::get<SumData>(pq->data());
  return make_fammor(
      part, pq,
      [&](Obj a) {
        const Obj shift =
            second ? static_cast<Obj>(data.left->fiber(a).num_objects()) : 0;
        std::vector<Obj> obj(part->fiber(a).num_objects());
        for (Obj o = 0; o < obj.size(); ++o) obj[o] = o + shift;
        return make_functor(part->fiber(a), pq->fiber(a), obj,
                            [&](const Mor& m) {
                              return Mor{m.src + shift, m.dst + shift, m.elem};
                            });
      },
      nullptr);
}

}  // namespace

FamMor fm_proj1(const FamilyPtr& pq) { return projection(pq, false); }
FamMor fm_proj2(const FamilyPtr& pq) { return projection(pq, true); }

FamMor fm_pair(const FamMor& f, const FamMor& g, const FamilyPtr& qr) {
  const auto& data = std::get<ProductData>(qr->data());
  const Family& P = *f.dom;
  return make_fammor(
      f.dom, qr,
      [&](Obj a) {
        const auto& l = data.left->fiber(a);
        const auto& r = data.right->fiber(a);
        std::vector<Obj> obj(P.fiber(a).num_objects());
        for (Obj o = 0; o < obj.size(); ++o) {
          obj[o] = FinGroupoid::pair_object(r, f.at[a].obj[o], g.at[a].obj[o]);
        }
        return make_functor(P.fiber(a), qr->fiber(a), obj, [&](const Mor& m) {
          return FinGroupoid::pair_mor(l, r, apply_at(f, a, m),
                                       apply_at(g, a, m));
        });
      },
      [&](const Mor& m, Obj p) {
        return FinGroupoid::pair_mor(data.left->fiber(m.dst),
                                     data.right->fiber(m.dst),
                                     coherence(f, m, p), coherence(g, m, p));
      });
}

FamMor fm_inj1(const FamilyPtr& p, const FamilyPtr& pq) {
  return injection(p, pq, false);
}
FamMor fm_inj2(const FamilyPtr& q, const FamilyPtr& pq) {
  return injection(q, pq, true);
}

FamMor fm_case(const FamMor& f, const FamMor& g, const FamilyPtr& pq) {
  const Family& R = *f.cod;
  return make_fammor(
      pq, f.cod,
      [&](Obj a) {
        const auto n1 = static_cast<Obj>(f.dom->fiber(a).num_objects());
        std::vector<Obj> obj(pq->fiber(a).num_objects());
        for (Obj o = 0; o < obj.size(); ++o) {
          obj[o] = o < n1 ? f.at[a].obj[o] : g.at[a].obj[o - n1];
        }
        return make_functor(pq->fiber(a), R.fiber(a), obj, [&](const Mor& m) {
          if (m.src < n1) return apply_at(f, a, m);
          return apply_at(g, a, Mor{m.src - n1, m.dst - n1, m.elem});
        });
      },
      [&](const Mor& m, Obj p) {
        const auto n1 = static_cast<Obj>(f.dom->fiber(m.src).num_objects());
        if (p < n1) return coherence(f, m, p);
        return coherence(g, m, p - n1);
      });
}

FamMor fm_eval(const FamilyPtr& exp_and_p) {
  const auto& prod = std::get<ProductData>(exp_and_p->data());
  const auto& exp = std::get<ExpData>(prod.left->data());
  const FamilyPtr& q = exp.cod;
  return make_fammor(
      exp_and_p, q,
      [&](Obj a) {
        const auto& ef = prod.left->fiber(a);
        const auto& pf = prod.right->fiber(a);
        const auto& qf = q->fiber(a);
        const ExpFiber& fiber = exp.fibers[a];
        std::vector<Obj> obj(exp_and_p->fiber(a).num_objects());
        for (Obj o = 0; o < obj.size(); ++o) {
          auto [fi, p] = FinGroupoid::split_object(pf, o);
          obj[o] = fiber.objects[fi].obj[p];
        }
        return make_functor(
            exp_and_p->fiber(a), qf, obj, [&](const Mor& m) {
              auto [n, phi] = FinGroupoid::split_mor(ef, pf, m);
              const Functor& f1 = fiber.objects[n.src];
              const Functor& f2 = fiber.objects[n.dst];
              const NatTrans theta = extend_natural(
                  pf, qf, f1, f2, key_to_roots(pf, f1, f2, fiber.norm->to_raw(n)));
              return qf.compose(theta[phi.dst], f1.apply(pf, qf, phi));
            });
      },
      nullptr);
}

FamMor fm_curry(const FamMor& f, const FamilyPtr& exp_family) {
  const auto& rp = std::get<ProductData>(f.dom->data());
  const auto& exp = std::get<ExpData>(exp_family->data());
  const FamilyPtr& r = rp.left;
  const FamilyPtr& p = rp.right;
  const FamilyPtr& q = exp.cod;
  // The functor p ↦ f_a(r, p).
  auto curried = [&](Obj a, Obj x) {
    const auto& rf = r->fiber(a);
    const auto& pf = p->fiber(a);
    std::vector<Obj> obj(pf.num_objects());
    for (Obj y = 0; y < obj.size(); ++y) {
      obj[y] = f.at[a].obj[FinGroupoid::pair_object(pf, x, y)];
    }
    return make_functor(pf, q->fiber(a), obj, [&](const Mor& phi) {
      return apply_at(f, a, FinGroupoid::pair_mor(rf, pf, rf.id(x), phi));
    });
  };
  return make_fammor(
      r, exp_family,
      [&](Obj a) {
        const auto& rf = r->fiber(a);
        const auto& pf = p->fiber(a);
        const ExpFiber& fiber = exp.fibers[a];
        std::vector<Obj> obj(rf.num_objects());
        for (Obj x = 0; x < obj.size(); ++x) {
          obj[x] = fiber.index.at(curried(a, x));
        }
        return make_functor(rf, exp_family->fiber(a), obj, [&](const Mor& rho) {
          Key k;
          for (std::uint32_t c = 0; c < pf.num_components(); ++c) {
            const Obj y = pf.root(c);
            k.push_back(
                apply_at(f, a, FinGroupoid::pair_mor(rf, pf, rho, pf.id(y)))
                    .elem);
          }
          return fiber.norm->to_normal(obj[rho.src], obj[rho.dst], k);
        });
      },
      [&](const Mor& m, Obj x) {
        const auto& pa = p->fiber(m.src);
        const auto& pb = p->fiber(m.dst);
        const Functor pm_inv = inverse_iso(pa, pb, p->transport(m));
        const ExpFiber& fa = exp.fibers[m.src];
        const ExpFiber& fb = exp.fibers[m.dst];
        const Obj src = exp_family->transport_obj(m, fa.index.at(curried(m.src, x)));
        const Obj dst = fb.index.at(curried(m.dst, r->transport_obj(m, x)));
        Key k;
        for (std::uint32_t c = 0; c < pb.num_components(); ++c) {
          const Obj y = pm_inv.obj[pb.root(c)];
          k.push_back(coherence(f, m, FinGroupoid::pair_object(pa, x, y)).elem);
        }
        return fb.norm->to_normal(src, dst, k);
      });
}

FamMor fm_forall_counit(const FamilyPtr& all, const FamilyPtr& pi_forall,
                        const FamilyPtr& p) {
  const auto& data = std::get<QuantData>(all->data());
  const QuantCtx q{all->base_ptr(), data.factor, data.body};
  const FinGroupoid& fac = *data.factor;
  const FinGroupoid& outer = all->base();
  const auto nb = static_cast<Obj>(fac.num_objects());
  return make_fammor(
      pi_forall, p,
      [&](Obj ab) {
        const Obj a = ab / nb, b = ab % nb;
        const ForallFiber& fiber = data.forall[a];
        const Obj r = fac.root(fac.component(b));
        std::vector<Obj> obj;
        for (const auto& s : fiber.objects) obj.push_back(s.obj[b]);
        return make_functor(
            pi_forall->fiber(ab), p->fiber(ab), obj, [&](const Mor& n) {
              const Key key = fiber.norm->to_raw(n);
              const Section& s = fiber.objects[n.src];
              const Section& t = fiber.objects[n.dst];
              const auto& fr = q.fiber(a, r);
              const auto& fb = q.fiber(a, b);
              const Mor theta{s.obj[r], t.obj[r], key[fac.component(b)]};
              const auto& tr = q.vertical(a, fac.gamma(b));
              const Mor sg{tr.obj[s.obj[r]], s.obj[b], s.gamma[b]};
              const Mor tg{tr.obj[t.obj[r]], t.obj[b], t.gamma[b]};
              return fb.compose(tg, fb.compose(tr.apply(fr, fb, theta),
                                               fb.inverse(sg)));
            });
      },
      [&](const Mor& m, Obj si) {
        // m = (k, g); the value is P(k, id)(s(g)).
        auto [k, g] = FinGroupoid::split_mor(outer, fac, m);
        const Section& s = data.forall[k.src].objects[si];
        const Mor sg = section_mor(q, k.src, s, g);
        return data.body->transport_mor(q.along(k, fac.id(g.dst)), sg);
      });
}

FamMor fm_lambda(const FamMor& f, const FamilyPtr& s, const FamilyPtr& all) {
  const auto& data = std::get<QuantData>(all->data());
  const BasePtr& base = all->base_ptr();
  const QuantCtx q{base, data.factor, data.body};
  const FinGroupoid& fac = *data.factor;
  auto section_of = [&](Obj a, Obj x) {
    Section sec;
    sec.obj.resize(fac.num_objects());
    sec.gamma.resize(fac.num_objects());
    sec.aut.resize(fac.num_components());
    for (Obj b = 0; b < fac.num_objects(); ++b) {
      sec.obj[b] = f.at[q.at(a, b)].obj[x];
      sec.gamma[b] =
          coherence(f, q.along(base->id(a), fac.gamma(b)), x).elem;
    }
    for (std::uint32_t d = 0; d < fac.num_components(); ++d) {
      const Obj r = fac.root(d);
      for (Elem e = 0; e < fac.group(d).order(); ++e) {
        sec.aut[d].push_back(
            coherence(f, q.along(base->id(a), Mor{r, r, e}), x).elem);
      }
    }
    return sec;
  };
  return make_fammor(
      s, all,
      [&](Obj a) {
        const ForallFiber& fiber = data.forall[a];
        std::vector<Obj> obj;
        for (Obj x = 0; x < s->fiber(a).num_objects(); ++x) {
          obj.push_back(fiber.index.at(section_of(a, x)));
        }
        return make_functor(s->fiber(a), all->fiber(a), obj,
                            [&](const Mor& rho) {
                              Key k;
                              for (std::uint32_t d = 0;
                                   d < fac.num_components(); ++d) {
                                k.push_back(
                                    apply_at(f, q.at(a, fac.root(d)), rho).elem);
                              }
                              return fiber.norm->to_normal(obj[rho.src],
                                                           obj[rho.dst], k);
                            });
      },
      [&](const Mor& k, Obj x) {
        const ForallFiber& fb = data.forall[k.dst];
        const Obj src = all->transport_obj(
            k, data.forall[k.src].index.at(section_of(k.src, x)));
        const Obj dst = fb.index.at(section_of(k.dst, s->transport_obj(k, x)));
        Key key;
        for (std::uint32_t d = 0; d < fac.num_components(); ++d) {
          key.push_back(
              coherence(f, q.along(k, fac.id(fac.root(d))), x).elem);
        }
        return fb.norm->to_normal(src, dst, key);
      });
}

FamMor fm_exists_unit(const FamilyPtr& p, const FamilyPtr& ex,
                      const FamilyPtr& pi_exists) {
  const auto& data = std::get<QuantData>(ex->data());
  const FinGroupoid& fac = *data.factor;
  const FinGroupoid& outer = ex->base();
  const auto nb = static_cast<Obj>(fac.num_objects());
  return make_fammor(
      p, pi_exists,
      [&](Obj ab) {
        const Obj a = ab / nb, b = ab % nb;
        const ExistsFiber& fiber = data.exists[a];
        std::vector<Obj> obj;
        for (Obj x = 0; x < p->fiber(ab).num_objects(); ++x) {
          obj.push_back(fiber.index.at({b, x}));
        }
        return make_functor(p->fiber(ab), pi_exists->fiber(ab), obj,
                            [&](const Mor& phi) {
                              return fiber.norm->to_normal(
                                  obj[phi.src], obj[phi.dst],
                                  Key{0, phi.elem});
                            });
      },
      [&](const Mor& m, Obj x) {
        auto [k, g] = FinGroupoid::split_mor(outer, fac, m);
        const Obj src =
            ex->transport_obj(k, data.exists[k.src].index.at({g.src, x}));
        const Obj dst =
            data.exists[k.dst].index.at({g.dst, p->transport_obj(m, x)});
        return data.exists[k.dst].norm->to_normal(src, dst, Key{g.elem, 0});
      });
}

FamMor fm_mu(const FamMor& f, const FamilyPtr& ex, const FamilyPtr& s) {
  const auto& data = std::get<QuantData>(ex->data());
  const BasePtr& base = ex->base_ptr();
  const QuantCtx q{base, data.factor, data.body};
  const FinGroupoid& fac = *data.factor;
  return make_fammor(
      ex, s,
      [&](Obj a) {
        const ExistsFiber& fiber = data.exists[a];
        std::vector<Obj> obj;
        for (const auto& [b, x] : fiber.objects) {
          obj.push_back(f.at[q.at(a, b)].obj[x]);
        }
        return make_functor(ex->fiber(a), s->fiber(a), obj, [&](const Mor& n) {
          const Key key = fiber.norm->to_raw(n);
          auto [b, x] = fiber.objects[n.src];
          auto [b2, x2] = fiber.objects[n.dst];
          const Mor g{b, b2, key[0]};
          const Obj t = q.vertical(a, g).obj[x];
          const Mor phi{t, x2, key[1]};
          const Mor c = coherence(f, q.along(base->id(a), g), x);
          return s->fiber(a).compose(apply_at(f, q.at(a, b2), phi), c);
        });
      },
      [&](const Mor& k, Obj i) {
        auto [b, x] = data.exists[k.src].objects[i];
        return coherence(f, q.along(k, fac.id(b)), x);
      });
}

FamMor fm_refl(const FamilyPtr& top, const FamilyPtr& diag_eq) {
  return make_fammor(
      top, diag_eq, [](Obj) { return terminal_functor(); }, nullptr);
}

FamMor fm_xi(const FamMor& f, const FamilyPtr& eq, const FamilyPtr& t) {
  const FinGroupoid& bb = eq->base();
  const FinGroupoid& b = f.dom->base();
  return make_fammor(
      eq, t,
      [&](Obj o) {
        auto [x, y] = FinGroupoid::split_object(b, o);
        std::vector<Obj> obj;
        const Obj fx = f.at[x].obj[0];
        for (Elem p = 0; p < eq->fiber(o).num_objects(); ++p) {
          const Mor along = FinGroupoid::pair_mor(b, b, b.id(x), Mor{x, y, p});
          obj.push_back(t->transport_obj(along, fx));
        }
        return make_functor(eq->fiber(o), t->fiber(o), obj, [&](const Mor& m) {
          return t->fiber(o).id(obj[m.src]);
        });
      },
      [&](const Mor& m, Obj p) {
        auto [k, k2] = FinGroupoid::split_mor(b, b, m);
        const Mor path{k.src, k2.src, p};
        const Mor moved = b.compose(k2, b.compose(path, b.inverse(k)));
        const Mor fk = coherence(f, k, 0);
        const Obj c = k.dst;
        const Mor along = FinGroupoid::pair_mor(b, b, b.id(c), moved);
        (void)bb;
        return t->transport_mor(along, fk);
      });
}

}  // namespace hfol::gpd
