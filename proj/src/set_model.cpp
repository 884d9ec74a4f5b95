#include "hfol/set_model.hpp"

#include <limits>

#include "hfol/error.hpp"

namespace hfol {

std::size_t SetStructure::size(const Sort& s) const {
  auto it = carriers.find(s);
  if (it == carriers.end()) throw_usage("no carrier for sort " + s);
  return it->second.size();
}

void SetStructure::validate() const {
  for (const auto& s : sig.sorts()) {
    if (!carriers.count(s)) throw_usage("no carrier for sort " + s);
  }
  for (const auto& [s, elems] : carriers) {
    if (!sig.has_sort(s)) throw_usage("carrier for undeclared sort " + s);
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (elems[i] == elems[j]) {
          throw_usage("carrier " + s + " repeats element " + elems[i]);
        }
      }
    }
  }
  for (const auto& f : sig.functions()) {
    auto it = tables.find(f.name);
    if (it == tables.end()) throw_usage("no table for symbol " + f.name);
    std::size_t n = 1;
    for (const auto& a : f.arity) n *= size(a);
    if (it->second.size() != n) {
      throw_usage("table for " + f.name + " has " +
                  std::to_string(it->second.size()) + " entries, expected " +
                  std::to_string(n));
    }
    const std::size_t cod = size(f.codomain);
    for (std::size_t v : it->second) {
      if (v >= cod) throw_usage("table for " + f.name + " leaves its codomain");
    }
  }
  for (const auto& [name, table] : tables) {
    if (!sig.find_function(name)) throw_usage("table for unknown symbol " + name);
  }
}

std::size_t num_points(const SetStructure& m, const CtxObject& ctx) {
  std::size_t n = 1;
  for (const auto& s : ctx) n *= m.size(s);
  return n;
}

std::vector<std::size_t> decode_point(const SetStructure& m,
                                      const CtxObject& ctx, std::size_t point) {
  std::vector<std::size_t> coords(ctx.size());
  for (std::size_t i = ctx.size(); i-- > 0;) {
    const std::size_t k = m.size(ctx[i]);
    coords[i] = point % k;
    point /= k;
  }
  return coords;
}

std::size_t encode_point(const SetStructure& m, const CtxObject& ctx,
                         const std::vector<std::size_t>& coords) {
  if (coords.size() != ctx.size()) throw_usage("point shape mismatch");
  std::size_t p = 0;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const std::size_t k = m.size(ctx[i]);
    if (coords[i] >= k) throw_usage("point coordinate out of range");
    p = p * k + coords[i];
  }
  return p;
}

namespace {

// Functions between finite products, as tables over mixed-radix points.
struct FnTarget {
  struct Morphism {
    std::size_t cod_size = 1;
    std::vector<std::size_t> table;
  };

  const SetStructure& m;

  Morphism projection(const CtxObject& obj, std::size_t i) {
    const std::size_t n = num_points(m, obj);
    Morphism r{m.size(obj.at(i - 1)), std::vector<std::size_t>(n)};
    std::size_t below = 1;
    for (std::size_t j = i; j < obj.size(); ++j) below *= m.size(obj[j]);
    for (std::size_t x = 0; x < n; ++x) r.table[x] = (x / below) % r.cod_size;
    return r;
  }

  Morphism tuple(const CtxObject& obj, const std::vector<Morphism>& ms) {
    const std::size_t n = num_points(m, obj);
    Morphism r{1, std::vector<std::size_t>(n, 0)};
    for (const auto& f : ms) {
      for (std::size_t x = 0; x < n; ++x) {
        r.table[x] = r.table[x] * f.cod_size + f.table[x];
      }
      r.cod_size *= f.cod_size;
    }
    return r;
  }

  Morphism compose(const Morphism& g, const Morphism& f) {
    Morphism r{g.cod_size, std::vector<std::size_t>(f.table.size())};
    for (std::size_t x = 0; x < f.table.size(); ++x) {
      r.table[x] = g.table[f.table[x]];
    }
    return r;
  }

  Morphism symbol(const std::string& name) {
    const FunctionSymbol& f = m.sig.function(name);
    return {m.size(f.codomain), m.tables.at(name)};
  }
};

static_assert(FiniteProductTarget<FnTarget>);

}  // namespace

SetModel::SetModel(const SetStructure& m, SetOptions opts)
    : m_(m), opts_(opts) {}

std::size_t SetModel::num_points(const CtxObject& ctx) const {
  std::uint64_t n = 1;
  for (const auto& s : ctx) {
    n *= m_.size(s);
    if (n > opts_.max_points) {
      throw SizeGuardError("context " + to_string(ctx) + " has more than " +
                           std::to_string(opts_.max_points) + " points");
    }
  }
  return n;
}

std::size_t SetModel::guard(std::uint64_t size, const char* what) const {
  if (size > opts_.max_fiber) {
    throw SizeGuardError(std::string(what) + " fiber exceeds " +
                         std::to_string(opts_.max_fiber) + " tokens");
  }
  return size;
}

SetModel::Pred SetModel::make(CtxObject ctx, std::vector<std::size_t> sizes) {
  return std::make_shared<const PredData>(PredData{std::move(ctx), std::move(sizes)});
}

const std::vector<std::size_t>& SetModel::point_map(const TermMorphism& t) {
  const std::string key = to_string(t);
  auto it = point_maps_.find(key);
  if (it != point_maps_.end()) return it->second;
  num_points(t.domain());
  FnTarget target{m_};
  auto r = interpret_morphism(t, target);
  return point_maps_.emplace(key, std::move(r.table)).first->second;
}

SetModel::Pred SetModel::top(const CtxObject& ctx) {
  return make(ctx, std::vector<std::size_t>(num_points(ctx), 1));
}

SetModel::Pred SetModel::bot(const CtxObject& ctx) {
  return make(ctx, std::vector<std::size_t>(num_points(ctx), 0));
}

SetModel::Pred SetModel::conj(const Pred& p, const Pred& q) {
  std::vector<std::size_t> s(p->sizes.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    s[a] = guard(std::uint64_t{p->sizes[a]} * q->sizes[a], "conjunction");
  }
  return make(p->ctx, std::move(s));
}

SetModel::Pred SetModel::disj(const Pred& p, const Pred& q) {
  std::vector<std::size_t> s(p->sizes.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    s[a] = guard(std::uint64_t{p->sizes[a]} + q->sizes[a], "disjunction");
  }
  return make(p->ctx, std::move(s));
}

namespace {

// base^exp, saturating above `cap`.
std::uint64_t capped_pow(std::uint64_t base, std::uint64_t exp,
                         std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > cap) return cap + 1;
    if (r == 0) return 0;
  }
  return r;
}

}  // namespace

SetModel::Pred SetModel::implies(const Pred& p, const Pred& q) {
  std::vector<std::size_t> s(p->sizes.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    s[a] = guard(capped_pow(q->sizes[a], p->sizes[a], opts_.max_fiber),
                 "implication");
  }
  return make(p->ctx, std::move(s));
}

SetModel::Pred SetModel::reindex(const TermMorphism& t, const Pred& p) {
  const auto& pm = point_map(t);
  std::vector<std::size_t> s(pm.size());
  for (std::size_t a = 0; a < s.size(); ++a) s[a] = p->sizes[pm[a]];
  return make(t.domain(), std::move(s));
}

SetModel::Pred SetModel::exists_last(const CtxObject& ctx, const Pred& p) {
  const CtxObject outer(ctx.begin(), ctx.end() - 1);
  const std::size_t nb = m_.size(ctx.back());
  std::vector<std::size_t> s(num_points(outer), 0);
  for (std::size_t a = 0; a < s.size(); ++a) {
    std::uint64_t total = 0;
    for (std::size_t b = 0; b < nb; ++b) total += p->sizes[a * nb + b];
    s[a] = guard(total, "existential");
  }
  return make(outer, std::move(s));
}

SetModel::Pred SetModel::forall_last(const CtxObject& ctx, const Pred& p) {
  const CtxObject outer(ctx.begin(), ctx.end() - 1);
  const std::size_t nb = m_.size(ctx.back());
  std::vector<std::size_t> s(num_points(outer), 0);
  for (std::size_t a = 0; a < s.size(); ++a) {
    std::uint64_t total = 1;
    for (std::size_t b = 0; b < nb && total > 0; ++b) {
      total *= p->sizes[a * nb + b];
      guard(total, "universal");
    }
    s[a] = total;
  }
  return make(outer, std::move(s));
}

SetModel::Pred SetModel::eq(const Sort& b) {
  const std::size_t n = m_.size(b);
  std::vector<std::size_t> s(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) s[i * n + i] = 1;
  return make({b, b}, std::move(s));
}

bool SetModel::inhabited(const Pred& p, std::size_t point) const {
  if (point >= p->sizes.size()) throw_usage("point out of range");
  return p->sizes[point] > 0;
}

// ---------------------------------------------------------------------------
// Proofs

namespace {

using Map = std::vector<std::vector<std::uint32_t>>;

template <class F>
Map tabulate(const SetModel::Pred& dom, F&& f) {
  Map m(dom->sizes.size());
  for (std::size_t a = 0; a < m.size(); ++a) {
    m[a].resize(dom->sizes[a]);
    for (std::size_t x = 0; x < m[a].size(); ++x) {
      m[a][x] = static_cast<std::uint32_t>(f(a, x));
    }
  }
  return m;
}

// Weight of coordinate b in a section token over the last factor at outer
// point a.
std::uint64_t section_weight(const SetModel::Pred& p, std::size_t a,
                             std::size_t nb, std::size_t b) {
  std::uint64_t w = 1;
  for (std::size_t c = b + 1; c < nb; ++c) w *= p->sizes[a * nb + c];
  return w;
}

std::size_t offset(const SetModel::Pred& p, std::size_t a, std::size_t nb,
                   std::size_t b) {
  std::size_t o = 0;
  for (std::size_t c = 0; c < b; ++c) o += p->sizes[a * nb + c];
  return o;
}

}  // namespace

SetModel::Proof SetModel::identity(const Pred& p) {
  return {p, p, tabulate(p, [](std::size_t, std::size_t x) { return x; })};
}

SetModel::Proof SetModel::compose(const Proof& g, const Proof& f) {
  return {f.dom, g.cod, tabulate(f.dom, [&](std::size_t a, std::size_t x) {
            return g.map[a][f.map[a][x]];
          })};
}

SetModel::Proof SetModel::reindex_proof(const TermMorphism& t, const Proof& f,
                                        const Pred& tp, const Pred& tq) {
  const auto& pm = point_map(t);
  Map m(pm.size());
  for (std::size_t a = 0; a < m.size(); ++a) m[a] = f.map[pm[a]];
  return {tp, tq, std::move(m)};
}

SetModel::Proof SetModel::bang(const Pred& p, const Pred& top) {
  return {p, top, tabulate(p, [](std::size_t, std::size_t) { return 0; })};
}

SetModel::Proof SetModel::absurd(const Pred& bot, const Pred& p) {
  return {bot, p, Map(bot->sizes.size())};
}

SetModel::Proof SetModel::proj1(const Pred& p, const Pred& q, const Pred& pq) {
  return {pq, p, tabulate(pq, [&](std::size_t a, std::size_t x) {
            return x / q->sizes[a];
          })};
}

SetModel::Proof SetModel::proj2(const Pred& p, const Pred& q, const Pred& pq) {
  (void)p;
  return {pq, q, tabulate(pq, [&](std::size_t a, std::size_t x) {
            return x % q->sizes[a];
          })};
}

SetModel::Proof SetModel::pair(const Proof& f, const Proof& g, const Pred& qr) {
  return {f.dom, qr, tabulate(f.dom, [&](std::size_t a, std::size_t x) {
            return std::size_t{f.map[a][x]} * g.cod->sizes[a] + g.map[a][x];
          })};
}

SetModel::Proof SetModel::inj1(const Pred& p, const Pred& q, const Pred& pq) {
  (void)q;
  return {p, pq, tabulate(p, [](std::size_t, std::size_t x) { return x; })};
}

SetModel::Proof SetModel::inj2(const Pred& p, const Pred& q, const Pred& pq) {
  return {q, pq, tabulate(q, [&](std::size_t a, std::size_t x) {
            return p->sizes[a] + x;
          })};
}

SetModel::Proof SetModel::case_of(const Proof& f, const Proof& g,
                                  const Pred& pq) {
  return {pq, f.cod, tabulate(pq, [&](std::size_t a, std::size_t x) {
            const std::size_t np = f.dom->sizes[a];
            return x < np ? f.map[a][x] : g.map[a][x - np];
          })};
}

SetModel::Proof SetModel::eval(const Pred& p, const Pred& q,
                               const Pred& exp_and_p) {
  return {exp_and_p, q, tabulate(exp_and_p, [&](std::size_t a, std::size_t x) {
            const std::size_t np = p->sizes[a], nq = q->sizes[a];
            const std::size_t e = x / np, arg = x % np;
            std::uint64_t w = 1;
            for (std::size_t i = arg + 1; i < np; ++i) w *= nq;
            return (e / w) % nq;
          })};
}

SetModel::Proof SetModel::curry(const Proof& f, const Pred& r, const Pred& p,
                                const Pred& exp) {
  // f : R ∧ P → Q
  const Pred& q = f.cod;
  return {r, exp, tabulate(r, [&](std::size_t a, std::size_t x) {
            const std::size_t np = p->sizes[a];
            std::uint64_t token = 0;
            for (std::size_t y = 0; y < np; ++y) {
              token = token * q->sizes[a] + f.map[a][x * np + y];
            }
            return token;
          })};
}

SetModel::Proof SetModel::forall_counit(const CtxObject& ctx, const Pred& p,
                                        const Pred& all, const Pred& pi_all) {
  (void)all;
  const std::size_t nb = m_.size(ctx.back());
  return {pi_all, p, tabulate(pi_all, [&](std::size_t ab, std::size_t s) {
            const std::size_t a = ab / nb, b = ab % nb;
            return (s / section_weight(p, a, nb, b)) % p->sizes[ab];
          })};
}

SetModel::Proof SetModel::lambda(const CtxObject& ctx, const Proof& f,
                                 const Pred& s, const Pred& all) {
  const std::size_t nb = m_.size(ctx.back());
  const Pred& p = f.cod;
  return {s, all, tabulate(s, [&](std::size_t a, std::size_t x) {
            std::uint64_t token = 0;
            for (std::size_t b = 0; b < nb; ++b) {
              token = token * p->sizes[a * nb + b] + f.map[a * nb + b][x];
            }
            return token;
          })};
}

SetModel::Proof SetModel::exists_unit(const CtxObject& ctx, const Pred& p,
                                      const Pred& ex, const Pred& pi_ex) {
  (void)ex;
  const std::size_t nb = m_.size(ctx.back());
  return {p, pi_ex, tabulate(p, [&](std::size_t ab, std::size_t x) {
            return offset(p, ab / nb, nb, ab % nb) + x;
          })};
}

SetModel::Proof SetModel::mu(const CtxObject& ctx, const Proof& f,
                             const Pred& ex, const Pred& s) {
  const std::size_t nb = m_.size(ctx.back());
  const Pred& p = f.dom;
  return {ex, s, tabulate(ex, [&](std::size_t a, std::size_t x) {
            std::size_t b = 0;
            while (x >= p->sizes[a * nb + b]) x -= p->sizes[a * nb + b++];
            return f.map[a * nb + b][x];
          })};
}

SetModel::Proof SetModel::refl(const Sort& b, const Pred& top,
                               const Pred& diag_eq) {
  (void)b;
  return {top, diag_eq, tabulate(top, [](std::size_t, std::size_t) { return 0; })};
}

SetModel::Proof SetModel::xi(const Sort& b, const Proof& f, const Pred& eq,
                             const Pred& t) {
  const std::size_t n = m_.size(b);
  return {eq, t, tabulate(eq, [&](std::size_t ij, std::size_t) {
            return f.map[ij / n][0];
          })};
}

// ---------------------------------------------------------------------------
// Classical truth

namespace {

struct Tarski {
  const SetStructure& m;

  std::size_t term(const Term& t, const std::map<Variable, std::size_t>& env) {
    if (t.is_var()) return env.at(t.variable());
    const FunctionSymbol& f = m.sig.function(t.symbol());
    std::size_t idx = 0;
    for (std::size_t i = 0; i < f.arity.size(); ++i) {
      idx = idx * m.size(f.arity[i]) + term(t.args()[i], env);
    }
    return m.tables.at(f.name)[idx];
  }

  bool truth(const Formula& phi, std::map<Variable, std::size_t>& env) {
    using K = Formula::Kind;
    switch (phi.kind()) {
      case K::kTop:
        return true;
      case K::kBot:
        return false;
      case K::kEq:
        return term(phi.lhs(), env) == term(phi.rhs(), env);
      case K::kAnd:
        return truth(phi.left(), env) && truth(phi.right(), env);
      case K::kOr:
        return truth(phi.left(), env) || truth(phi.right(), env);
      case K::kImplies:
        return !truth(phi.left(), env) || truth(phi.right(), env);
      case K::kForall:
      case K::kExists: {
        const Variable& v = phi.bound();
        auto saved = env.find(v) == env.end()
                         ? std::optional<std::size_t>()
                         : std::optional<std::size_t>(env[v]);
        const bool all = phi.kind() == K::kForall;
        bool result = all;
        for (std::size_t x = 0; x < m.size(v.sort); ++x) {
          env[v] = x;
          const bool r = truth(phi.body(), env);
          if (all && !r) {
            result = false;
            break;
          }
          if (!all && r) {
            result = true;
            break;
          }
        }
        if (saved) {
          env[v] = *saved;
        } else {
          env.erase(v);
        }
        return result;
      }
    }
    return false;
  }
};

}  // namespace

bool tarski_truth(const Formula& phi, const Context& ctx, const SetStructure& m,
                  const std::vector<std::size_t>& env) {
  if (env.size() != ctx.size()) throw_usage("environment shape mismatch");
  std::map<Variable, std::size_t> e;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (env[i] >= m.size(ctx[i].sort)) throw_usage("environment value out of range");
    e[ctx[i]] = env[i];
  }
  return Tarski{m}.truth(phi, e);
}

SetModel::Pred lauchli(const Formula& phi, const Context& ctx,
                       const SetStructure& m, SetOptions opts) {
  SetModel model(m, opts);
  Interpreter<SetModel> interp(model, m.sig);
  return interp.formula_in(phi, ctx);
}

bool iso_check(const SetModel::Pred& p, const SetModel::Pred& q,
               const std::vector<std::size_t>& bijection) {
  if (bijection.size() != p->sizes.size() ||
      q->sizes.size() != p->sizes.size()) {
    throw_usage("iso_check: base shape mismatch");
  }
  for (std::size_t a = 0; a < bijection.size(); ++a) {
    if (p->sizes[a] != q->sizes.at(bijection[a])) return false;
  }
  return true;
}

std::vector<std::size_t> point_bijection(
    const SetStructure& m, const SetStructure& n, const CtxObject& ctx,
    const std::map<Sort, std::vector<std::size_t>>& per_sort) {
  const std::size_t np = num_points(m, ctx);
  std::vector<std::size_t> out(np);
  for (std::size_t a = 0; a < np; ++a) {
    auto coords = decode_point(m, ctx, a);
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      coords[i] = per_sort.at(ctx[i]).at(coords[i]);
    }
    out[a] = encode_point(n, ctx, coords);
  }
  return out;
}

}  // namespace hfol
