#include "hfol/term_category.hpp"

#include <cctype>

#include "hfol/error.hpp"

namespace hfol {

std::string to_string(const CtxObject& obj) {
  std::string out = "(";
  for (std::size_t i = 0; i < obj.size(); ++i) {
    if (i > 0) out += ", ";
    out += obj[i];
  }
  return out + ")";
}

Context canonical_context(const CtxObject& obj) {
  return Context::canonical(obj);
}

namespace {

void check_canonical(const Term& t, const CtxObject& domain) {
  for (const auto& v : free_vars(t)) {
    bool ok = v.name.size() > 1 && v.name[0] == 'x';
    std::size_t i = 0;
    if (ok) {
      for (std::size_t k = 1; k < v.name.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(v.name[k]))) ok = false;
      }
    }
    if (ok) {
      i = std::stoul(v.name.substr(1));
      ok = i >= 1 && i <= domain.size() && domain[i - 1] == v.sort &&
           v.name == positional_name(i);
    }
    if (!ok) {
      throw_usage("term " + to_string(t) + " uses variable '" + v.name +
                  "' : " + v.sort + " outside the canonical context " +
                  to_string(domain));
    }
  }
}

}  // namespace

TermMorphism::TermMorphism(CtxObject domain, CtxObject codomain,
                           std::vector<Term> terms)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      terms_(std::move(terms)) {
  if (terms_.size() != codomain_.size()) {
    throw_usage("term morphism into " + to_string(codomain_) + " needs " +
                std::to_string(codomain_.size()) + " term(s), got " +
                std::to_string(terms_.size()));
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].sort() != codomain_[i]) {
      throw_usage("term " + to_string(terms_[i]) + " has sort " +
                  terms_[i].sort() + ", codomain expects " + codomain_[i]);
    }
    check_canonical(terms_[i], domain_);
  }
}

std::string to_string(const TermMorphism& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.terms().size(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(m.terms()[i]);
  }
  return out + "] : " + to_string(m.domain()) + " -> " +
         to_string(m.codomain());
}

TermMorphism morphism_from_terms(const CtxObject& domain,
                                 std::vector<Term> terms) {
  CtxObject cod;
  cod.reserve(terms.size());
  for (const auto& t : terms) cod.push_back(t.sort());
  return TermMorphism(domain, std::move(cod), std::move(terms));
}

TermMorphism identity(const CtxObject& obj) {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < obj.size(); ++i) {
    terms.push_back(Term::var(obj[i], positional_name(i + 1)));
  }
  return TermMorphism(obj, obj, std::move(terms));
}

TermMorphism compose(const TermMorphism& g, const TermMorphism& f) {
  if (g.domain() != f.codomain()) {
    throw_usage("cannot compose " + to_string(g) + " after " + to_string(f));
  }
  const auto xs = canonical_context(g.domain()).vars();
  return TermMorphism(f.domain(), g.codomain(),
                      subst(g.terms(), xs, f.terms()));
}

TermMorphism projection(const CtxObject& obj, std::size_t i) {
  if (i == 0 || i > obj.size()) {
    throw_usage("projection index " + std::to_string(i) + " out of range for " +
                to_string(obj));
  }
  return TermMorphism(obj, {obj[i - 1]},
                      {Term::var(obj[i - 1], positional_name(i))});
}

TermMorphism tuple(const CtxObject& domain,
                   const std::vector<TermMorphism>& fs) {
  CtxObject cod;
  std::vector<Term> terms;
  for (const auto& f : fs) {
    if (f.domain() != domain) {
      throw_usage("tuple component " + to_string(f) +
                  " does not have domain " + to_string(domain));
    }
    cod.insert(cod.end(), f.codomain().begin(), f.codomain().end());
    terms.insert(terms.end(), f.terms().begin(), f.terms().end());
  }
  return TermMorphism(domain, std::move(cod), std::move(terms));
}

TermMorphism drop_last(const CtxObject& obj) {
  if (obj.empty()) throw_usage("cannot drop the last entry of ()");
  std::vector<Term> terms;
  for (std::size_t i = 0; i + 1 < obj.size(); ++i) {
    terms.push_back(Term::var(obj[i], positional_name(i + 1)));
  }
  return TermMorphism(obj, CtxObject(obj.begin(), obj.end() - 1),
                      std::move(terms));
}

TermMorphism extend(const TermMorphism& t, const Sort& b) {
  CtxObject dom = t.domain();
  dom.push_back(b);
  CtxObject cod = t.codomain();
  cod.push_back(b);
  std::vector<Term> terms = t.terms();
  terms.push_back(Term::var(b, positional_name(dom.size())));
  return TermMorphism(std::move(dom), std::move(cod), std::move(terms));
}

Formula reindex_formula(const TermMorphism& t, const Formula& phi) {
  const Context cod = canonical_context(t.codomain());
  for (const auto& v : free_vars(phi)) {
    if (!cod.contains(v)) {
      throw_usage("formula " + to_string(phi) + " is not over " +
                  to_string(cod));
    }
  }
  Formula moved = subst(phi, cod.vars(), t.terms());
  return canonicalize(moved, canonical_context(t.domain()));
}

}  // namespace hfol
