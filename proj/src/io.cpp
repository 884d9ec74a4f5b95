#include "hfol/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hfol/error.hpp"
#include "json.hpp"

namespace hfol::io {

using nlohmann::json;
using namespace gpd;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
}

// Runs f, turning JSON access errors and validation failures into parse
// errors with the given context.
template <typename F>
auto guarded(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const SizeGuardError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing member \"") + key + "\"");
  }
  return j.at(key);
}

void expect_format(const json& j, const char* format) {
  if (j.contains("format") && j.at("format").get<std::string>() != format) {
    throw ParseError("expected format " + std::string(format) + ", got " +
                     j.at("format").get<std::string>());
  }
}

Signature signature_from(const json& j) {
  Signature sig;
  for (const auto& s : member(j, "sorts")) sig.add_sort(s.get<std::string>());
  if (j.contains("functions")) {
    for (const auto& f : j.at("functions")) {
      FunctionSymbol sym;
      sym.name = member(f, "name").get<std::string>();
      sym.arity = f.value("arity", std::vector<std::string>{});
      sym.codomain = member(f, "codomain").get<std::string>();
      sig.add_function(std::move(sym));
    }
  }
  return sig;
}

json signature_to(const Signature& sig) {
  json fs = json::array();
  for (const auto& f : sig.functions()) {
    fs.push_back({{"name", f.name}, {"arity", f.arity}, {"codomain", f.codomain}});
  }
  return {{"sorts", sig.sorts()}, {"functions", fs}};
}

FinGroup group_from(const json& j) {
  if (j.contains("cyclic")) return FinGroup::cyclic(j.at("cyclic").get<std::size_t>());
  if (j.contains("symmetric")) {
    return FinGroup::symmetric(j.at("symmetric").get<std::size_t>());
  }
  if (j.contains("product")) {
    const auto& fs = j.at("product");
    FinGroup g;
    for (const auto& f : fs) g = FinGroup::product(g, group_from(f));
    return g;
  }
  if (j.contains("permutations")) {
    return FinGroup::from_permutations(
        j.at("permutations").get<std::vector<std::vector<std::uint32_t>>>());
  }
  if (j.contains("table")) {
    const auto rows = j.at("table").get<std::vector<std::vector<Elem>>>();
    std::vector<Elem> flat;
    for (const auto& r : rows) {
      if (r.size() != rows.size()) throw ParseError("group table is not square");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return FinGroup::from_table(rows.size(), std::move(flat));
  }
  throw ParseError("group needs one of cyclic, symmetric, product, permutations, table");
}

json group_to(const FinGroup& g) {
  if (g.order() == 1) return {{"cyclic", 1}};
  std::vector<std::vector<Elem>> rows(g.order());
  for (Elem a = 0; a < g.order(); ++a) {
    for (Elem b = 0; b < g.order(); ++b) rows[a].push_back(g.mul(a, b));
  }
  return {{"table", rows}};
}

FinGroupoid carrier_from(const json& j) {
  if (j.contains("delooping")) return FinGroupoid::delooping(group_from(j.at("delooping")));
  if (j.contains("discrete")) return FinGroupoid::discrete(j.at("discrete").get<std::size_t>());
  if (j.contains("indiscrete")) {
    return FinGroupoid::indiscrete(j.at("indiscrete").get<std::size_t>());
  }
  std::vector<FinGroup> groups;
  for (const auto& g : member(j, "groups")) groups.push_back(group_from(g));
  return FinGroupoid(member(j, "component_of").get<std::vector<std::uint32_t>>(),
                     member(j, "roots").get<std::vector<Obj>>(), std::move(groups));
}

json carrier_to(const FinGroupoid& g) {
  json groups = json::array();
  std::vector<Obj> roots;
  for (std::uint32_t c = 0; c < g.num_components(); ++c) {
    groups.push_back(group_to(g.group(c)));
    roots.push_back(g.root(c));
  }
  return {{"component_of", g.component_map()}, {"roots", roots}, {"groups", groups}};
}

Functor functor_from(const json& j) {
  Functor f;
  f.obj = member(j, "objects").get<std::vector<Obj>>();
  f.gamma = j.value("gamma", std::vector<Elem>(f.obj.size(), 0));
  f.phi = member(j, "phi").get<std::vector<std::vector<Elem>>>();
  return f;
}

json functor_to(const Functor& f) {
  return {{"objects", f.obj}, {"gamma", f.gamma}, {"phi", f.phi}};
}

NatTrans nat_from(const json& j) {
  NatTrans out;
  for (const auto& m : j) {
    const auto v = m.get<std::vector<std::uint32_t>>();
    if (v.size() != 3) throw ParseError("a morphism is [src, dst, elem]");
    out.push_back(Mor{v[0], v[1], v[2]});
  }
  return out;
}

json nat_to(const NatTrans& t) {
  json out = json::array();
  for (const Mor& m : t) out.push_back({m.src, m.dst, m.elem});
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

Signature read_signature(std::string_view json_text) {
  const json j = parse_json(json_text);
  return guarded("signature", [&] { return signature_from(j); });
}

std::string write_signature(const Signature& sig) { return dump(signature_to(sig)); }

SetStructure read_set_structure(std::string_view json_text) {
  const json j = parse_json(json_text);
  return guarded("set structure", [&] {
    expect_format(j, kSetFormat);
    SetStructure m;
    m.sig = signature_from(member(j, "signature"));
    for (const auto& [s, names] : member(j, "carriers").items()) {
      m.carriers[s] = names.get<std::vector<std::string>>();
    }
    if (j.contains("functions")) {
      for (const auto& [name, table] : j.at("functions").items()) {
        const FunctionSymbol* f = m.sig.find_function(name);
        if (!f) throw ParseError("table for unknown symbol " + name);
        auto& out = m.tables[name];
        for (const auto& v : table) {
          if (v.is_string()) {
            const auto& names = m.carriers.at(f->codomain);
            auto it = std::find(names.begin(), names.end(), v.get<std::string>());
            if (it == names.end()) {
              throw ParseError("unknown element " + v.get<std::string>() + " in " + name);
            }
            out.push_back(static_cast<std::size_t>(it - names.begin()));
          } else {
            out.push_back(v.get<std::size_t>());
          }
        }
      }
    }
    m.validate();
    return m;
  });
}

std::string write_set_structure(const SetStructure& m) {
  json j;
  j["format"] = kSetFormat;
  j["signature"] = signature_to(m.sig);
  j["carriers"] = m.carriers;
  j["functions"] = m.tables;
  return dump(j);
}

GroupoidStructure read_groupoid_structure(std::string_view json_text) {
  const json j = parse_json(json_text);
  return guarded("groupoid structure", [&] {
    expect_format(j, kGroupoidFormat);
    GroupoidStructure m;
    m.sig = signature_from(member(j, "signature"));
    for (const auto& [s, c] : member(j, "carriers").items()) {
      m.carriers[s] = carrier_from(c);
      if (c.contains("names")) m.object_names[s] = c.at("names").get<std::vector<std::string>>();
    }
    if (j.contains("functions")) {
      for (const auto& [name, f] : j.at("functions").items()) {
        m.functions[name] = functor_from(f);
      }
    }
    m.validate();
    return m;
  });
}

std::string write_groupoid_structure(const GroupoidStructure& m) {
  json j;
  j["format"] = kGroupoidFormat;
  j["signature"] = signature_to(m.sig);
  json carriers = json::object();
  for (const auto& [s, g] : m.carriers) {
    carriers[s] = carrier_to(g);
    auto it = m.object_names.find(s);
    if (it != m.object_names.end()) carriers[s]["names"] = it->second;
  }
  j["carriers"] = carriers;
  json functions = json::object();
  for (const auto& [name, f] : m.functions) functions[name] = functor_to(f);
  j["functions"] = functions;
  return dump(j);
}

HomotopyEquivalence read_equivalence(std::string_view json_text,
                                     const GroupoidStructure& m,
                                     const GroupoidStructure& n) {
  const json j = parse_json(json_text);
  return guarded("homotopy equivalence", [&] {
    expect_format(j, kEquivalenceFormat);
    if (!(m.sig == n.sig)) throw ParseError("the structures have different signatures");
    HomotopyEquivalence h;
    const json& sorts = member(j, "sorts");
    for (const Sort& s : m.sig.sorts()) {
      if (!sorts.contains(s)) throw ParseError("no data for sort " + s);
      const json& d = sorts.at(s);
      h.forward.sorts[s] = functor_from(member(d, "forward"));
      h.inverse[s] = functor_from(member(d, "inverse"));
      h.unit[s] = nat_from(member(d, "unit"));
      h.counit[s] = nat_from(member(d, "counit"));
    }
    const json symbols = j.value("symbols", json::object());
    for (const auto& f : m.sig.functions()) {
      if (!symbols.contains(f.name)) throw ParseError("no 2-cell for symbol " + f.name);
      h.forward.symbols[f.name] = nat_from(symbols.at(f.name));
    }
    return h;
  });
}

std::string write_equivalence(const HomotopyEquivalence& h) {
  json j;
  j["format"] = kEquivalenceFormat;
  json sorts = json::object();
  for (const auto& [s, f] : h.forward.sorts) {
    sorts[s] = {{"forward", functor_to(f)},
                {"inverse", functor_to(h.inverse.at(s))},
                {"unit", nat_to(h.unit.at(s))},
                {"counit", nat_to(h.counit.at(s))}};
  }
  j["sorts"] = sorts;
  json symbols = json::object();
  for (const auto& [name, t] : h.forward.symbols) symbols[name] = nat_to(t);
  j["symbols"] = symbols;
  return dump(j);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::kIo, "cannot read " + path);
  return ss.str();
}

std::string document_format(std::string_view json_text) {
  const json j = parse_json(json_text);
  if (j.is_object() && j.contains("format") && j.at("format").is_string()) {
    return j.at("format").get<std::string>();
  }
  return "";
}

}  // namespace hfol::io
