#pragma once

// Literals, JSON and CSV for modules, complexes, subcategories, Ext tables
// and certified exact sequences.

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "relhom/cohomology.hpp"
#include "relhom/errors.hpp"
#include "relhom/relative.hpp"

namespace relhom::io {

using Json = nlohmann::ordered_json;

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline Integer parse_integer(std::string_view text, const std::string& what) {
  std::string t = trim(text);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw InputError("malformed " + what + ": '" + t + "'");
  return Integer(t);
}

/// "Z4+Z2+Z2@4", "0@4", or without the "@m" suffix when a default modulus is given.
inline ZmModule parse_module(std::string_view literal,
                             std::optional<Integer> default_modulus = std::nullopt) {
  std::string lit = trim(literal);
  std::optional<Integer> modulus;
  std::string body = lit;
  if (auto at = lit.find('@'); at != std::string::npos) {
    modulus = parse_integer(std::string_view(lit).substr(at + 1), "modulus in '" + lit + "'");
    body = trim(std::string_view(lit).substr(0, at));
  }
  if (modulus && default_modulus && *modulus != *default_modulus)
    throw InputError("modulus mismatch: '" + lit + "' is over Z/" + modulus->get_str() +
                     " but the job is over Z/" + default_modulus->get_str());
  if (!modulus) modulus = default_modulus;
  if (!modulus) throw InputError("module literal '" + lit + "' needs a modulus ('@m')");
  if (*modulus < 2) throw InputError("modulus must be at least 2");
  IntVector orders;
  if (body != "0") {
    std::stringstream ss(body);
    std::string part;
    while (std::getline(ss, part, '+')) {
      std::string p = trim(part);
      if (p.size() < 2 || (p[0] != 'Z' && p[0] != 'z'))
        throw InputError("malformed module literal '" + lit + "'");
      Integer d = parse_integer(std::string_view(p).substr(1), "cyclic order in '" + lit + "'");
      if (d < 1 || !divides(d, *modulus))
        throw InputError("Z" + d.get_str() + " is not a Z/" + modulus->get_str() + "-module");
      orders.push_back(d);
    }
    if (orders.empty() || std::size_t(std::count(body.begin(), body.end(), '+')) + 1 != orders.size())
      throw InputError("malformed module literal '" + lit + "'");
  }
  return ZmModule(*modulus, orders);
}

inline Json integer_json(const Integer& a) {
  if (a.fits_slong_p()) return a.get_si();
  return a.get_str();
}

inline Integer integer_from_json(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    bool neg = !s.empty() && s[0] == '-';
    Integer v = parse_integer(neg ? s.substr(1) : s, what);
    return neg ? Integer(-v) : v;
  }
  throw InputError(what + " must be an integer");
}

inline Json orders_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(integer_json(x));
  return a;
}

inline IntVector orders_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be an array");
  IntVector v;
  for (const auto& x : j) v.push_back(integer_from_json(x, what));
  return v;
}

inline Json matrix_json(const IntMatrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(integer_json(a(i, j)));
    rows.push_back(row);
  }
  return rows;
}

/// Row-major matrix of the given shape; an empty array stands for any 0-row matrix.
inline IntMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols,
                                  const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be a row-major array");
  IntMatrix a(rows, cols);
  if (j.size() != rows && !(rows == 0 && j.empty()))
    throw InputError(what + " has " + std::to_string(j.size()) + " rows, expected " +
                     std::to_string(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw InputError(what + ": row " + std::to_string(i) + " should have " +
                       std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) a(i, c) = integer_from_json(j[i][c], what);
  }
  return a;
}

inline ModuleMorphism morphism_from_json(const Json& j, const ZmModule& source,
                                         const ZmModule& target, const std::string& what) {
  try {
    return ModuleMorphism(source, target,
                          matrix_from_json(j, target.rank(), source.rank(), what));
  } catch (const InvariantViolation& e) {
    throw InputError(what + ": " + e.what());
  }
}

inline Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + what + ": " + e.what());
  }
}

// --- complexes -------------------------------------------------------------

/// {"modulus":4,"components":{"-1":[4],"0":[4]},"differentials":{"-1":[[2]]}}
inline Json complex_json(const Complex& c) {
  Json j;
  j["modulus"] = integer_json(c.modulus());
  Json comps = Json::object(), diffs = Json::object();
  if (!c.empty()) {
    for (int n = c.lo(); n <= c.hi(); ++n) comps[std::to_string(n)] = orders_json(c.at(n).orders());
    for (int n = c.lo(); n < c.hi(); ++n) diffs[std::to_string(n)] = matrix_json(c.d(n).entries());
  }
  j["components"] = comps;
  j["differentials"] = diffs;
  return j;
}

inline int degree_key(const std::string& key) {
  try {
    std::size_t used = 0;
    int n = std::stoi(key, &used);
    if (used == key.size()) return n;
  } catch (const std::exception&) {
  }
  throw InputError("degree key '" + key + "' is not an integer");
}

inline Complex complex_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("modulus"))
    throw InputError("complex JSON needs a modulus");
  Integer m = integer_from_json(j["modulus"], "modulus");
  if (m < 2) throw InputError("modulus must be at least 2");
  std::map<int, ZmModule> comps;
  std::map<int, ModuleMorphism> diffs;
  if (j.contains("components")) {
    for (const auto& [key, value] : j["components"].items()) {
      try {
        comps.emplace(degree_key(key), ZmModule(m, orders_from_json(value, "component " + key)));
      } catch (const InvariantViolation& e) {
        throw InputError("component " + key + ": " + e.what());
      }
    }
  }
  auto at = [&](int n) { return comps.count(n) ? comps.at(n) : ZmModule::zero(m); };
  if (j.contains("differentials")) {
    for (const auto& [key, value] : j["differentials"].items()) {
      int n = degree_key(key);
      diffs.emplace(n, morphism_from_json(value, at(n), at(n + 1), "differential " + key));
    }
  }
  try {
    return Complex::from_maps(m, comps, diffs);
  } catch (const InvariantViolation& e) {
    throw InputError(std::string("complex: ") + e.what());
  } catch (const DimensionMismatch& e) {
    throw InputError(std::string("complex: ") + e.what());
  }
}

inline Json chain_map_json(const ChainMap& f) {
  Json j;
  j["source"] = complex_json(f.source());
  j["target"] = complex_json(f.target());
  Json comps = Json::object();
  for (const auto& [n, g] : f.components()) comps[std::to_string(n)] = matrix_json(g.entries());
  j["components"] = comps;
  return j;
}

// --- subcategories ---------------------------------------------------------

inline Json subcat_json(const SubcatDescriptor& x) {
  Json gens = Json::array();
  for (const auto& g : x.generators) gens.push_back(orders_json(g.orders()));
  return Json{{"modulus", integer_json(x.modulus)}, {"generators", gens}, {"name", x.name}};
}

inline SubcatDescriptor subcat_from_json(const Json& j, std::optional<Integer> default_modulus) {
  if (!j.is_object()) throw InputError("subcategory JSON must be an object");
  std::optional<Integer> m = default_modulus;
  if (j.contains("modulus")) {
    Integer given = integer_from_json(j["modulus"], "modulus");
    if (m && *m != given)
      throw InputError("modulus mismatch: subcategory over Z/" + given.get_str() +
                       " but the job is over Z/" + m->get_str());
    m = given;
  }
  if (!m) throw InputError("subcategory JSON needs a modulus");
  std::string name = j.value("name", std::string("X"));
  if (!j.contains("generators")) {
    if (name == "PROJ") return SubcatDescriptor::PROJ(*m);
    if (name == "GP") return SubcatDescriptor::GP(*m);
    throw InputError("subcategory '" + name + "' needs generators");
  }
  std::vector<ZmModule> gens;
  try {
    for (const auto& g : j["generators"]) gens.emplace_back(*m, orders_from_json(g, "generator"));
    return SubcatDescriptor(*m, gens, name);
  } catch (const InvariantViolation& e) {
    throw InputError(std::string("subcategory: ") + e.what());
  }
}

/// "PROJ", "GP", a JSON descriptor, or a comma-separated list of generator literals.
inline SubcatDescriptor parse_subcat(std::string_view spec, const Integer& modulus) {
  std::string s = trim(spec);
  if (s == "PROJ" || s == "proj") return SubcatDescriptor::PROJ(modulus);
  if (s == "GP" || s == "gp") return SubcatDescriptor::GP(modulus);
  if (!s.empty() && s[0] == '{') return subcat_from_json(parse_json(s, "subcategory"), modulus);
  std::vector<ZmModule> gens;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) gens.push_back(parse_module(part, modulus));
  if (gens.empty()) throw InputError("empty subcategory '" + s + "'");
  try {
    return SubcatDescriptor(modulus, gens, "add(" + s + ")");
  } catch (const InvariantViolation& e) {
    throw InputError(std::string("subcategory: ") + e.what());
  }
}

// --- groups, tables, sequences --------------------------------------------

inline Json group_json(const AbGroup& g) { return orders_json(g.invariant_factors()); }

inline std::string factors_text(const AbGroup& g) {
  std::string s;
  for (const auto& f : g.invariant_factors()) s += (s.empty() ? "" : " ") + f.get_str();
  return s;
}

/// {"flavor":"tate","entries":{"1":[2],"2":[2]},"depth_used":6}
inline Json ext_table_json(const ExtTable& t) {
  Json j;
  j["flavor"] = flavor_name(t.flavor);
  if (t.flavor == ExtFlavor::relative) j["subcategory"] = t.subcategory;
  Json e = Json::object();
  for (const auto& [n, g] : t.entries) e[std::to_string(n)] = group_json(g);
  j["entries"] = e;
  j["depth_used"] = t.depth_used;
  return j;
}

/// Header "n,invariant_factors"; factors separated by spaces, empty for the trivial group.
inline std::string ext_table_csv(const ExtTable& t) {
  std::string s = "n,invariant_factors\n";
  for (const auto& [n, g] : t.entries) s += std::to_string(n) + "," + factors_text(g) + "\n";
  return s;
}

inline std::string ext_table_text(const ExtTable& t) {
  std::string s;
  for (const auto& [n, g] : t.entries) s += "n=" + std::to_string(n) + "  " + g.to_string() + "\n";
  return s;
}

inline Json certificate_json(const NodeCertificate& c) {
  return Json{{"node", c.node},
              {"composite_zero", c.composite_zero},
              {"image_order", integer_json(c.image_order)},
              {"kernel_order", integer_json(c.kernel_order)},
              {"exact", c.exact()}};
}

/// Nodes with their cyclic orders and the maps as matrices: enough to recheck im = ker.
inline Json sequence_json(const ExactSequence& s) {
  Json nodes = Json::array(), maps = Json::array(), certs = Json::array();
  for (const auto& n : s.nodes)
    nodes.push_back(Json{{"label", n.label},
                         {"orders", orders_json(n.module.orders())},
                         {"group", group_json(n.module.group())}});
  for (const auto& f : s.maps) maps.push_back(matrix_json(f.entries()));
  for (const auto& c : s.certificates) certs.push_back(certificate_json(c));
  return Json{{"nodes", nodes}, {"maps", maps}, {"certificates", certs}, {"exact", s.exact()}};
}

inline std::string sequence_text(const ExactSequence& s) {
  std::string out;
  std::map<std::size_t, const NodeCertificate*> by_node;
  for (const auto& c : s.certificates) by_node[c.node] = &c;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const auto& n = s.nodes[i];
    out += n.label + " = " + n.module.group().to_string();
    if (auto it = by_node.find(i); it != by_node.end()) {
      const auto& c = *it->second;
      out += "   [im " + c.image_order.get_str() + " | ker " + c.kernel_order.get_str() +
             (c.exact() ? " | exact]" : " | NOT EXACT]");
    }
    out += "\n";
    if (i < s.maps.size()) out += "    | " + matrix_json(s.maps[i].entries()).dump() + "\n";
  }
  return out;
}

}  // namespace relhom::io
