#pragma once

// JSON instance files, fixture and random generators, and the suite runner.
// Field elements are strings ("n/d" over Q, decimal residues over F_p) and
// matrices are row-major arrays of them, so nothing is lost in transit.

#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cct/comparison.hpp"
#include "cct/fixtures.hpp"

namespace cct {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  int max_degree = 3;
  int nerve_cap = kDefaultNerveCap;
  std::uint64_t seed = 1;
  int random_modules = 5;
};

template <class K>
struct Instance {
  std::string name;
  K field;
  PrestackPtr<K> a;
  PrestackPtr<K> b;  // same pointer as a unless the file has "b"
  RunConfig config;

  const FiniteCategory& base() const { return a->base(); }
  SettingPtr<K> setting() const { return std::make_shared<const BimoduleSetting<K>>(a, b); }
};

namespace detail {

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(path + "/" + key, "schema", "missing field");
  return j.at(key);
}

inline std::string require_string(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) throw ValidationError(path + "/" + key, "schema", "expected a string");
  return v.get<std::string>();
}

inline std::size_t require_index(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_unsigned()) throw ValidationError(path + "/" + key, "schema", "expected a non-negative integer");
  return v.get<std::size_t>();
}

inline const json& require_array(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_array()) throw ValidationError(path + "/" + key, "schema", "expected an array");
  return v;
}

template <class K>
json vec_to_json(const K& k, const Vec<K>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(k.format(x));
  return out;
}

template <class K>
Vec<K> vec_from_json(const K& k, const json& j, std::size_t expected, const std::string& path) {
  if (!j.is_array() || j.size() != expected)
    throw ValidationError(path, "schema", "expected an array of " + std::to_string(expected) + " field elements");
  Vec<K> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw ValidationError(path + "/" + std::to_string(i), "schema", "field elements are strings");
    try {
      out.push_back(k.parse(j[i].get<std::string>()));
    } catch (const ParseError& e) {
      throw ValidationError(path + "/" + std::to_string(i), "field element", e.what());
    }
  }
  return out;
}

template <class K>
json matrix_to_json(const K& k, const Matrix<K>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(k.format(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

template <class K>
Matrix<K> matrix_from_json(const K& k, const json& j, std::size_t rows, std::size_t cols, const std::string& path) {
  if (!j.is_array() || j.size() != rows)
    throw ValidationError(path, "schema", "expected " + std::to_string(rows) + " rows");
  Matrix<K> m(k, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    Vec<K> row = vec_from_json(k, j[i], cols, path + "/" + std::to_string(i));
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = row[c];
  }
  return m;
}

inline std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

}  // namespace detail

// -- fields -------------------------------------------------------------------

inline json field_to_json(const Rationals&) { return {{"kind", "Q"}}; }
inline json field_to_json(const PrimeField& f) { return {{"kind", "F"}, {"p", f.p()}}; }

/// Calls fn with the field described by j, either Rationals or PrimeField.
template <class Fn>
decltype(auto) with_field(const json& j, Fn&& fn) {
  std::string kind = detail::require_string(j, "kind", "/field");
  if (kind == "Q") return fn(Rationals{});
  if (kind == "F") {
    const json& p = detail::require(j, "p", "/field");
    if (!p.is_number_unsigned() || p.get<std::uint64_t>() >= (1ull << 31))
      throw ValidationError("/field/p", "field", "p must be a prime below 2^31");
    return fn(PrimeField(p.get<std::uint32_t>()));
  }
  throw ValidationError("/field/kind", "field", "unknown field kind '" + kind + "'");
}

// -- base categories ------------------------------------------------------------

inline json base_to_json(const FiniteCategory& c) {
  json mors = json::array();
  for (const auto& m : c.morphisms()) mors.push_back({{"id", m.id}, {"src", c.object_id(m.src)}, {"dst", c.object_id(m.dst)}});
  json ids = json::object();
  for (std::size_t x = 0; x < c.num_objects(); ++x) ids[c.object_id(x)] = c.morphism(c.identity(x)).id;
  json comp = json::array();
  for (const auto& e : c.composition_entries()) comp.push_back({{"g", e.g}, {"f", e.f}, {"gf", e.gf}});
  return {{"objects", c.object_ids()}, {"morphisms", mors}, {"identities", ids}, {"composition", comp}};
}

/// Parses and validates; the identities and composition laws are checked here.
inline FiniteCategory base_from_json(const json& j) {
  const std::string p = "/base";
  std::vector<std::string> objects;
  for (const auto& o : detail::require_array(j, "objects", p)) {
    if (!o.is_string()) throw ValidationError(p + "/objects", "schema", "object ids are strings");
    objects.push_back(o.get<std::string>());
  }
  std::vector<std::tuple<std::string, std::string, std::string>> mors;
  const json& ms = detail::require_array(j, "morphisms", p);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    std::string q = p + "/morphisms/" + std::to_string(i);
    mors.emplace_back(detail::require_string(ms[i], "id", q), detail::require_string(ms[i], "src", q), detail::require_string(ms[i], "dst", q));
  }
  std::map<std::string, std::string> ids;
  const json& id = detail::require(j, "identities", p);
  if (!id.is_object()) throw ValidationError(p + "/identities", "schema", "expected an object");
  for (const auto& [obj, mor] : id.items()) {
    if (!mor.is_string()) throw ValidationError(p + "/identities/" + detail::escape(obj), "schema", "expected a morphism id");
    ids[obj] = mor.get<std::string>();
  }
  std::vector<FiniteCategory::CompositionEntry> comp;
  const json& cs = detail::require_array(j, "composition", p);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::string q = p + "/composition/" + std::to_string(i);
    comp.push_back({detail::require_string(cs[i], "g", q), detail::require_string(cs[i], "f", q), detail::require_string(cs[i], "gf", q)});
  }
  FiniteCategory c(objects, mors, ids, comp);
  c.validate();
  return c;
}

// -- linear categories and prestacks ----------------------------------------------

template <class K>
json linear_category_to_json(const LinearCategory<K>& c) {
  const K& k = c.field();
  const std::size_t n = c.num_objects();
  json homs = json::array(), ids = json::object(), prods = json::array();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (c.hom_dim(x, y) == 0) continue;
      json h{{"src", c.object_id(x)}, {"dst", c.object_id(y)}, {"dim", c.hom_dim(x, y)}};
      if (!c.hom_labels(x, y).empty()) h["basis"] = c.hom_labels(x, y);
      homs.push_back(h);
    }
  for (std::size_t x = 0; x < n; ++x) ids[c.object_id(x)] = detail::vec_to_json(k, c.identity(x));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t g = 0; g < c.hom_dim(y, z); ++g)
          for (std::size_t f = 0; f < c.hom_dim(x, y); ++f) {
            const auto& s = c.product(x, y, z, g, f);
            Vec<K> v = to_dense(k, s, c.hom_dim(x, z));
            if (std::all_of(v.begin(), v.end(), [&](const auto& e) { return k.is_zero(e); })) continue;
            prods.push_back({{"src", c.object_id(x)}, {"mid", c.object_id(y)}, {"dst", c.object_id(z)},
                             {"g", g}, {"f", f}, {"value", detail::vec_to_json(k, v)}});
          }
  return {{"objects", c.object_ids()}, {"homs", homs}, {"identities", ids}, {"products", prods}};
}

template <class K>
LinearCategoryPtr<K> linear_category_from_json(const K& k, const json& j, const std::string& p) {
  std::vector<std::string> objects;
  for (const auto& o : detail::require_array(j, "objects", p)) {
    if (!o.is_string()) throw ValidationError(p + "/objects", "schema", "object ids are strings");
    objects.push_back(o.get<std::string>());
  }
  std::unique_ptr<LinearCategory<K>> c;
  try {
    c = std::make_unique<LinearCategory<K>>(k, objects);
  } catch (const ValidationError& e) {
    throw ValidationError(p + "/objects", "ids", e.what());
  }
  auto index = [&](const json& e, const std::string& key, const std::string& q) {
    std::string id = detail::require_string(e, key, q);
    try {
      return c->object_index(id);
    } catch (const UnknownObject&) {
      throw ValidationError(q + "/" + key, "ids", "unknown object '" + id + "'");
    }
  };
  const json& homs = detail::require_array(j, "homs", p);
  for (std::size_t i = 0; i < homs.size(); ++i) {
    std::string q = p + "/homs/" + std::to_string(i);
    std::size_t x = index(homs[i], "src", q), y = index(homs[i], "dst", q);
    std::size_t d = detail::require_index(homs[i], "dim", q);
    std::vector<std::string> labels;
    if (homs[i].contains("basis")) {
      labels = homs[i].at("basis").get<std::vector<std::string>>();
      if (labels.size() != d) throw ValidationError(q + "/basis", "schema", "basis has the wrong length");
    }
    c->set_hom(x, y, d, labels);
  }
  const json& ids = detail::require(j, "identities", p);
  for (std::size_t x = 0; x < objects.size(); ++x) {
    std::string q = p + "/identities/" + detail::escape(objects[x]);
    if (!ids.contains(objects[x])) throw ValidationError(q, "identity", "missing");
    c->set_identity(x, to_sparse(k, detail::vec_from_json(k, ids.at(objects[x]), c->hom_dim(x, x), q)));
  }
  const json& prods = detail::require_array(j, "products", p);
  for (std::size_t i = 0; i < prods.size(); ++i) {
    std::string q = p + "/products/" + std::to_string(i);
    std::size_t x = index(prods[i], "src", q), y = index(prods[i], "mid", q), z = index(prods[i], "dst", q);
    std::size_t g = detail::require_index(prods[i], "g", q), f = detail::require_index(prods[i], "f", q);
    if (g >= c->hom_dim(y, z) || f >= c->hom_dim(x, y)) throw ValidationError(q, "schema", "basis index out of range");
    c->set_product(x, y, z, g, f, to_sparse(k, detail::vec_from_json(k, prods[i].at("value"), c->hom_dim(x, z), q + "/value")));
  }
  if (auto v = c->violation()) throw ValidationError(p, "linear category", *v);
  return std::shared_ptr<const LinearCategory<K>>(std::move(c));
}

template <class K>
json prestack_to_json(const Prestack<K>& s) {
  const K& k = s.field();
  const auto& base = s.base();
  json fibers = json::object(), restr = json::object(), coh = json::array();
  for (std::size_t x = 0; x < base.num_objects(); ++x) fibers[base.object_id(x)] = linear_category_to_json(s.fiber(x));
  for (std::size_t u = 0; u < base.num_morphisms(); ++u) {
    const auto& r = s.restriction(u);
    const auto& src = *r.source;
    const auto& dst = *r.target;
    json objs = json::object(), maps = json::array();
    for (std::size_t a = 0; a < src.num_objects(); ++a) objs[src.object_id(a)] = dst.object_id(r.object_map[a]);
    for (std::size_t a = 0; a < src.num_objects(); ++a)
      for (std::size_t b = 0; b < src.num_objects(); ++b)
        if (src.hom_dim(a, b) > 0 && dst.hom_dim(r.object_map[a], r.object_map[b]) > 0)
          maps.push_back({{"src", src.object_id(a)}, {"dst", src.object_id(b)}, {"rows", detail::matrix_to_json(k, r.map(a, b))}});
    restr[base.morphism(u).id] = {{"objects", objs}, {"maps", maps}};
  }
  for (const auto& [key, c] : s.coherence_entries()) {
    auto [u, v, a] = key;
    coh.push_back({{"u", base.morphism(u).id}, {"v", base.morphism(v).id}, {"object", s.fiber(base.dst(u)).object_id(a)},
                   {"value", detail::vec_to_json(k, c)}});
  }
  return {{"fibers", fibers}, {"restrictions", restr}, {"coherence", coh}};
}

template <class K>
PrestackPtr<K> prestack_from_json(const K& k, const FiniteCategory& base, const json& j, const std::string& p) {
  Prestack<K> s(k, base);
  const json& fibers = detail::require(j, "fibers", p);
  for (std::size_t x = 0; x < base.num_objects(); ++x) {
    std::string q = p + "/fibers/" + detail::escape(base.object_id(x));
    if (!fibers.contains(base.object_id(x))) throw ValidationError(q, "fiber", "missing");
    s.set_fiber(x, linear_category_from_json(k, fibers.at(base.object_id(x)), q));
  }
  const json& restr = detail::require(j, "restrictions", p);
  for (std::size_t u = 0; u < base.num_morphisms(); ++u) {
    std::string q = p + "/restrictions/" + detail::escape(base.morphism(u).id);
    if (!restr.contains(base.morphism(u).id)) throw ValidationError(q, "restriction", "missing");
    const json& r = restr.at(base.morphism(u).id);
    auto src = s.fiber_ptr(base.dst(u));
    auto dst = s.fiber_ptr(base.src(u));
    LinearFunctor<K> f{src, dst, {}, {}};
    const json& objs = detail::require(r, "objects", q);
    for (std::size_t a = 0; a < src->num_objects(); ++a) {
      const std::string& id = src->object_id(a);
      if (!objs.contains(id) || !objs.at(id).is_string()) throw ValidationError(q + "/objects/" + detail::escape(id), "restriction", "missing object image");
      try {
        f.object_map.push_back(dst->object_index(objs.at(id).get<std::string>()));
      } catch (const UnknownObject& e) {
        throw ValidationError(q + "/objects/" + detail::escape(id), "restriction", e.what());
      }
    }
    const std::size_t n = src->num_objects();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        f.hom_matrix.emplace_back(k, dst->hom_dim(f.object_map[a], f.object_map[b]), src->hom_dim(a, b));
    const json& maps = detail::require_array(r, "maps", q);
    for (std::size_t i = 0; i < maps.size(); ++i) {
      std::string mq = q + "/maps/" + std::to_string(i);
      std::size_t a, b;
      try {
        a = src->object_index(detail::require_string(maps[i], "src", mq));
        b = src->object_index(detail::require_string(maps[i], "dst", mq));
      } catch (const UnknownObject& e) {
        throw ValidationError(mq, "restriction", e.what());
      }
      auto& m = f.hom_matrix[a * n + b];
      m = detail::matrix_from_json(k, detail::require(maps[i], "rows", mq), m.rows(), m.cols(), mq + "/rows");
    }
    s.set_restriction(u, std::move(f));
  }
  const json& coh = detail::require_array(j, "coherence", p);
  for (std::size_t i = 0; i < coh.size(); ++i) {
    std::string q = p + "/coherence/" + std::to_string(i);
    std::size_t u, v, a;
    try {
      u = base.morphism_index(detail::require_string(coh[i], "u", q));
      v = base.morphism_index(detail::require_string(coh[i], "v", q));
      if (!base.composable(u, v)) throw ValidationError(q, "coherence", "u and v are not composable");
      a = s.fiber(base.dst(u)).object_index(detail::require_string(coh[i], "object", q));
    } catch (const UnknownObject& e) {
      throw ValidationError(q, "coherence", e.what());
    }
    std::size_t from = s.pull(v, s.pull(u, a)), to = s.pull(base.compose(u, v), a);
    s.set_coherence(u, v, a, detail::vec_from_json(k, detail::require(coh[i], "value", q), s.fiber(base.src(v)).hom_dim(from, to), q + "/value"));
  }
  s.validate(p);
  return std::make_shared<const Prestack<K>>(std::move(s));
}

// -- instances --------------------------------------------------------------------

template <class K>
json instance_to_json(const Instance<K>& in) {
  json j{{"schema_version", kSchemaVersion},
         {"name", in.name},
         {"field", field_to_json(in.field)},
         {"base", base_to_json(in.base())},
         {"a", prestack_to_json(*in.a)},
         {"config",
          {{"max_degree", in.config.max_degree},
           {"nerve_cap", in.config.nerve_cap},
           {"seed", in.config.seed},
           {"random_modules", in.config.random_modules}}}};
  if (in.b != in.a) j["b"] = prestack_to_json(*in.b);
  return j;
}

template <class K>
std::string serialize(const Instance<K>& in) {
  return instance_to_json(in).dump(1) + "\n";
}

template <class K>
Instance<K> instance_from_json(const K& k, const json& j) {
  const json& v = detail::require(j, "schema_version", "");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    throw SchemaVersionError("unsupported schema_version " + v.dump() + " (expected " + std::to_string(kSchemaVersion) + ")");
  Instance<K> in{j.value("name", std::string{}), k, nullptr, nullptr, {}};
  FiniteCategory base = base_from_json(detail::require(j, "base", ""));
  in.a = prestack_from_json(k, base, detail::require(j, "a", ""), "/a");
  in.b = j.contains("b") ? prestack_from_json(k, base, j.at("b"), "/b") : in.a;
  if (j.contains("config")) {
    const json& c = j.at("config");
    in.config.max_degree = c.value("max_degree", in.config.max_degree);
    in.config.nerve_cap = c.value("nerve_cap", in.config.nerve_cap);
    in.config.seed = c.value("seed", in.config.seed);
    in.config.random_modules = c.value("random_modules", in.config.random_modules);
  }
  return in;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

/// Parses, picks the field, validates, and hands the instance to fn.
template <class Fn>
decltype(auto) with_instance(const json& j, Fn&& fn) {
  return with_field(detail::require(j, "field", ""), [&](auto k) { return fn(instance_from_json(k, j)); });
}

// -- generators ---------------------------------------------------------------------

template <class K>
Instance<K> fixture_instance(const std::string& name, const K& k) {
  auto p = std::make_shared<const Prestack<K>>(fixture(name, k));
  return Instance<K>{name, k, p, p, {}};
}

namespace detail {

/// At most two objects, loops k[x]/x^2 or k, up to two arrows 0 -> 1, and
/// every product of non-identity basis elements zero.
template <class K>
LinearCategoryPtr<K> random_fiber(const K& k, std::mt19937_64& rng) {
  std::size_t n = 1 + rng() % 2;
  std::vector<std::string> names;
  for (std::size_t x = 0; x < n; ++x) names.push_back("A" + std::to_string(x));
  LinearCategory<K> c(k, names);
  for (std::size_t x = 0; x < n; ++x) {
    bool loop = rng() % 2;
    c.set_hom(x, x, loop ? 2 : 1, loop ? std::vector<std::string>{"1", "x" + std::to_string(x)} : std::vector<std::string>{"1"});
    c.set_identity(x, {{0, k.one()}});
  }
  if (n == 2) {
    std::size_t arrows = rng() % 3;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < arrows; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
    c.set_hom(0, 1, arrows, labels);
  }
  c.fill_products([&](std::size_t x, std::size_t y, std::size_t z, std::size_t g, std::size_t f) -> Sparse<K> {
    if (x == y && f == 0) return {{g, k.one()}};
    if (y == z && g == 0) return {{f, k.one()}};
    return {};
  });
  return std::make_shared<const LinearCategory<K>>(std::move(c));
}

/// The functor c -> k killing every non-identity basis element.
template <class K>
LinearFunctor<K> augmentation(const LinearCategoryPtr<K>& c, const LinearCategoryPtr<K>& point) {
  const K& k = c->field();
  const std::size_t n = c->num_objects();
  LinearFunctor<K> f{c, point, std::vector<std::size_t>(n, 0), {}};
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Matrix<K> m(k, 1, c->hom_dim(x, y));
      if (x == y) m(0, 0) = k.one();
      f.hom_matrix.push_back(std::move(m));
    }
  return f;
}

}  // namespace detail

/// A strict prestack on a random poset with at most three objects: a random
/// fiber on an up-closed set of objects, k elsewhere, identities between
/// equal fibers and the augmentation into k otherwise.
template <class K>
Instance<K> random_instance(std::uint64_t seed, const K& k) {
  std::mt19937_64 rng(seed);
  std::size_t n = 1 + rng() % 3;
  std::vector<std::string> objs;
  for (std::size_t i = 0; i < n; ++i) objs.push_back("x" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> rel;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng() % 2) rel.emplace_back(objs[i], objs[j]);
  FiniteCategory base = FiniteCategory::poset(objs, rel);
  std::vector<bool> upper(n);
  for (std::size_t x = 0; x < n; ++x) upper[x] = rng() % 2;
  // the base is transitively closed, so one pass makes the set up-closed
  for (std::size_t u = 0; u < base.num_morphisms(); ++u)
    if (upper[base.src(u)]) upper[base.dst(u)] = true;

  auto fiber = detail::random_fiber(k, rng);
  auto point = ground_field(k);
  Prestack<K> p(k, base);
  for (std::size_t x = 0; x < n; ++x) p.set_fiber(x, upper[x] ? fiber : point);
  for (std::size_t u = 0; u < base.num_morphisms(); ++u) {
    bool hi = upper[base.dst(u)], lo = upper[base.src(u)];
    if (hi == lo) p.set_restriction(u, LinearFunctor<K>::identity(hi ? fiber : point));
    else p.set_restriction(u, detail::augmentation(fiber, point));
  }
  p.validate();
  auto ptr = std::make_shared<const Prestack<K>>(std::move(p));
  Instance<K> in{"random-" + std::to_string(seed), k, ptr, ptr, {}};
  in.config.seed = seed;
  return in;
}

// -- suite ----------------------------------------------------------------------------

inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "ext-comparison", "pi-adjunction", "slice-restriction", "presheaf-comparison", "transported-bar",
      "homotopy",       "collapse-chain", "sigma",            "stably-flat"};
  return names;
}

template <class K>
CheckReport run_check(const Instance<K>& in, const std::string& name, int max_deg) {
  CheckReport failed{name, in.name};
  try {
    if (max_deg + 1 > in.config.nerve_cap && (name == "transported-bar" || name == "homotopy" || name == "presheaf-comparison"))
      throw CapExceeded(max_deg + 1, in.config.nerve_cap);
    auto s = in.setting();
    const std::uint64_t seed = in.config.seed;
    CheckReport rep;
    if (name == "ext-comparison") rep = check_ext_comparison(*s, r_test_modules(*s, seed, in.config.random_modules), max_deg, in.name);
    else if (name == "pi-adjunction") rep = check_pi_adjunction(*s, seed, 10, in.name);
    else if (name == "slice-restriction") rep = check_slice_restriction(s, fibered_test_modules(*s, seed), in.name);
    else if (name == "presheaf-comparison") rep = check_presheaf_comparison(in.base(), in.field, seed, max_deg, 3, in.name);
    else if (name == "transported-bar") rep = check_transported_bar(s, max_deg, in.name);
    else if (name == "homotopy") rep = check_homotopy_identities(s, max_deg, in.name);
    else if (name == "collapse-chain") rep = check_collapse_chain(*s, r_test_modules(*s, seed, 2), max_deg, in.name);
    else if (name == "sigma") rep = check_sigma_characterization(*s, sigma_test_modules(*s, seed), in.name);
    else if (name == "stably-flat") rep = check_stably_flat(*s, max_deg, in.name);
    else throw UnknownObject("unknown check '" + name + "'");
    return rep;
  } catch (const NotAPoset& e) {
    failed.skipped = true;
    failed.reason = e.what();
  } catch (const std::exception& e) {
    failed.pass = false;
    failed.reason = e.what();
  }
  return failed;
}

/// Runs the checks in the order given, so the output order is stable.
template <class K>
std::vector<CheckReport> run_suite(const Instance<K>& in, const std::vector<std::string>& checks, int max_deg) {
  std::vector<CheckReport> out;
  for (const auto& c : checks) out.push_back(run_check(in, c, max_deg));
  return out;
}

inline bool all_pass(const std::vector<CheckReport>& reps) {
  return std::all_of(reps.begin(), reps.end(), [](const CheckReport& r) { return r.pass; });
}

inline json report_to_json(const CheckReport& r) {
  json degrees = json::object();
  for (const auto& [i, v] : r.degrees()) degrees[std::to_string(i)] = {{"lhs", v.first}, {"rhs", v.second}};
  json cases = json::array();
  for (const auto& c : r.cases) {
    json d = json::object();
    for (const auto& [i, v] : c.degrees) d[std::to_string(i)] = {{"lhs", v.first}, {"rhs", v.second}};
    json e{{"label", c.label}, {"pass", c.pass}, {"degrees", d}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    cases.push_back(e);
  }
  json j{{"check", r.check}, {"instance", r.instance}, {"degrees", degrees}, {"pass", r.pass}, {"millis", r.millis}, {"cases", cases}};
  if (r.skipped) j["skipped"] = true;
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

}  // namespace cct
