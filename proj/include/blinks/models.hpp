#pragma once

#include "param.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace blinks {

// Multiplicities of the degenerate fiber of the rational pencil through a
// boundary point, sorted ascending.
struct FibrationProfile {
  std::vector<long long> mult;
  bool operator==(const FibrationProfile&) const = default;
};

enum class OrbitKind { Fixed, Open, FiniteGeneric };

// One orbit class of the boundary action: either an explicit finite orbit
// (Fixed), a dense orbit (Open), or the generic locus whose orbits are the
// finite sets swept out by the generators (FiniteGeneric).
struct OrbitClass {
  OrbitKind kind = OrbitKind::Open;
  std::vector<Param> points;  // explicit points; empty for generic classes
  FibrationProfile profile;
};

struct ModelGenerator {
  std::string name;
  Mobius map;
};

struct ModelDescriptor {
  std::string name;
  long long degree = 0;
  QuadExtSpec extension;
  std::vector<OrbitClass> classes;
  std::vector<ModelGenerator> generators;
};

struct Catalog {
  std::string version;
  std::vector<ModelDescriptor> models;
};

// The built-in table of boundary models, one per isomorphy class of smooth
// completion for each boundary degree, with the induced boundary action.
inline const char* builtin_catalog_json() {
  return R"JSON({
  "version": "1.0.0",
  "models": [
    {
      "name": "P2_LINE", "degree": 1,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "open", "points": [], "profile": [1]}
      ],
      "generators": [
        {"name": "shift", "matrix": ["1", "1", "0", "1"]},
        {"name": "dbl", "matrix": ["2", "0", "0", "1"]},
        {"name": "inv", "matrix": ["0", "1", "1", "0"]}
      ]
    },
    {
      "name": "F0_DIAG", "degree": 2,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "open", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "shift", "matrix": ["1", "1", "0", "1"]},
        {"name": "dbl", "matrix": ["2", "0", "0", "1"]},
        {"name": "inv", "matrix": ["0", "1", "1", "0"]}
      ]
    },
    {
      "name": "P2_CONIC", "degree": 2,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "open", "points": [], "profile": [2]}
      ],
      "generators": [
        {"name": "shift", "matrix": ["1", "1", "0", "1"]},
        {"name": "dbl", "matrix": ["2", "0", "0", "1"]},
        {"name": "inv", "matrix": ["0", "1", "1", "0"]}
      ]
    },
    {
      "name": "F1_D0", "degree": 3,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "fixed", "points": ["inf"], "profile": [1, 2]},
        {"kind": "open", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "shift", "matrix": ["1", "1", "0", "1"]},
        {"name": "dbl", "matrix": ["2", "0", "0", "1"]}
      ]
    },
    {
      "name": "F0_D0", "degree": 4,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "fixed", "points": ["0", "inf"], "profile": [1, 2]},
        {"kind": "open", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "dbl", "matrix": ["2", "0", "0", "1"]},
        {"name": "inv", "matrix": ["0", "1", "1", "0"]}
      ]
    },
    {
      "name": "F2_D2", "degree": 4,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "fixed", "points": ["inf"], "profile": [1, 3]},
        {"kind": "open", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "shift", "matrix": ["1", "1", "0", "1"]},
        {"name": "dbl", "matrix": ["2", "0", "0", "1"]}
      ]
    },
    {
      "name": "F1_D1", "degree": 5,
      "extension": {"c0": "-1", "c1": "-1"},
      "classes": [
        {"kind": "fixed", "points": ["1", "w", "-1-w"], "profile": [1, 2]},
        {"kind": "finite_generic", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "rot", "matrix": ["w", "0", "0", "1"]},
        {"name": "inv", "matrix": ["0", "1", "1", "0"]}
      ]
    },
    {
      "name": "F1_D2", "degree": 5,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "fixed", "points": ["inf"], "profile": [1, 3]},
        {"kind": "fixed", "points": ["0"], "profile": [1, 2]},
        {"kind": "open", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "dbl", "matrix": ["2", "0", "0", "1"]}
      ]
    },
    {
      "name": "F3_D3", "degree": 5,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "fixed", "points": ["inf"], "profile": [1, 4]},
        {"kind": "open", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "shift", "matrix": ["1", "1", "0", "1"]},
        {"name": "dbl", "matrix": ["2", "0", "0", "1"]}
      ]
    },
    {
      "name": "F4_C4", "degree": 6,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "fixed", "points": ["inf"], "profile": [1, 5]},
        {"kind": "open", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "shift", "matrix": ["1", "1", "0", "1"]},
        {"name": "dbl", "matrix": ["2", "0", "0", "1"]}
      ]
    },
    {
      "name": "F2_C21", "degree": 6,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "fixed", "points": ["inf"], "profile": [1, 4]},
        {"kind": "fixed", "points": ["0"], "profile": [1, 2]},
        {"kind": "open", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "dbl", "matrix": ["2", "0", "0", "1"]}
      ]
    },
    {
      "name": "F2_C22", "degree": 6,
      "extension": {"c0": "-1", "c1": "0"},
      "classes": [
        {"kind": "fixed", "points": ["0", "inf"], "profile": [1, 2]},
        {"kind": "finite_generic", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "rot", "matrix": ["w", "0", "0", "1"]},
        {"name": "inv", "matrix": ["0", "1", "1", "0"]}
      ]
    },
    {
      "name": "F0_C00", "degree": 6,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "fixed", "points": ["0", "inf"], "profile": [1, 3]},
        {"kind": "open", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "dbl", "matrix": ["2", "0", "0", "1"]},
        {"name": "inv", "matrix": ["0", "1", "1", "0"]}
      ]
    },
    {
      "name": "F0_C01", "degree": 6,
      "extension": {"c0": "0", "c1": "0"},
      "classes": [
        {"kind": "fixed", "points": ["inf"], "profile": [1, 3]},
        {"kind": "finite_generic", "points": [], "profile": [1, 1]}
      ],
      "generators": [
        {"name": "flip", "matrix": ["-1", "-2/3", "0", "1"]}
      ]
    },
    {
      "name": "F0_C1B", "degree": 6,
      "extension": {"c0": "3", "c1": "0"},
      "classes": [
        {"kind": "fixed", "points": ["0"], "profile": [1, 2]},
        {"kind": "fixed", "points": ["inf"], "profile": [1, 2]},
        {"kind": "fixed", "points": ["w"], "profile": [1, 2]},
        {"kind": "fixed", "points": ["-w"], "profile": [1, 2]},
        {"kind": "finite_generic", "points": [], "profile": [1, 1]}
      ],
      "generators": []
    }
  ]
})JSON";
}

inline Catalog load_catalog_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("version") || !j.contains("models") ||
      !j["models"].is_array())
    throw std::invalid_argument("catalog: missing version or models");
  Catalog cat;
  cat.version = j["version"].get<std::string>();
  std::set<std::string> names;
  for (const auto& mj : j["models"]) {
    ModelDescriptor m;
    if (!mj.contains("name") || !mj.contains("degree"))
      throw std::invalid_argument("catalog: model without name or degree");
    m.name = mj["name"].get<std::string>();
    if (!names.insert(m.name).second)
      throw std::invalid_argument("catalog: duplicate model " + m.name);
    m.degree = mj["degree"].get<long long>();
    if (m.degree < 1) throw std::invalid_argument("catalog: nonpositive degree in " + m.name);
    if (mj.contains("extension")) {
      m.extension.c0 = parse_rational(mj["extension"].value("c0", "0"));
      m.extension.c1 = parse_rational(mj["extension"].value("c1", "0"));
    }

    if (!mj.contains("classes") || !mj["classes"].is_array() || mj["classes"].empty())
      throw std::invalid_argument("catalog: model without orbit classes: " + m.name);
    std::size_t generic_count = 0;
    std::set<std::string> seen_points;
    for (const auto& cj : mj["classes"]) {
      OrbitClass oc;
      const std::string kind = cj.value("kind", "");
      if (kind == "fixed") oc.kind = OrbitKind::Fixed;
      else if (kind == "open") oc.kind = OrbitKind::Open;
      else if (kind == "finite_generic") oc.kind = OrbitKind::FiniteGeneric;
      else throw std::invalid_argument("catalog: unknown class kind in " + m.name);
      if (cj.contains("points")) {
        for (const auto& pj : cj["points"]) {
          const std::string ps = pj.get<std::string>();
          if (!seen_points.insert(ps).second)
            throw std::invalid_argument("catalog: point in two classes in " + m.name);
          oc.points.push_back(parse_param(ps));
        }
      }
      if (oc.kind == OrbitKind::Fixed && oc.points.empty())
        throw std::invalid_argument("catalog: empty fixed class in " + m.name);
      if (oc.kind != OrbitKind::Fixed) {
        if (!oc.points.empty())
          throw std::invalid_argument("catalog: generic class with points in " + m.name);
        ++generic_count;
      }
      if (!cj.contains("profile") || !cj["profile"].is_array() || cj["profile"].empty())
        throw std::invalid_argument("catalog: class without profile in " + m.name);
      for (const auto& x : cj["profile"]) {
        const long long v = x.get<long long>();
        if (v < 1) throw std::invalid_argument("catalog: nonpositive multiplicity in " + m.name);
        oc.profile.mult.push_back(v);
      }
      std::sort(oc.profile.mult.begin(), oc.profile.mult.end());
      m.classes.push_back(std::move(oc));
    }
    if (generic_count != 1)
      throw std::invalid_argument("catalog: model needs exactly one generic class: " + m.name);

    if (mj.contains("generators")) {
      std::set<std::string> gnames;
      for (const auto& gj : mj["generators"]) {
        ModelGenerator g;
        g.name = gj.value("name", "");
        if (g.name.empty() || !gnames.insert(g.name).second)
          throw std::invalid_argument("catalog: bad generator name in " + m.name);
        if (!gj.contains("matrix"))
          throw std::invalid_argument("catalog: generator needs a 2x2 matrix in " + m.name);
        const auto& mat = gj["matrix"];
        if (!mat.is_array() || mat.size() != 4)
          throw std::invalid_argument("catalog: generator needs a 2x2 matrix in " + m.name);
        g.map.alpha = parse_quad_ext(mat[0].get<std::string>());
        g.map.beta = parse_quad_ext(mat[1].get<std::string>());
        g.map.gamma = parse_quad_ext(mat[2].get<std::string>());
        g.map.delta = parse_quad_ext(mat[3].get<std::string>());
        if (qe_is_zero(mobius_det(m.extension, g.map)))
          throw std::invalid_argument("catalog: singular generator in " + m.name);
        m.generators.push_back(std::move(g));
      }
    }
    cat.models.push_back(std::move(m));
  }
  return cat;
}

// Loads the catalog once: from the file named by BLINKS_CATALOG when set,
// otherwise from the built-in table.
inline const Catalog& catalog() {
  static const Catalog cat = [] {
    if (const char* path = std::getenv("BLINKS_CATALOG")) {
      std::ifstream in(path);
      if (!in) throw std::runtime_error(std::string("cannot open catalog file: ") + path);
      nlohmann::json j;
      in >> j;
      return load_catalog_from_json(j);
    }
    return load_catalog_from_json(nlohmann::json::parse(builtin_catalog_json()));
  }();
  return cat;
}

inline const ModelDescriptor& find_model(const std::string& name) {
  for (const auto& m : catalog().models)
    if (m.name == name) return m;
  throw std::invalid_argument("unknown model: " + name);
}

inline std::vector<ModelDescriptor> models_of_degree(long long d) {
  std::vector<ModelDescriptor> out;
  for (const auto& m : catalog().models)
    if (m.degree == d) out.push_back(m);
  return out;
}

inline const OrbitClass& class_of(const ModelDescriptor& m, const Param& p) {
  const OrbitClass* generic = nullptr;
  for (const auto& oc : m.classes) {
    if (oc.kind == OrbitKind::Fixed) {
      for (const auto& q : oc.points)
        if (q == p) return oc;
    } else {
      generic = &oc;
    }
  }
  if (!generic) throw std::logic_error("model without a generic class: " + m.name);
  return *generic;
}

inline FibrationProfile profile_of(const ModelDescriptor& m, const Param& p) {
  return class_of(m, p).profile;
}

// The finite orbit of p under the generator group; only meaningful for models
// whose generic orbits are finite.
inline std::set<Param, ParamLess> orbit_of(const ModelDescriptor& m, const Param& p) {
  std::set<Param, ParamLess> orbit{p};
  std::vector<Param> todo{p};
  while (!todo.empty()) {
    const Param cur = todo.back();
    todo.pop_back();
    for (const auto& g : m.generators)
      for (const Mobius& map : {g.map, mobius_inverse(g.map)}) {
        const Param next = mobius_apply(m.extension, map, cur);
        if (orbit.insert(next).second) todo.push_back(next);
      }
    if (orbit.size() > 4096)
      throw std::domain_error("orbit enumeration exceeded bound in model " + m.name);
  }
  return orbit;
}

inline bool same_orbit(const ModelDescriptor& m, const Param& p, const Param& q) {
  const OrbitClass& cp = class_of(m, p);
  const OrbitClass& cq = class_of(m, q);
  if (&cp != &cq) return false;
  switch (cp.kind) {
    case OrbitKind::Fixed:
    case OrbitKind::Open:
      return true;
    case OrbitKind::FiniteGeneric:
      return orbit_of(m, p).count(q) > 0;
  }
  return false;
}

// Whether a triangular letter may run from (ma, pa) to (mb, pb): profiles
// must match, and either the endpoints lie in one orbit of one model or the
// pencils are of the generic two-reduced-lines type.
inline bool letter_admissible(const ModelDescriptor& ma, const Param& pa,
                              const ModelDescriptor& mb, const Param& pb) {
  if (ma.degree != mb.degree)
    throw std::invalid_argument("letter_admissible: boundary degrees differ");
  if (!(profile_of(ma, pa) == profile_of(mb, pb))) return false;
  if (ma.name == mb.name && same_orbit(ma, pa, pb)) return true;
  return profile_of(ma, pa).mult == std::vector<long long>{1, 1};
}

// Folds a comma-separated generator word like "dbl,inv^-1" into one exact
// Moebius map; the leftmost generator acts first.  `invert` gives the
// inverse word's map.
inline Mobius action_to_mobius(const ModelDescriptor& m, const std::string& action,
                               bool invert = false) {
  std::vector<std::pair<std::string, bool>> steps;  // (generator name, inverted)
  std::stringstream ss(action);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    bool inv = false;
    if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
      inv = true;
      tok = tok.substr(0, tok.size() - 3);
    }
    steps.emplace_back(tok, inv);
  }
  if (invert) {
    std::reverse(steps.begin(), steps.end());
    for (auto& s : steps) s.second = !s.second;
  }
  Mobius out = mobius_identity();
  for (const auto& [name, inv] : steps) {
    const ModelGenerator* gen = nullptr;
    for (const auto& g : m.generators)
      if (g.name == name) gen = &g;
    if (!gen) throw std::invalid_argument("unknown generator " + name + " in model " + m.name);
    out = mobius_compose(m.extension, inv ? mobius_inverse(gen->map) : gen->map, out);
  }
  return out;
}

// Evaluates a generator word on a point.
inline Param apply_action(const ModelDescriptor& m, const std::string& action, const Param& p,
                          bool invert = false) {
  return mobius_apply(m.extension, action_to_mobius(m, action, invert), p);
}

}  // namespace blinks
