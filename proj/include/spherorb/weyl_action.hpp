#pragma once

// The action of the free product F(W_k) of the simple involutions on the
// orbit set, the check that it factors through W_k, and the little Weyl
// group (stabilizer of the open orbit).

#include "spherorb/orbit_datum.hpp"

#include <cstddef>
#include <deque>
#include <map>
#include <string>
#include <vector>

namespace spherorb {

// sigma(alpha, .) materialized as permutations of orbit indices.
struct ActionTable {
  std::vector<std::string> ids;
  std::vector<std::vector<std::size_t>> perms;

  std::size_t index(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return i;
    throw Error("unknown orbit id '" + id + "'");
  }
};

inline ActionTable action_table(const OrbitDatum& d) {
  ActionTable t;
  for (const auto& o : d.orbits) t.ids.push_back(o.id);
  for (std::size_t alpha = 0; alpha < d.root_system.dim(); ++alpha) {
    std::vector<std::size_t> perm;
    for (const auto& id : t.ids) perm.push_back(t.index(sigma(d, alpha, id)));
    t.perms.push_back(std::move(perm));
  }
  return t;
}

namespace detail {
inline std::size_t act_indices(const ActionTable& t, const std::vector<int>& word, std::size_t x) {
  for (int a : word) {
    if (a < 0 || static_cast<std::size_t>(a) >= t.perms.size())
      throw Error("simple root index out of range: " + std::to_string(a));
    x = t.perms[static_cast<std::size_t>(a)][x];
  }
  return x;
}
}  // namespace detail

// sigma(word.back()) o ... o sigma(word.front()) applied to `id`.
inline std::string act_word(const OrbitDatum& d, const std::vector<int>& word, const std::string& id) {
  const auto t = action_table(d);
  return t.ids[detail::act_indices(t, word, t.index(id))];
}

struct BraidViolation {
  std::size_t alpha;
  std::size_t beta;
  int order;  // m(alpha, beta)
  std::string witness;
  std::string image;
};

// Checks (sigma_alpha sigma_beta)^m(alpha,beta) = id for every pair.
inline std::vector<BraidViolation> braid_check(const OrbitDatum& d) {
  const auto t = action_table(d);
  std::vector<BraidViolation> out;
  const auto n = d.root_system.dim();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const int m = braid_order(d.root_system, a, b);
      std::vector<int> word;
      for (int k = 0; k < m; ++k) {
        word.push_back(static_cast<int>(b));
        word.push_back(static_cast<int>(a));
      }
      for (std::size_t x = 0; x < t.ids.size(); ++x) {
        const auto y = detail::act_indices(t, word, x);
        if (y != x) {
          out.push_back({a, b, m, t.ids[x], t.ids[y]});
          break;
        }
      }
    }
  return out;
}

struct OpenOrbitClass {
  std::vector<std::string> members;  // in datum order
  bool factors_through_weyl = true;  // false: only an F(W_k)-orbit
};

inline OpenOrbitClass orbit_of_open(const OrbitDatum& d) {
  const auto* open = d.open_orbit();
  if (!open) throw Error("datum has no unique open orbit");
  const auto t = action_table(d);
  std::vector<bool> reached(t.ids.size(), false);
  std::deque<std::size_t> queue{t.index(open->id)};
  reached[queue.front()] = true;
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (const auto& perm : t.perms)
      if (!reached[perm[x]]) {
        reached[perm[x]] = true;
        queue.push_back(perm[x]);
      }
  }
  OpenOrbitClass out;
  for (std::size_t i = 0; i < t.ids.size(); ++i)
    if (reached[i]) out.members.push_back(t.ids[i]);
  out.factors_through_weyl = braid_check(d).empty();
  return out;
}

struct SubgroupDescription {
  std::vector<WeylElement> generators;
  std::vector<WeylElement> elements;

  std::size_t order() const { return elements.size(); }
  bool contains(const WeylElement& w) const {
    for (const auto& e : elements)
      if (e.matrix() == w.matrix()) return true;
    return false;
  }
};

// Acting by an element means acting by its witness word; a clean braid
// check makes this independent of the word chosen.
inline std::string act_element(const OrbitDatum& d, const WeylElement& w, const std::string& id) {
  return act_word(d, w.word(), id);
}

// Orbit-stabilizer with Schreier generators t_x s t_{x.s}^{-1}.
inline SubgroupDescription stabilizer_open(const OrbitDatum& d) {
  if (const auto violations = braid_check(d); !violations.empty()) {
    const auto& v = violations.front();
    throw Error("braid relation fails for roots " + std::to_string(v.alpha) + "," +
                std::to_string(v.beta) + " (witness orbit " + v.witness +
                "); the stabilizer in W_k is undefined");
  }
  const auto* open = d.open_orbit();
  if (!open) throw Error("datum has no unique open orbit");
  const auto& rs = d.root_system;
  const auto t = action_table(d);

  std::map<std::size_t, WeylElement> transversal;
  const auto start = t.index(open->id);
  transversal.emplace(start, WeylElement::identity(rs));
  std::deque<std::size_t> queue{start};
  std::vector<WeylElement> schreier;
  std::set<IntMatrix> distinct;
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < rs.dim(); ++a) {
      const auto y = t.perms[a][x];
      const auto step = mul(transversal.at(x), WeylElement::simple(rs, a));
      auto it = transversal.find(y);
      if (it == transversal.end()) {
        transversal.emplace(y, step);
        queue.push_back(y);
        continue;
      }
      auto g = mul(step, inverse(it->second, rs));
      if (g.is_identity() || !distinct.insert(g.matrix()).second) continue;
      schreier.push_back(std::move(g));
    }
  }

  SubgroupDescription out;
  out.generators = schreier;
  if (schreier.empty()) {
    out.elements = {WeylElement::identity(rs)};
  } else {
    out.elements = subgroup_closure(schreier, rs);
  }
  return out;
}

struct GeneratorCheck {
  bool holds = false;
  std::vector<WeylElement> generating_set;
};

// Reflections in the stabilizer, plus products s_gamma s_delta in it with
// gamma orthogonal to delta and gamma + delta not a root; holds when these
// generate the whole stabilizer.
inline GeneratorCheck check_generator_theorem(const OrbitDatum& d, const SubgroupDescription& stab) {
  const auto& rs = d.root_system;
  const auto& lines = rs.positive_lines();
  GeneratorCheck out;
  std::set<IntMatrix> taken;
  std::vector<WeylElement> refl;
  for (std::size_t l = 0; l < lines.size(); ++l) refl.push_back(reflection(rs, l));
  for (const auto& r : refl)
    if (stab.contains(r) && taken.insert(r.matrix()).second) out.generating_set.push_back(r);
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (rs.form(lines[i], lines[j]) != 0) continue;
      if (is_root(rs, add(lines[i], lines[j]))) continue;
      auto product = mul(refl[i], refl[j]);
      if (stab.contains(product) && taken.insert(product.matrix()).second)
        out.generating_set.push_back(std::move(product));
    }
  if (out.generating_set.empty()) {
    out.holds = stab.order() == 1;
    return out;
  }
  const auto closure = subgroup_closure(out.generating_set, rs);
  out.holds = closure.size() == stab.order();
  return out;
}

inline GeneratorCheck check_generator_theorem(const OrbitDatum& d) {
  return check_generator_theorem(d, stabilizer_open(d));
}

}  // namespace spherorb
