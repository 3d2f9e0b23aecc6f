#pragma once

// The finite set of k-dense orbit families of a spherical variety, with its
// per-simple-root raise cells, and the rules those cells must obey.

#include "spherorb/coxeter.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace spherorb {

// Raise kinds of the rank-one classification. RIorN and Unclassified only
// come out of point-count inference.
enum class CellKind { U, TU, A, RT, RI, N, RIorN, Unclassified };

inline std::string_view kind_name(CellKind k) {
  switch (k) {
    case CellKind::U: return "U";
    case CellKind::TU: return "TU";
    case CellKind::A: return "A";
    case CellKind::RT: return "RT";
    case CellKind::RI: return "RI";
    case CellKind::N: return "N";
    case CellKind::RIorN: return "RI|N";
    case CellKind::Unclassified: return "unclassified";
  }
  return "?";
}

inline CellKind parse_kind(std::string_view s) {
  for (auto k : {CellKind::U, CellKind::TU, CellKind::A, CellKind::RT, CellKind::RI, CellKind::N,
                 CellKind::RIorN, CellKind::Unclassified})
    if (kind_name(k) == s) return k;
  throw Error("unknown cell kind '" + std::string(s) + "'");
}

// Number of role-tagged members: U {y,z}, TU {y,z1,z2}, A {y}, RT {y,z1,z2},
// RI/N {y,z}. Unclassified cells hold any number.
inline std::optional<std::size_t> kind_arity(CellKind k) {
  switch (k) {
    case CellKind::A: return 1;
    case CellKind::U:
    case CellKind::RI:
    case CellKind::N:
    case CellKind::RIorN: return 2;
    case CellKind::TU:
    case CellKind::RT: return 3;
    case CellKind::Unclassified: return std::nullopt;
  }
  return std::nullopt;
}

struct Orbit {
  std::string id;
  int dim = 0;
  int c = 0;
  int rk = 0;
  int s = 0;
  bool open = false;
  // Rows spanning the character lattice over Q, in simple-root coordinates.
  std::optional<std::vector<IntVector>> lattice;

  friend bool operator==(const Orbit&, const Orbit&) = default;
};

struct RaiseCell {
  CellKind kind = CellKind::A;
  std::vector<std::string> members;  // role order: y, then z or z1, z2

  const std::string& y() const { return members.at(0); }
  const std::string& z() const { return members.at(1); }
  const std::string& z1() const { return members.at(1); }
  const std::string& z2() const { return members.at(2); }

  friend bool operator==(const RaiseCell&, const RaiseCell&) = default;
};

struct OrbitDatum {
  RootSystem root_system;
  std::vector<Orbit> orbits;
  std::vector<std::vector<RaiseCell>> cells;  // indexed by simple root
  std::vector<std::string> notes;

  // Orbits by (dim, id), cells by y; serialization and comparison rely on it.
  void canonicalize() {
    std::sort(orbits.begin(), orbits.end(), [](const Orbit& a, const Orbit& b) {
      return std::tie(a.dim, a.id) < std::tie(b.dim, b.id);
    });
    for (auto& list : cells)
      std::sort(list.begin(), list.end(), [](const RaiseCell& a, const RaiseCell& b) {
        return a.members < b.members;
      });
  }

  const Orbit* find(const std::string& id) const {
    for (const auto& o : orbits)
      if (o.id == id) return &o;
    return nullptr;
  }

  const Orbit& at(const std::string& id) const {
    if (const auto* o = find(id)) return *o;
    throw Error("unknown orbit id '" + id + "'");
  }

  std::optional<std::size_t> index_of(const std::string& id) const {
    for (std::size_t i = 0; i < orbits.size(); ++i)
      if (orbits[i].id == id) return i;
    return std::nullopt;
  }

  const Orbit* open_orbit() const {
    const Orbit* found = nullptr;
    for (const auto& o : orbits)
      if (o.open) {
        if (found) return nullptr;
        found = &o;
      }
    return found;
  }

  // The cell containing `id` for simple root `alpha`, if any.
  const RaiseCell* cell_of(std::size_t alpha, const std::string& id) const {
    if (alpha >= cells.size()) return nullptr;
    for (const auto& cell : cells[alpha])
      if (std::find(cell.members.begin(), cell.members.end(), id) != cell.members.end()) return &cell;
    return nullptr;
  }

  friend bool operator==(const OrbitDatum&, const OrbitDatum&) = default;
};

struct Violation {
  std::string rule;
  std::string where;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string rule, std::string where, std::string detail) {
    violations.push_back({std::move(rule), std::move(where), std::move(detail)});
  }
  bool has(std::string_view rule) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.rule == rule; });
  }
  void append(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
};

namespace detail {

inline std::string cell_label(std::size_t alpha, const RaiseCell& cell) {
  std::string s = "alpha " + std::to_string(alpha) + " " + std::string(kind_name(cell.kind)) + " {";
  for (std::size_t i = 0; i < cell.members.size(); ++i) {
    if (i) s += ",";
    s += cell.members[i];
  }
  return s + "}";
}

inline std::string triple(const Orbit& o) {
  return "(" + std::to_string(o.c) + "," + std::to_string(o.rk) + "," + std::to_string(o.s) + ")";
}

// Rank-one rules for a cell whose members all exist and whose arity is right.
inline void check_cell(const OrbitDatum& d, std::size_t alpha, const RaiseCell& cell,
                       ValidationReport& report) {
  const auto where = cell_label(alpha, cell);
  auto orbit = [&](std::size_t role) -> const Orbit& { return d.at(cell.members[role]); };
  const Orbit& y = orbit(0);
  for (std::size_t i = 1; i < cell.members.size(); ++i)
    if (orbit(i).dim >= y.dim)
      report.add("cell max dim", where,
                 "y=" + y.id + " (dim " + std::to_string(y.dim) + ") is not strictly above " +
                     orbit(i).id + " (dim " + std::to_string(orbit(i).dim) + ")");

  const int n_alpha = d.root_system.raise_dim(alpha);
  auto rank_drop = [&](const char* rule, const Orbit& z) {
    if (z.rk != y.rk - 1)
      report.add(rule, where,
                 "rk(" + z.id + ")=" + std::to_string(z.rk) + " but rk_k Z = rk_k Y - 1 requires " +
                     std::to_string(y.rk - 1));
  };

  switch (cell.kind) {
    case CellKind::U: {
      const Orbit& z = orbit(1);
      if (z.rk != y.rk)
        report.add("U rank rule", where,
                   "rk(" + z.id + ")=" + std::to_string(z.rk) + " differs from rk(" + y.id +
                       ")=" + std::to_string(y.rk));
      if (z.s != y.s)
        report.add("U homogeneity rule", where,
                   "s(" + z.id + ")=" + std::to_string(z.s) + " differs from s(" + y.id +
                       ")=" + std::to_string(y.s));
      if (y.dim != z.dim + n_alpha)
        report.add("U dimension rule", where,
                   "dim(y)=" + std::to_string(y.dim) + " but dim(z)+n_alpha=" +
                       std::to_string(z.dim + n_alpha));
      break;
    }
    case CellKind::TU: {
      const Orbit& z1 = orbit(1);
      const Orbit& z2 = orbit(2);
      rank_drop("TU rank rule", z1);
      rank_drop("TU rank rule", z2);
      if (z1.s != z2.s)
        report.add("TU homogeneity rule", where, "s(z1) != s(z2)");
      if (!(y.dim > z1.dim && z1.dim > z2.dim))
        report.add("TU dimension chain", where,
                   "dims " + std::to_string(y.dim) + " > " + std::to_string(z1.dim) + " > " +
                       std::to_string(z2.dim) + " do not form a strict chain");
      break;
    }
    case CellKind::RT: {
      const Orbit& z1 = orbit(1);
      const Orbit& z2 = orbit(2);
      rank_drop("RT rank rule", z1);
      rank_drop("RT rank rule", z2);
      if (z1.dim != z2.dim)
        report.add("RT dimension rule", where, "swapped closed orbits must have equal dim");
      break;
    }
    case CellKind::RI: rank_drop("RI rank rule", orbit(1)); break;
    case CellKind::N: rank_drop("N rank rule", orbit(1)); break;
    case CellKind::RIorN: rank_drop("RI|N rank rule", orbit(1)); break;
    case CellKind::A: break;
    case CellKind::Unclassified:
      report.add("unclassified cell", where, "raise type could not be determined");
      break;
  }
}

}  // namespace detail

// Lists every violated structural, cell, lexicographic and lattice-rank rule.
inline ValidationReport validate(const OrbitDatum& d) {
  ValidationReport report;
  if (d.orbits.empty()) {
    report.add("empty datum", "datum", "no orbits");
    return report;
  }
  const auto rank = d.root_system.dim();

  std::set<std::string> ids;
  for (const auto& o : d.orbits) {
    if (!ids.insert(o.id).second) report.add("duplicate id", o.id, "orbit id used twice");
    if (o.dim < 0 || o.c < 0 || o.rk < 0 || o.s < 0)
      report.add("negative invariant", o.id, "dim, c, rk and s must be nonnegative");
    if (o.lattice) {
      bool shaped = true;
      for (const auto& row : *o.lattice)
        if (row.size() != rank) shaped = false;
      if (!shaped) {
        report.add("lattice ambient dimension", o.id,
                   "lattice rows must have " + std::to_string(rank) + " entries");
      } else if (const auto r = rank_of(*o.lattice, rank); r != static_cast<std::size_t>(o.rk)) {
        report.add("lattice rank", o.id,
                   "lattice has rank " + std::to_string(r) + " but rk=" + std::to_string(o.rk));
      }
    }
  }

  const Orbit* open = nullptr;
  const auto open_count = std::count_if(d.orbits.begin(), d.orbits.end(), [](const Orbit& o) { return o.open; });
  if (open_count != 1) {
    report.add("open orbit", "datum",
               "exactly one open orbit required, found " + std::to_string(open_count));
  } else {
    open = d.open_orbit();
    for (const auto& o : d.orbits)
      if (&o != open && o.dim >= open->dim)
        report.add("open orbit", o.id,
                   "dim " + std::to_string(o.dim) + " is not strictly below the open orbit's " +
                       std::to_string(open->dim));
  }

  if (d.cells.size() != rank)
    report.add("partition", "datum",
               "cells given for " + std::to_string(d.cells.size()) + " simple roots, need " +
                   std::to_string(rank));
  for (std::size_t alpha = 0; alpha < d.cells.size() && alpha < rank; ++alpha) {
    std::map<std::string, int> seen;
    for (const auto& cell : d.cells[alpha]) {
      const auto where = detail::cell_label(alpha, cell);
      bool well_formed = true;
      if (const auto arity = kind_arity(cell.kind); arity && cell.members.size() != *arity) {
        report.add("arity", where,
                   std::string(kind_name(cell.kind)) + " cells have " + std::to_string(*arity) +
                       " members");
        well_formed = false;
      }
      if (cell.members.empty()) {
        report.add("arity", where, "cell has no members");
        well_formed = false;
      }
      for (const auto& m : cell.members) {
        ++seen[m];
        if (!ids.count(m)) {
          report.add("unknown orbit", where, "member '" + m + "' is not an orbit");
          well_formed = false;
        }
      }
      if (well_formed) detail::check_cell(d, alpha, cell, report);
    }
    for (const auto& o : d.orbits) {
      const auto it = seen.find(o.id);
      const int count = it == seen.end() ? 0 : it->second;
      if (count != 1)
        report.add("partition", "alpha " + std::to_string(alpha) + " " + o.id,
                   "orbit appears in " + std::to_string(count) + " cells, expected exactly 1");
    }
  }

  if (open) {
    const auto top = std::tie(open->c, open->rk, open->s);
    for (const auto& o : d.orbits) {
      if (o.c > open->c)
        report.add("complexity bound", o.id,
                   "c=" + std::to_string(o.c) + " exceeds c_k(X)=" + std::to_string(open->c));
      if (std::tie(o.c, o.rk, o.s) > top)
        report.add("lexicographic corollary", o.id,
                   detail::triple(o) + " exceeds the open orbit's " + detail::triple(*open));
    }
  }
  return report;
}

// sigma(alpha, .) from the cell kinds: U swaps y,z; TU and RT swap z1,z2;
// every other member is fixed.
inline std::string sigma(const OrbitDatum& d, std::size_t alpha, const std::string& id) {
  if (!d.find(id)) throw Error("unknown orbit id '" + id + "'");
  if (alpha >= d.root_system.dim()) throw Error("simple root index out of range: " + std::to_string(alpha));
  const auto* cell = d.cell_of(alpha, id);
  if (!cell) return id;
  switch (cell->kind) {
    case CellKind::U:
      if (cell->members.size() == 2) return id == cell->y() ? cell->z() : cell->y();
      break;
    case CellKind::TU:
    case CellKind::RT:
      if (cell->members.size() == 3) {
        if (id == cell->z1()) return cell->z2();
        if (id == cell->z2()) return cell->z1();
      }
      break;
    default: break;
  }
  return id;
}

inline std::string flag_orbit_id(const std::vector<int>& word) { return word_string(word); }

// One orbit per w in W_k, dim(w) = sum of n_beta over the inversions of w,
// and for each alpha the U cells {s_alpha w > w}.
inline OrbitDatum generate_flag_datum(const RootSystem& rs) {
  const auto elements = enumerate_group(rs);
  std::map<IntMatrix, std::string> id_of;
  OrbitDatum d;
  d.root_system = rs;
  int longest = -1;
  for (const auto& w : elements) {
    const auto id = flag_orbit_id(w.word());
    id_of.emplace(w.matrix(), id);
    Orbit o;
    o.id = id;
    // left inversions: beta > 0 with w^{-1} beta < 0
    const auto winv = inverse(w, rs);
    for (std::size_t l = 0; l < rs.positive_lines().size(); ++l)
      if (RootSystem::is_negative(winv.matrix().apply(rs.positive_lines()[l]))) o.dim += rs.line_raise_dim(l);
    o.lattice = std::vector<IntVector>{};
    longest = std::max(longest, length(rs, w));
    d.orbits.push_back(std::move(o));
  }
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (length(rs, elements[i]) == longest) d.orbits[i].open = true;

  d.cells.resize(rs.dim());
  for (std::size_t alpha = 0; alpha < rs.dim(); ++alpha) {
    for (const auto& w : elements) {
      const auto sw = rs.simple_reflection(alpha) * w.matrix();
      const auto lw = length(rs, w);
      const auto lsw = length(rs, WeylElement(rs.key(), sw, {}));
      if (lsw < lw) continue;
      d.cells[alpha].push_back({CellKind::U, {id_of.at(sw), id_of.at(w.matrix())}});
    }
  }
  d.canonicalize();
  return d;
}

// Span rules for lattices: U maps y to z; TU/RT fix y and swap z1,z2;
// RI/N fix both members; A fixes y.
inline ValidationReport check_lattices(const OrbitDatum& d) {
  ValidationReport report;
  const auto rank = d.root_system.dim();
  for (const auto& o : d.orbits)
    if (o.lattice)
      for (const auto& row : *o.lattice)
        if (row.size() != rank)
          throw Error("lattice of orbit '" + o.id + "' has ambient dimension " +
                      std::to_string(row.size()) + ", root system rank is " + std::to_string(rank));

  for (std::size_t alpha = 0; alpha < d.cells.size() && alpha < rank; ++alpha) {
    const auto& s = d.root_system.simple_reflection(alpha);
    auto image = [&](const std::vector<IntVector>& rows) {
      std::vector<IntVector> out;
      for (const auto& r : rows) out.push_back(s.apply(r));
      return out;
    };
    for (const auto& cell : d.cells[alpha]) {
      const auto where = detail::cell_label(alpha, cell);
      std::vector<const Orbit*> members;
      for (const auto& m : cell.members)
        if (const auto* o = d.find(m)) members.push_back(o);
      if (members.size() != cell.members.size()) continue;  // reported by validate
      const auto with = std::count_if(members.begin(), members.end(), [](const Orbit* o) { return o->lattice.has_value(); });
      if (with == 0) continue;
      if (static_cast<std::size_t>(with) != members.size()) {
        report.add("partial lattice data", where, "some members carry lattices and some do not");
        continue;
      }
      auto maps_to = [&](const Orbit& from, const Orbit& to, const char* rule) {
        if (!same_span(image(*from.lattice), *to.lattice, rank))
          report.add(rule, where,
                     "s_alpha span(Lambda(" + from.id + ")) != span(Lambda(" + to.id + "))");
      };
      const auto arity = kind_arity(cell.kind);
      if (arity && members.size() != *arity) continue;
      switch (cell.kind) {
        case CellKind::U: maps_to(*members[0], *members[1], "U lattice rule"); break;
        case CellKind::TU:
        case CellKind::RT:
          maps_to(*members[0], *members[0], "reducible lattice rule");
          maps_to(*members[1], *members[2], "reducible lattice rule");
          break;
        case CellKind::RI:
        case CellKind::N:
        case CellKind::RIorN:
          maps_to(*members[0], *members[0], "irreducible lattice rule");
          maps_to(*members[1], *members[1], "irreducible lattice rule");
          break;
        case CellKind::A: maps_to(*members[0], *members[0], "anisotropic lattice rule"); break;
        case CellKind::Unclassified: break;
      }
    }
  }
  return report;
}

// Graphviz rendering; orbits in (dim, id) order, one edge style per root.
inline std::string export_dot(const OrbitDatum& d) {
  static constexpr const char* kColors[] = {"black", "blue", "red", "darkgreen", "purple", "orange", "brown", "gray"};
  auto sorted = d.orbits;
  std::sort(sorted.begin(), sorted.end(), [](const Orbit& a, const Orbit& b) {
    return std::tie(a.dim, a.id) < std::tie(b.dim, b.id);
  });
  std::ostringstream out;
  out << "digraph orbits {\n  rankdir=BT;\n  node [shape=box];\n";
  for (const auto& o : sorted) {
    out << "  \"" << o.id << "\" [label=\"" << o.id << " (" << o.dim << "|" << o.c << "," << o.rk
        << "," << o.s << ")\"" << (o.open ? ", peripheries=2" : "") << "];\n";
  }
  for (std::size_t alpha = 0; alpha < d.cells.size(); ++alpha) {
    const std::string color = kColors[alpha % 8];
    auto cells = d.cells[alpha];
    std::sort(cells.begin(), cells.end(), [](const RaiseCell& a, const RaiseCell& b) { return a.members < b.members; });
    std::size_t group = 0;
    for (const auto& cell : cells) {
      const std::string kind(kind_name(cell.kind));
      auto edge = [&](const std::string& from, const std::string& to) {
        out << "  \"" << from << "\" -> \"" << to << "\" [color=" << color << ", label=\"" << alpha
            << ":" << kind << "\"];\n";
      };
      const auto arity = kind_arity(cell.kind);
      const bool shaped = !arity || cell.members.size() == *arity;
      if (shaped && cell.kind == CellKind::U) {
        edge(cell.y(), cell.z());
      } else if (shaped && cell.kind == CellKind::TU) {
        edge(cell.y(), cell.z1());
        edge(cell.z1(), cell.z2());
      } else if (shaped && cell.kind == CellKind::RT) {
        edge(cell.y(), cell.z1());
        edge(cell.y(), cell.z2());
      } else {
        out << "  subgraph cluster_" << alpha << "_" << group++ << " {\n    label=\"" << alpha << ":"
            << kind << "\"; style=dashed; color=" << color << ";\n";
        for (const auto& m : cell.members) out << "    \"" << m << "\";\n";
        out << "  }\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace spherorb
