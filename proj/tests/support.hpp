#pragma once

#include "spherorb/datum_io.hpp"
#include "spherorb/fforacle.hpp"

#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

namespace spherorb::testing {

inline std::string data_path(const std::string& name) { return std::string(SPHERORB_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

inline OrbitDatum load_datum(const std::string& name) { return parse_datum(read_file(data_path(name))); }
inline MatGroupSpec load_spec(const std::string& name) { return parse_spec(read_file(data_path("oracle/" + name))); }

inline const std::vector<std::string>& bundled_names() {
  static const std::vector<std::string> names{"rank1_U.json",  "rank1_TU.json", "rank1_A.json",
                                              "rank1_RT.json", "rank1_RI.json", "rank1_N.json",
                                              "pgl2xpgl2.json", "sl3_so12.json"};
  return names;
}

// Systems with a unit-raise flag datum in the test suite, and |W_k|.
struct FlagCase {
  const char* family;
  int rank;
  std::size_t order;
};

inline const std::vector<FlagCase>& flag_cases() {
  static const std::vector<FlagCase> cases{{"A", 1, 2},  {"A", 2, 6},  {"A", 3, 24},    {"B", 2, 8},
                                           {"BC", 2, 8}, {"G", 2, 12}, {"A1xA1", 2, 4}};
  return cases;
}

// Over A2: sigma0 swaps Y and Z (TU chain X > Y > Z), sigma1 fixes everything.
// (sigma0 sigma1)^3 = sigma0 != id, so the action does not factor through W.
inline OrbitDatum braid_counterexample() {
  OrbitDatum d;
  d.root_system = build_root_system("A", 2);
  d.orbits = {{"X", 3, 0, 1, 0, true, std::nullopt},
              {"Y", 2, 0, 0, 0, false, std::nullopt},
              {"Z", 1, 0, 0, 0, false, std::nullopt}};
  d.cells = {{{CellKind::TU, {"X", "Y", "Z"}}},
             {{CellKind::RI, {"X", "Y"}}, {CellKind::A, {"Z"}}}};
  d.canonicalize();
  return d;
}

struct Mutation {
  std::string description;
  OrbitDatum datum;
};

// One random single-field corruption: a rank bump, a swap of two different
// dims, or a cell kind flip. RI <-> N flips are skipped: the two kinds carry
// identical combinatorial constraints.
inline Mutation mutate(const OrbitDatum& base, std::mt19937& rng) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  for (;;) {
    Mutation m{"", base};
    auto& d = m.datum;
    switch (pick(3)) {
      case 0: {
        auto& o = d.orbits[pick(d.orbits.size())];
        ++o.rk;
        m.description = "rank bump on " + o.id;
        return m;
      }
      case 1: {
        auto& a = d.orbits[pick(d.orbits.size())];
        auto& b = d.orbits[pick(d.orbits.size())];
        if (a.dim == b.dim) continue;
        std::swap(a.dim, b.dim);
        m.description = "dim swap " + a.id + "<->" + b.id;
        return m;
      }
      default: {
        const auto alpha = pick(d.cells.size());
        auto& cell = d.cells[alpha][pick(d.cells[alpha].size())];
        static constexpr CellKind kinds[] = {CellKind::U, CellKind::TU, CellKind::A,
                                             CellKind::RT, CellKind::RI, CellKind::N};
        const auto to = kinds[pick(std::size(kinds))];
        const bool same_class = (to == CellKind::RI || to == CellKind::N) &&
                                (cell.kind == CellKind::RI || cell.kind == CellKind::N);
        if (to == cell.kind || same_class) continue;
        m.description = "alpha " + std::to_string(alpha) + " cell " + cell.y() + " " +
                        std::string(kind_name(cell.kind)) + "->" + std::string(kind_name(to));
        cell.kind = to;
        return m;
      }
    }
  }
}

}  // namespace spherorb::testing
