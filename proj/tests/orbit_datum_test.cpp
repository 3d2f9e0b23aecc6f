#include "spherorb/datum_io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace spherorb {
namespace {

using testing::load_datum;

TEST(FlagDatum, A1) {
  const auto d = generate_flag_datum(build_root_system("A", 1));
  ASSERT_EQ(d.orbits.size(), 2u);
  EXPECT_EQ(d.orbits[0].id, "e");
  EXPECT_EQ(d.orbits[1].id, "s0");
  EXPECT_TRUE(d.orbits[1].open);
  ASSERT_EQ(d.cells.size(), 1u);
  ASSERT_EQ(d.cells[0].size(), 1u);
  EXPECT_EQ(d.cells[0][0].kind, CellKind::U);
  EXPECT_EQ(d.cells[0][0].y(), "s0");
  EXPECT_EQ(d.cells[0][0].z(), "e");
}

std::vector<int> word_of(const std::string& id) {
  std::vector<int> w;
  if (id == "e") return w;
  for (std::size_t i = 1; i < id.size(); i += 2) w.push_back(id[i] - '0');
  return w;
}

TEST(FlagDatum, A2PairsByLeftMultiplication) {
  const auto rs = build_root_system("A", 2);
  const auto d = generate_flag_datum(rs);
  ASSERT_EQ(d.orbits.size(), 6u);
  for (std::size_t alpha = 0; alpha < 2; ++alpha) {
    ASSERT_EQ(d.cells[alpha].size(), 3u);
    for (const auto& cell : d.cells[alpha]) {
      EXPECT_EQ(cell.kind, CellKind::U);
      const auto y = WeylElement::from_word(rs, word_of(cell.y()));
      const auto z = WeylElement::from_word(rs, word_of(cell.z()));
      EXPECT_TRUE(equals(y, mul(WeylElement::simple(rs, alpha), z)));
      EXPECT_EQ(length(rs, y), length(rs, z) + 1);
      EXPECT_EQ(d.at(cell.y()).dim, d.at(cell.z()).dim + 1);
    }
  }
}

TEST(FlagDatum, RaiseDims) {
  const auto d = generate_flag_datum(build_root_system("A", 1, std::vector<int>{3}));
  EXPECT_EQ(d.orbits[0].dim, 0);
  EXPECT_EQ(d.orbits[1].dim, 3);
  EXPECT_TRUE(validate(d).ok());
}

TEST(FlagDatum, ValidatesForEverySystem) {
  for (const auto& c : testing::flag_cases()) {
    const auto d = generate_flag_datum(build_root_system(c.family, c.rank));
    EXPECT_TRUE(validate(d).ok()) << c.family << c.rank;
    EXPECT_EQ(d.orbits.size(), c.order);
  }
}

TEST(Validate, BundledDataAreClean) {
  for (const auto& name : testing::bundled_names()) {
    const auto d = load_datum(name);
    EXPECT_TRUE(validate(d).ok()) << name << "\n" << report_to_text(validate(d));
    EXPECT_TRUE(check_lattices(d).ok()) << name << "\n" << report_to_text(check_lattices(d));
  }
}

TEST(Validate, TURankRule) {
  auto d = load_datum("rank1_TU.json");
  for (auto& o : d.orbits)
    if (o.id == "z1") {
      o.rk = 1;
      o.lattice = std::nullopt;
    }
  const auto report = validate(d);
  EXPECT_TRUE(report.has("TU rank rule"));
}

TEST(Validate, LexicographicCorollary) {
  auto d = load_datum("rank1_RI.json");
  for (auto& o : d.orbits)
    if (o.id == "z") o.s = 1;
  // z: (0,0,1) is below y: (0,1,0); raise its rank to put it above
  for (auto& o : d.orbits)
    if (o.id == "z") {
      o.rk = 1;
      o.lattice = std::nullopt;
    }
  EXPECT_TRUE(validate(d).has("lexicographic corollary"));
}

TEST(Validate, ComplexityBound) {
  auto d = load_datum("rank1_U.json");
  d.orbits[0].c = 1;  // z, the closed orbit
  const auto report = validate(d);
  EXPECT_TRUE(report.has("complexity bound"));
}

TEST(Validate, PartitionAndStructure) {
  auto d = load_datum("rank1_RT.json");
  d.cells[0][0].members[2] = "z1";
  auto report = validate(d);
  EXPECT_TRUE(report.has("partition"));

  d = load_datum("rank1_RT.json");
  d.orbits[0].open = true;  // z1; orbits are sorted by (dim, id)
  EXPECT_TRUE(validate(d).has("open orbit"));

  d = load_datum("rank1_RT.json");
  d.cells[0][0].members.push_back("z1");
  EXPECT_TRUE(validate(d).has("arity"));

  d = load_datum("rank1_U.json");
  d.cells[0][0].members[1] = "nowhere";
  EXPECT_TRUE(validate(d).has("unknown orbit"));

  d = load_datum("rank1_U.json");
  d.orbits[1].id = d.orbits[0].id;
  EXPECT_TRUE(validate(d).has("duplicate id"));

  OrbitDatum empty;
  empty.root_system = build_root_system("A", 1);
  EXPECT_TRUE(validate(empty).has("empty datum"));
}

TEST(Validate, CellRules) {
  auto d = load_datum("rank1_U.json");
  d.orbits[0].dim = 0;
  EXPECT_TRUE(validate(d).has("U dimension rule"));

  d = load_datum("rank1_RT.json");
  d.orbits[0].dim = 0;
  EXPECT_TRUE(validate(d).has("RT dimension rule"));

  d = load_datum("rank1_TU.json");
  for (auto& o : d.orbits)
    if (o.id == "z2") o.dim = 1;
  EXPECT_TRUE(validate(d).has("TU dimension chain"));

  d = load_datum("rank1_N.json");
  d.cells[0][0].kind = CellKind::U;
  EXPECT_TRUE(validate(d).has("U rank rule"));

  d = load_datum("rank1_U.json");
  d.cells[0][0].kind = CellKind::RI;
  EXPECT_TRUE(validate(d).has("RI rank rule"));
}

TEST(Validate, LatticeRank) {
  auto d = load_datum("sl3_so12.json");
  for (auto& o : d.orbits)
    if (o.id == "Y1") o.lattice = std::vector<IntVector>{{2, 1}, {4, 2}, {1, 0}};
  EXPECT_TRUE(validate(d).has("lattice rank"));
}

TEST(Lattices, RIWithRootLine) {
  auto d = load_datum("rank1_RI.json");
  for (auto& o : d.orbits) {
    o.rk = 1;
    o.lattice = std::vector<IntVector>{{1}};
  }
  EXPECT_TRUE(check_lattices(d).ok());
}

TEST(Lattices, FlagA1FullLine) {
  auto d = generate_flag_datum(build_root_system("A", 1));
  for (auto& o : d.orbits) o.lattice = std::vector<IntVector>{{1}};
  EXPECT_TRUE(check_lattices(d).ok());
}

TEST(Lattices, RTSwapInProduct) {
  // alpha+beta maps to beta-alpha under s_alpha
  OrbitDatum d;
  d.root_system = build_root_system("A1xA1", 2);
  d.orbits = {{"y", 2, 0, 2, 0, true, std::vector<IntVector>{{1, 0}, {0, 1}}},
              {"z1", 1, 0, 1, 0, false, std::vector<IntVector>{{1, 1}}},
              {"z2", 1, 0, 1, 0, false, std::vector<IntVector>{{1, -1}}}};
  d.cells = {{{CellKind::RT, {"y", "z1", "z2"}}}, {{CellKind::RT, {"y", "z1", "z2"}}}};
  EXPECT_TRUE(validate(d).ok()) << report_to_text(validate(d));
  EXPECT_TRUE(check_lattices(d).ok()) << report_to_text(check_lattices(d));
  d.orbits[2].lattice = std::vector<IntVector>{{1, 0}};
  EXPECT_TRUE(check_lattices(d).has("reducible lattice rule"));
}

TEST(Lattices, Failures) {
  auto d = load_datum("sl3_so12.json");
  for (auto& o : d.orbits)
    if (o.id == "Y2") o.lattice = std::vector<IntVector>{{1, 1}};
  EXPECT_TRUE(check_lattices(d).has("anisotropic lattice rule"));

  d = load_datum("pgl2xpgl2.json");
  d.orbits[0].lattice = std::vector<IntVector>{{1, 1}};  // z
  EXPECT_TRUE(check_lattices(d).has("U lattice rule"));

  d = load_datum("rank1_U.json");
  d.orbits[0].lattice = std::nullopt;
  EXPECT_TRUE(check_lattices(d).has("partial lattice data"));

  d = load_datum("rank1_U.json");
  d.orbits[0].lattice = std::vector<IntVector>{{1, 0}};
  EXPECT_THROW(check_lattices(d), Error);
}

TEST(Sigma, ActionColumn) {
  EXPECT_EQ(sigma(load_datum("rank1_U.json"), 0, "y"), "z");
  EXPECT_EQ(sigma(load_datum("rank1_TU.json"), 0, "z1"), "z2");
  EXPECT_EQ(sigma(load_datum("rank1_A.json"), 0, "y"), "y");
  EXPECT_THROW(sigma(load_datum("rank1_A.json"), 0, "q"), Error);
}

TEST(Sigma, InvolutionPreservingInvariants) {
  std::vector<OrbitDatum> all;
  for (const auto& name : testing::bundled_names()) all.push_back(load_datum(name));
  for (const auto& c : testing::flag_cases()) all.push_back(generate_flag_datum(build_root_system(c.family, c.rank)));
  for (const auto& d : all)
    for (std::size_t alpha = 0; alpha < d.root_system.dim(); ++alpha)
      for (const auto& o : d.orbits) {
        const auto& image = d.at(sigma(d, alpha, o.id));
        EXPECT_EQ(sigma(d, alpha, image.id), o.id);
        EXPECT_EQ(image.c, o.c);
        EXPECT_EQ(image.s, o.s);
        EXPECT_EQ(image.rk, o.rk);
      }
}

TEST(Io, RoundTrip) {
  for (const auto& name : testing::bundled_names()) {
    const auto d = load_datum(name);
    EXPECT_EQ(parse_datum(serialize(d)), d) << name;
    EXPECT_EQ(serialize(parse_datum(serialize(d))), serialize(d));
  }
  const auto flag = generate_flag_datum(build_root_system("B", 2));
  EXPECT_EQ(parse_datum(serialize(flag)), flag);
}

TEST(Io, RejectsUnknownFields) {
  EXPECT_THROW(parse_datum(R"({"root_system": {"family": "A", "rank": 1}, "orbits": [], "cells": {}, "extra": 1})"),
               Error);
  EXPECT_THROW(parse_datum("not json"), Error);
  EXPECT_THROW(parse_datum(R"({"root_system": {"family": "A", "rank": 1}, "orbits": [{"id": "y", "dim": 1, "c": 0, "rk": 0, "s": 0, "open": true, "colour": 2}], "cells": {}})"),
               Error);
}

TEST(Dot, EdgeCounts) {
  auto count = [](const std::string& text, const std::string& what) {
    std::size_t n = 0;
    for (auto pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + 1)) ++n;
    return n;
  };
  const auto a1 = export_dot(generate_flag_datum(build_root_system("A", 1)));
  EXPECT_EQ(count(a1, "->"), 1u);
  EXPECT_EQ(count(a1, "[label="), 2u);
  const auto a2 = export_dot(generate_flag_datum(build_root_system("A", 2)));
  EXPECT_EQ(count(a2, "->"), 6u);
  EXPECT_EQ(count(a2, "[label="), 6u);
  EXPECT_EQ(export_dot(load_datum("sl3_so12.json")), export_dot(load_datum("sl3_so12.json")));
  EXPECT_EQ(count(export_dot(load_datum("rank1_RT.json")), "->"), 2u);
}

}  // namespace
}  // namespace spherorb
