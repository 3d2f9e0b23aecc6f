#include "spherorb/hecke.hpp"
#include "spherorb/weyl_action.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace spherorb {
namespace {

using testing::load_datum;

F2Vector vec(const HeckeModule& m, std::initializer_list<const char*> ids) {
  F2Vector v(m.basis.size());
  for (const auto* id : ids) v.flip(m.index(id));
  return v;
}

TEST(Hecke, TableColumns) {
  auto m = build_module(load_datum("rank1_U.json"));
  EXPECT_EQ(apply(m, 0, vec(m, {"y"})), vec(m, {"z"}));
  EXPECT_EQ(apply(m, 0, vec(m, {"z"})), vec(m, {"y"}));

  m = build_module(load_datum("rank1_TU.json"));
  EXPECT_EQ(apply(m, 0, vec(m, {"y"})), vec(m, {"y"}));
  EXPECT_EQ(apply(m, 0, vec(m, {"z1"})), vec(m, {"y", "z2"}));
  EXPECT_EQ(apply(m, 0, vec(m, {"z2"})), vec(m, {"y", "z1"}));

  m = build_module(load_datum("rank1_RT.json"));
  EXPECT_EQ(apply(m, 0, vec(m, {"z1"})), vec(m, {"y", "z2"}));

  for (const char* name : {"rank1_RI.json", "rank1_N.json"}) {
    m = build_module(load_datum(name));
    EXPECT_EQ(m.T[0], F2Matrix::identity(2)) << name;
  }
  m = build_module(load_datum("rank1_A.json"));
  EXPECT_EQ(m.T[0], F2Matrix::identity(1));
}

TEST(Hecke, ApplyBasics) {
  const auto m = build_module(load_datum("rank1_TU.json"));
  const F2Vector zero(m.basis.size());
  EXPECT_EQ(apply(m, 0, zero), zero);
  const auto v = vec(m, {"z1", "y"});
  EXPECT_EQ(apply(m, 0, apply(m, 0, v)), v);
  EXPECT_THROW(apply(m, 0, F2Vector(7)), Error);
  EXPECT_THROW(apply(m, 3, v), Error);

  const auto flag = build_module(generate_flag_datum(build_root_system("A", 1)));
  EXPECT_EQ(apply(flag, 0, vec(flag, {"e"})), vec(flag, {"s0"}));
}

TEST(Hecke, LeadingTerms) {
  EXPECT_EQ(leading_term(build_module(load_datum("rank1_TU.json")), 0, "z1"), "z2");
  EXPECT_EQ(leading_term(build_module(load_datum("rank1_U.json")), 0, "y"), "z");
  EXPECT_EQ(leading_term(build_module(load_datum("rank1_A.json")), 0, "y"), "y");
}

TEST(Hecke, LeadingTermTieIsCorruption) {
  auto m = build_module(load_datum("rank1_RT.json"));
  // T[y] = [z1] + [z2]: two terms of the same minimal dim
  m.T[0].column(m.index("y")) = vec(m, {"z1", "z2"});
  EXPECT_THROW(leading_term(m, 0, "y"), Error);
}

TEST(Hecke, InvolutionsAndFiltration) {
  std::vector<OrbitDatum> all;
  for (const auto& name : testing::bundled_names()) all.push_back(load_datum(name));
  for (const auto& c : testing::flag_cases()) all.push_back(generate_flag_datum(build_root_system(c.family, c.rank)));
  for (const auto& d : all) {
    const auto m = build_module(d);
    for (std::size_t a = 0; a < m.T.size(); ++a) {
      EXPECT_EQ(m.T[a] * m.T[a], F2Matrix::identity(m.basis.size()));
      for (std::size_t j = 0; j < m.basis.size(); ++j) {
        const auto lead = leading_term(m, a, m.basis[j]);
        EXPECT_EQ(lead, sigma(d, a, m.basis[j]));
        const auto terms = m.T[a].column(j).support();
        EXPECT_LE(terms.size(), 3u);
        for (auto i : terms) {
          if (m.basis[i] == lead) continue;
          EXPECT_GT(m.dims[i], m.dims[m.index(lead)]);
        }
      }
    }
  }
}

TEST(Hecke, RegularRepresentation) {
  for (const auto& c : testing::flag_cases()) {
    const auto rs = build_root_system(c.family, c.rank);
    const auto m = build_module(generate_flag_datum(rs));
    EXPECT_EQ(m.basis.size(), c.order);
    EXPECT_TRUE(verify_regular_representation(m, rs)) << c.family << c.rank;
  }
}

TEST(Hecke, FlagWordsAreInjective) {
  const auto rs = build_root_system("B", 2);
  const auto m = build_module(generate_flag_datum(rs));
  std::set<std::size_t> hit;
  for (const auto& w : enumerate_group(rs)) {
    auto v = m.basis_vector("e");
    for (int a : reduced_word(rs, w)) v = apply(m, static_cast<std::size_t>(a), v);
    ASSERT_EQ(v.popcount(), 1u);
    hit.insert(v.lowest());
  }
  EXPECT_EQ(hit.size(), m.basis.size());
}

TEST(Hecke, BraidCheckModule) {
  EXPECT_TRUE(braid_check_module(build_module(generate_flag_datum(build_root_system("A", 3)))).empty());
  EXPECT_TRUE(braid_check_module(build_module(load_datum("rank1_TU.json"))).empty());

  auto m = build_module(generate_flag_datum(build_root_system("A", 2)));
  m.T[0] = F2Matrix::identity(m.basis.size());
  const auto failures = braid_check_module(m);
  ASSERT_EQ(failures.size(), 1u);
  EXPECT_EQ(failures[0].alpha, 0u);
  EXPECT_EQ(failures[0].beta, 1u);
  EXPECT_FALSE(verify_regular_representation(m, build_root_system("A", 2)));
}

TEST(Hecke, ModuleBraidImpliesOrbitBraid) {
  std::vector<OrbitDatum> all{testing::braid_counterexample()};
  for (const auto& name : testing::bundled_names()) all.push_back(load_datum(name));
  for (const auto& d : all) {
    const bool module_ok = braid_check_module(build_module(d)).empty();
    const bool orbit_ok = braid_check(d).empty();
    EXPECT_TRUE(!module_ok || orbit_ok);
  }
  EXPECT_FALSE(braid_check_module(build_module(testing::braid_counterexample())).empty());
}

TEST(Hecke, NotRegularForNonFlagData) {
  const auto d = load_datum("pgl2xpgl2.json");
  EXPECT_FALSE(verify_regular_representation(build_module(d), d.root_system));
}

TEST(Hecke, DumpColumns) {
  const auto cols = dump_columns(build_module(load_datum("rank1_TU.json")));
  ASSERT_EQ(cols.size(), 1u);
  EXPECT_EQ(cols[0].at("z1"), (std::vector<std::string>{"z2", "y"}));
  EXPECT_EQ(cols[0].at("y"), std::vector<std::string>{"y"});
}

}  // namespace
}  // namespace spherorb
