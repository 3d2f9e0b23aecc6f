#pragma once

// Command-line front end. run() is the whole program minus process
// plumbing so that tests can drive it in-process.
//
// Exit codes: 0 clean, 1 violations found, 2 input or usage error.

#include "spherorb/datum_io.hpp"
#include "spherorb/fforacle.hpp"
#include "spherorb/hecke.hpp"
#include "spherorb/weyl_action.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace spherorb::cli {

inline constexpr int kClean = 0;
inline constexpr int kViolations = 1;
inline constexpr int kInputError = 2;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline std::string read_source(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return {std::istreambuf_iterator<char>(in), {}};
  std::ifstream file(path);
  if (!file) throw Error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(file), {}};
}

// "0,1,0", "" or "e" (empty word); also used for --q-list and --raise-dims.
inline std::vector<int> parse_word(const std::string& text) {
  std::vector<int> word;
  if (text.empty() || text == "e") return word;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      word.push_back(v);
    } catch (const std::exception&) {
      throw Error("bad list entry '" + item + "'; expected comma-separated integers");
    }
  }
  return word;
}

inline std::string elements_line(const RootSystem& rs, const std::vector<WeylElement>& elements) {
  std::vector<std::string> words;
  for (const auto& e : elements) words.push_back(word_string(reduced_word(rs, e)));
  std::sort(words.begin(), words.end(), [](const std::string& a, const std::string& b) {
    return std::make_pair(a.size(), a) < std::make_pair(b.size(), b);
  });
  std::string s;
  for (std::size_t i = 0; i < words.size(); ++i) s += (i ? " " : "") + words[i];
  return s;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Orbit data of spherical varieties: Weyl group action, mod-2 Hecke module, finite-field oracle",
               "spherorb"};
  app.require_subcommand(1);
  bool json = false;
  std::string out_path;
  std::size_t cap = kDefaultOracleCap;
  std::vector<int> q_list;
  std::string q_list_text, raise_dims_text;
  app.add_flag("--json", json, "machine-readable output");
  app.add_option("--out", out_path, "write output to a file instead of stdout");
  app.add_option("--cap", cap, "resource cap for oracle group closures")->check(CLI::PositiveNumber);
  app.add_option("--q-list", q_list_text, "primes for the oracle, e.g. 5,7");
  app.fallthrough();

  std::string family, datum_path = "-", word_text, orbit_id, spec_path;
  int rank = 0;
  std::vector<int> raise_dims;
  bool dump = false;

  auto* gen = app.add_subcommand("gen-flag", "write the flag datum of G/P for a root system");
  gen->add_option("family", family, "A, B, C, D, BC, G2, F4 or a product such as A1xA1")->required();
  gen->add_option("rank", rank, "rank")->required();
  gen->add_option("--raise-dims", raise_dims_text, "n_alpha per simple root, e.g. 1,2");

  auto* validate_cmd = app.add_subcommand("validate", "check cell, lexicographic and lattice rules");
  validate_cmd->add_option("datum", datum_path, "datum file, - for stdin");

  auto* act = app.add_subcommand("act", "apply a word in the simple involutions to an orbit");
  act->add_option("datum", datum_path)->required();
  act->add_option("word", word_text, "comma-separated simple root indices, applied left to right; e for empty")->required();
  act->add_option("orbit", orbit_id)->required();

  auto* braid = app.add_subcommand("braid", "check the braid relations of the orbit action");
  braid->add_option("datum", datum_path, "datum file, - for stdin");

  auto* stab = app.add_subcommand("stabilizer", "little Weyl group and generator check");
  stab->add_option("datum", datum_path, "datum file, - for stdin");

  auto* hecke = app.add_subcommand("hecke", "build and check the mod-2 Hecke module");
  hecke->add_option("datum", datum_path, "datum file, - for stdin");
  hecke->add_flag("--dump", dump, "print the operator columns");

  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of the datum");
  dot->add_option("datum", datum_path, "datum file, - for stdin");

  auto* oracle = app.add_subcommand("oracle", "finite-field brute force");
  oracle->require_subcommand(1);
  auto* enumerate_cmd = oracle->add_subcommand("enumerate", "B-orbits and merge classes per prime");
  enumerate_cmd->add_option("spec", spec_path)->required();
  auto* infer_cmd = oracle->add_subcommand("infer", "fit a datum from point counts");
  infer_cmd->add_option("spec", spec_path)->required();
  auto* compare_cmd = oracle->add_subcommand("compare", "compare a datum with the inferred one");
  compare_cmd->add_option("datum", datum_path)->required();
  compare_cmd->add_option("spec", spec_path)->required();
  for (auto* sub : {enumerate_cmd, infer_cmd, compare_cmd}) sub->fallthrough();
  oracle->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kClean : kInputError;
  }

  std::ostringstream out;
  int status = kClean;
  try {
    if (!q_list_text.empty()) q_list = detail::parse_word(q_list_text);
    if (!raise_dims_text.empty()) raise_dims = detail::parse_word(raise_dims_text);
    auto load = [&] { return parse_datum(detail::read_source(datum_path, io.in)); };
    auto load_spec = [&] { return parse_spec(detail::read_source(spec_path, io.in)); };

    if (*gen) {
      std::optional<std::vector<int>> dims;
      if (!raise_dims.empty()) dims = raise_dims;
      out << serialize(generate_flag_datum(build_root_system(family, rank, dims)));
    } else if (*validate_cmd) {
      const auto d = load();
      auto report = validate(d);
      bool has_lattice = false;
      for (const auto& o : d.orbits) has_lattice = has_lattice || o.lattice.has_value();
      if (has_lattice) report.append(check_lattices(d));
      if (json) {
        out << report_to_json(report).dump(2) << "\n";
      } else {
        out << report_to_text(report);
        if (!report.ok()) out << "violations: " << report.violations.size() << "\n";
      }
      status = report.ok() ? kClean : kViolations;
    } else if (*act) {
      const auto d = load();
      const auto image = act_word(d, detail::parse_word(word_text), orbit_id);
      if (json) out << Json{{"orbit", orbit_id}, {"word", word_text}, {"image", image}}.dump(2) << "\n";
      else out << image << "\n";
    } else if (*braid) {
      const auto d = load();
      const auto violations = braid_check(d);
      if (json) {
        Json list = Json::array();
        for (const auto& v : violations)
          list.push_back({{"alpha", v.alpha}, {"beta", v.beta}, {"order", v.order}, {"witness", v.witness}, {"image", v.image}});
        out << Json{{"violations", list}}.dump(2) << "\n";
      } else {
        for (const auto& v : violations)
          out << "braid violation: roots " << v.alpha << "," << v.beta << " m=" << v.order << " witness " << v.witness
              << " -> " << v.image << "\n";
        if (!violations.empty()) out << "violations: " << violations.size() << "\n";
      }
      status = violations.empty() ? kClean : kViolations;
    } else if (*stab) {
      const auto d = load();
      if (const auto report = validate(d); !report.ok())
        throw Error("datum does not validate; run 'validate' first");
      const auto& rs = d.root_system;
      const auto subgroup = stabilizer_open(d);
      const auto orbit = orbit_of_open(d);
      const auto theorem = check_generator_theorem(d, subgroup);
      const auto group_order = enumerate_group(rs).size();
      if (json) {
        std::vector<std::string> elements, gens;
        for (const auto& e : subgroup.elements) elements.push_back(word_string(reduced_word(rs, e)));
        for (const auto& g : theorem.generating_set) gens.push_back(word_string(reduced_word(rs, g)));
        std::sort(elements.begin(), elements.end());
        out << Json{{"order", subgroup.order()},
                    {"weyl_order", group_order},
                    {"orbit_of_open", orbit.members},
                    {"elements", elements},
                    {"generating_set", gens},
                    {"generator_theorem", theorem.holds ? "holds" : "fails"}}
                   .dump(2)
            << "\n";
      } else {
        out << "stabilizer order: " << subgroup.order() << "\n";
        out << "W_k order: " << group_order << " = " << subgroup.order() << " x " << orbit.members.size() << "\n";
        out << "orbit of open:";
        for (const auto& m : orbit.members) out << " " << m;
        out << "\nelements: " << detail::elements_line(rs, subgroup.elements) << "\n";
        out << "generating set:";
        for (const auto& g : theorem.generating_set) out << " " << word_string(reduced_word(rs, g));
        out << "\ngenerator theorem: " << (theorem.holds ? "holds" : "fails") << "\n";
      }
      status = theorem.holds ? kClean : kViolations;
    } else if (*hecke) {
      const auto d = load();
      if (const auto report = validate(d); !report.ok())
        throw Error("datum does not validate; run 'validate' first");
      const auto m = build_module(d);
      std::vector<std::string> failures;
      const auto braid_failures = braid_check_module(m);
      for (const auto& f : braid_failures)
        failures.push_back(f.alpha == f.beta ? "T_" + std::to_string(f.alpha) + " is not an involution"
                                             : "braid relation fails for roots " + std::to_string(f.alpha) + "," +
                                                   std::to_string(f.beta));
      for (std::size_t a = 0; a < m.T.size(); ++a)
        for (const auto& b : m.basis)
          if (leading_term(m, a, b) != sigma(d, a, b))
            failures.push_back("leading term of T_" + std::to_string(a) + "[" + b + "] differs from sigma");
      if (braid_failures.empty() && !braid_check(d).empty())
        failures.push_back("module braid relations hold but the orbit action violates them");
      std::string regular = "n/a";
      if (d == generate_flag_datum(d.root_system)) {
        regular = verify_regular_representation(m, d.root_system) ? "yes" : "no";
        if (regular == "no") failures.push_back("flag module is not the regular representation");
      }
      if (json) {
        Json j{{"rank", m.basis.size()}, {"failures", failures}, {"regular_representation", regular}};
        if (dump) j["columns"] = dump_columns(m);
        out << j.dump(2) << "\n";
      } else {
        out << "module rank: " << m.basis.size() << "\n";
        out << "regular representation: " << regular << "\n";
        if (dump) {
          const auto cols = dump_columns(m);
          for (std::size_t a = 0; a < cols.size(); ++a)
            for (const auto& [id, terms] : cols[a]) {
              out << "T_" << a << "[" << id << "] =";
              for (std::size_t i = 0; i < terms.size(); ++i) out << (i ? " + " : " ") << "[" << terms[i] << "]";
              out << "\n";
            }
        }
        for (const auto& f : failures) out << "failure: " << f << "\n";
        out << (failures.empty() ? "ok" : "failures: " + std::to_string(failures.size())) << "\n";
      }
      status = failures.empty() ? kClean : kViolations;
    } else if (*dot) {
      const auto d = load();
      if (const auto report = validate(d); report.has("empty datum")) throw Error("datum has no orbits");
      out << export_dot(d);
    } else if (*oracle) {
      const auto spec = load_spec();
      const auto primes = q_list.empty() ? spec.q_list : q_list;
      if (*enumerate_cmd) {
        Json reports = Json::array();
        for (int q : primes) {
          const auto r = enumerate(spec, q, cap);
          if (json) {
            reports.push_back(oracle_report_to_json(r));
            continue;
          }
          out << "q=" << r.q << " |G|=" << r.group_order << " |H|=" << r.subgroup_order << " points=" << r.point_count
              << " orbits=" << r.orbit_count() << "\n";
          for (std::size_t i = 0; i < r.orbits.size(); ++i)
            out << "  o" << i << " size=" << r.orbits[i].size << " representative=" << r.orbits[i].representative << "\n";
          for (std::size_t a = 0; a < r.merges.size(); ++a) {
            out << "  P_" << a << " classes:";
            for (const auto& cls : r.merges[a]) {
              out << " {";
              for (std::size_t k = 0; k < cls.size(); ++k) out << (k ? "," : "") << "o" << cls[k];
              out << "}";
            }
            out << "\n";
          }
        }
        if (json) out << reports.dump(2) << "\n";
      } else if (*infer_cmd) {
        out << inferred_to_json(infer_datum(spec, primes, cap)).dump(2) << "\n";
      } else if (*compare_cmd) {
        const auto d = parse_datum(detail::read_source(datum_path, io.in));
        const auto inferred = infer_datum(spec, primes, cap);
        const auto diff = compare(d, inferred.datum);
        if (json) {
          out << Json{{"match", diff.match}, {"mismatches", diff.mismatches}}.dump(2) << "\n";
        } else {
          for (const auto& m : diff.mismatches) out << "mismatch: " << m << "\n";
          out << (diff.match ? "match" : "no match") << "\n";
        }
        status = diff.match ? kClean : kViolations;
      }
    }
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return kInputError;
  }

  if (out_path.empty()) {
    io.out << out.str();
  } else {
    std::ofstream file(out_path);
    if (!file) {
      io.err << "error: cannot write '" << out_path << "'\n";
      return kInputError;
    }
    file << out.str();
  }
  return status;
}

}  // namespace spherorb::cli
