#pragma once

// Datum file format (JSON, sorted keys):
//
//   { "root_system": {"family": "A", "rank": 2, "raise_dims": [1, 1]},
//     "orbits": [{"id", "dim", "c", "rk", "s", "open", "lattice"?: [[int]]}],
//     "cells": {"0": [{"kind": "U", "y": ..., "z": ...}], ...},
//     "notes"?: [string] }
//
// Unknown fields are rejected.

#include "spherorb/orbit_datum.hpp"

#include <nlohmann/json.hpp>

#include <initializer_list>
#include <string>
#include <string_view>

namespace spherorb {

using Json = nlohmann::json;

namespace detail {

inline void only_fields(const Json& j, std::string_view what, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw Error(std::string(what) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw Error("unknown field '" + key + "' in " + std::string(what));
  }
}

inline const Json& required(const Json& j, const char* key, std::string_view what) {
  if (!j.contains(key)) throw Error(std::string(what) + " is missing field '" + key + "'");
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* key, std::string_view what) {
  try {
    return required(j, key, what).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("field '" + std::string(key) + "' in " + std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

inline Json root_system_to_json(const RootSystem& rs) {
  return {{"family", rs.family_string()}, {"rank", rs.rank()}, {"raise_dims", rs.raise_dims()}};
}

inline RootSystem root_system_from_json(const Json& j) {
  detail::only_fields(j, "root_system", {"family", "rank", "raise_dims"});
  const auto family = detail::get_as<std::string>(j, "family", "root_system");
  const auto rank = detail::get_as<int>(j, "rank", "root_system");
  std::optional<std::vector<int>> dims;
  if (j.contains("raise_dims")) dims = detail::get_as<std::vector<int>>(j, "raise_dims", "root_system");
  return build_root_system(family, rank, dims);
}

inline Json cell_to_json(const RaiseCell& cell) {
  Json j{{"kind", std::string(kind_name(cell.kind))}};
  const auto arity = kind_arity(cell.kind);
  if (!arity || cell.members.size() != *arity) {
    j["members"] = cell.members;
    return j;
  }
  j["y"] = cell.y();
  if (*arity == 2) j["z"] = cell.z();
  if (*arity == 3) {
    j["z1"] = cell.z1();
    j["z2"] = cell.z2();
  }
  return j;
}

inline RaiseCell cell_from_json(const Json& j) {
  constexpr std::string_view what = "cell";
  detail::only_fields(j, what, {"kind", "y", "z", "z1", "z2", "members"});
  RaiseCell cell;
  cell.kind = parse_kind(detail::get_as<std::string>(j, "kind", what));
  if (j.contains("members")) {
    if (j.contains("y") || j.contains("z") || j.contains("z1") || j.contains("z2"))
      throw Error("cell mixes 'members' with role fields");
    cell.members = detail::get_as<std::vector<std::string>>(j, "members", what);
    return cell;
  }
  cell.members.push_back(detail::get_as<std::string>(j, "y", what));
  switch (kind_arity(cell.kind).value_or(0)) {
    case 1:
      if (j.contains("z") || j.contains("z1") || j.contains("z2"))
        throw Error("cell of kind " + std::string(kind_name(cell.kind)) + " takes only y");
      break;
    case 2:
      if (j.contains("z1") || j.contains("z2"))
        throw Error("cell of kind " + std::string(kind_name(cell.kind)) + " takes y and z");
      cell.members.push_back(detail::get_as<std::string>(j, "z", what));
      break;
    case 3:
      if (j.contains("z")) throw Error("cell of kind " + std::string(kind_name(cell.kind)) + " takes y, z1, z2");
      cell.members.push_back(detail::get_as<std::string>(j, "z1", what));
      cell.members.push_back(detail::get_as<std::string>(j, "z2", what));
      break;
    default:
      throw Error("unclassified cells list their orbits under 'members'");
  }
  return cell;
}

inline Json datum_to_json(const OrbitDatum& input) {
  auto d = input;
  d.canonicalize();
  Json orbits = Json::array();
  for (const auto& o : d.orbits) {
    Json j{{"id", o.id}, {"dim", o.dim}, {"c", o.c}, {"rk", o.rk}, {"s", o.s}, {"open", o.open}};
    if (o.lattice) j["lattice"] = *o.lattice;
    orbits.push_back(std::move(j));
  }
  Json cells = Json::object();
  for (std::size_t alpha = 0; alpha < d.cells.size(); ++alpha) {
    Json list = Json::array();
    for (const auto& cell : d.cells[alpha]) list.push_back(cell_to_json(cell));
    cells[std::to_string(alpha)] = std::move(list);
  }
  Json j{{"root_system", root_system_to_json(d.root_system)}, {"orbits", orbits}, {"cells", cells}};
  if (!d.notes.empty()) j["notes"] = d.notes;
  return j;
}

inline OrbitDatum datum_from_json(const Json& j) {
  detail::only_fields(j, "datum", {"root_system", "orbits", "cells", "notes"});
  OrbitDatum d;
  d.root_system = root_system_from_json(detail::required(j, "root_system", "datum"));
  const auto& orbits = detail::required(j, "orbits", "datum");
  if (!orbits.is_array()) throw Error("'orbits' must be an array");
  for (const auto& oj : orbits) {
    constexpr std::string_view what = "orbit";
    detail::only_fields(oj, what, {"id", "dim", "c", "rk", "s", "open", "lattice"});
    Orbit o;
    o.id = detail::get_as<std::string>(oj, "id", what);
    o.dim = detail::get_as<int>(oj, "dim", what);
    o.c = detail::get_as<int>(oj, "c", what);
    o.rk = detail::get_as<int>(oj, "rk", what);
    o.s = detail::get_as<int>(oj, "s", what);
    o.open = detail::get_as<bool>(oj, "open", what);
    if (oj.contains("lattice")) o.lattice = detail::get_as<std::vector<IntVector>>(oj, "lattice", what);
    d.orbits.push_back(std::move(o));
  }
  const auto& cells = detail::required(j, "cells", "datum");
  if (!cells.is_object()) throw Error("'cells' must be an object keyed by simple root index");
  d.cells.resize(d.root_system.dim());
  for (const auto& [key, list] : cells.items()) {
    std::size_t alpha = 0;
    const auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), alpha);
    if (ec != std::errc() || p != key.data() + key.size() || alpha >= d.root_system.dim())
      throw Error("bad simple root index '" + key + "' in cells");
    if (!list.is_array()) throw Error("cells for root " + key + " must be an array");
    for (const auto& cj : list) d.cells[alpha].push_back(cell_from_json(cj));
  }
  if (j.contains("notes")) d.notes = detail::get_as<std::vector<std::string>>(j, "notes", "datum");
  d.canonicalize();
  return d;
}

inline std::string serialize(const OrbitDatum& d) { return datum_to_json(d).dump(2) + "\n"; }

inline OrbitDatum parse_datum(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("datum is not valid JSON: ") + e.what());
  }
  return datum_from_json(j);
}

inline Json report_to_json(const ValidationReport& r) {
  Json list = Json::array();
  for (const auto& v : r.violations) list.push_back({{"rule", v.rule}, {"where", v.where}, {"detail", v.detail}});
  return {{"violations", list}};
}

inline std::string report_to_text(const ValidationReport& r) {
  std::string out;
  for (const auto& v : r.violations) out += "violation: " + v.rule + " at " + v.where + ": " + v.detail + "\n";
  return out;
}

}  // namespace spherorb
