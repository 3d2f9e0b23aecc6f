#pragma once

// Mod-2 Hecke module on the orbit set. T_alpha is read off the raise kind:
//
//   U:     T[y] = [z],        T[z] = [y]
//   TU/RT: T[y] = [y],        T[z1] = [y] + [z2],   T[z2] = [y] + [z1]
//   A:     T[y] = [y]
//   RI/N:  T[y] = [y],        T[z] = [z]
//
// Lower-dimensional orbits come first in the basis, so the leading
// (lowest-dimensional) term of T_alpha[b] is sigma(alpha, b).

#include "spherorb/orbit_datum.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace spherorb {

class F2Vector {
 public:
  F2Vector() = default;
  explicit F2Vector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static F2Vector unit(std::size_t n, std::size_t i) {
    F2Vector v(n);
    v.flip(i);
    return v;
  }

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
  void set(std::size_t i, bool value) {
    if (test(i) != value) flip(i);
  }

  F2Vector& operator^=(const F2Vector& other) {
    if (other.n_ != n_) throw Error("F2 vector size mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }

  bool is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  std::size_t lowest() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return n_;
  }

  friend bool operator==(const F2Vector&, const F2Vector&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Square matrix over F_2 stored by columns.
class F2Matrix {
 public:
  F2Matrix() = default;
  explicit F2Matrix(std::size_t n) : cols_(n, F2Vector(n)) {}

  static F2Matrix identity(std::size_t n) {
    F2Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.cols_[i].flip(i);
    return m;
  }

  std::size_t size() const { return cols_.size(); }
  const F2Vector& column(std::size_t j) const { return cols_.at(j); }
  F2Vector& column(std::size_t j) { return cols_.at(j); }

  F2Vector apply(const F2Vector& v) const {
    if (v.size() != size()) throw Error("vector has " + std::to_string(v.size()) + " entries, module has rank " + std::to_string(size()));
    F2Vector out(size());
    for (std::size_t j = 0; j < size(); ++j)
      if (v.test(j)) out ^= cols_[j];
    return out;
  }

  friend F2Matrix operator*(const F2Matrix& a, const F2Matrix& b) {
    F2Matrix out(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) out.cols_[j] = a.apply(b.cols_[j]);
    return out;
  }

  friend bool operator==(const F2Matrix&, const F2Matrix&) = default;

 private:
  std::vector<F2Vector> cols_;
};

struct HeckeModule {
  std::vector<std::string> basis;  // sorted by (dim, id)
  std::vector<int> dims;
  std::vector<F2Matrix> T;         // one per simple root
  std::vector<std::vector<int>> braid_orders;

  std::size_t index(const std::string& id) const {
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis[i] == id) return i;
    throw Error("unknown basis element '" + id + "'");
  }

  F2Vector basis_vector(const std::string& id) const { return F2Vector::unit(basis.size(), index(id)); }
};

inline HeckeModule build_module(const OrbitDatum& d) {
  HeckeModule m;
  auto orbits = d.orbits;
  std::sort(orbits.begin(), orbits.end(), [](const Orbit& a, const Orbit& b) {
    return std::tie(a.dim, a.id) < std::tie(b.dim, b.id);
  });
  for (const auto& o : orbits) {
    m.basis.push_back(o.id);
    m.dims.push_back(o.dim);
  }
  const auto n = m.basis.size();
  const auto rank = d.root_system.dim();
  for (std::size_t alpha = 0; alpha < rank; ++alpha) {
    auto t = F2Matrix::identity(n);
    if (alpha < d.cells.size())
      for (const auto& cell : d.cells[alpha]) {
        const auto arity = kind_arity(cell.kind);
        if (arity && cell.members.size() != *arity) throw Error("malformed cell; validate the datum first");
        auto set_column = [&](const std::string& of, std::initializer_list<const std::string*> terms) {
          F2Vector col(n);
          for (const auto* id : terms) col.flip(m.index(*id));
          t.column(m.index(of)) = col;
        };
        switch (cell.kind) {
          case CellKind::U:
            set_column(cell.y(), {&cell.z()});
            set_column(cell.z(), {&cell.y()});
            break;
          case CellKind::TU:
          case CellKind::RT:
            set_column(cell.z1(), {&cell.y(), &cell.z2()});
            set_column(cell.z2(), {&cell.y(), &cell.z1()});
            break;
          default: break;  // identity columns
        }
      }
    m.T.push_back(std::move(t));
  }
  m.braid_orders.assign(rank, std::vector<int>(rank, 1));
  for (std::size_t a = 0; a < rank; ++a)
    for (std::size_t b = 0; b < rank; ++b)
      if (a != b) m.braid_orders[a][b] = braid_order(d.root_system, a, b);
  return m;
}

inline F2Vector apply(const HeckeModule& m, std::size_t alpha, const F2Vector& v) {
  if (alpha >= m.T.size()) throw Error("simple root index out of range: " + std::to_string(alpha));
  return m.T[alpha].apply(v);
}

// The unique term of minimal dimension in T_alpha[b].
inline std::string leading_term(const HeckeModule& m, std::size_t alpha, const std::string& b) {
  const auto image = apply(m, alpha, m.basis_vector(b));
  const auto terms = image.support();
  if (terms.empty()) throw Error("T_alpha[" + b + "] vanishes; module is corrupt");
  int best = m.dims[terms.front()];
  for (auto i : terms) best = std::min(best, m.dims[i]);
  std::vector<std::size_t> lowest;
  for (auto i : terms)
    if (m.dims[i] == best) lowest.push_back(i);
  if (lowest.size() != 1)
    throw Error("T_alpha[" + b + "] has " + std::to_string(lowest.size()) +
                " terms of minimal dimension; module is corrupt");
  return m.basis[lowest.front()];
}

struct ModuleBraidFailure {
  std::size_t alpha;
  std::size_t beta;
  int order;
};

// Exact check of T_alpha^2 = 1 (reported as alpha == beta) and
// (T_alpha T_beta)^m = 1 over F_2.
inline std::vector<ModuleBraidFailure> braid_check_module(const HeckeModule& m) {
  std::vector<ModuleBraidFailure> out;
  const auto n = m.basis.size();
  const auto id = F2Matrix::identity(n);
  for (std::size_t a = 0; a < m.T.size(); ++a) {
    if (!(m.T[a] * m.T[a] == id)) out.push_back({a, a, 1});
    for (std::size_t b = a + 1; b < m.T.size(); ++b) {
      const auto step = m.T[a] * m.T[b];
      auto p = F2Matrix::identity(n);
      for (int k = 0; k < m.braid_orders[a][b]; ++k) p = p * step;
      if (!(p == id)) out.push_back({a, b, m.braid_orders[a][b]});
    }
  }
  return out;
}

// Dimension of the cyclic submodule generated by `v` under all T_alpha.
inline std::size_t cyclic_span_dimension(const HeckeModule& m, const F2Vector& v) {
  // echelon basis keyed by lowest set bit
  std::map<std::size_t, F2Vector> echelon;
  std::vector<F2Vector> pending{v};
  auto reduce = [&](F2Vector x) {
    while (!x.is_zero()) {
      const auto pivot = x.lowest();
      auto it = echelon.find(pivot);
      if (it == echelon.end()) break;
      x ^= it->second;
    }
    return x;
  };
  while (!pending.empty()) {
    auto x = reduce(pending.back());
    pending.pop_back();
    if (x.is_zero()) continue;
    const auto pivot = x.lowest();
    echelon.emplace(pivot, x);
    for (std::size_t a = 0; a < m.T.size(); ++a) pending.push_back(m.T[a].apply(x));
  }
  return echelon.size();
}

// For modules built from a flag datum: braid relations hold exactly and the
// vector of the identity orbit (the unique orbit of least dimension)
// generates a module of dimension |W_k|.
inline bool verify_regular_representation(const HeckeModule& m, const RootSystem& rs) {
  if (m.basis.empty()) return false;
  if (!braid_check_module(m).empty()) return false;
  const auto group_order = enumerate_group(rs).size();
  if (m.basis.size() != group_order) return false;
  if (m.dims.size() > 1 && m.dims[0] == m.dims[1]) return false;
  return cyclic_span_dimension(m, F2Vector::unit(m.basis.size(), 0)) == group_order;
}

// Column dump: orbit id -> ids in T_alpha[orbit], per simple root.
inline std::vector<std::map<std::string, std::vector<std::string>>> dump_columns(const HeckeModule& m) {
  std::vector<std::map<std::string, std::vector<std::string>>> out;
  for (const auto& t : m.T) {
    std::map<std::string, std::vector<std::string>> cols;
    for (std::size_t j = 0; j < m.basis.size(); ++j) {
      auto& list = cols[m.basis[j]];
      for (auto i : t.column(j).support()) list.push_back(m.basis[i]);
    }
    out.push_back(std::move(cols));
  }
  return out;
}

}  // namespace spherorb
