#pragma once

// Small exact linear algebra: integer square matrices for Weyl group
// elements and rational row reduction for lattice spans.

#include <boost/rational.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spherorb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rational = boost::rational<std::int64_t>;
using IntVector = std::vector<std::int64_t>;

class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t n) : n_(n), a_(n * n, 0) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t size() const { return n_; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

  IntVector apply(const IntVector& v) const {
    IntVector out(n_, 0);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) out[r] += (*this)(r, c) * v[c];
    return out;
  }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.n_ != y.n_) throw Error("matrix size mismatch");
    IntMatrix out(x.n_);
    for (std::size_t r = 0; r < x.n_; ++r)
      for (std::size_t k = 0; k < x.n_; ++k) {
        const auto xr = x(r, k);
        if (xr == 0) continue;
        for (std::size_t c = 0; c < x.n_; ++c) out(r, c) += xr * y(k, c);
      }
    return out;
  }

  bool is_identity() const { return *this == identity(n_); }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
  friend auto operator<=>(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> a_;
};

inline IntVector negate(IntVector v) {
  for (auto& x : v) x = -x;
  return v;
}

inline IntVector add(const IntVector& a, const IntVector& b) {
  IntVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline bool is_zero(const IntVector& v) {
  for (auto x : v)
    if (x != 0) return false;
  return true;
}

inline std::string to_string(const IntVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

// Reduced row echelon form over Q; zero rows dropped.
inline std::vector<std::vector<Rational>> row_reduce(const std::vector<IntVector>& rows,
                                                     std::size_t width) {
  std::vector<std::vector<Rational>> m;
  m.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != width) throw Error("row has wrong width");
    m.emplace_back(r.begin(), r.end());
  }
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < width && pivot_row < m.size(); ++col) {
    std::size_t sel = pivot_row;
    while (sel < m.size() && m[sel][col].numerator() == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[pivot_row]);
    const Rational p = m[pivot_row][col];
    for (auto& x : m[pivot_row]) x /= p;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == pivot_row || m[r][col].numerator() == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t c = 0; c < width; ++c) m[r][c] -= f * m[pivot_row][c];
    }
    ++pivot_row;
  }
  m.resize(pivot_row);
  return m;
}

inline std::size_t rank_of(const std::vector<IntVector>& rows, std::size_t width) {
  return row_reduce(rows, width).size();
}

// Equality of Q-spans; the reduced echelon form is canonical.
inline bool same_span(const std::vector<IntVector>& a, const std::vector<IntVector>& b,
                      std::size_t width) {
  return row_reduce(a, width) == row_reduce(b, width);
}

}  // namespace spherorb
