#pragma once

// Restricted root systems (reduced and of type BC) and their finite Weyl
// groups in the reflection representation on a*.
//
// Vectors are written in simple-root coordinates, so every root and every
// Weyl group matrix is integral. Group elements are identified by their
// matrix; the word attached to an element only witnesses how it was built.

#include "spherorb/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace spherorb {

enum class Family { A, B, C, D, BC, G2, F4 };

inline constexpr std::size_t kDefaultGroupCap = 51840;

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::BC: return "BC";
    case Family::G2: return "G";
    case Family::F4: return "F";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  if (s == "A") return Family::A;
  if (s == "B") return Family::B;
  if (s == "C") return Family::C;
  if (s == "D") return Family::D;
  if (s == "BC") return Family::BC;
  if (s == "G") return Family::G2;
  if (s == "F") return Family::F4;
  throw Error("unknown root system family '" + std::string(s) + "'");
}

struct Component {
  Family family;
  int rank;

  friend bool operator==(const Component&, const Component&) = default;
};

namespace detail {

inline void check_component(const Component& c) {
  const auto name = std::string(family_name(c.family)) + std::to_string(c.rank);
  auto reject = [&](const char* why) { throw Error("invalid root system " + name + ": " + why); };
  switch (c.family) {
    case Family::A:
      if (c.rank < 1) reject("rank must be >= 1");
      break;
    case Family::B:
    case Family::C:
      if (c.rank < 2) reject("rank must be >= 2");
      break;
    case Family::D:
      if (c.rank < 3) reject("rank must be >= 3");
      break;
    case Family::BC:
      if (c.rank < 1) reject("rank must be >= 1");
      break;
    case Family::G2:
      if (c.rank != 2) reject("rank must be 2");
      break;
    case Family::F4:
      if (c.rank != 4) reject("rank must be 4");
      break;
  }
}

// Gram matrix (alpha_i, alpha_j) of the simple roots, scaled to integers.
// BC uses the B_n form; its doubled roots are added after enumeration.
inline std::vector<std::vector<std::int64_t>> component_gram(const Component& c) {
  const auto n = static_cast<std::size_t>(c.rank);
  std::vector<std::vector<std::int64_t>> g(n, std::vector<std::int64_t>(n, 0));
  auto chain = [&](std::int64_t diag, std::int64_t off) {
    for (std::size_t i = 0; i < n; ++i) g[i][i] = diag;
    for (std::size_t i = 0; i + 1 < n; ++i) g[i][i + 1] = g[i + 1][i] = off;
  };
  switch (c.family) {
    case Family::A:
      chain(2, -1);
      break;
    case Family::B:
    case Family::BC:
      if (n == 1) {
        g[0][0] = 2;
        break;
      }
      // alpha_1..alpha_{n-1} long, alpha_n short
      chain(4, -2);
      g[n - 1][n - 1] = 2;
      break;
    case Family::C:
      chain(2, -1);
      g[n - 1][n - 1] = 4;
      g[n - 2][n - 1] = g[n - 1][n - 2] = -2;
      break;
    case Family::D:
      chain(2, -1);
      // branch: alpha_{n-2} joins both alpha_{n-1} and alpha_n
      g[n - 2][n - 1] = g[n - 1][n - 2] = 0;
      g[n - 3][n - 1] = g[n - 1][n - 3] = -1;
      break;
    case Family::G2:
      g = {{2, -3}, {-3, 6}};
      break;
    case Family::F4:
      g = {{4, -2, 0, 0}, {-2, 4, -2, 0}, {0, -2, 2, -1}, {0, 0, -1, 2}};
      break;
  }
  return g;
}

inline std::pair<std::string, int> split_letters_digits(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
  const std::string letters(s.substr(0, i));
  if (i == s.size()) return {letters, -1};
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("malformed root system name '" + std::string(s) + "'");
  return {letters, value};
}

}  // namespace detail

// Family names: "A", "BC", ... with an explicit rank; "G2"/"F4"; or a product
// such as "A1xA1" whose factor ranks must add up to `rank`.
inline std::vector<Component> parse_components(std::string_view family, int rank) {
  std::vector<Component> out;
  if (family.find('x') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= family.size()) {
      const auto stop = std::min(family.find('x', start), family.size());
      const auto [letters, r] = detail::split_letters_digits(family.substr(start, stop - start));
      if (r < 0) throw Error("product factor '" + letters + "' needs an explicit rank");
      out.push_back({parse_family(letters), r});
      start = stop + 1;
    }
    int total = 0;
    for (const auto& c : out) total += c.rank;
    if (total != rank)
      throw Error("product " + std::string(family) + " has rank " + std::to_string(total) +
                  ", not " + std::to_string(rank));
  } else {
    const auto [letters, r] = detail::split_letters_digits(family);
    if (r >= 0 && r != rank)
      throw Error("family " + std::string(family) + " does not have rank " + std::to_string(rank));
    out.push_back({parse_family(letters), rank});
  }
  for (const auto& c : out) detail::check_component(c);
  return out;
}

class RootSystem {
 public:
  const std::vector<Component>& components() const { return components_; }
  int rank() const { return rank_; }
  std::size_t dim() const { return static_cast<std::size_t>(rank_); }

  // "A", "BC", "G2", "F4" for a single factor, "A1xB2" for products.
  std::string family_string() const {
    if (components_.size() == 1) {
      const auto& c = components_.front();
      std::string s(family_name(c.family));
      if (c.family == Family::G2 || c.family == Family::F4) s += std::to_string(c.rank);
      return s;
    }
    return key();
  }

  // Identity of the underlying Weyl group, e.g. "A2" or "A1xA1".
  std::string key() const {
    std::string s;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (i) s += "x";
      s += std::string(family_name(components_[i].family)) + std::to_string(components_[i].rank);
    }
    return s;
  }

  // Text record, e.g. "A 2 n=[1,1]".
  std::string record() const {
    std::string s = family_string() + " " + std::to_string(rank_) + " n=[";
    for (std::size_t i = 0; i < raise_dims_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(raise_dims_[i]);
    }
    return s + "]";
  }

  bool is_reduced() const {
    return std::none_of(components_.begin(), components_.end(),
                        [](const Component& c) { return c.family == Family::BC; });
  }

  const std::vector<int>& raise_dims() const { return raise_dims_; }
  int raise_dim(std::size_t simple) const { return raise_dims_.at(simple); }

  IntVector simple_root(std::size_t i) const {
    IntVector v(dim(), 0);
    v.at(i) = 1;
    return v;
  }

  // All roots, including negatives and the doubled roots of BC factors.
  const std::vector<IntVector>& roots() const { return roots_; }
  const std::vector<IntVector>& positive_roots() const { return positive_; }
  // Indivisible positive roots, one per reflecting line, by (height, coords).
  const std::vector<IntVector>& positive_lines() const { return lines_; }
  // Witness word w with line = w(alpha_j); see line_simple().
  const std::vector<int>& line_word(std::size_t line) const { return line_words_.at(line); }
  std::size_t line_simple(std::size_t line) const { return line_simple_.at(line); }
  int line_raise_dim(std::size_t line) const { return line_n_.at(line); }

  std::optional<std::size_t> line_index(const IntVector& v) const {
    auto it = std::find(lines_.begin(), lines_.end(), v);
    if (it == lines_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - lines_.begin());
  }

  bool contains_root(const IntVector& v) const {
    return std::binary_search(roots_.begin(), roots_.end(), v);
  }

  // Invariant form, integer-scaled.
  std::int64_t form(const IntVector& u, const IntVector& v) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) s += u[i] * gram_[i][j] * v[j];
    return s;
  }

  // <beta, alpha^vee> = 2 (beta, alpha) / (alpha, alpha).
  Rational pairing(const IntVector& beta, const IntVector& alpha) const {
    const auto aa = form(alpha, alpha);
    if (aa == 0) throw Error("pairing with the zero vector");
    return Rational(2 * form(beta, alpha), aa);
  }

  std::int64_t cartan(std::size_t i, std::size_t j) const {
    const auto r = pairing(simple_root(i), simple_root(j));
    return r.numerator() / r.denominator();
  }

  // Reflection in the hyperplane orthogonal to `root` (any nonzero multiple
  // of a root gives the same reflection).
  IntMatrix reflection_matrix(const IntVector& root) const {
    IntMatrix m(dim());
    for (std::size_t c = 0; c < dim(); ++c) {
      const auto e = simple_root(c);
      const auto k = pairing(e, root);
      for (std::size_t r = 0; r < dim(); ++r) {
        const Rational entry = Rational(e[r]) - k * root[r];
        if (entry.denominator() != 1) throw Error("non-integral reflection matrix");
        m(r, c) = entry.numerator();
      }
    }
    return m;
  }

  const IntMatrix& simple_reflection(std::size_t i) const { return simple_refl_.at(i); }

  static bool is_positive(const IntVector& v) {
    bool nonzero = false;
    for (auto x : v) {
      if (x < 0) return false;
      if (x != 0) nonzero = true;
    }
    return nonzero;
  }
  static bool is_negative(const IntVector& v) { return is_positive(negate(v)); }

  friend bool operator==(const RootSystem& a, const RootSystem& b) {
    return a.components_ == b.components_ && a.raise_dims_ == b.raise_dims_;
  }

 private:
  friend RootSystem build_root_system(const std::vector<Component>&, std::optional<std::vector<int>>);

  std::vector<Component> components_;
  int rank_ = 0;
  std::vector<std::vector<std::int64_t>> gram_;
  std::vector<int> raise_dims_;
  std::vector<IntVector> roots_;
  std::vector<IntVector> positive_;
  std::vector<IntVector> lines_;
  std::vector<std::vector<int>> line_words_;
  std::vector<std::size_t> line_simple_;
  std::vector<int> line_n_;
  std::vector<IntMatrix> simple_refl_;
};

inline RootSystem build_root_system(const std::vector<Component>& components,
                                    std::optional<std::vector<int>> raise_dims = std::nullopt) {
  if (components.empty()) throw Error("root system needs at least one factor");
  RootSystem rs;
  rs.components_ = components;
  for (const auto& c : components) {
    detail::check_component(c);
    rs.rank_ += c.rank;
  }
  const auto n = rs.dim();
  rs.gram_.assign(n, std::vector<std::int64_t>(n, 0));
  std::vector<std::size_t> factor_of(n);
  std::size_t offset = 0;
  for (std::size_t f = 0; f < components.size(); ++f) {
    const auto g = detail::component_gram(components[f]);
    for (std::size_t i = 0; i < g.size(); ++i) {
      factor_of[offset + i] = f;
      for (std::size_t j = 0; j < g.size(); ++j) rs.gram_[offset + i][offset + j] = g[i][j];
    }
    offset += g.size();
  }

  if (raise_dims) {
    if (raise_dims->size() != n)
      throw Error("expected " + std::to_string(n) + " raise dims, got " +
                  std::to_string(raise_dims->size()));
    for (int d : *raise_dims)
      if (d < 1) throw Error("raise dims must be positive integers");
    rs.raise_dims_ = *raise_dims;
  } else {
    rs.raise_dims_.assign(n, 1);
  }

  for (std::size_t i = 0; i < n; ++i) rs.simple_refl_.push_back(rs.reflection_matrix(rs.simple_root(i)));

  // Reduced roots by closure of the simple roots under simple reflections,
  // remembering a witness word for each.
  struct Witness {
    std::vector<int> word;
    std::size_t simple;
  };
  std::map<IntVector, Witness> found;
  std::deque<IntVector> queue;
  for (std::size_t i = 0; i < n; ++i) {
    found.emplace(rs.simple_root(i), Witness{{}, i});
    queue.push_back(rs.simple_root(i));
  }
  while (!queue.empty()) {
    const auto beta = queue.front();
    queue.pop_front();
    const auto& w = found.at(beta);
    for (std::size_t i = 0; i < n; ++i) {
      auto image = rs.simple_refl_[i].apply(beta);
      if (found.count(image)) continue;
      Witness next{{static_cast<int>(i)}, w.simple};
      next.word.insert(next.word.end(), w.word.begin(), w.word.end());
      found.emplace(image, std::move(next));
      queue.push_back(std::move(image));
    }
  }

  std::vector<IntVector> reduced;
  for (const auto& [v, w] : found) reduced.push_back(v);
  std::set<IntVector> all(reduced.begin(), reduced.end());
  // BC factors: double the short roots of the B_n form.
  for (std::size_t f = 0; f < components.size(); ++f) {
    if (components[f].family != Family::BC) continue;
    std::int64_t shortest = -1;
    std::vector<IntVector> in_factor;
    for (const auto& v : reduced) {
      bool inside = true;
      for (std::size_t i = 0; i < n; ++i)
        if (v[i] != 0 && factor_of[i] != f) inside = false;
      if (!inside) continue;
      in_factor.push_back(v);
      const auto len = rs.form(v, v);
      if (shortest < 0 || len < shortest) shortest = len;
    }
    for (const auto& v : in_factor)
      if (rs.form(v, v) == shortest) {
        IntVector twice = v;
        for (auto& x : twice) x *= 2;
        all.insert(twice);
      }
  }
  rs.roots_.assign(all.begin(), all.end());
  for (const auto& v : rs.roots_)
    if (RootSystem::is_positive(v)) rs.positive_.push_back(v);

  auto height = [](const IntVector& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); };
  for (const auto& v : reduced)
    if (RootSystem::is_positive(v)) rs.lines_.push_back(v);
  std::sort(rs.lines_.begin(), rs.lines_.end(), [&](const IntVector& a, const IntVector& b) {
    const auto ha = height(a), hb = height(b);
    if (ha != hb) return ha < hb;
    return a > b;
  });
  std::sort(rs.positive_.begin(), rs.positive_.end(), [&](const IntVector& a, const IntVector& b) {
    const auto ha = height(a), hb = height(b);
    if (ha != hb) return ha < hb;
    return a > b;
  });
  for (const auto& v : rs.lines_) {
    const auto& w = found.at(v);
    rs.line_words_.push_back(w.word);
    rs.line_simple_.push_back(w.simple);
  }

  // n_beta extended W-invariantly from the simple roots.
  rs.line_n_.assign(rs.lines_.size(), 0);
  for (std::size_t l = 0; l < rs.lines_.size(); ++l) {
    const auto& beta = rs.lines_[l];
    if (height(beta) == 1) {
      for (std::size_t i = 0; i < n; ++i)
        if (beta[i] == 1) rs.line_n_[l] = rs.raise_dims_[i];
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto lower = rs.simple_refl_[i].apply(beta);
      if (height(lower) < height(beta)) {
        rs.line_n_[l] = rs.line_n_[*rs.line_index(lower)];
        break;
      }
    }
  }
  for (std::size_t l = 0; l < rs.lines_.size(); ++l)
    for (std::size_t i = 0; i < n; ++i) {
      const auto image = rs.simple_refl_[i].apply(rs.lines_[l]);
      if (const auto k = rs.line_index(image); k && rs.line_n_[*k] != rs.line_n_[l])
        throw Error("raise dims are not invariant under the Weyl group: conjugate simple roots "
                    "must carry the same n_alpha");
    }
  return rs;
}

inline RootSystem build_root_system(std::string_view family, int rank,
                                    std::optional<std::vector<int>> raise_dims = std::nullopt) {
  return build_root_system(parse_components(family, rank), std::move(raise_dims));
}

// Inverse of RootSystem::record(): "A 2 n=[1,1]"; the n= part is optional.
inline RootSystem parse_root_system_record(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string family, rank_token, dims_token, extra;
  if (!(in >> family >> rank_token)) throw Error("root system record needs a family and a rank");
  int rank = 0;
  const auto [p, ec] = std::from_chars(rank_token.data(), rank_token.data() + rank_token.size(), rank);
  if (ec != std::errc() || p != rank_token.data() + rank_token.size())
    throw Error("bad rank '" + rank_token + "'");
  std::optional<std::vector<int>> dims;
  if (in >> dims_token) {
    if (dims_token.rfind("n=[", 0) != 0 || dims_token.back() != ']')
      throw Error("bad raise dims '" + dims_token + "'");
    std::vector<int> values;
    std::string body = dims_token.substr(3, dims_token.size() - 4);
    std::istringstream items(body);
    std::string item;
    while (std::getline(items, item, ',')) values.push_back(std::stoi(item));
    dims = std::move(values);
  }
  if (in >> extra) throw Error("trailing text in root system record");
  return build_root_system(family, rank, std::move(dims));
}

class WeylElement {
 public:
  WeylElement() = default;
  WeylElement(std::string system, IntMatrix matrix, std::vector<int> word)
      : system_(std::move(system)), matrix_(std::move(matrix)), word_(std::move(word)) {}

  static WeylElement identity(const RootSystem& rs) {
    return {rs.key(), IntMatrix::identity(rs.dim()), {}};
  }
  static WeylElement simple(const RootSystem& rs, std::size_t i) {
    return {rs.key(), rs.simple_reflection(i), {static_cast<int>(i)}};
  }
  // Product s_{w[0]} s_{w[1]} ... of simple reflections.
  static WeylElement from_word(const RootSystem& rs, const std::vector<int>& word) {
    auto m = IntMatrix::identity(rs.dim());
    for (int i : word) {
      if (i < 0 || i >= rs.rank()) throw Error("simple root index out of range: " + std::to_string(i));
      m = m * rs.simple_reflection(static_cast<std::size_t>(i));
    }
    return {rs.key(), std::move(m), word};
  }

  const std::string& system() const { return system_; }
  const IntMatrix& matrix() const { return matrix_; }
  const std::vector<int>& word() const { return word_; }
  bool is_identity() const { return matrix_.is_identity(); }

 private:
  std::string system_;
  IntMatrix matrix_;
  std::vector<int> word_;
};

namespace detail {
inline void same_system(const WeylElement& a, const WeylElement& b) {
  if (a.system() != b.system())
    throw Error("Weyl elements of different root systems: " + a.system() + " vs " + b.system());
}
}  // namespace detail

inline WeylElement mul(const WeylElement& a, const WeylElement& b) {
  detail::same_system(a, b);
  auto word = a.word();
  word.insert(word.end(), b.word().begin(), b.word().end());
  return {a.system(), a.matrix() * b.matrix(), std::move(word)};
}

// Words are products of involutions, so the reversed word witnesses the inverse.
inline WeylElement inverse(const WeylElement& a, const RootSystem& rs) {
  if (a.system() != rs.key()) throw Error("element does not belong to " + rs.key());
  std::vector<int> word(a.word().rbegin(), a.word().rend());
  return WeylElement::from_word(rs, word);
}

inline bool equals(const WeylElement& a, const WeylElement& b) {
  detail::same_system(a, b);
  return a.matrix() == b.matrix();
}

// Orders elements by matrix only, for sets keyed on group elements.
struct ByMatrix {
  bool operator()(const WeylElement& a, const WeylElement& b) const { return a.matrix() < b.matrix(); }
};

inline int length(const RootSystem& rs, const WeylElement& w) {
  int count = 0;
  for (const auto& beta : rs.positive_lines())
    if (RootSystem::is_negative(w.matrix().apply(beta))) ++count;
  return count;
}

inline WeylElement power(const WeylElement& w, int k, const RootSystem& rs) {
  auto out = WeylElement::identity(rs);
  for (int i = 0; i < k; ++i) out = mul(out, w);
  return out;
}

inline int element_order(const IntMatrix& m) {
  auto p = m;
  for (int k = 1; k <= 64; ++k) {
    if (p.is_identity()) return k;
    p = p * m;
  }
  throw Error("element order exceeds 64; not a finite Coxeter element");
}

inline int braid_order(const RootSystem& rs, std::size_t alpha, std::size_t beta) {
  if (alpha == beta) throw Error("braid order needs two distinct simple roots");
  if (alpha >= rs.dim() || beta >= rs.dim()) throw Error("simple root index out of range");
  return element_order(rs.simple_reflection(alpha) * rs.simple_reflection(beta));
}

// Left descents give a reduced word: if l(s_i w) < l(w) then w = s_i (s_i w).
inline std::vector<int> reduced_word(const RootSystem& rs, const WeylElement& w) {
  auto len = [&](const IntMatrix& m) { return length(rs, WeylElement(rs.key(), m, {})); };
  std::vector<int> word;
  auto m = w.matrix();
  while (!m.is_identity()) {
    bool stepped = false;
    const int current = len(m);
    for (std::size_t i = 0; i < rs.dim(); ++i) {
      const auto candidate = rs.simple_reflection(i) * m;
      if (len(candidate) < current) {
        word.push_back(static_cast<int>(i));
        m = candidate;
        stepped = true;
        break;
      }
    }
    if (!stepped) throw Error("matrix is not a Weyl group element");
  }
  return word;
}

inline WeylElement reflection(const RootSystem& rs, std::size_t line) {
  const auto& w = rs.line_word(line);
  std::vector<int> word = w;
  word.push_back(static_cast<int>(rs.line_simple(line)));
  word.insert(word.end(), w.rbegin(), w.rend());
  auto out = WeylElement::from_word(rs, word);
  if (out.matrix() != rs.reflection_matrix(rs.positive_lines()[line]))
    throw Error("internal: reflection witness does not match its root");
  return out;
}

// One reflection per positive root line (gamma and 2 gamma identified).
inline std::vector<WeylElement> reflections(const RootSystem& rs) {
  std::vector<WeylElement> out;
  for (std::size_t l = 0; l < rs.positive_lines().size(); ++l) out.push_back(reflection(rs, l));
  return out;
}

inline bool is_root(const RootSystem& rs, const IntVector& v) {
  if (v.size() != rs.dim()) throw Error("vector has wrong dimension");
  return rs.contains_root(v);
}

// Closure of `gens` under multiplication, breadth first; the first element
// is the identity and words are shortest in the generators.
inline std::vector<WeylElement> subgroup_closure(const std::vector<WeylElement>& gens,
                                                 const RootSystem& rs,
                                                 std::size_t cap = kDefaultGroupCap) {
  if (gens.empty()) throw Error("subgroup closure needs at least one generator");
  for (const auto& g : gens)
    if (g.system() != rs.key()) throw Error("generator does not belong to " + rs.key());
  std::vector<WeylElement> elements{WeylElement::identity(rs)};
  std::set<IntMatrix> seen{elements.front().matrix()};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& g : gens) {
      auto next = mul(elements[head], g);
      if (!seen.insert(next.matrix()).second) continue;
      if (elements.size() >= cap)
        throw Error("group closure exceeds the resource cap of " + std::to_string(cap) + " elements");
      elements.push_back(std::move(next));
    }
  }
  return elements;
}

inline std::vector<WeylElement> enumerate_group(const RootSystem& rs, std::size_t cap = kDefaultGroupCap) {
  std::vector<WeylElement> gens;
  for (std::size_t i = 0; i < rs.dim(); ++i) gens.push_back(WeylElement::simple(rs, i));
  return subgroup_closure(gens, rs, cap);
}

inline std::string word_string(const std::vector<int>& word) {
  if (word.empty()) return "e";
  std::string s;
  for (int i : word) s += "s" + std::to_string(i);
  return s;
}

}  // namespace spherorb
