#pragma once

// Brute-force ground truth over F_q: B(F_q)-orbits on G(F_q)/H(F_q) for
// small matrix groups, their merging under the subminimal parabolics
// P_alpha, and a raise-type guess fitted from point counts at several q.
//
// Cosets are labelled by their lexicographically least element in
// row-major order. Matrices are at most 4x4 over F_p with p <= 13, packed
// four bits per entry so that the packed key orders like the entries.

#include "spherorb/datum_io.hpp"

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>
#include <boost/pending/disjoint_sets.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace spherorb {

inline constexpr std::size_t kDefaultOracleCap = 10'000'000;
inline constexpr int kMaxMatrixDim = 4;
inline constexpr int kMaxPrime = 13;

inline bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(int n, int p) : n_(n), p_(p) { a_.fill(0); }

  // Entries reduced into [0, p).
  static FpMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, int p) {
    const int n = static_cast<int>(rows.size());
    if (n < 1 || n > kMaxMatrixDim) throw Error("matrix dimension must be between 1 and 4");
    FpMatrix m(n, p);
    for (int r = 0; r < n; ++r) {
      if (static_cast<int>(rows[r].size()) != n) throw Error("matrix rows must all have length " + std::to_string(n));
      for (int c = 0; c < n; ++c) m.at(r, c) = static_cast<std::uint8_t>(((rows[r][c] % p) + p) % p);
    }
    return m;
  }

  static FpMatrix identity(int n, int p) {
    FpMatrix m(n, p);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static FpMatrix decode(std::uint64_t key, int n, int p) {
    FpMatrix m(n, p);
    for (int k = n * n - 1; k >= 0; --k) {
      m.a_[k] = static_cast<std::uint8_t>(key & 0xF);
      key >>= 4;
    }
    return m;
  }

  int dim() const { return n_; }
  std::uint8_t& at(int r, int c) { return a_[r * n_ + c]; }
  std::uint8_t at(int r, int c) const { return a_[r * n_ + c]; }

  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (int i = 0; i < n_ * n_; ++i) k = (k << 4) | a_[i];
    return k;
  }

  friend FpMatrix operator*(const FpMatrix& x, const FpMatrix& y) {
    FpMatrix out(x.n_, x.p_);
    for (int r = 0; r < x.n_; ++r)
      for (int c = 0; c < x.n_; ++c) {
        int s = 0;
        for (int k = 0; k < x.n_; ++k) s += x.at(r, k) * y.at(k, c);
        out.at(r, c) = static_cast<std::uint8_t>(s % x.p_);
      }
    return out;
  }

  std::uint8_t determinant() const {
    std::array<int, 16> m{};
    for (int i = 0; i < n_ * n_; ++i) m[i] = a_[i];
    auto inv = [&](int v) {
      for (int t = 1; t < p_; ++t)
        if (v * t % p_ == 1) return t;
      return 0;
    };
    int det = 1;
    for (int col = 0; col < n_; ++col) {
      int piv = col;
      while (piv < n_ && m[piv * n_ + col] == 0) ++piv;
      if (piv == n_) return 0;
      if (piv != col) {
        for (int c = 0; c < n_; ++c) std::swap(m[piv * n_ + c], m[col * n_ + c]);
        det = (p_ - det) % p_;
      }
      det = det * m[col * n_ + col] % p_;
      const int iv = inv(m[col * n_ + col]);
      for (int r = col + 1; r < n_; ++r) {
        const int f = m[r * n_ + col] * iv % p_;
        for (int c = col; c < n_; ++c) m[r * n_ + c] = ((m[r * n_ + c] - f * m[col * n_ + c]) % p_ + p_) % p_;
      }
    }
    return static_cast<std::uint8_t>(det);
  }

 private:
  int n_ = 0;
  int p_ = 2;
  std::array<std::uint8_t, 16> a_{};
};

using IntMatrixRows = std::vector<std::vector<std::int64_t>>;

// Generators are integer matrices; entries are reduced mod q when used.
struct MatGroupSpec {
  std::string name;
  int dimension = 2;
  std::vector<int> q_list{5, 7};
  RootSystem root_system;
  std::vector<IntMatrixRows> G;
  std::vector<IntMatrixRows> B;
  std::vector<IntMatrixRows> H;
  std::vector<std::vector<IntMatrixRows>> P;  // per simple root
  std::vector<std::string> notes;
};

inline MatGroupSpec spec_from_json(const Json& j) {
  detail::only_fields(j, "oracle spec", {"name", "dimension", "q", "q_list", "root_system", "G", "B", "H", "P", "notes"});
  MatGroupSpec s;
  constexpr std::string_view what = "oracle spec";
  if (j.contains("name")) s.name = detail::get_as<std::string>(j, "name", what);
  s.dimension = detail::get_as<int>(j, "dimension", what);
  if (s.dimension < 1 || s.dimension > kMaxMatrixDim) throw Error("dimension must be between 1 and 4");
  if (j.contains("q_list")) s.q_list = detail::get_as<std::vector<int>>(j, "q_list", what);
  if (j.contains("q")) s.q_list = {detail::get_as<int>(j, "q", what)};
  s.root_system = root_system_from_json(detail::required(j, "root_system", what));
  auto mats = [&](const char* key) {
    auto list = detail::get_as<std::vector<IntMatrixRows>>(j, key, what);
    if (list.empty()) throw Error(std::string("generator list '") + key + "' is empty");
    for (const auto& m : list) {
      if (static_cast<int>(m.size()) != s.dimension) throw Error(std::string("generator in '") + key + "' has the wrong size");
      for (const auto& row : m)
        if (static_cast<int>(row.size()) != s.dimension) throw Error(std::string("generator in '") + key + "' has the wrong size");
    }
    return list;
  };
  s.G = mats("G");
  s.B = mats("B");
  s.H = mats("H");
  const auto& pj = detail::required(j, "P", what);
  if (!pj.is_object()) throw Error("'P' must map simple root indices to generator lists");
  s.P.resize(s.root_system.dim());
  std::vector<bool> given(s.root_system.dim(), false);
  for (const auto& [key, list] : pj.items()) {
    std::size_t alpha = 0;
    const auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), alpha);
    if (ec != std::errc() || p != key.data() + key.size() || alpha >= s.root_system.dim())
      throw Error("bad simple root index '" + key + "' in P");
    Json wrapper{{"P", list}};
    s.P[alpha] = [&] {
      auto l = detail::get_as<std::vector<IntMatrixRows>>(wrapper, "P", what);
      for (const auto& m : l)
        if (static_cast<int>(m.size()) != s.dimension) throw Error("generator in 'P' has the wrong size");
      return l;
    }();
    given[alpha] = true;
  }
  for (std::size_t a = 0; a < given.size(); ++a)
    if (!given[a] || s.P[a].empty()) throw Error("no P_alpha generators for simple root " + std::to_string(a));
  if (j.contains("notes")) s.notes = detail::get_as<std::vector<std::string>>(j, "notes", what);
  return s;
}

inline MatGroupSpec parse_spec(std::string_view text) {
  try {
    return spec_from_json(Json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("oracle spec is not valid JSON: ") + e.what());
  }
}

struct OracleOrbit {
  std::size_t representative;  // index of the least coset label in the orbit
  std::size_t size;
};

struct OracleReport {
  int q = 0;
  std::size_t group_order = 0;     // |G(F_q)| by closure
  std::size_t subgroup_order = 0;  // |H(F_q)| by closure
  std::size_t point_count = 0;     // number of cosets reached
  std::vector<OracleOrbit> orbits; // ordered by (size, representative)
  std::vector<std::vector<std::vector<std::size_t>>> merges;  // per alpha: classes of orbit indices

  std::size_t orbit_count() const { return orbits.size(); }
};

namespace detail {

inline std::vector<FpMatrix> reduce_generators(const std::vector<IntMatrixRows>& gens, int q, const char* what) {
  std::vector<FpMatrix> out;
  for (const auto& g : gens) {
    auto m = FpMatrix::from_rows(g, q);
    if (m.determinant() == 0) throw Error(std::string("singular generator in ") + what + " mod " + std::to_string(q));
    out.push_back(m);
  }
  return out;
}

inline std::vector<std::uint64_t> closure_keys(const std::vector<FpMatrix>& gens, int n, int q, std::size_t cap,
                                               const char* what) {
  std::vector<std::uint64_t> elements{FpMatrix::identity(n, q).key()};
  absl::flat_hash_set<std::uint64_t> seen{elements.front()};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    const auto x = FpMatrix::decode(elements[head], n, q);
    for (const auto& g : gens) {
      const auto k = (x * g).key();
      if (!seen.insert(k).second) continue;
      if (elements.size() >= cap)
        throw Error(std::string("closure of ") + what + " exceeds the resource cap of " + std::to_string(cap));
      elements.push_back(k);
    }
  }
  return elements;
}

// Least key over x*h, h in H, abandoning a candidate as soon as one of its
// entries exceeds the best found so far.
inline std::uint64_t coset_label(const FpMatrix& x, const std::vector<FpMatrix>& subgroup, int q) {
  const int n = x.dim();
  std::array<std::uint8_t, 16> best{};
  best.fill(0xFF);
  std::array<std::uint8_t, 16> cur{};
  for (const auto& h : subgroup) {
    bool smaller = false;
    bool abandon = false;
    for (int i = 0; i < n * n && !abandon; ++i) {
      const int r = i / n, c = i % n;
      int s = 0;
      for (int k = 0; k < n; ++k) s += x.at(r, k) * h.at(k, c);
      cur[i] = static_cast<std::uint8_t>(s % q);
      if (!smaller) {
        if (cur[i] > best[i]) abandon = true;
        else if (cur[i] < best[i]) smaller = true;
      }
    }
    if (!abandon && smaller) best = cur;
  }
  std::uint64_t k = 0;
  for (int i = 0; i < n * n; ++i) k = (k << 4) | best[i];
  return k;
}

using DisjointSets = boost::disjoint_sets_with_storage<>;

}  // namespace detail

// Point set, B-orbits and P_alpha merge classes at one prime q.
inline OracleReport enumerate(const MatGroupSpec& spec, int q, std::size_t cap = kDefaultOracleCap) {
  if (!is_prime(q)) throw Error("q=" + std::to_string(q) + " is not prime (only prime fields are supported)");
  if (q > kMaxPrime) throw Error("q=" + std::to_string(q) + " exceeds the supported maximum of 13");
  const int n = spec.dimension;
  const auto g_gens = detail::reduce_generators(spec.G, q, "G");
  const auto b_gens = detail::reduce_generators(spec.B, q, "B");
  const auto h_gens = detail::reduce_generators(spec.H, q, "H");
  std::vector<std::vector<FpMatrix>> p_gens;
  for (const auto& list : spec.P) p_gens.push_back(detail::reduce_generators(list, q, "P_alpha"));

  OracleReport report;
  report.q = q;
  const auto group = detail::closure_keys(g_gens, n, q, cap, "G");
  report.group_order = group.size();
  {
    const absl::flat_hash_set<std::uint64_t> members(group.begin(), group.end());
    auto inside = [&](const std::vector<FpMatrix>& gens, const char* what) {
      for (const auto& g : gens)
        if (!members.contains(g.key())) throw Error(std::string(what) + " is not contained in the group generated by G");
    };
    inside(h_gens, "H");
    inside(b_gens, "B");
    for (const auto& list : p_gens) inside(list, "P_alpha");
  }
  const auto subgroup_keys = detail::closure_keys(h_gens, n, q, cap, "H");
  report.subgroup_order = subgroup_keys.size();
  std::vector<FpMatrix> subgroup;
  subgroup.reserve(subgroup_keys.size());
  for (auto k : subgroup_keys) subgroup.push_back(FpMatrix::decode(k, n, q));

  // Cosets reachable from H under left multiplication by G.
  std::vector<std::uint64_t> labels{detail::coset_label(FpMatrix::identity(n, q), subgroup, q)};
  absl::flat_hash_map<std::uint64_t, std::size_t> index{{labels.front(), 0}};
  for (std::size_t head = 0; head < labels.size(); ++head) {
    const auto x = FpMatrix::decode(labels[head], n, q);
    for (const auto& g : g_gens) {
      const auto k = detail::coset_label(g * x, subgroup, q);
      if (index.emplace(k, labels.size()).second) labels.push_back(k);
    }
  }
  std::sort(labels.begin(), labels.end());
  index.clear();
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  report.point_count = labels.size();

  auto act = [&](const FpMatrix& g, std::size_t point) {
    return index.at(detail::coset_label(g * FpMatrix::decode(labels[point], n, q), subgroup, q));
  };
  auto partition = [&](const std::vector<FpMatrix>& gens) {
    detail::DisjointSets sets(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (const auto& g : gens) sets.union_set(i, act(g, i));
    std::vector<std::size_t> root(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) root[i] = sets.find_set(i);
    return root;
  };

  const auto b_root = partition(b_gens);
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> by_root;  // root -> (least point, size)
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, fresh] = by_root.try_emplace(b_root[i], i, 0);
    it->second.first = std::min(it->second.first, i);
    ++it->second.second;
  }
  for (const auto& [root, info] : by_root) report.orbits.push_back({info.first, info.second});
  std::sort(report.orbits.begin(), report.orbits.end(), [](const OracleOrbit& a, const OracleOrbit& b) {
    return std::tie(a.size, a.representative) < std::tie(b.size, b.representative);
  });
  std::map<std::size_t, std::size_t> orbit_of_root;
  for (std::size_t o = 0; o < report.orbits.size(); ++o)
    orbit_of_root[b_root[report.orbits[o].representative]] = o;

  for (const auto& gens : p_gens) {
    const auto p_root = partition(gens);
    std::map<std::size_t, std::set<std::size_t>> classes;
    for (std::size_t i = 0; i < labels.size(); ++i) classes[p_root[i]].insert(orbit_of_root.at(b_root[i]));
    std::vector<std::vector<std::size_t>> merged;
    for (const auto& [root, members] : classes) merged.emplace_back(members.begin(), members.end());
    std::sort(merged.begin(), merged.end());
    report.merges.push_back(std::move(merged));
  }
  return report;
}

inline std::vector<std::vector<std::size_t>> merge_structure(const MatGroupSpec& spec, int q, std::size_t alpha,
                                                             std::size_t cap = kDefaultOracleCap) {
  const auto report = enumerate(spec, q, cap);
  if (alpha >= report.merges.size()) throw Error("simple root index out of range: " + std::to_string(alpha));
  return report.merges[alpha];
}

// size(q) = (num/den) q^a (q-1)^b
struct MonomialFit {
  int a = 0;
  int b = 0;
  std::int64_t num = 1;
  std::int64_t den = 1;

  std::string formula() const {
    std::string c = den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    return c + " q^" + std::to_string(a) + " (q-1)^" + std::to_string(b);
  }
};

// Exact fit over all (q, size) samples with a + b <= max_degree; the
// solution of least (a + b, b) is returned.
inline std::optional<MonomialFit> fit_monomial(const std::vector<std::pair<int, std::size_t>>& samples, int max_degree) {
  using Wide = __int128;
  auto pw = [](Wide base, int e) {
    Wide r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
  };
  if (samples.size() < 2) return std::nullopt;
  for (int total = 0; total <= max_degree; ++total)
    for (int b = 0; b <= total; ++b) {
      const int a = total - b;
      const auto [q0, s0] = samples.front();
      const Wide base0 = pw(q0, a) * pw(q0 - 1, b);
      bool ok = true;
      for (std::size_t k = 1; k < samples.size() && ok; ++k) {
        const auto [qk, sk] = samples[k];
        const Wide basek = pw(qk, a) * pw(qk - 1, b);
        ok = static_cast<Wide>(s0) * basek == static_cast<Wide>(sk) * base0;
      }
      if (!ok) continue;
      Wide num = static_cast<Wide>(s0), den = base0;
      Wide g = num, h = den;
      while (h != 0) {
        const Wide t = g % h;
        g = h;
        h = t;
      }
      num /= g;
      den /= g;
      if (num > INT64_MAX || den > INT64_MAX) continue;
      return MonomialFit{a, b, static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
    }
  return std::nullopt;
}

struct InferredDatum {
  OrbitDatum datum;
  std::vector<std::string> notes;
  std::vector<std::optional<MonomialFit>> fits;  // per orbit of the first report
  std::vector<std::vector<std::size_t>> sizes;   // per orbit, per report
};

namespace detail {

// Bijection from the orbits of `other` onto those of `base` carrying merge
// classes to merge classes and admitting a monomial fit per matched pair.
inline std::optional<std::vector<std::size_t>> match_orbits(const OracleReport& base, const OracleReport& other,
                                                            int max_degree) {
  const auto n = base.orbits.size();
  std::vector<std::size_t> image(n, n);  // base orbit -> other orbit
  std::vector<bool> used(n, false);
  auto merges_agree = [&] {
    for (std::size_t a = 0; a < base.merges.size(); ++a) {
      std::vector<std::vector<std::size_t>> mapped;
      for (const auto& cls : base.merges[a]) {
        std::vector<std::size_t> m;
        for (auto o : cls) m.push_back(image[o]);
        std::sort(m.begin(), m.end());
        mapped.push_back(std::move(m));
      }
      std::sort(mapped.begin(), mapped.end());
      if (mapped != other.merges[a]) return false;
    }
    return true;
  };
  std::function<bool(std::size_t)> assign = [&](std::size_t i) {
    if (i == n) return merges_agree();
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (!fit_monomial({{base.q, base.orbits[i].size}, {other.q, other.orbits[j].size}}, max_degree)) continue;
      used[j] = true;
      image[i] = j;
      if (assign(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  if (!assign(0)) return std::nullopt;
  return image;
}

}  // namespace detail

// Guess a datum from reports at two or more primes. Dimension and rank are
// proxied by a + b and b of the fitted point counts; c and s are unknown
// and set to 0.
inline InferredDatum infer_datum(const std::vector<OracleReport>& reports, const RootSystem& rs, int matrix_dim = kMaxMatrixDim) {
  std::set<int> primes;
  for (const auto& r : reports) primes.insert(r.q);
  if (reports.size() < 2 || primes.size() != reports.size())
    throw Error("inference needs reports for at least two distinct primes");
  const auto& base = reports.front();
  for (const auto& r : reports) {
    if (r.orbit_count() != base.orbit_count())
      throw Error("not polynomial-stable at these primes: orbit counts " + std::to_string(base.orbit_count()) +
                  " (q=" + std::to_string(base.q) + ") vs " + std::to_string(r.orbit_count()) +
                  " (q=" + std::to_string(r.q) + ")");
    if (r.merges.size() != rs.dim()) throw Error("report has merge data for the wrong number of simple roots");
  }
  const int max_degree = matrix_dim * matrix_dim;
  const auto n = base.orbit_count();
  InferredDatum out;
  out.sizes.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) out.sizes[i].push_back(base.orbits[i].size);
  for (std::size_t k = 1; k < reports.size(); ++k) {
    const auto image = detail::match_orbits(base, reports[k], max_degree);
    if (!image)
      throw Error("not polynomial-stable at these primes: merge structures at q=" + std::to_string(base.q) +
                  " and q=" + std::to_string(reports[k].q) + " are not isomorphic");
    for (std::size_t i = 0; i < n; ++i) out.sizes[i].push_back(reports[k].orbits[(*image)[i]].size);
  }

  auto& d = out.datum;
  d.root_system = rs;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<int, std::size_t>> samples;
    for (std::size_t k = 0; k < reports.size(); ++k) samples.emplace_back(reports[k].q, out.sizes[i][k]);
    auto fit = fit_monomial(samples, max_degree);
    Orbit o;
    o.id = "o" + std::to_string(i);
    if (fit) {
      o.dim = fit->a + fit->b;
      o.rk = fit->b;
      out.notes.push_back(o.id + ": size(q) = " + fit->formula());
    } else {
      out.notes.push_back(o.id + ": no monomial fit; dim and rank unknown");
    }
    out.fits.push_back(fit);
    ids.push_back(o.id);
    d.orbits.push_back(std::move(o));
  }
  int top = -1;
  std::size_t top_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.fits[i]) continue;
    if (d.orbits[i].dim > top) {
      top = d.orbits[i].dim;
      top_count = 1;
    } else if (d.orbits[i].dim == top) {
      ++top_count;
    }
  }
  if (top_count == 1) {
    for (std::size_t i = 0; i < n; ++i)
      if (out.fits[i] && d.orbits[i].dim == top) d.orbits[i].open = true;
  } else {
    out.notes.push_back("no unique orbit of maximal fitted dimension; open orbit not marked");
  }

  d.cells.resize(rs.dim());
  for (std::size_t alpha = 0; alpha < rs.dim(); ++alpha) {
    for (const auto& cls : base.merges[alpha]) {
      RaiseCell cell;
      std::vector<std::size_t> members(cls.begin(), cls.end());
      const bool fitted = std::all_of(members.begin(), members.end(), [&](std::size_t i) { return out.fits[i].has_value(); });
      std::sort(members.begin(), members.end(), [&](std::size_t x, std::size_t y) {
        return std::tie(d.orbits[y].dim, y) < std::tie(d.orbits[x].dim, x);
      });
      auto dim = [&](std::size_t k) { return d.orbits[members[k]].dim; };
      auto rk = [&](std::size_t k) { return d.orbits[members[k]].rk; };
      cell.kind = CellKind::Unclassified;
      if (!fitted) {
        // stays unclassified
      } else if (members.size() == 1) {
        cell.kind = CellKind::A;
      } else if (members.size() == 2 && dim(0) > dim(1)) {
        if (rk(0) == rk(1)) cell.kind = CellKind::U;
        else if (rk(0) == rk(1) + 1) cell.kind = CellKind::RIorN;
      } else if (members.size() == 3 && dim(0) > dim(1)) {
        cell.kind = dim(1) == dim(2) ? CellKind::RT : CellKind::TU;
      }
      for (auto i : members) cell.members.push_back(ids[i]);
      if (cell.kind == CellKind::RIorN)
        out.notes.push_back(detail::cell_label(alpha, cell) +
                            ": RI and N cannot be told apart from point counts (ambiguous)");
      if (cell.kind == CellKind::Unclassified)
        out.notes.push_back(detail::cell_label(alpha, cell) + ": raise type not determined");
      d.cells[alpha].push_back(std::move(cell));
    }
  }
  out.notes.push_back("c and s are not measured by point counts; filled as 0 (unknown)");
  d.canonicalize();
  return out;
}

inline InferredDatum infer_datum(const MatGroupSpec& spec, const std::vector<int>& q_list,
                                 std::size_t cap = kDefaultOracleCap) {
  std::vector<OracleReport> reports;
  for (int q : q_list) reports.push_back(enumerate(spec, q, cap));
  return infer_datum(reports, spec.root_system, spec.dimension);
}

struct DiffReport {
  bool match = false;
  std::vector<std::string> mismatches;
};

namespace detail {

inline bool kinds_compatible(CellKind a, CellKind b) {
  if (a == b) return true;
  auto ri_or_n = [](CellKind k) { return k == CellKind::RI || k == CellKind::N || k == CellKind::RIorN; };
  return (a == CellKind::RIorN && ri_or_n(b)) || (b == CellKind::RIorN && ri_or_n(a));
}

inline std::string kind_multiset(const std::vector<RaiseCell>& cells) {
  std::vector<std::string> names;
  for (const auto& c : cells) names.emplace_back(kind_name(c.kind));
  std::sort(names.begin(), names.end());
  std::string s = "{";
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s + "}";
}

}  // namespace detail

// Isomorphism of cell-labelled structures: a bijection of orbits that maps
// open to open and every cell onto a cell of compatible kind, role by role
// (the two closed orbits of an RT cell may be exchanged).
inline DiffReport compare(const OrbitDatum& datum, const OrbitDatum& inferred) {
  DiffReport out;
  if (datum.root_system.key() != inferred.root_system.key()) {
    out.mismatches.push_back("root systems differ: " + datum.root_system.key() + " vs " + inferred.root_system.key());
    return out;
  }
  if (datum.orbits.size() != inferred.orbits.size())
    out.mismatches.push_back("orbit count: " + std::to_string(datum.orbits.size()) + " vs " +
                             std::to_string(inferred.orbits.size()));
  const auto rank = datum.root_system.dim();
  if (datum.cells.size() != rank || inferred.cells.size() != rank) {
    out.mismatches.push_back("cells missing for some simple root");
    return out;
  }
  for (std::size_t a = 0; a < rank; ++a) {
    if (datum.cells[a].size() != inferred.cells[a].size()) {
      out.mismatches.push_back("alpha " + std::to_string(a) + ": " + std::to_string(datum.cells[a].size()) +
                               " cells vs " + std::to_string(inferred.cells[a].size()));
      continue;
    }
    const auto& x = datum.cells[a];
    const auto& y = inferred.cells[a];
    // exact kinds first, then RI|N against RI or N
    std::vector<bool> used_x(x.size(), false), used_y(y.size(), false);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size() && !used_x[i]; ++j) {
          if (used_y[j] || x[i].members.size() != y[j].members.size()) continue;
          const bool fits = pass == 0 ? x[i].kind == y[j].kind : detail::kinds_compatible(x[i].kind, y[j].kind);
          if (fits) used_x[i] = used_y[j] = true;
        }
    const bool ok = std::all_of(used_x.begin(), used_x.end(), [](bool b) { return b; });
    if (!ok)
      out.mismatches.push_back("alpha " + std::to_string(a) + ": cell kinds " + detail::kind_multiset(x) + " vs " +
                               detail::kind_multiset(y));
  }
  if (!out.mismatches.empty()) return out;

  const auto n = datum.orbits.size();
  std::vector<std::size_t> image(n, n);
  std::vector<bool> used(n, false);
  auto idx = [](const OrbitDatum& d, const std::string& id) { return *d.index_of(id); };
  // role signature: per alpha, (role, arity)
  auto signature = [&](const OrbitDatum& d, std::size_t i) {
    std::vector<std::pair<std::size_t, std::size_t>> sig;
    for (std::size_t a = 0; a < rank; ++a) {
      const auto* cell = d.cell_of(a, d.orbits[i].id);
      if (!cell) {
        sig.emplace_back(9, 0);
        continue;
      }
      const auto role = static_cast<std::size_t>(
          std::find(cell->members.begin(), cell->members.end(), d.orbits[i].id) - cell->members.begin());
      sig.emplace_back(role == 0 ? 0 : (cell->kind == CellKind::RT ? 1 : role), cell->members.size());
    }
    return sig;
  };
  auto cells_consistent = [&] {
    for (std::size_t a = 0; a < rank; ++a)
      for (const auto& cell : datum.cells[a]) {
        std::vector<std::size_t> mapped;
        for (const auto& m : cell.members) {
          const auto t = image[idx(datum, m)];
          if (t == n) break;
          mapped.push_back(t);
        }
        if (mapped.size() != cell.members.size()) continue;
        const auto* target = inferred.cell_of(a, inferred.orbits[mapped[0]].id);
        if (!target || target->members.size() != mapped.size() || !detail::kinds_compatible(cell.kind, target->kind))
          return false;
        std::vector<std::size_t> roles;
        for (const auto& m : target->members) roles.push_back(idx(inferred, m));
        if (roles[0] != mapped[0]) return false;
        if (cell.kind == CellKind::RT || target->kind == CellKind::RT) {
          std::sort(roles.begin() + 1, roles.end());
          std::sort(mapped.begin() + 1, mapped.end());
        }
        if (roles != mapped) return false;
      }
    return true;
  };
  std::function<bool(std::size_t)> assign = [&](std::size_t i) {
    if (i == n) return true;
    const auto sig = signature(datum, i);
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || datum.orbits[i].open != inferred.orbits[j].open) continue;
      if (signature(inferred, j) != sig) continue;
      used[j] = true;
      image[i] = j;
      if (cells_consistent() && assign(i + 1)) return true;
      used[j] = false;
      image[i] = n;
    }
    return false;
  };
  if (n == inferred.orbits.size() && assign(0)) {
    out.match = true;
  } else {
    out.mismatches.push_back("raise graph shape differs: no orbit bijection carries cells to cells");
  }
  return out;
}

inline Json oracle_report_to_json(const OracleReport& r) {
  Json orbits = Json::array();
  for (std::size_t i = 0; i < r.orbits.size(); ++i)
    orbits.push_back({{"id", "o" + std::to_string(i)}, {"representative", r.orbits[i].representative}, {"size", r.orbits[i].size}});
  Json merges = Json::object();
  for (std::size_t a = 0; a < r.merges.size(); ++a) {
    Json classes = Json::array();
    for (const auto& cls : r.merges[a]) {
      Json ids = Json::array();
      for (auto o : cls) ids.push_back("o" + std::to_string(o));
      classes.push_back(ids);
    }
    merges[std::to_string(a)] = classes;
  }
  return {{"q", r.q},
          {"group_order", r.group_order},
          {"subgroup_order", r.subgroup_order},
          {"points", r.point_count},
          {"orbit_count", r.orbit_count()},
          {"orbits", orbits},
          {"merges", merges}};
}

// Datum format plus a "confidence" section.
inline Json inferred_to_json(const InferredDatum& inferred) {
  auto j = datum_to_json(inferred.datum);
  Json sizes = Json::object();
  for (std::size_t i = 0; i < inferred.sizes.size(); ++i) sizes["o" + std::to_string(i)] = inferred.sizes[i];
  j["confidence"] = {{"notes", inferred.notes}, {"point_counts", sizes}};
  return j;
}

}  // namespace spherorb
