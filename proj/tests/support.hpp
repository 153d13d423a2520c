#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vetotalk/vetotalk.hpp"

namespace vt_test {

using namespace vetotalk;

inline Rational R(const char* s) { return parse_rational(s); }

inline Vec V(std::initializer_list<const char*> items) {
  Vec out;
  for (const char* s : items) out.push_back(parse_rational(s));
  return out;
}

inline std::string fixture(const std::string& name) { return std::string(VETOTALK_FIXTURE_DIR) + "/" + name; }

inline GameSpec game_4_1() { return io::load_game(fixture("game_4_1.json")); }
inline GameSpec game_4_2() { return io::load_game(fixture("game_4_2.json")); }
inline GameSpec game_4_3() { return io::load_game(fixture("game_4_3.json")); }

// {x >= 0, x_a + x_b <= 100}
inline Polytope triangle() {
  Polytope p(2);
  p.add_row({V({"-1", "0"}), 0});
  p.add_row({V({"0", "-1"}), 0});
  p.add_row({V({"1", "1"}), 100});
  return p;
}

inline Polytope box(std::size_t n, const Rational& lo, const Rational& hi) {
  Polytope p(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec e = unit_vector(n, i);
    p.add_row({e, hi});
    for (auto& v : e) v = -v;
    p.add_row({e, -lo});
  }
  return p;
}

inline AffineFn affine(Vec coeffs, Rational constant = 0) { return AffineFn{std::move(coeffs), std::move(constant)}; }

// All vertices of a bounded polytope by brute force over row subsets of size dim.
inline std::vector<Vec> vertices(const Polytope& p) {
  const std::size_t n = p.dim();
  const auto& rows = p.rows();
  std::vector<Vec> out;
  std::vector<std::size_t> pick(n);
  auto solve = [&](const std::vector<std::size_t>& idx) -> std::optional<Vec> {
    std::vector<Vec> a(n, Vec(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] = rows[idx[i]].normal[j];
      a[i][n] = rows[idx[i]].rhs;
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && a[piv][c] == 0) ++piv;
      if (piv == n) return std::nullopt;
      std::swap(a[c], a[piv]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || a[r][c] == 0) continue;
        Rational f = a[r][c] / a[c][c];
        for (std::size_t j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
      }
    }
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
  };
  auto rec = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == n) {
      if (auto x = solve(pick); x && p.contains(*x)) {
        if (std::find(out.begin(), out.end(), *x) == out.end()) out.push_back(*x);
      }
      return;
    }
    for (std::size_t i = start; i < rows.size(); ++i) {
      pick[depth] = i;
      self(self, depth + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

class Random {
 public:
  explicit Random(std::uint32_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Rational rational(int lo, int hi, int den = 1) { return Rational(integer(lo * den, hi * den), den); }

  Vec vec(std::size_t n, int lo, int hi, int den = 1) {
    Vec out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(rational(lo, hi, den));
    return out;
  }

  // Strictly positive probability vector with the given denominator.
  Vec simplex_point(std::size_t n, int den) {
    std::vector<int> parts(n, 1);
    for (int left = den - static_cast<int>(n); left > 0; --left) ++parts[integer(0, static_cast<int>(n) - 1)];
    Vec out;
    for (int v : parts) out.push_back(Rational(v, den));
    return out;
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

// A random game on the box [0,10]^dim with integer utilities.  Reserves are
// set below the maximum of each U^k so every type can be satisfied.
inline GameSpec random_game(Random& r, std::size_t types, std::size_t dim, bool private_values) {
  Polytope x = box(dim, 0, 10);
  Vec prior = r.simplex_point(types, 12);
  AffineFn common = affine(r.vec(dim, -3, 3));
  std::vector<TypeSpec> specs;
  for (std::size_t k = 0; k < types; ++k) {
    TypeSpec t;
    t.name = "t" + std::to_string(k + 1);
    t.prior = prior[k];
    t.sender = affine(r.vec(dim, -3, 3), r.rational(-5, 5));
    t.receiver = private_values ? common : affine(r.vec(dim, -3, 3));
    Rational top = *maximize(t.sender, x).value;
    Rational bottom = -*maximize(-t.sender, x).value;
    t.reserve = bottom + (top - bottom) * r.rational(0, 1, 4);
    specs.push_back(std::move(t));
  }
  return GameSpec::create(std::move(x), std::move(specs));
}

inline SenderStrategy random_strategy(Random& r, std::size_t types, std::size_t messages) {
  std::vector<std::string> names;
  for (std::size_t m = 0; m < messages; ++m) names.push_back("m" + std::to_string(m + 1));
  std::vector<Vec> rows;
  for (std::size_t k = 0; k < types; ++k) {
    std::vector<int> w(messages);
    int total = 0;
    for (auto& v : w) total += (v = r.integer(0, 4));
    if (total == 0) {
      w[r.integer(0, static_cast<int>(messages) - 1)] = 1;
      total = 1;
    }
    Vec row;
    for (int v : w) row.push_back(Rational(v, total));
    rows.push_back(std::move(row));
  }
  return SenderStrategy(std::move(names), std::move(rows));
}

}  // namespace vt_test
