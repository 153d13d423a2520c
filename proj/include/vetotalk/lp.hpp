#pragma once

// Exact rational linear programming over polytopes {x : A x <= b}.
//
// One two-phase tableau simplex with Bland's rule backs every query.  Free
// variables are split as x = x+ - x-, each row gets a slack, and rows with a
// negative right-hand side are negated so that phase 1 can start from an
// all-artificial basis.  The artificial columns are kept for the whole run:
// their block of the tableau is B^-1, which is where the dual multipliers
// (optimality certificate) and the Farkas multipliers (infeasibility
// certificate) are read from.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vetotalk/error.hpp"
#include "vetotalk/rational.hpp"

namespace vetotalk {

// x -> coeffs . x + constant
struct AffineFn {
  Vec coeffs;
  Rational constant{0};

  Rational operator()(std::span<const Rational> x) const { return dot(coeffs, x) + constant; }

  std::size_t dim() const { return coeffs.size(); }

  static AffineFn zero(std::size_t n) { return AffineFn{Vec(n, Rational(0)), 0}; }

  AffineFn operator-() const {
    AffineFn out = *this;
    for (auto& c : out.coeffs) c = -c;
    out.constant = -out.constant;
    return out;
  }

  AffineFn operator+(const AffineFn& other) const {
    if (other.dim() != dim()) throw Error(ErrorCode::kDimensionMismatch, "affine sum");
    AffineFn out = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] += other.coeffs[i];
    out.constant += other.constant;
    return out;
  }

  AffineFn operator-(const AffineFn& other) const { return *this + (-other); }

  AffineFn scaled(const Rational& s) const {
    AffineFn out = *this;
    for (auto& c : out.coeffs) c *= s;
    out.constant *= s;
    return out;
  }

  bool operator==(const AffineFn&) const = default;
};

struct HalfSpace {
  Vec normal;
  Rational rhs;
};

class Polytope {
 public:
  Polytope() = default;
  explicit Polytope(std::size_t dim) : dim_(dim) {}
  Polytope(std::size_t dim, std::vector<HalfSpace> rows) : dim_(dim), rows_(std::move(rows)) {
    for (const auto& row : rows_) check_row(row);
  }

  std::size_t dim() const { return dim_; }
  const std::vector<HalfSpace>& rows() const { return rows_; }
  std::size_t num_rows() const { return rows_.size(); }

  void add_row(HalfSpace row) {
    check_row(row);
    rows_.push_back(std::move(row));
  }

  // f(x) >= value, i.e. -coeffs . x <= constant - value.
  void add_at_least(const AffineFn& f, const Rational& value) {
    HalfSpace row{Vec(f.coeffs), f.constant - value};
    for (auto& c : row.normal) c = -c;
    add_row(std::move(row));
  }

  void add_at_most(const AffineFn& f, const Rational& value) {
    add_row(HalfSpace{f.coeffs, value - f.constant});
  }

  // Equalities are stored as two opposing inequalities.
  void add_equal(const AffineFn& f, const Rational& value) {
    add_at_most(f, value);
    add_at_least(f, value);
  }

  Polytope with_at_least(const AffineFn& f, const Rational& value) const {
    Polytope out = *this;
    out.add_at_least(f, value);
    return out;
  }

  Polytope with_equal(const AffineFn& f, const Rational& value) const {
    Polytope out = *this;
    out.add_equal(f, value);
    return out;
  }

  bool contains(std::span<const Rational> x) const {
    if (x.size() != dim_) throw Error(ErrorCode::kDimensionMismatch, "point dimension");
    for (const auto& row : rows_) {
      if (dot(row.normal, x) > row.rhs) return false;
    }
    return true;
  }

  // Embeds this polytope into the coordinates [offset, offset + dim) of R^total.
  Polytope embedded(std::size_t total, std::size_t offset) const {
    Polytope out(total);
    for (const auto& row : rows_) {
      Vec normal(total, Rational(0));
      for (std::size_t i = 0; i < dim_; ++i) normal[offset + i] = row.normal[i];
      out.rows_.push_back(HalfSpace{std::move(normal), row.rhs});
    }
    return out;
  }

  void append(const Polytope& other) {
    if (other.dim_ != dim_) throw Error(ErrorCode::kDimensionMismatch, "append polytopes");
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
  }

 private:
  void check_row(const HalfSpace& row) const {
    if (row.normal.size() != dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "row of length " + std::to_string(row.normal.size()) + " in a polytope of dim " +
                      std::to_string(dim_));
    }
  }

  std::size_t dim_ = 0;
  std::vector<HalfSpace> rows_;
};

enum class LpStatus { kInfeasible, kOptimal, kUnbounded };

inline std::string_view lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kInfeasible: return "Infeasible";
    case LpStatus::kOptimal: return "Optimal";
    case LpStatus::kUnbounded: return "Unbounded";
  }
  return "?";
}

// For kOptimal the certificate y >= 0 satisfies y^T A = objective coeffs and
// y^T b + constant = value.  For kInfeasible it satisfies y^T A = 0 and
// y^T b < 0.  Both are indexed by the rows of the polytope that was solved.
struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  std::optional<Vec> point;
  std::optional<Rational> value;
  Vec certificate;

  bool optimal() const { return status == LpStatus::kOptimal; }
  bool infeasible() const { return status == LpStatus::kInfeasible; }
};

namespace detail {

// maximize c.z  s.t.  M z = d,  z >= 0,  with d >= 0.
struct StandardForm {
  std::vector<Vec> m;
  Vec d;
  Vec c;
};

struct StandardResult {
  LpStatus status = LpStatus::kInfeasible;
  Vec z;
  Vec duals;  // phase-2 duals when optimal, phase-1 duals when infeasible
};

class Tableau {
 public:
  explicit Tableau(const StandardForm& sf)
      : rows_(sf.m.size()), structural_(sf.c.size()), cols_(structural_ + rows_ + 1) {
    t_.assign(rows_, Vec(cols_, Rational(0)));
    basis_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < structural_; ++j) t_[i][j] = sf.m[i][j];
      t_[i][structural_ + i] = 1;
      t_[i][rhs()] = sf.d[i];
      basis_[i] = structural_ + i;
    }
  }

  StandardResult solve(const Vec& c) {
    StandardResult result;

    // Phase 1: maximize -sum(artificials).
    Vec phase1(cols_ - 1, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i) phase1[structural_ + i] = -1;
    set_objective(phase1);
    run(/*allow_artificial=*/true);
    if (-obj_[rhs()] < 0) {
      result.status = LpStatus::kInfeasible;
      result.duals.resize(rows_);
      for (std::size_t i = 0; i < rows_; ++i) result.duals[i] = -1 - obj_[structural_ + i];
      return result;
    }

    drive_out_artificials();

    Vec phase2(cols_ - 1, Rational(0));
    for (std::size_t j = 0; j < structural_; ++j) phase2[j] = c[j];
    set_objective(phase2);
    if (!run(/*allow_artificial=*/false)) {
      result.status = LpStatus::kUnbounded;
      return result;
    }
    result.status = LpStatus::kOptimal;
    result.z.assign(structural_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < structural_) result.z[basis_[i]] = t_[i][rhs()];
    }
    result.duals.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) result.duals[i] = -obj_[structural_ + i];
    return result;
  }

 private:
  std::size_t rhs() const { return cols_ - 1; }

  // obj_[j] holds the reduced cost c_j - c_B^T B^-1 a_j; obj_[rhs] = -value.
  void set_objective(const Vec& c) {
    obj_.assign(cols_, Rational(0));
    for (std::size_t j = 0; j + 1 < cols_; ++j) obj_[j] = c[j];
    for (std::size_t i = 0; i < rows_; ++i) {
      const Rational& cb = c[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (t_[i][j] != 0) obj_[j] -= cb * t_[i][j];
      }
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    Rational inv = 1 / t_[r][col];
    for (auto& v : t_[r]) {
      if (v != 0) v *= inv;
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || t_[i][col] == 0) continue;
      Rational f = t_[i][col];
      for (std::size_t j = 0; j < cols_; ++j) {
        if (t_[r][j] != 0) t_[i][j] -= f * t_[r][j];
      }
    }
    if (obj_[col] != 0) {
      Rational f = obj_[col];
      for (std::size_t j = 0; j < cols_; ++j) {
        if (t_[r][j] != 0) obj_[j] -= f * t_[r][j];
      }
    }
    basis_[r] = col;
  }

  // Bland's rule. Returns false on unboundedness.
  bool run(bool allow_artificial) {
    const std::size_t limit = allow_artificial ? cols_ - 1 : structural_;
    for (;;) {
      std::size_t entering = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (obj_[j] > 0) {
          entering = j;
          break;
        }
      }
      if (entering == limit) return true;

      std::optional<std::size_t> leave;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (t_[i][entering] <= 0) continue;
        Rational ratio = t_[i][rhs()] / t_[i][entering];
        if (!leave || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, entering);
    }
  }

  // A zero-level artificial left in the basis is swapped for any structural
  // column with a nonzero entry in its row; if none exists the row is
  // redundant and the artificial stays basic at zero forever.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < structural_) continue;
      for (std::size_t j = 0; j < structural_; ++j) {
        if (t_[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  std::size_t rows_;
  std::size_t structural_;
  std::size_t cols_;
  std::vector<Vec> t_;
  Vec obj_;
  std::vector<std::size_t> basis_;
};

inline LpOutcome solve_polytope(const AffineFn& objective, const Polytope& p) {
  const std::size_t n = p.dim();
  const std::size_t m = p.num_rows();
  if (objective.dim() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "objective of dim " + std::to_string(objective.dim()) +
                                                   " over polytope of dim " + std::to_string(n));
  }

  // Columns: x+ (n), x- (n), slacks (m).
  StandardForm sf;
  sf.c.assign(2 * n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    sf.c[j] = objective.coeffs[j];
    sf.c[n + j] = -objective.coeffs[j];
  }
  std::vector<int> sign(m, 1);
  sf.m.assign(m, Vec(2 * n + m, Rational(0)));
  sf.d.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = p.rows()[i];
    sign[i] = row.rhs < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) {
      sf.m[i][j] = sign[i] * row.normal[j];
      sf.m[i][n + j] = -sign[i] * row.normal[j];
    }
    sf.m[i][2 * n + i] = sign[i];
    sf.d[i] = sign[i] * row.rhs;
  }

  Tableau tableau(sf);
  StandardResult r = tableau.solve(sf.c);

  LpOutcome out;
  out.status = r.status;
  if (r.status == LpStatus::kUnbounded) return out;
  out.certificate.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.certificate[i] = r.duals[i] * sign[i];
  if (r.status == LpStatus::kOptimal) {
    Vec x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = r.z[j] - r.z[n + j];
    out.value = objective(x);
    out.point = std::move(x);
  }
  return out;
}

}  // namespace detail

inline LpOutcome maximize(const AffineFn& objective, const Polytope& p) {
  return detail::solve_polytope(objective, p);
}

inline LpOutcome minimize(const AffineFn& objective, const Polytope& p) {
  LpOutcome out = detail::solve_polytope(-objective, p);
  if (out.value) out.value = -*out.value;
  return out;
}

inline LpOutcome feasible(const Polytope& p) { return maximize(AffineFn::zero(p.dim()), p); }

inline bool is_empty(const Polytope& p) { return feasible(p).infeasible(); }

struct LexOutcome {
  LpOutcome primary;
  LpOutcome outcome;  // second stage; certificate indexes `face` rows
  Polytope face;      // p plus primary(x) == max primary
};

// Maximizes `secondary` over the face of p on which `primary` is maximal.
inline LexOutcome lex_maximize_detailed(const AffineFn& primary, const AffineFn& secondary,
                                        const Polytope& p) {
  LexOutcome out;
  out.primary = maximize(primary, p);
  if (!out.primary.optimal()) {
    out.outcome = out.primary;
    out.face = p;
    return out;
  }
  out.face = p.with_equal(primary, *out.primary.value);
  out.outcome = maximize(secondary, out.face);
  return out;
}

inline LpOutcome lex_maximize(const AffineFn& primary, const AffineFn& secondary,
                              const Polytope& p) {
  return lex_maximize_detailed(primary, secondary, p).outcome;
}

// Exact checks of the certificates carried by an LpOutcome.

inline bool verify_optimality_certificate(const AffineFn& objective, const Polytope& p,
                                          const LpOutcome& out) {
  if (!out.optimal() || !out.point || !out.value) return false;
  const auto& y = out.certificate;
  if (y.size() != p.num_rows()) return false;
  if (!p.contains(*out.point)) return false;
  if (objective(*out.point) != *out.value) return false;
  Vec combo(p.dim(), Rational(0));
  Rational bound = objective.constant;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0) return false;
    const auto& row = p.rows()[i];
    if (y[i] != 0 && dot(row.normal, *out.point) != row.rhs) return false;  // slackness
    for (std::size_t j = 0; j < p.dim(); ++j) combo[j] += y[i] * row.normal[j];
    bound += y[i] * row.rhs;
  }
  return combo == objective.coeffs && bound == *out.value;
}

inline bool verify_farkas_certificate(const Polytope& p, const LpOutcome& out) {
  if (!out.infeasible()) return false;
  const auto& y = out.certificate;
  if (y.size() != p.num_rows()) return false;
  Vec combo(p.dim(), Rational(0));
  Rational rhs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0) return false;
    for (std::size_t j = 0; j < p.dim(); ++j) combo[j] += y[i] * p.rows()[i].normal[j];
    rhs += y[i] * p.rows()[i].rhs;
  }
  for (const auto& c : combo) {
    if (c != 0) return false;
  }
  return rhs < 0;
}

// Maximizes +-e_i for every coordinate; false if any direction is unbounded.
inline bool is_bounded(const Polytope& p) {
  for (std::size_t i = 0; i < p.dim(); ++i) {
    for (int s : {1, -1}) {
      AffineFn f{unit_vector(p.dim(), i), 0};
      if (s < 0) f = -f;
      if (maximize(f, p).status == LpStatus::kUnbounded) return false;
    }
  }
  return true;
}

}  // namespace vetotalk
