#pragma once

// Game data model: types, priors, reservation utilities, the decision
// polytope, strategy profiles, Bayes updates and payoff evaluation.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vetotalk/error.hpp"
#include "vetotalk/lp.hpp"
#include "vetotalk/rational.hpp"

namespace vetotalk {

inline constexpr std::size_t kMaxTypes = 16;

// A subset of the type set K, stored as a bitmask over 0-based type indices.
class TypeSet {
 public:
  constexpr TypeSet() = default;
  constexpr explicit TypeSet(std::uint32_t bits) : bits_(bits) {}

  static TypeSet single(std::size_t k) { return TypeSet(std::uint32_t{1} << k); }
  static TypeSet all(std::size_t n) {
    return TypeSet(n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1);
  }
  static TypeSet of(std::initializer_list<std::size_t> members) {
    TypeSet s;
    for (auto k : members) s = s.with(k);
    return s;
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  bool contains(std::size_t k) const { return (bits_ >> k) & 1u; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  TypeSet with(std::size_t k) const { return TypeSet(bits_ | (std::uint32_t{1} << k)); }
  TypeSet without(std::size_t k) const { return TypeSet(bits_ & ~(std::uint32_t{1} << k)); }
  bool subset_of(TypeSet other) const { return (bits_ & ~other.bits_) == 0; }
  TypeSet operator|(TypeSet o) const { return TypeSet(bits_ | o.bits_); }
  TypeSet operator&(TypeSet o) const { return TypeSet(bits_ & o.bits_); }
  TypeSet minus(TypeSet o) const { return TypeSet(bits_ & ~o.bits_); }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < 32; ++k) {
      if (contains(k)) out.push_back(k);
    }
    return out;
  }

  // 1-based, e.g. "{1,3}".
  std::string label() const {
    std::string out = "{";
    bool first = true;
    for (auto k : members()) {
      if (!first) out += ",";
      out += std::to_string(k + 1);
      first = false;
    }
    return out + "}";
  }

  auto operator<=>(const TypeSet&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

struct TypeSpec {
  std::string name;
  Rational prior;
  Rational reserve;
  AffineFn sender;    // U^k
  AffineFn receiver;  // V^k
};

// Immutable after construction; `create` runs every load-time assumption check.
class GameSpec {
 public:
  static GameSpec create(Polytope decisions, std::vector<TypeSpec> types) {
    GameSpec g;
    g.decisions_ = std::move(decisions);
    g.types_ = std::move(types);
    g.validate();
    g.private_values_ = std::all_of(g.types_.begin(), g.types_.end(), [&](const TypeSpec& t) {
      return t.receiver == g.types_.front().receiver;
    });
    return g;
  }

  std::size_t dim() const { return decisions_.dim(); }
  std::size_t num_types() const { return types_.size(); }
  const Polytope& decisions() const { return decisions_; }
  const std::vector<TypeSpec>& types() const { return types_; }
  const TypeSpec& type(std::size_t k) const { return types_.at(k); }
  const Rational& prior(std::size_t k) const { return types_.at(k).prior; }
  const Rational& reserve(std::size_t k) const { return types_.at(k).reserve; }
  const AffineFn& sender_utility(std::size_t k) const { return types_.at(k).sender; }
  const AffineFn& receiver_utility(std::size_t k) const { return types_.at(k).receiver; }
  TypeSet all_types() const { return TypeSet::all(types_.size()); }
  bool private_values() const { return private_values_; }

  Vec prior_vector() const {
    Vec p;
    for (const auto& t : types_) p.push_back(t.prior);
    return p;
  }

  // True iff U^k(x) >= u0^k; indifference counts as acceptance.
  bool accepts(std::size_t k, std::span<const Rational> x) const {
    return sender_utility(k)(x) >= reserve(k);
  }

  void require_in_decisions(std::span<const Rational> x) const {
    if (x.size() != dim()) {
      throw Error(ErrorCode::kDimensionMismatch, "decision " + to_string(x));
    }
    if (!decisions_.contains(x)) {
      throw Error(ErrorCode::kDecisionOutsideX, "decision " + to_string(x) + " is not in X");
    }
  }

 private:
  void validate() const {
    auto invalid = [](const std::string& what) { throw Error(ErrorCode::kValidation, what); };
    if (types_.empty()) invalid("the type set is empty");
    if (types_.size() > kMaxTypes) {
      throw Error(ErrorCode::kTooManyTypes, std::to_string(types_.size()) + " types exceed the cap of " +
                                                std::to_string(kMaxTypes));
    }
    if (decisions_.dim() == 0) invalid("decision dimension must be positive");
    Rational total = 0;
    for (std::size_t k = 0; k < types_.size(); ++k) {
      const auto& t = types_[k];
      if (t.sender.dim() != dim() || t.receiver.dim() != dim()) {
        throw Error(ErrorCode::kDimensionMismatch, "utilities of type " + t.name);
      }
      if (t.prior <= 0) invalid("prior of type " + t.name + " must be positive");
      total += t.prior;
    }
    if (total != 1) invalid("priors sum to " + total.str() + ", not 1");
    if (is_empty(decisions_)) invalid("decision set X is empty");
    if (!is_bounded(decisions_)) invalid("decision set X is unbounded");
    for (std::size_t k = 0; k < types_.size(); ++k) {
      Polytope acceptable = decisions_.with_at_least(types_[k].sender, types_[k].reserve);
      if (is_empty(acceptable)) {
        invalid("no decision in X gives type " + types_[k].name + " its reservation utility");
      }
    }
  }

  Polytope decisions_;
  std::vector<TypeSpec> types_;
  bool private_values_ = false;
};

// Same game on a subset of types, with a new full-support prior over them.
inline GameSpec restrict_types(const GameSpec& g, const std::vector<std::size_t>& keep,
                               const Vec& prior) {
  if (keep.size() != prior.size()) throw Error(ErrorCode::kRowMismatch, "restricted prior");
  std::vector<TypeSpec> types;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    TypeSpec t = g.type(keep[i]);
    t.prior = prior[i];
    types.push_back(std::move(t));
  }
  return GameSpec::create(g.decisions(), std::move(types));
}

// Shifts each U^k by -u0^k so every reservation utility becomes 0.
inline GameSpec translate_reserves(const GameSpec& g) {
  std::vector<TypeSpec> types = g.types();
  for (auto& t : types) {
    t.sender.constant -= t.reserve;
    t.reserve = 0;
  }
  return GameSpec::create(g.decisions(), std::move(types));
}

class SenderStrategy {
 public:
  SenderStrategy() = default;
  SenderStrategy(std::vector<std::string> messages, std::vector<Vec> rows)
      : messages_(std::move(messages)), rows_(std::move(rows)) {
    for (std::size_t i = 0; i < messages_.size(); ++i) {
      for (std::size_t j = i + 1; j < messages_.size(); ++j) {
        if (messages_[i] == messages_[j]) {
          throw Error(ErrorCode::kValidation, "duplicate message \"" + messages_[i] + "\"");
        }
      }
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const auto& row = rows_[k];
      if (row.size() != messages_.size()) {
        throw Error(ErrorCode::kRowMismatch, "row " + std::to_string(k + 1) + " has " +
                                                 std::to_string(row.size()) + " entries for " +
                                                 std::to_string(messages_.size()) + " messages");
      }
      for (const auto& v : row) {
        if (v < 0) throw Error(ErrorCode::kValidation, "negative message probability");
      }
      if (sum(row) != 1) {
        throw Error(ErrorCode::kValidation, "row " + std::to_string(k + 1) + " sums to " + sum(row).str());
      }
    }
    if (messages_.size() < rows_.size()) {
      throw Error(ErrorCode::kValidation, "fewer messages than types");
    }
  }

  // Each type k sends `message_of[k]` with probability one.
  static SenderStrategy partitional(const std::vector<std::string>& messages,
                                    const std::vector<std::size_t>& message_of) {
    std::vector<Vec> rows;
    for (auto m : message_of) rows.push_back(unit_vector(messages.size(), m));
    return SenderStrategy(messages, std::move(rows));
  }

  const std::vector<std::string>& messages() const { return messages_; }
  const std::vector<Vec>& rows() const { return rows_; }
  std::size_t num_types() const { return rows_.size(); }
  std::size_t num_messages() const { return messages_.size(); }
  const Rational& prob(std::size_t k, std::size_t m) const { return rows_.at(k).at(m); }

  std::optional<std::size_t> index_of(const std::string& message) const {
    auto it = std::find(messages_.begin(), messages_.end(), message);
    if (it == messages_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - messages_.begin());
  }

  bool is_partitional() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const Vec& row) {
      return std::count(row.begin(), row.end(), Rational(1)) == 1;
    });
  }

 private:
  std::vector<std::string> messages_;
  std::vector<Vec> rows_;
};

struct ReceiverStrategy {
  std::map<std::string, Vec> proposals;

  const Vec& at(const std::string& message) const {
    auto it = proposals.find(message);
    if (it == proposals.end()) {
      throw Error(ErrorCode::kMessageUndefined, "no proposal for message \"" + message + "\"");
    }
    return it->second;
  }
};

struct Posterior {
  std::string message;
  std::size_t message_index = 0;
  Rational mass;
  Vec belief;
  TypeSet support;
};

struct PosteriorTable {
  std::vector<Posterior> entries;

  const Posterior* find(const std::string& message) const {
    for (const auto& e : entries) {
      if (e.message == message) return &e;
    }
    return nullptr;
  }
};

inline TypeSet support_of(std::span<const Rational> belief) {
  TypeSet s;
  for (std::size_t k = 0; k < belief.size(); ++k) {
    if (belief[k] > 0) s = s.with(k);
  }
  return s;
}

// Bayes update per message; zero-mass messages are omitted.
inline PosteriorTable posteriors(const GameSpec& g, const SenderStrategy& sigma) {
  if (sigma.num_types() != g.num_types()) {
    throw Error(ErrorCode::kRowMismatch, "strategy has " + std::to_string(sigma.num_types()) +
                                             " rows for " + std::to_string(g.num_types()) + " types");
  }
  PosteriorTable table;
  for (std::size_t m = 0; m < sigma.num_messages(); ++m) {
    Rational mass = 0;
    for (std::size_t k = 0; k < g.num_types(); ++k) mass += g.prior(k) * sigma.prob(k, m);
    if (mass == 0) continue;
    Posterior post;
    post.message = sigma.messages()[m];
    post.message_index = m;
    post.mass = mass;
    for (std::size_t k = 0; k < g.num_types(); ++k) {
      post.belief.push_back(g.prior(k) * sigma.prob(k, m) / mass);
    }
    post.support = support_of(post.belief);
    table.entries.push_back(std::move(post));
  }
  return table;
}

// max{U^k(x), u0^k}
inline Rational approval_payoff(const GameSpec& g, std::size_t k, std::span<const Rational> x) {
  g.require_in_decisions(x);
  return std::max(g.sender_utility(k)(x), g.reserve(k));
}

// min_k min_{x in X} V^k(x): the largest exit payoff v0 the model admits.
inline Rational admissible_v0_bound(const GameSpec& g) {
  std::optional<Rational> lowest;
  for (std::size_t k = 0; k < g.num_types(); ++k) {
    Rational v = *minimize(g.receiver_utility(k), g.decisions()).value;
    if (!lowest || v < *lowest) lowest = v;
  }
  return *lowest;
}

inline void require_admissible_v0(const GameSpec& g, const Rational& v0) {
  Rational bound = admissible_v0_bound(g);
  if (v0 > bound) {
    throw Error(ErrorCode::kV0TooHigh,
                "v0 = " + v0.str() + " exceeds min_k min_X V^k = " + bound.str());
  }
}

// Whether the v0-dependent routines reject v0 above admissible_v0_bound.
enum class V0Policy { kLenient, kStrict };

// W^k(v0, x): V^k(x) if type k accepts x, v0 otherwise.
inline Rational receiver_payoff_v0(const GameSpec& g, std::size_t k, std::span<const Rational> x,
                                   const Rational& v0, V0Policy policy = V0Policy::kLenient) {
  g.require_in_decisions(x);
  if (policy == V0Policy::kStrict) require_admissible_v0(g, v0);
  return g.accepts(k, x) ? g.receiver_utility(k)(x) : v0;
}

// Belief-weighted receiver objective sum_k q^k V^k.
inline AffineFn receiver_objective(const GameSpec& g, std::span<const Rational> belief) {
  AffineFn f = AffineFn::zero(g.dim());
  for (std::size_t k = 0; k < g.num_types(); ++k) {
    if (belief[k] != 0) f = f + g.receiver_utility(k).scaled(belief[k]);
  }
  return f;
}

struct LotteryOutcome {
  Rational probability;
  Vec decision;
};

// What the mediator recommends after each reported type.
class MediatedMechanism {
 public:
  MediatedMechanism() = default;
  MediatedMechanism(const GameSpec& g, std::vector<std::vector<LotteryOutcome>> lotteries)
      : lotteries_(std::move(lotteries)) {
    if (lotteries_.size() != g.num_types()) {
      throw Error(ErrorCode::kRowMismatch, "one lottery per type is required");
    }
    for (const auto& lottery : lotteries_) {
      Rational total = 0;
      for (const auto& o : lottery) {
        if (o.probability < 0) throw Error(ErrorCode::kValidation, "negative lottery probability");
        g.require_in_decisions(o.decision);
        total += o.probability;
      }
      if (total != 1) throw Error(ErrorCode::kValidation, "lottery sums to " + total.str());
    }
  }

  const std::vector<std::vector<LotteryOutcome>>& lotteries() const { return lotteries_; }
  const std::vector<LotteryOutcome>& lottery(std::size_t k) const { return lotteries_.at(k); }

  // Probability-weighted mean decision of the lottery for reported type k.
  Vec mean_decision(std::size_t k) const {
    const auto& lottery = lotteries_.at(k);
    Vec mean(lottery.front().decision.size(), Rational(0));
    for (const auto& o : lottery) {
      for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += o.probability * o.decision[i];
    }
    return mean;
  }

 private:
  std::vector<std::vector<LotteryOutcome>> lotteries_;
};

}  // namespace vetotalk
