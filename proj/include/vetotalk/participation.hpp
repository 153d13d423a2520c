#pragma once

// Acceptance sets X(L) and the participation structure (the inclusion-maximal
// type subsets that some decision satisfies simultaneously).

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "vetotalk/lp.hpp"
#include "vetotalk/model.hpp"

namespace vetotalk {

// X intersected with {U^k(x) >= u0^k : k in L}.
inline Polytope acceptance_set(const GameSpec& g, TypeSet members) {
  if (members.empty()) throw Error(ErrorCode::kEmptySubset, "acceptance set of the empty type set");
  Polytope p = g.decisions();
  for (auto k : members.members()) {
    if (k >= g.num_types()) throw Error(ErrorCode::kValidation, "type index out of range");
    p.add_at_least(g.sender_utility(k), g.reserve(k));
  }
  return p;
}

// Like acceptance_set, but the empty set maps to X itself.
inline Polytope acceptance_set_or_all(const GameSpec& g, TypeSet members) {
  return members.empty() ? g.decisions() : acceptance_set(g, members);
}

inline bool acceptable(const GameSpec& g, TypeSet members) {
  return members.empty() || !is_empty(acceptance_set(g, members));
}

enum class StructureClass { kPartition, kPairwise3, kChain3, kOther };

inline std::string_view structure_class_name(StructureClass c) {
  switch (c) {
    case StructureClass::kPartition: return "Partition";
    case StructureClass::kPairwise3: return "Pairwise3";
    case StructureClass::kChain3: return "Chain3";
    case StructureClass::kOther: return "Other";
  }
  return "?";
}

struct ParticipationStructure {
  std::vector<TypeSet> maximal;  // ascending by bitmask
  StructureClass classification = StructureClass::kOther;
  std::optional<std::size_t> pivot;  // Chain3 only: the type in both pairs

  bool contains(TypeSet s) const {
    return std::find(maximal.begin(), maximal.end(), s) != maximal.end();
  }
};

inline StructureClass classify(std::size_t num_types, const std::vector<TypeSet>& maximal,
                               std::optional<std::size_t>* pivot = nullptr) {
  TypeSet cover;
  bool disjoint = true;
  for (auto s : maximal) {
    if (!(cover & s).empty()) disjoint = false;
    cover = cover | s;
  }
  if (disjoint && cover == TypeSet::all(num_types)) return StructureClass::kPartition;
  if (num_types == 3) {
    bool all_pairs = std::all_of(maximal.begin(), maximal.end(), [](TypeSet s) { return s.size() == 2; });
    if (all_pairs && maximal.size() == 3) return StructureClass::kPairwise3;
    if (all_pairs && maximal.size() == 2) {
      TypeSet shared = maximal[0] & maximal[1];
      if (shared.size() == 1) {
        if (pivot) *pivot = shared.members().front();
        return StructureClass::kChain3;
      }
    }
  }
  return StructureClass::kOther;
}

// Subsets are visited by increasing size; a subset is only tested when all
// of its one-smaller subsets are feasible, since X(L') is inside X(L) for L in L'.
inline ParticipationStructure participation_structure(const GameSpec& g) {
  const std::size_t n = g.num_types();
  if (n > kMaxTypes) throw Error(ErrorCode::kTooManyTypes, "participation structure");
  const std::uint32_t full = TypeSet::all(n).bits();
  std::vector<char> feasible_set(std::size_t{full} + 1, 0);
  feasible_set[0] = 1;

  std::vector<std::vector<std::uint32_t>> by_size(n + 1);
  for (std::uint32_t mask = 1; mask <= full; ++mask) by_size[TypeSet(mask).size()].push_back(mask);

  for (std::size_t size = 1; size <= n; ++size) {
    for (auto mask : by_size[size]) {
      TypeSet s(mask);
      bool candidate = true;
      for (auto k : s.members()) {
        if (!feasible_set[s.without(k).bits()]) {
          candidate = false;
          break;
        }
      }
      if (candidate) feasible_set[mask] = !is_empty(acceptance_set(g, s));
    }
  }

  ParticipationStructure out;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (!feasible_set[mask]) continue;
    TypeSet s(mask);
    bool maximal = true;
    for (std::size_t k = 0; k < n && maximal; ++k) {
      if (!s.contains(k) && feasible_set[s.with(k).bits()]) maximal = false;
    }
    if (maximal) out.maximal.push_back(s);
  }
  out.classification = classify(n, out.maximal, &out.pivot);
  return out;
}

}  // namespace vetotalk
