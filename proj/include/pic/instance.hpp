#pragma once

// Pliable-index-coding instances over a small message universe.
//
// A receiver is identified by its side-information set, stored as a bitmask
// over messages 1..m (message i <-> bit i-1).  An instance is the message
// count plus the family of absent receivers; present receivers are implicit
// (every proper subset of [1:m] that is not listed as absent).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pic {

using Mask = std::uint32_t;

inline constexpr int kMaxMessages = 24;

constexpr Mask bit_of(int msg) { return Mask{1} << (msg - 1); }

constexpr bool has_msg(Mask s, int msg) { return (s & bit_of(msg)) != 0; }

constexpr bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

constexpr bool proper_subset_of(Mask a, Mask b) {
  return a != b && subset_of(a, b);
}

int popcount(Mask s);

// 1-based message indices of a mask, ascending.
std::vector<int> mask_messages(Mask s);

Mask mask_from_messages(const std::vector<int>& msgs, int m);

// perm[i-1] is the image of message i (1-based, a bijection on [1:m]).
Mask apply_permutation(Mask s, const std::vector<int>& perm);

// A decoding choice maps a present receiver to the message it decodes.
// Partial: only receivers that appear as keys are assigned.
using DecodingChoice = std::map<Mask, int>;

struct PliableInstance {
  int m = 0;
  std::vector<Mask> absent;  // sorted ascending, no duplicates

  // Validates and normalizes (sorts absent). Throws std::invalid_argument.
  static PliableInstance make(int m, std::vector<Mask> absent);

  Mask full() const { return (Mask{1} << m) - 1; }
  bool is_absent(Mask h) const;
  bool is_present(Mask h) const { return h != full() && !is_absent(h); }
};

// Parses the instance interchange JSON: {"m": <int>, "absent": [[...],...]}.
// Throws std::invalid_argument on malformed input or invariant violations.
PliableInstance parse_instance(const std::string& text);

std::string instance_to_json(const PliableInstance& inst);

// Lexicographically least relabeling of the instance under message
// permutations, plus the witnessing permutation (perm[i-1] = image of i).
// Exact for m <= 8; a signature-refinement heuristic (not guaranteed
// minimal) is used for larger m.
std::pair<PliableInstance, std::vector<int>> canonicalize(
    const PliableInstance& inst);

struct NestedChain {
  std::vector<Mask> links;  // strictly increasing under proper inclusion
  int length() const { return static_cast<int>(links.size()); }
};

// Longest strictly nested chain of absent receivers; ties broken by the
// lexicographically least bitmask sequence. Empty chain when absent is empty.
NestedChain longest_nested_chain(const PliableInstance& inst);

// Every inclusion-maximal nested chain of absent receivers with length at
// least min_len, in deterministic (lexicographic) order.
std::vector<NestedChain> all_maximal_chains(const PliableInstance& inst,
                                            int min_len);

}  // namespace pic
