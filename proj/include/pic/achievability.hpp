#pragma once

// The paper's achievability codes: uncoded part, per-partition cyclic codes,
// the Vandermonde-style augmentation rows, and the extra-message patch, plus
// the linear-algebra check that a code satisfies every present receiver.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pic/gf.hpp"
#include "pic/instance.hpp"

namespace pic {

// Messages [1:m] split into P_0 (may be empty) and parts P_1..P_L
// (nonempty, pairwise disjoint, union with P_0 = [1:m]).
struct Partition {
  int m = 0;
  Mask p0 = 0;
  std::vector<Mask> parts;

  static Partition make(int m, Mask p0, std::vector<Mask> parts);
  int L() const { return static_cast<int>(parts.size()); }
  // The perfect nested absent family {P_0 u union_{i in Q} P_i : Q proper}.
  std::vector<Mask> perfect_family() const;
  // Same restricted to |Q| <= T.
  std::vector<Mask> truncated_family(int T) const;
  Mask union_for(const std::set<int>& q) const;  // H_Q
};

struct LinearCode {
  int q = 2;
  int m = 0;
  std::vector<GfRow> rows;  // each of width m
  int length() const { return static_cast<int>(rows.size()); }
};

// Identity rows for P_0 plus consecutive-sum rows per part; length m - L.
LinearCode cyclic_partition_code(const Partition& p, int q);

// Pass q = 0 for the smallest admissible prime.
int auto_prime(const Partition& p, int T);

// Cyclic rows plus L-1-T augmentation rows V_{L-1}..V_{T+1}; length m-T-1.
// q = 0 selects the smallest admissible prime.  Throws when the needed
// powers of the primitive root collide (q - 1 < L with two or more
// augmentation rows).
LinearCode truncated_code(const Partition& p, int T, int q = 0);

// Cyclic rows plus one identity row for the smallest message of the
// smallest part index outside Q; length m - L + 1.  Q must be a proper
// subset of [1:L].
LinearCode imperfect_patch_code(const Partition& p, const std::set<int>& q_set,
                                int q);

// Checks that every present receiver can decode a fresh message, via the
// rank test e_i in rowspace(code rows + side-information unit rows).
// Returns the decoding map (smallest decodable message per receiver), or
// nothing if some present receiver fails.
std::optional<DecodingChoice> verify_code(const PliableInstance& inst,
                                          const LinearCode& code);

// Code JSON: {"q": <prime>, "rows": [[c_1..c_m], ...]}.
LinearCode parse_code(const std::string& text, int m);
std::string code_to_json(const LinearCode& code);

}  // namespace pic
