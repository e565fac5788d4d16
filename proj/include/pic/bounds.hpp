#pragma once

// Lower-bound evaluators and the structure classifiers that carry
// closed-form optimal rates.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pic/achievability.hpp"
#include "pic/instance.hpp"

namespace pic {

// m - L_max.
int longest_chain_bound(const PliableInstance& inst);

// m - L*.  Subject to the L* search cap.
int algorithmic_bound(const PliableInstance& inst, int max_m = 0);

// True iff every nested absent chain of length >= L admits a prefix H_k and
// a message a outside it such that H_k u {a} fits inside no absent chain of
// length L - k.  When true, L* <= L - 1 and m - L + 1 is a valid bound.
bool improved_nested_bound(const PliableInstance& inst, int L);

// Best bound obtainable from improved_nested_bound: m - L + 1 for the
// smallest qualifying L.
int best_improved_bound(const PliableInstance& inst);

enum class LookAheadCase { case1, case2, case3, none };

// Which look-ahead guarantee applies to absent receiver H against the
// absent superset family A (precedence case1 > case2 > case3).
LookAheadCase look_ahead_case(const PliableInstance& inst, Mask h,
                              const std::vector<Mask>& a);

enum class StructureTag {
  none,
  perfect_nested,
  truncated_nested,
  slightly_imperfect,
  prop1_triple,
};

struct StructureClass {
  StructureTag tag = StructureTag::none;
  int L = 0;
  int T = 0;  // truncated_nested only
  std::optional<Partition> partition;
  std::set<int> Q;       // slightly_imperfect: index set of the shrunk member
  Mask shrunk = 0;       // slightly_imperfect: the replacement receiver
  std::array<Mask, 3> triple{0, 0, 0};  // prop1_triple: H1, H2, H3
};

// Detects, in order: perfect L-nested, T-truncated L-nested, the
// three-absent-receiver nested-pair shape, then a perfect family with one
// member shrunk.  Returns tag none when nothing matches.
StructureClass classify_structure(const PliableInstance& inst);

// Closed-form optimal rate when the instance matches a solved class.
std::optional<int> closed_form_beta(const PliableInstance& inst);

// Detection helpers (also used for subfamily checks).
std::optional<Partition> try_perfect(int m, const std::vector<Mask>& family);
std::optional<std::pair<Partition, int>> try_truncated(
    int m, const std::vector<Mask>& family);

struct BoundReport {
  int m = 0;
  int lb_longest_chain = 0;
  std::optional<int> lb_algorithmic;
  std::optional<int> lb_improved;
  std::optional<int> closed_form;
  std::optional<int> ub_construction;
  std::optional<int> beta_confirmed;
  StructureClass structure;
  std::optional<LinearCode> construction;
};

// Runs every applicable bound and, when the structure carries one, the
// matching construction.  skip_l_star suppresses the game search.
BoundReport analyze(const PliableInstance& inst, bool skip_l_star = false,
                    int max_m = 0);

std::string report_to_json(const BoundReport& r);
std::string structure_to_json(const StructureClass& s);

}  // namespace pic
