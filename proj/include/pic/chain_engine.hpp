#pragma once

// Decoding-chain construction and the adversarial skip count L*.
//
// A chain starts empty and grows one message at a time.  When the current
// chain is a present receiver, the receiver's decoding choice extends it.
// When it matches an absent receiver, either a message is skipped (Option 1)
// or a present strict-subset receiver whose choice lies outside the chain
// extends it (Option 2).  L* is the maximum over decoding choices D of the
// minimum number of skips achievable over all runs.

#include <functional>
#include <utility>
#include <vector>

#include "pic/instance.hpp"

namespace pic {

struct ChainStep {
  enum Kind { decode, skip, avoid };
  Kind kind;
  int message;
  Mask via = 0;  // for decode: the receiver hit; for avoid: the subset used
};

struct ChainTrace {
  std::vector<ChainStep> steps;
  std::vector<int> order;   // messages in chain order; a permutation of [1:m]
  Mask skipped = 0;
  std::vector<Mask> hits;   // absent receivers hit, in order
};

// Called when the chain hits an absent receiver; must return a skip or avoid
// step that is legal at that point.
using ChainPolicy =
    std::function<ChainStep(const PliableInstance&, const DecodingChoice&,
                            Mask chain)>;

// Option 1 always, skipping the smallest message not in the chain.
ChainPolicy skip_smallest_policy();

// Prefers Option 2; otherwise skips guided by the absent strict supersets of
// the chain (escape their union when possible, else pick the member a
// look-ahead at the cover intersection leaves avoidable).
ChainPolicy look_ahead_policy();

// D(H) = smallest message not in H, for every present receiver.
DecodingChoice total_min_choice(const PliableInstance& inst);

// Extends a partial choice to a total one with the smallest-message rule.
DecodingChoice extend_total(const PliableInstance& inst, DecodingChoice d);

// Runs Algorithm-1 semantics to completion.  D must cover every present
// receiver the run hits; throws std::invalid_argument on an illegal policy
// step or a missing decoding value.
ChainTrace run_chain(const PliableInstance& inst, const DecodingChoice& d,
                     const ChainPolicy& policy);

// Minimum number of skips over all runs for a fixed total decoding choice.
int min_skips(const PliableInstance& inst, const DecodingChoice& d);

// Exact L* = max over decoding choices of min_skips, by game search with
// lazily assigned, consistent decoding values.  Requires m <= cap (12 by
// default; max_m overrides when positive).
int compute_L_star(const PliableInstance& inst, int max_m = 0);

struct DecodingGraph {
  std::vector<int> vertices;                 // non-skipped messages
  std::vector<std::pair<int, int>> edges;    // decoded message -> known message
  bool acyclic = false;
};

// Rebuilds the decoding graph of a completed trace and checks it is acyclic.
// Throws std::invalid_argument if the trace is inconsistent with D.
DecodingGraph acyclic_certificate(const PliableInstance& inst,
                                  const ChainTrace& trace,
                                  const DecodingChoice& d);

}  // namespace pic
