#pragma once

// Brute-force ground truth at desk scale: exhaustive minimum-length linear
// code search, a deliberately naive L*, and the closed-form verification
// sweep over all small canonical instances.

#include <optional>
#include <string>
#include <vector>

#include "pic/instance.hpp"

namespace pic {

// Smallest l <= l_max such that some l x m matrix over GF(q) satisfies
// every present receiver.  Rowspaces are enumerated once each via reduced
// row-echelon forms grouped by pivot-column pattern.  Requires m <= 5 and
// q <= 3 (max_m > 0 overrides the message cap).
std::optional<int> min_linear_length(const PliableInstance& inst, int q,
                                     int l_max, int max_m = 0);

// Exact L* by full enumeration of total decoding choices and exhaustive,
// unmemoized run enumeration.  Requires m <= 4.
int brute_force_L_star(const PliableInstance& inst);

struct SweepRecord {
  PliableInstance instance;  // canonical form
  int n_absent = 0;
  int lb_chain = 0;
  int lb_algo = 0;
  std::optional<int> closed_form;
  std::optional<int> oracle_len;
  int oracle_q = 2;  // field that produced oracle_len
  bool agree = false;
};

// All canonical instances (under message relabeling) with at most
// max_absent absent receivers, each with bounds, the closed form, and the
// oracle length over GF(q); on disagreement the record retries over GF(3).
// Requires m <= 5, max_absent <= 4, q in {2, 3}.
std::vector<SweepRecord> sweep(int m, int max_absent, int q);

std::string sweep_to_csv(const std::vector<SweepRecord>& records);
std::string sweep_to_json(const std::vector<SweepRecord>& records);

}  // namespace pic
