#include "pic/instance.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace pic {

int popcount(Mask s) { return std::popcount(s); }

std::vector<int> mask_messages(Mask s) {
  std::vector<int> out;
  while (s) {
    int b = std::countr_zero(s);
    out.push_back(b + 1);
    s &= s - 1;
  }
  return out;
}

Mask mask_from_messages(const std::vector<int>& msgs, int m) {
  Mask s = 0;
  for (int v : msgs) {
    if (v < 1 || v > m)
      throw std::invalid_argument("message index out of range: " +
                                  std::to_string(v));
    s |= bit_of(v);
  }
  return s;
}

Mask apply_permutation(Mask s, const std::vector<int>& perm) {
  Mask out = 0;
  Mask t = s;
  while (t) {
    int b = std::countr_zero(t);
    out |= bit_of(perm[static_cast<std::size_t>(b)]);
    t &= t - 1;
  }
  return out;
}

PliableInstance PliableInstance::make(int m, std::vector<Mask> absent) {
  if (m < 1 || m > kMaxMessages)
    throw std::invalid_argument("message count must be in [1:" +
                                std::to_string(kMaxMessages) + "]");
  PliableInstance inst;
  inst.m = m;
  const Mask full = (Mask{1} << m) - 1;
  std::sort(absent.begin(), absent.end());
  for (std::size_t i = 0; i < absent.size(); ++i) {
    if (absent[i] == full)
      throw std::invalid_argument("the full message set cannot be absent");
    if ((absent[i] & ~full) != 0)
      throw std::invalid_argument("absent receiver exceeds message range");
    if (i > 0 && absent[i] == absent[i - 1])
      throw std::invalid_argument("duplicate absent receiver");
  }
  inst.absent = std::move(absent);
  return inst;
}

bool PliableInstance::is_absent(Mask h) const {
  return std::binary_search(absent.begin(), absent.end(), h);
}

PliableInstance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("m") || !j.contains("absent"))
    throw std::invalid_argument("instance JSON needs \"m\" and \"absent\"");
  if (!j["m"].is_number_integer())
    throw std::invalid_argument("\"m\" must be an integer");
  int m = j["m"].get<int>();
  if (m < 1 || m > kMaxMessages)
    throw std::invalid_argument("\"m\" must be in [1:" +
                                std::to_string(kMaxMessages) + "]");
  if (!j["absent"].is_array())
    throw std::invalid_argument("\"absent\" must be an array of arrays");
  std::vector<Mask> absent;
  for (const auto& h : j["absent"]) {
    if (!h.is_array())
      throw std::invalid_argument("each absent receiver must be an array");
    std::vector<int> msgs;
    for (const auto& v : h) {
      if (!v.is_number_integer())
        throw std::invalid_argument("message indices must be integers");
      msgs.push_back(v.get<int>());
    }
    absent.push_back(mask_from_messages(msgs, m));
  }
  return PliableInstance::make(m, std::move(absent));
}

std::string instance_to_json(const PliableInstance& inst) {
  nlohmann::json j;
  j["m"] = inst.m;
  j["absent"] = nlohmann::json::array();
  for (Mask h : inst.absent) j["absent"].push_back(mask_messages(h));
  return j.dump();
}

namespace {

std::vector<Mask> relabel_family(const std::vector<Mask>& family,
                                 const std::vector<int>& perm) {
  std::vector<Mask> out;
  out.reserve(family.size());
  for (Mask h : family) out.push_back(apply_permutation(h, perm));
  std::sort(out.begin(), out.end());
  return out;
}

// Permutation ordering messages by how often they appear in absent sets of
// each size, refined once by co-membership.  Deterministic; not guaranteed
// to reach the true lexicographic minimum.
std::vector<int> refinement_permutation(const PliableInstance& inst) {
  std::vector<std::vector<int>> sig(static_cast<std::size_t>(inst.m));
  for (int i = 1; i <= inst.m; ++i) {
    auto& s = sig[static_cast<std::size_t>(i - 1)];
    s.assign(static_cast<std::size_t>(inst.m) + 1, 0);
    for (Mask h : inst.absent)
      if (has_msg(h, i)) s[static_cast<std::size_t>(popcount(h))]++;
  }
  // One refinement round: append the sorted signatures of co-members.
  std::vector<std::vector<int>> refined = sig;
  for (int i = 1; i <= inst.m; ++i) {
    std::vector<std::vector<int>> co;
    for (Mask h : inst.absent)
      if (has_msg(h, i))
        for (int jmsg : mask_messages(h))
          if (jmsg != i) co.push_back(sig[static_cast<std::size_t>(jmsg - 1)]);
    std::sort(co.begin(), co.end());
    for (auto& c : co)
      refined[static_cast<std::size_t>(i - 1)].insert(
          refined[static_cast<std::size_t>(i - 1)].end(), c.begin(), c.end());
  }
  std::vector<int> order(static_cast<std::size_t>(inst.m));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return refined[static_cast<std::size_t>(a - 1)] >
           refined[static_cast<std::size_t>(b - 1)];
  });
  // order[k] is the message placed at position k+1.
  std::vector<int> perm(static_cast<std::size_t>(inst.m));
  for (int k = 0; k < inst.m; ++k)
    perm[static_cast<std::size_t>(order[static_cast<std::size_t>(k)] - 1)] =
        k + 1;
  return perm;
}

}  // namespace

std::pair<PliableInstance, std::vector<int>> canonicalize(
    const PliableInstance& inst) {
  std::vector<int> identity(static_cast<std::size_t>(inst.m));
  std::iota(identity.begin(), identity.end(), 1);
  if (inst.m > 8) {
    std::vector<int> perm = refinement_permutation(inst);
    PliableInstance out = inst;
    out.absent = relabel_family(inst.absent, perm);
    return {out, perm};
  }
  std::vector<int> perm = identity;
  std::vector<Mask> best = relabel_family(inst.absent, perm);
  std::vector<int> best_perm = perm;
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<Mask> cand = relabel_family(inst.absent, perm);
    if (cand < best) {
      best = std::move(cand);
      best_perm = perm;
    }
  }
  PliableInstance out = inst;
  out.absent = std::move(best);
  return {out, best_perm};
}

namespace {

// up[i] = length of the longest strictly nested chain starting at absent[i].
std::vector<int> ascending_chain_lengths(const std::vector<Mask>& absent) {
  const std::size_t n = absent.size();
  std::vector<int> up(n, 1);
  // absent is sorted ascending by integer value; a proper superset always
  // has a larger integer value, so a reverse pass suffices.
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j)
      if (proper_subset_of(absent[i], absent[j]))
        up[i] = std::max(up[i], 1 + up[j]);
  }
  return up;
}

}  // namespace

NestedChain longest_nested_chain(const PliableInstance& inst) {
  NestedChain chain;
  const auto& abs = inst.absent;
  if (abs.empty()) return chain;
  std::vector<int> up = ascending_chain_lengths(abs);
  int best = *std::max_element(up.begin(), up.end());
  // Greedy reconstruction: at each position pick the smallest mask that
  // still admits a completion of maximum length.
  Mask prev = 0;
  bool first = true;
  for (int need = best; need >= 1; --need) {
    for (std::size_t i = 0; i < abs.size(); ++i) {
      if (up[i] != need) continue;
      if (!first && !proper_subset_of(prev, abs[i])) continue;
      chain.links.push_back(abs[i]);
      prev = abs[i];
      first = false;
      break;
    }
  }
  return chain;
}

std::vector<NestedChain> all_maximal_chains(const PliableInstance& inst,
                                            int min_len) {
  if (min_len < 1) throw std::invalid_argument("min_len must be >= 1");
  const auto& abs = inst.absent;
  std::vector<NestedChain> out;
  if (abs.empty()) return out;

  auto is_minimal = [&](Mask h) {
    for (Mask o : abs)
      if (proper_subset_of(o, h)) return false;
    return true;
  };
  // Immediate successors: proper supersets with nothing absent in between.
  auto successors = [&](Mask h) {
    std::vector<Mask> succ;
    for (Mask s : abs) {
      if (!proper_subset_of(h, s)) continue;
      bool immediate = true;
      for (Mask t : abs)
        if (proper_subset_of(h, t) && proper_subset_of(t, s)) {
          immediate = false;
          break;
        }
      if (immediate) succ.push_back(s);
    }
    return succ;  // ascending (abs is sorted)
  };

  std::vector<Mask> cur;
  std::function<void(Mask)> dfs = [&](Mask h) {
    cur.push_back(h);
    auto succ = successors(h);
    if (succ.empty()) {
      if (static_cast<int>(cur.size()) >= min_len)
        out.push_back(NestedChain{cur});
    } else {
      for (Mask s : succ) dfs(s);
    }
    cur.pop_back();
  };
  for (Mask h : abs)
    if (is_minimal(h)) dfs(h);
  return out;
}

}  // namespace pic
