#include "pic/chain_engine.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace pic {

namespace {

int lowest_msg(Mask s) { return std::countr_zero(s) + 1; }

}  // namespace

DecodingChoice total_min_choice(const PliableInstance& inst) {
  DecodingChoice d;
  const Mask full = inst.full();
  for (Mask h = 0; h < full; ++h)
    if (!inst.is_absent(h)) d[h] = lowest_msg(full & ~h);
  return d;
}

DecodingChoice extend_total(const PliableInstance& inst, DecodingChoice d) {
  const Mask full = inst.full();
  for (Mask h = 0; h < full; ++h)
    if (!inst.is_absent(h) && !d.count(h)) d[h] = lowest_msg(full & ~h);
  return d;
}

ChainPolicy skip_smallest_policy() {
  return [](const PliableInstance& inst, const DecodingChoice&, Mask chain) {
    return ChainStep{ChainStep::skip, lowest_msg(inst.full() & ~chain), 0};
  };
}

ChainPolicy look_ahead_policy() {
  return [](const PliableInstance& inst, const DecodingChoice& d,
            Mask chain) -> ChainStep {
    const Mask full = inst.full();
    // Option 2 when available.
    for (const auto& [b, v] : d)
      if (proper_subset_of(b, chain) && inst.is_present(b) &&
          !has_msg(chain, v))
        return ChainStep{ChainStep::avoid, v, b};

    std::vector<Mask> sup;
    Mask uni = chain;
    for (Mask h : inst.absent)
      if (proper_subset_of(chain, h)) {
        sup.push_back(h);
        uni |= h;
      }
    if (uni != full)
      return ChainStep{ChainStep::skip, lowest_msg(full & ~uni), 0};

    // The supersets cover [1:m]; reduce to a minimal cover.
    std::vector<Mask> cover = sup;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < cover.size(); ++i) {
        Mask rest = 0;
        for (std::size_t j = 0; j < cover.size(); ++j)
          if (j != i) rest |= cover[j];
        if (rest == full) {
          cover.erase(cover.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          break;
        }
      }
    }

    // Skip a member of the cover set the look-ahead value D(T) leaves
    // avoidable: some h1 in `allowed` with D(T) outside it.
    auto guided_skip = [&](Mask t,
                           const std::vector<Mask>& allowed)
        -> std::optional<ChainStep> {
      if (!proper_subset_of(chain, t) || !inst.is_present(t)) return {};
      auto it = d.find(t);
      if (it == d.end()) return {};
      const int x = it->second;
      for (Mask h1 : allowed) {
        if (has_msg(h1, x)) continue;
        Mask rest = 0;
        for (Mask h : cover)
          if (h != h1) rest |= h;
        Mask cand = h1 & ~rest & ~chain;
        if (cand) return ChainStep{ChainStep::skip, lowest_msg(cand), 0};
      }
      return {};
    };

    Mask t = full;
    for (Mask h : cover) t &= h;
    if (t != chain) {
      if (auto s = guided_skip(t, cover)) return *s;
    } else {
      for (std::size_t i = 0; i < cover.size(); ++i)
        for (std::size_t j = i + 1; j < cover.size(); ++j) {
          Mask tij = cover[i] & cover[j];
          if (tij == chain) continue;
          if (auto s = guided_skip(tij, {cover[i], cover[j]})) return *s;
        }
    }
    return ChainStep{ChainStep::skip, lowest_msg(full & ~chain), 0};
  };
}

ChainTrace run_chain(const PliableInstance& inst, const DecodingChoice& d,
                     const ChainPolicy& policy) {
  const Mask full = inst.full();
  ChainTrace t;
  Mask chain = 0;
  while (chain != full) {
    if (inst.is_absent(chain)) {
      t.hits.push_back(chain);
      ChainStep s = policy(inst, d, chain);
      if (s.kind == ChainStep::skip) {
        if (s.message < 1 || s.message > inst.m || has_msg(chain, s.message))
          throw std::invalid_argument("policy skipped an unavailable message");
        s.via = 0;
        t.skipped |= bit_of(s.message);
      } else if (s.kind == ChainStep::avoid) {
        if (!proper_subset_of(s.via, chain) || !inst.is_present(s.via))
          throw std::invalid_argument(
              "avoid step needs a present strict subset of the chain");
        auto it = d.find(s.via);
        if (it == d.end())
          throw std::invalid_argument(
              "decoding choice undefined for avoid receiver");
        if (it->second != s.message || has_msg(chain, s.message))
          throw std::invalid_argument(
              "avoid step must add D(B) from outside the chain");
      } else {
        throw std::invalid_argument(
            "policy must skip or avoid at an absent receiver");
      }
      t.steps.push_back(s);
      t.order.push_back(s.message);
      chain |= bit_of(s.message);
    } else {
      auto it = d.find(chain);
      if (it == d.end())
        throw std::invalid_argument(
            "decoding choice undefined for present receiver");
      const int v = it->second;
      if (v < 1 || v > inst.m || has_msg(chain, v))
        throw std::invalid_argument("decoding choice value invalid");
      t.steps.push_back(ChainStep{ChainStep::decode, v, chain});
      t.order.push_back(v);
      chain |= bit_of(v);
    }
  }
  return t;
}

namespace {

// Minimum skips over all runs that start from `start`, for a fixed total D.
int min_skips_from(const PliableInstance& inst, const DecodingChoice& d,
                   Mask start) {
  const Mask full = inst.full();
  std::unordered_map<Mask, int> memo;
  auto go = [&](auto&& self, Mask chain) -> int {
    if (chain == full) return 0;
    if (auto it = memo.find(chain); it != memo.end()) return it->second;
    int best;
    if (!inst.is_absent(chain)) {
      auto it = d.find(chain);
      if (it == d.end())
        throw std::invalid_argument(
            "decoding choice undefined for present receiver");
      best = self(self, chain | bit_of(it->second));
    } else {
      best = INT_MAX;
      for (const auto& [b, v] : d) {
        if (b >= chain) break;  // keys ascending; b must be a strict subset
        if (proper_subset_of(b, chain) && inst.is_present(b) &&
            !has_msg(chain, v))
          best = std::min(best, self(self, chain | bit_of(v)));
      }
      Mask rest = full & ~chain;
      while (rest) {
        int a = lowest_msg(rest);
        rest &= rest - 1;
        best = std::min(best, 1 + self(self, chain | bit_of(a)));
      }
    }
    memo[chain] = best;
    return best;
  };
  return go(go, start);
}

}  // namespace

int min_skips(const PliableInstance& inst, const DecodingChoice& d) {
  return min_skips_from(inst, d, 0);
}

namespace {

// Game search for L*.  Decoding values are assigned lazily and stay
// consistent along a search path; the memo key is the chain plus the
// assignments that can still influence the remainder of the game.
class LStarSearch {
 public:
  explicit LStarSearch(const PliableInstance& inst)
      : inst_(inst), full_(inst.full()) {
    // A strong committed decoding choice, found by deterministic hill
    // climbing on min_skips.  Any consistent commitment certifies a lower
    // bound on a node's game value; a good one closes most nodes against
    // the remaining_bound upper bound without recursion.
    // Seed: steer every present receiver deeper into the intersection of
    // its absent supersets, so runs are driven from one absent hit to the
    // next; on a perfect nested family this alone forces L skips.
    DecodingChoice d;
    for (Mask h = 0; h < full_; ++h) {
      if (inst_.is_absent(h)) continue;
      Mask inter = full_;
      bool any = false;
      for (Mask a : inst_.absent)
        if (subset_of(h, a)) {
          inter &= a;
          any = true;
        }
      const Mask steer = any ? inter & ~h : 0;
      d[h] = std::countr_zero(steer ? steer : full_ & ~h) + 1;
    }
    int score = min_skips_from(inst_, d, 0);
    for (bool improved = true; improved;) {
      improved = false;
      for (auto& [h, v0] : d) {
        const int keep = v0;
        for (int v = 1; v <= inst_.m; ++v) {
          if (has_msg(h, v) || v == keep) continue;
          v0 = v;
          const int s = min_skips_from(inst_, d, 0);
          if (s > score) {
            score = s;
            improved = true;
          } else {
            v0 = keep;
          }
          if (v0 == v) break;
        }
      }
    }
    cert_ = std::move(d);
  }

  int run() { return value(0); }

 private:
  const PliableInstance& inst_;
  const Mask full_;
  DecodingChoice cert_;
  std::map<Mask, int> assign_;
  std::map<std::vector<Mask>, int> memo_;
  std::unordered_map<Mask, int> hit_bound_;

  // Lower bound on the value at `chain`: skips of the committed choice
  // cert_ overridden by the assignments made so far.
  int certificate(Mask chain) const {
    DecodingChoice d = cert_;
    for (const auto& [b, v] : assign_) d[b] = v;
    return min_skips_from(inst_, d, chain);
  }

  // Upper bound on further skips: longest nested chain among absent
  // supersets of the chain.
  int remaining_bound(Mask chain) {
    if (auto it = hit_bound_.find(chain); it != hit_bound_.end())
      return it->second;
    std::vector<Mask> sup;
    for (Mask h : inst_.absent)
      if (subset_of(chain, h)) sup.push_back(h);
    std::vector<int> up(sup.size(), 1);
    int best = 0;
    for (std::size_t i = sup.size(); i-- > 0;) {
      for (std::size_t j = i + 1; j < sup.size(); ++j)
        if (proper_subset_of(sup[i], sup[j]))
          up[i] = std::max(up[i], 1 + up[j]);
      best = std::max(best, up[i]);
    }
    hit_bound_[chain] = best;
    return best;
  }

  // An assignment (b -> v) is live at `chain` if it can still drive a
  // present-receiver step (b contains the chain) or enable an avoid step at
  // a future absent hit (v outside the chain and b a strict subset of some
  // absent superset of the chain).
  bool live(Mask b, int v, Mask chain) const {
    if (subset_of(chain, b)) return true;
    if (has_msg(chain, v)) return false;
    for (Mask h : inst_.absent)
      if (subset_of(chain, h) && proper_subset_of(b, h)) return true;
    return false;
  }

  std::vector<Mask> make_key(Mask chain) const {
    std::vector<Mask> key{chain};
    for (const auto& [b, v] : assign_)
      if (live(b, v, chain))
        key.push_back((b << 5) | static_cast<Mask>(v));
    return key;
  }

  // One representative per orbit of interchangeable candidate messages:
  // swapping two candidates must fix every absent set, the chain, every
  // assigned receiver, and no assigned value may be involved.
  std::vector<int> reps(Mask candidates, Mask chain) const {
    std::vector<int> out;
    std::vector<std::vector<Mask>> seen;
    Mask rest = candidates;
    while (rest) {
      int v = lowest_msg(rest);
      rest &= rest - 1;
      bool is_value = false;
      for (const auto& [b, w] : assign_)
        if (w == v) {
          is_value = true;
          break;
        }
      if (is_value) {
        out.push_back(v);
        continue;
      }
      std::vector<Mask> sig;
      sig.push_back(has_msg(chain, v) ? 1u : 0u);
      for (Mask h : inst_.absent) sig.push_back(has_msg(h, v) ? 1u : 0u);
      for (const auto& [b, w] : assign_) sig.push_back(has_msg(b, v) ? 1u : 0u);
      if (std::find(seen.begin(), seen.end(), sig) == seen.end()) {
        seen.push_back(sig);
        out.push_back(v);
      }
    }
    return out;
  }

  int value(Mask chain) {
    if (chain == full_) return 0;
    const auto key = make_key(chain);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const int ub = remaining_bound(chain);
    const int cert = certificate(chain);
    const int res = cert >= ub ? cert
                    : inst_.is_absent(chain) ? min_node(chain, cert)
                                             : present_node(chain, cert, ub);
    memo_[key] = res;
    return res;
  }

  int present_node(Mask chain, int cert, int ub) {
    if (auto it = assign_.find(chain); it != assign_.end())
      return value(chain | bit_of(it->second));
    int best = cert;  // cert_'s own answer realizes at least this much
    for (int v : reps(full_ & ~chain, chain)) {
      if (best >= ub) break;
      assign_[chain] = v;
      best = std::max(best, value(chain | bit_of(v)));
      assign_.erase(chain);
    }
    return best;
  }

  int min_node(Mask chain, int cert) {
    int best = INT_MAX;
    bool usable_avoid = false;
    // Avoid steps via already-assigned subset receivers.
    for (const auto& [b, v] : assign_) {
      if (proper_subset_of(b, chain) && inst_.is_present(b) &&
          !has_msg(chain, v)) {
        usable_avoid = true;
        best = std::min(best, value(chain | bit_of(v)));
        if (best == 0) return 0;
      }
    }
    // Reveals never assign subsets of the chain, so without a usable avoid
    // every continuation from here ends in at least one skip.
    const int floor = std::max(usable_avoid ? 0 : 1, cert);
    // Skips.
    for (int a : reps(full_ & ~chain, chain)) {
      best = std::min(best, 1 + value(chain | bit_of(a)));
      if (best == floor) return best;
    }
    // Reveals: force a value for a future-chain-state receiver, letting
    // the maximizing player answer.  Receivers not strictly between the
    // chain and an absent superset are omitted: the maximizer can always
    // answer them with a permanently dead value, so they never lower the
    // minimum.
    for (Mask b : reveal_targets(chain)) {
      int worst = -1;
      for (int v : answers(b)) {
        assign_[b] = v;
        // Refutation first: a committed consistent extension that keeps
        // the cost at `best` settles this answer without recursion.
        const int quick = certificate(chain);
        worst = std::max(worst, quick >= best ? quick : value(chain));
        assign_.erase(b);
        if (worst >= best) break;
      }
      if (worst >= 0 && worst < best) best = worst;
      if (best == floor) break;
    }
    return best;
  }

  // Maximizer replies to a reveal of b, the committed choice's value first.
  std::vector<int> answers(Mask b) const {
    std::vector<int> out;
    if (auto it = cert_.find(b); it != cert_.end()) out.push_back(it->second);
    for (int v = 1; v <= inst_.m; ++v)
      if (!has_msg(b, v) && (out.empty() || v != out.front()))
        out.push_back(v);
    return out;
  }

  std::vector<Mask> reveal_targets(Mask chain) const {
    std::vector<Mask> sup;
    for (Mask h : inst_.absent)
      if (proper_subset_of(chain, h)) sup.push_back(h);
    std::vector<Mask> out;
    for (Mask h : sup) {
      for (Mask b = h; ; b = (b - 1) & h) {
        if (b != h && proper_subset_of(chain, b) && inst_.is_present(b) &&
            !assign_.count(b))
          out.push_back(b);
        if (b == 0) break;
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    // Intersections of the absent supersets first: the look-ahead
    // arguments peek exactly there, so good reveals surface early.
    std::stable_partition(out.begin(), out.end(), [&](Mask b) {
      for (std::size_t i = 0; i < sup.size(); ++i)
        for (std::size_t j = i + 1; j < sup.size(); ++j)
          if ((sup[i] & sup[j]) == b) return true;
      return false;
    });
    return out;
  }
};

}  // namespace

int compute_L_star(const PliableInstance& inst, int max_m) {
  const int cap = max_m > 0 ? max_m : 12;
  if (inst.m > cap)
    throw std::invalid_argument("message count exceeds the L* search cap");
  if (inst.absent.empty()) return 0;
  return LStarSearch(inst).run();
}

DecodingGraph acyclic_certificate(const PliableInstance& inst,
                                  const ChainTrace& trace,
                                  const DecodingChoice& d) {
  const Mask full = inst.full();
  Mask chain = 0;
  Mask skipped = 0;
  std::vector<std::pair<Mask, int>> decodes;  // (receiver used, message)
  for (const ChainStep& s : trace.steps) {
    if (s.message < 1 || s.message > inst.m || has_msg(chain, s.message))
      throw std::invalid_argument("trace repeats or misnumbers a message");
    switch (s.kind) {
      case ChainStep::decode: {
        if (!inst.is_present(chain))
          throw std::invalid_argument("decode step at a non-present chain");
        auto it = d.find(chain);
        if (it == d.end() || it->second != s.message)
          throw std::invalid_argument("decode step disagrees with D");
        decodes.emplace_back(chain, s.message);
        break;
      }
      case ChainStep::skip: {
        if (!inst.is_absent(chain))
          throw std::invalid_argument("skip step at a non-absent chain");
        skipped |= bit_of(s.message);
        break;
      }
      case ChainStep::avoid: {
        if (!inst.is_absent(chain))
          throw std::invalid_argument("avoid step at a non-absent chain");
        if (!proper_subset_of(s.via, chain) || !inst.is_present(s.via))
          throw std::invalid_argument("avoid step via-receiver invalid");
        auto it = d.find(s.via);
        if (it == d.end() || it->second != s.message)
          throw std::invalid_argument("avoid step disagrees with D");
        decodes.emplace_back(s.via, s.message);
        break;
      }
    }
    chain |= bit_of(s.message);
  }
  if (chain != full) throw std::invalid_argument("trace is incomplete");

  DecodingGraph g;
  g.vertices = mask_messages(full & ~skipped);
  for (const auto& [recv, msg] : decodes)
    for (int u : mask_messages(recv & ~skipped)) g.edges.emplace_back(msg, u);

  // Kahn's algorithm on the surviving messages.
  std::vector<int> indeg(static_cast<std::size_t>(inst.m) + 1, 0);
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(inst.m) + 1);
  for (const auto& [a, b] : g.edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    indeg[static_cast<std::size_t>(b)]++;
  }
  std::vector<int> queue;
  for (int v : g.vertices)
    if (indeg[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
  std::size_t processed = 0;
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    ++processed;
    for (int w : adj[static_cast<std::size_t>(v)])
      if (--indeg[static_cast<std::size_t>(w)] == 0) queue.push_back(w);
  }
  g.acyclic = processed == g.vertices.size();
  return g;
}

}  // namespace pic
