#include "pic/bounds.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "pic/chain_engine.hpp"

namespace pic {

int longest_chain_bound(const PliableInstance& inst) {
  return inst.m - longest_nested_chain(inst).length();
}

int algorithmic_bound(const PliableInstance& inst, int max_m) {
  return inst.m - compute_L_star(inst, max_m);
}

namespace {

// Longest nested absent chain whose first link contains x; 0 if none.
int max_chain_containing(const PliableInstance& inst, Mask x) {
  const auto& abs = inst.absent;
  std::vector<int> up(abs.size(), 1);
  int best = 0;
  for (std::size_t i = abs.size(); i-- > 0;) {
    for (std::size_t j = i + 1; j < abs.size(); ++j)
      if (proper_subset_of(abs[i], abs[j])) up[i] = std::max(up[i], 1 + up[j]);
    if (subset_of(x, abs[i])) best = std::max(best, up[i]);
  }
  return best;
}

}  // namespace

bool improved_nested_bound(const PliableInstance& inst, int L) {
  if (L < 1) throw std::invalid_argument("L must be >= 1");
  const Mask full = inst.full();
  for (const NestedChain& chain : all_maximal_chains(inst, L)) {
    bool chain_ok = false;
    const int limit = std::min<int>(L - 1, chain.length());
    for (int k = 1; k <= limit && !chain_ok; ++k) {
      const Mask hk = chain.links[static_cast<std::size_t>(k - 1)];
      Mask rest = full & ~hk;
      while (rest && !chain_ok) {
        const int a = std::countr_zero(rest) + 1;
        rest &= rest - 1;
        if (max_chain_containing(inst, hk | bit_of(a)) < L - k) chain_ok = true;
      }
    }
    if (!chain_ok) return false;
  }
  return true;
}

int best_improved_bound(const PliableInstance& inst) {
  const int lmax = longest_nested_chain(inst).length();
  for (int L = 1; L <= lmax + 1; ++L)
    if (improved_nested_bound(inst, L)) return inst.m - L + 1;
  return inst.m - lmax;  // unreachable: L = lmax + 1 is vacuously true
}

LookAheadCase look_ahead_case(const PliableInstance& inst, Mask h,
                              const std::vector<Mask>& a) {
  if (!inst.is_absent(h))
    throw std::invalid_argument("H must be an absent receiver");
  for (Mask hp : a) {
    if (!inst.is_absent(hp) || hp == h)
      throw std::invalid_argument("A must contain absent receivers other than H");
    if (!proper_subset_of(h, hp))
      throw std::invalid_argument("every member of A must strictly contain H");
  }
  if (a.empty()) throw std::invalid_argument("A must be nonempty");
  const Mask full = inst.full();
  Mask uni = 0;
  for (Mask hp : a) uni |= hp;
  if (uni != full) return LookAheadCase::case1;

  bool minimal_cover = true;
  for (std::size_t i = 0; i < a.size() && minimal_cover; ++i) {
    Mask rest = 0;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (j != i) rest |= a[j];
    if (rest == full) minimal_cover = false;
  }
  if (!minimal_cover) return LookAheadCase::none;

  Mask t = full;
  for (Mask hp : a) t &= hp;
  if (proper_subset_of(h, t) && inst.is_present(t)) return LookAheadCase::case2;
  if (t == h) {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        const Mask tij = a[i] & a[j];
        if (proper_subset_of(h, tij) && inst.is_present(tij))
          return LookAheadCase::case3;
      }
  }
  return LookAheadCase::none;
}

namespace {

// Minimal members of the family strictly above p0.
std::vector<Mask> minimal_above(const std::vector<Mask>& family, Mask p0) {
  std::vector<Mask> out;
  for (Mask h : family) {
    if (h == p0) continue;
    bool minimal = true;
    for (Mask o : family)
      if (o != p0 && o != h && proper_subset_of(o, h)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(h);
  }
  return out;
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::optional<Partition> try_perfect(int m, const std::vector<Mask>& family) {
  const std::size_t n = family.size();
  if (n == 0) return std::nullopt;
  int L = 0;
  while ((std::size_t{1} << L) - 1 < n) ++L;  // smallest L with 2^L-1 >= n
  if ((std::size_t{1} << L) - 1 != n) return std::nullopt;
  if (L > m) return std::nullopt;
  const Mask full = (Mask{1} << m) - 1;
  Mask p0 = full;
  for (Mask h : family) p0 &= h;
  if (L == 1) {
    if (family.front() != p0) return std::nullopt;
    std::vector<Mask> parts{full & ~p0};
    if (parts[0] == 0) return std::nullopt;
    return Partition::make(m, p0, parts);
  }
  if (!std::binary_search(family.begin(), family.end(), p0))
    return std::nullopt;
  std::vector<Mask> parts;
  for (Mask h : minimal_above(family, p0)) parts.push_back(h & ~p0);
  if (static_cast<int>(parts.size()) != L) return std::nullopt;
  Mask seen = p0;
  for (Mask p : parts) {
    if (p == 0 || (p & seen) != 0) return std::nullopt;
    seen |= p;
  }
  if (seen != full) return std::nullopt;
  Partition cand = Partition::make(m, p0, parts);
  if (cand.perfect_family() != family) return std::nullopt;
  return cand;
}

std::optional<std::pair<Partition, int>> try_truncated(
    int m, const std::vector<Mask>& family) {
  const long long n = static_cast<long long>(family.size());
  if (n < 2) return std::nullopt;
  const Mask full = (Mask{1} << m) - 1;
  for (int L = 2; L <= m; ++L) {
    long long count = 1;  // |Q| = 0
    for (int T = 1; T <= L - 2; ++T) {
      count += binom(L, T);
      if (count > n) break;
      if (count != n) continue;
      Mask p0 = full;
      for (Mask h : family) p0 &= h;
      if (!std::binary_search(family.begin(), family.end(), p0)) continue;
      std::vector<Mask> parts;
      for (Mask h : minimal_above(family, p0)) parts.push_back(h & ~p0);
      if (static_cast<int>(parts.size()) != L) continue;
      Mask seen = p0;
      bool ok = true;
      for (Mask p : parts) {
        if (p == 0 || (p & seen) != 0) {
          ok = false;
          break;
        }
        seen |= p;
      }
      if (!ok || seen != full) continue;
      Partition cand = Partition::make(m, p0, parts);
      if (cand.truncated_family(T) == family) return std::make_pair(cand, T);
    }
  }
  return std::nullopt;
}

namespace {

// Enumerates partitions of [1:m] into a free block 0 (= P_0, may be empty)
// and exactly L unlabeled nonempty blocks; calls fn for each, stopping when
// it returns true.  Returns whether fn accepted one.
bool for_each_partition(int m, int L,
                        const std::function<bool(const Partition&)>& fn) {
  std::vector<int> label(static_cast<std::size_t>(m) + 1, 0);
  std::function<bool(int, int)> rec = [&](int msg, int used) -> bool {
    if (msg > m) {
      if (used != L) return false;
      std::vector<Mask> parts(static_cast<std::size_t>(L), 0);
      Mask p0 = 0;
      for (int i = 1; i <= m; ++i) {
        const int lb = label[static_cast<std::size_t>(i)];
        if (lb == 0)
          p0 |= bit_of(i);
        else
          parts[static_cast<std::size_t>(lb - 1)] |= bit_of(i);
      }
      std::sort(parts.begin(), parts.end());
      return fn(Partition::make(m, p0, parts));
    }
    // Block 0 is free; nonzero labels in first-use order.
    const int top = std::min(used + 1, L);
    for (int lb = 0; lb <= top; ++lb) {
      label[static_cast<std::size_t>(msg)] = lb;
      if (rec(msg + 1, std::max(used, lb))) return true;
    }
    return false;
  };
  return rec(1, 0);
}

std::optional<StructureClass> try_slightly_imperfect(
    const PliableInstance& inst) {
  const std::size_t n = inst.absent.size();
  if (n < 3) return std::nullopt;
  int L = 0;
  while ((std::size_t{1} << L) - 1 < n) ++L;
  if ((std::size_t{1} << L) - 1 != n || L < 2 || L > inst.m)
    return std::nullopt;
  // Partition search is exponential; bounded to desk scale.
  double budget = 1;
  for (int i = 0; i < inst.m; ++i) budget *= L + 1;
  if (budget > 8e6) return std::nullopt;

  StructureClass out;
  auto accept = [&](const Partition& p) {
    const std::vector<Mask> fam = p.perfect_family();
    // absent must equal fam with one member replaced by a strict subset.
    std::vector<Mask> extra, missing;
    std::set_difference(inst.absent.begin(), inst.absent.end(), fam.begin(),
                        fam.end(), std::back_inserter(extra));
    std::set_difference(fam.begin(), fam.end(), inst.absent.begin(),
                        inst.absent.end(), std::back_inserter(missing));
    if (extra.size() != 1 || missing.size() != 1) return false;
    if (!proper_subset_of(extra[0], missing[0])) return false;
    std::set<int> q;
    for (int i = 1; i <= p.L(); ++i)
      if (subset_of(p.parts[static_cast<std::size_t>(i - 1)], missing[0]))
        q.insert(i);
    if (p.union_for(q) != missing[0]) return false;
    out.tag = StructureTag::slightly_imperfect;
    out.L = p.L();
    out.partition = p;
    out.Q = q;
    out.shrunk = extra[0];
    return true;
  };
  if (for_each_partition(inst.m, L, accept)) return out;
  return std::nullopt;
}

}  // namespace

StructureClass classify_structure(const PliableInstance& inst) {
  StructureClass out;
  if (auto p = try_perfect(inst.m, inst.absent)) {
    out.tag = StructureTag::perfect_nested;
    out.L = p->L();
    out.partition = *p;
    return out;
  }
  if (auto pt = try_truncated(inst.m, inst.absent)) {
    out.tag = StructureTag::truncated_nested;
    out.L = pt->first.L();
    out.T = pt->second;
    out.partition = pt->first;
    return out;
  }
  if (inst.absent.size() == 3) {
    const Mask full = inst.full();
    for (std::size_t i = 0; i < 3; ++i) {
      const Mask h1 = inst.absent[i];
      std::vector<Mask> rest;
      for (std::size_t j = 0; j < 3; ++j)
        if (j != i) rest.push_back(inst.absent[j]);
      if (proper_subset_of(h1, rest[0] & rest[1]) &&
          (rest[0] | rest[1]) == full) {
        out.tag = StructureTag::prop1_triple;
        out.L = 2;
        out.triple = {h1, rest[0], rest[1]};
        return out;
      }
    }
  }
  if (auto si = try_slightly_imperfect(inst)) return *si;
  return out;
}

std::optional<int> closed_form_beta(const PliableInstance& inst) {
  const int m = inst.m;
  const std::size_t n = inst.absent.size();
  if (n == 0) return m;
  const StructureClass sc = classify_structure(inst);
  switch (sc.tag) {
    case StructureTag::perfect_nested:
      return m - sc.L;
    case StructureTag::truncated_nested:
      return m - sc.T - 1;
    case StructureTag::prop1_triple:
      return m - 1;
    case StructureTag::slightly_imperfect:
      return m - sc.L + 1;
    case StructureTag::none:
      break;
  }
  if (n <= 3) return m - 1;  // perfect 2-nested triples classified above
  if (n == 4) {
    // A perfect 2-nested subfamily (the whole family being 1-truncated
    // 3-nested is already classified) brings the rate down by two.
    for (std::size_t skip = 0; skip < 4; ++skip) {
      std::vector<Mask> sub;
      for (std::size_t i = 0; i < 4; ++i)
        if (i != skip) sub.push_back(inst.absent[i]);
      if (auto p = try_perfect(m, sub); p && p->L() == 2) return m - 2;
    }
    return m - 1;
  }
  return std::nullopt;
}

namespace {

// Generic length-(m-1) code for any instance with an absent receiver:
// one uncoded row per message of the receiver, consecutive sums on the rest.
LinearCode fallback_code(const PliableInstance& inst, int q) {
  const Mask h = inst.absent.front();
  LinearCode code;
  code.q = q;
  code.m = inst.m;
  for (int msg : mask_messages(h)) {
    GfRow r(static_cast<std::size_t>(inst.m), 0);
    r[static_cast<std::size_t>(msg - 1)] = 1;
    code.rows.push_back(std::move(r));
  }
  const auto rest = mask_messages(inst.full() & ~h);
  for (std::size_t j = 0; j + 1 < rest.size(); ++j) {
    GfRow r(static_cast<std::size_t>(inst.m), 0);
    r[static_cast<std::size_t>(rest[j] - 1)] = 1;
    r[static_cast<std::size_t>(rest[j + 1] - 1)] = 1;
    code.rows.push_back(std::move(r));
  }
  return code;
}

LinearCode identity_code(int m, int q) {
  LinearCode code;
  code.q = q;
  code.m = m;
  for (int i = 0; i < m; ++i) {
    GfRow r(static_cast<std::size_t>(m), 0);
    r[static_cast<std::size_t>(i)] = 1;
    code.rows.push_back(std::move(r));
  }
  return code;
}

}  // namespace

BoundReport analyze(const PliableInstance& inst, bool skip_l_star, int max_m) {
  BoundReport r;
  r.m = inst.m;
  r.lb_longest_chain = longest_chain_bound(inst);
  if (!skip_l_star) {
    try {
      r.lb_algorithmic = algorithmic_bound(inst, max_m);
    } catch (const std::invalid_argument&) {
      // over the search cap; leave unset
    }
  }
  r.lb_improved = best_improved_bound(inst);
  r.structure = classify_structure(inst);
  r.closed_form = closed_form_beta(inst);

  std::optional<LinearCode> code;
  switch (r.structure.tag) {
    case StructureTag::perfect_nested:
      code = cyclic_partition_code(*r.structure.partition, 2);
      break;
    case StructureTag::truncated_nested:
      code = truncated_code(*r.structure.partition, r.structure.T, 0);
      break;
    case StructureTag::slightly_imperfect:
      code = imperfect_patch_code(*r.structure.partition, r.structure.Q, 2);
      break;
    case StructureTag::prop1_triple: {
      const Mask h2 = r.structure.triple[1], h3 = r.structure.triple[2];
      Partition p = Partition::make(inst.m, h2 & h3,
                                    {h2 & ~h3, h3 & ~h2});
      code = imperfect_patch_code(p, {}, 2);
      break;
    }
    case StructureTag::none:
      code = inst.absent.empty() ? identity_code(inst.m, 2)
                                 : fallback_code(inst, 2);
      break;
  }
  if (code && verify_code(inst, *code)) {
    r.construction = code;
    r.ub_construction = code->length();
  }

  int best_lb = r.lb_longest_chain;
  if (r.lb_algorithmic) best_lb = std::max(best_lb, *r.lb_algorithmic);
  if (r.lb_improved) best_lb = std::max(best_lb, *r.lb_improved);
  if (r.ub_construction && best_lb == *r.ub_construction)
    r.beta_confirmed = best_lb;
  return r;
}

std::string report_to_json(const BoundReport& r) {
  nlohmann::json j;
  j["m"] = r.m;
  j["lb_longest_chain"] = r.lb_longest_chain;
  j["lb_algorithmic"] =
      r.lb_algorithmic ? nlohmann::json(*r.lb_algorithmic) : nullptr;
  j["lb_improved"] = r.lb_improved ? nlohmann::json(*r.lb_improved) : nullptr;
  j["closed_form"] = r.closed_form ? nlohmann::json(*r.closed_form) : nullptr;
  j["ub_construction"] =
      r.ub_construction ? nlohmann::json(*r.ub_construction) : nullptr;
  j["beta_confirmed"] =
      r.beta_confirmed ? nlohmann::json(*r.beta_confirmed) : nullptr;

  j["structure"] = nlohmann::json::parse(structure_to_json(r.structure));
  return j.dump();
}

std::string structure_to_json(const StructureClass& sc) {
  nlohmann::json s;
  switch (sc.tag) {
    case StructureTag::none: s["tag"] = "none"; break;
    case StructureTag::perfect_nested: s["tag"] = "perfect_nested"; break;
    case StructureTag::truncated_nested: s["tag"] = "truncated_nested"; break;
    case StructureTag::slightly_imperfect:
      s["tag"] = "slightly_imperfect";
      break;
    case StructureTag::prop1_triple: s["tag"] = "prop1_triple"; break;
  }
  if (sc.tag != StructureTag::none) s["L"] = sc.L;
  if (sc.tag == StructureTag::truncated_nested) s["T"] = sc.T;
  if (sc.partition) {
    s["partition"]["p0"] = mask_messages(sc.partition->p0);
    s["partition"]["parts"] = nlohmann::json::array();
    for (Mask p : sc.partition->parts)
      s["partition"]["parts"].push_back(mask_messages(p));
  }
  if (sc.tag == StructureTag::slightly_imperfect) {
    s["Q"] = sc.Q;
    s["shrunk"] = mask_messages(sc.shrunk);
  }
  if (sc.tag == StructureTag::prop1_triple) {
    s["triple"] = nlohmann::json::array();
    for (Mask h : sc.triple) s["triple"].push_back(mask_messages(h));
  }
  return s.dump();
}

}  // namespace pic
