#include "pic/oracle.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pic/achievability.hpp"
#include "pic/bounds.hpp"
#include "pic/chain_engine.hpp"

namespace pic {

namespace {

// Enumerates every l-dimensional rowspace of GF(q)^m exactly once, as
// reduced row-echelon matrices grouped by pivot-column pattern.
bool for_each_rref(int m, int l, int q,
                   const std::function<bool(const LinearCode&)>& fn) {
  std::vector<int> pivots(static_cast<std::size_t>(l));
  std::function<bool(int, int)> choose = [&](int idx, int from) -> bool {
    if (idx == l) {
      // Free positions: non-pivot columns to the right of each row's pivot.
      std::vector<std::pair<int, int>> free_pos;
      std::vector<bool> is_pivot(static_cast<std::size_t>(m), false);
      for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
      for (int r = 0; r < l; ++r)
        for (int c = pivots[static_cast<std::size_t>(r)] + 1; c < m; ++c)
          if (!is_pivot[static_cast<std::size_t>(c)])
            free_pos.emplace_back(r, c);
      std::vector<int> vals(free_pos.size(), 0);
      for (;;) {
        LinearCode code;
        code.q = q;
        code.m = m;
        code.rows.assign(static_cast<std::size_t>(l),
                         GfRow(static_cast<std::size_t>(m), 0));
        for (int r = 0; r < l; ++r)
          code.rows[static_cast<std::size_t>(r)]
                   [static_cast<std::size_t>(pivots[static_cast<std::size_t>(r)])] = 1;
        for (std::size_t i = 0; i < free_pos.size(); ++i)
          code.rows[static_cast<std::size_t>(free_pos[i].first)]
                   [static_cast<std::size_t>(free_pos[i].second)] = vals[i];
        if (fn(code)) return true;
        // Odometer over free entries.
        std::size_t k = 0;
        while (k < vals.size() && ++vals[k] == q) vals[k++] = 0;
        if (k == vals.size()) return false;
      }
    }
    for (int c = from; c <= m - (l - idx); ++c) {
      pivots[static_cast<std::size_t>(idx)] = c;
      if (choose(idx + 1, c + 1)) return true;
    }
    return false;
  };
  if (l == 0) {
    LinearCode code;
    code.q = q;
    code.m = m;
    return fn(code);
  }
  return choose(0, 0);
}

}  // namespace

std::optional<int> min_linear_length(const PliableInstance& inst, int q,
                                     int l_max, int max_m) {
  const int cap = max_m > 0 ? max_m : 5;
  if (inst.m > cap || q > 3)
    throw std::invalid_argument("exhaustive code search cap exceeded");
  if (!is_prime(q)) throw std::invalid_argument("field size must be prime");
  if (l_max < 0 || l_max > inst.m)
    throw std::invalid_argument("l_max must be in [0:m]");
  for (int l = 0; l <= l_max; ++l) {
    bool found = for_each_rref(inst.m, l, q, [&](const LinearCode& code) {
      return verify_code(inst, code).has_value();
    });
    if (found) return l;
  }
  return std::nullopt;
}

int brute_force_L_star(const PliableInstance& inst) {
  if (inst.m > 4)
    throw std::invalid_argument("brute-force L* requires m <= 4");
  const Mask full = inst.full();

  std::vector<Mask> present;
  for (Mask h = 0; h < full; ++h)
    if (!inst.is_absent(h)) present.push_back(h);

  // dvec[h] = decoded message for present receiver h.
  std::vector<int> dvec(static_cast<std::size_t>(full) + 1, 0);

  std::function<int(Mask)> naive_min = [&](Mask c) -> int {
    if (c == full) return 0;
    if (!inst.is_absent(c))
      return naive_min(c | bit_of(dvec[static_cast<std::size_t>(c)]));
    int best = INT_MAX;
    for (Mask b : present) {
      if (!proper_subset_of(b, c)) continue;
      const int v = dvec[static_cast<std::size_t>(b)];
      if (!has_msg(c, v)) best = std::min(best, naive_min(c | bit_of(v)));
    }
    Mask rest = full & ~c;
    while (rest) {
      const int a = std::countr_zero(rest) + 1;
      rest &= rest - 1;
      best = std::min(best, 1 + naive_min(c | bit_of(a)));
    }
    return best;
  };

  int lstar = 0;
  std::function<void(std::size_t)> assign = [&](std::size_t idx) {
    if (idx == present.size()) {
      lstar = std::max(lstar, naive_min(0));
      return;
    }
    const Mask h = present[idx];
    Mask rest = full & ~h;
    while (rest) {
      const int v = std::countr_zero(rest) + 1;
      rest &= rest - 1;
      dvec[static_cast<std::size_t>(h)] = v;
      assign(idx + 1);
    }
  };
  assign(0);
  return lstar;
}

std::vector<SweepRecord> sweep(int m, int max_absent, int q) {
  if (m > 5 || max_absent > 4 || (q != 2 && q != 3))
    throw std::invalid_argument("sweep caps: m <= 5, max_absent <= 4, q in {2,3}");
  const Mask full = (Mask{1} << m) - 1;
  std::vector<SweepRecord> out;

  std::vector<Mask> family;
  std::function<void(Mask)> choose = [&](Mask from) {
    {
      PliableInstance inst = PliableInstance::make(m, family);
      if (canonicalize(inst).first.absent == inst.absent) {
        SweepRecord rec;
        rec.instance = inst;
        rec.n_absent = static_cast<int>(family.size());
        rec.lb_chain = longest_chain_bound(inst);
        rec.lb_algo = algorithmic_bound(inst);
        rec.closed_form = closed_form_beta(inst);
        rec.oracle_q = q;
        rec.oracle_len = min_linear_length(inst, q, m);
        if (rec.closed_form && rec.oracle_len != rec.closed_form) {
          const int alt = q == 2 ? 3 : 2;
          auto retry = min_linear_length(inst, alt, m);
          if (retry == rec.closed_form) {
            rec.oracle_len = retry;
            rec.oracle_q = alt;
          }
        }
        rec.agree = rec.closed_form && rec.oracle_len == rec.closed_form;
        out.push_back(std::move(rec));
      }
    }
    if (static_cast<int>(family.size()) == max_absent) return;
    for (Mask h = from; h < full; ++h) {
      family.push_back(h);
      choose(h + 1);
      family.pop_back();
    }
  };
  choose(0);

  std::sort(out.begin(), out.end(), [](const SweepRecord& a,
                                       const SweepRecord& b) {
    return std::make_pair(a.n_absent, a.instance.absent) <
           std::make_pair(b.n_absent, b.instance.absent);
  });
  return out;
}

namespace {

std::string family_string(const PliableInstance& inst) {
  std::ostringstream os;
  for (std::size_t i = 0; i < inst.absent.size(); ++i) {
    if (i) os << '|';
    os << '{';
    const auto msgs = mask_messages(inst.absent[i]);
    for (std::size_t j = 0; j < msgs.size(); ++j) {
      if (j) os << ' ';
      os << msgs[j];
    }
    os << '}';
  }
  return os.str();
}

}  // namespace

std::string sweep_to_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  os << "canonical_absent,n_absent,lb_chain,lb_algo,closed_form,oracle_len,agree\n";
  for (const auto& r : records) {
    os << '"' << family_string(r.instance) << '"' << ',' << r.n_absent << ','
       << r.lb_chain << ',' << r.lb_algo << ',';
    if (r.closed_form) os << *r.closed_form;
    os << ',';
    if (r.oracle_len) os << *r.oracle_len;
    os << ',' << (r.agree ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string sweep_to_json(const std::vector<SweepRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["m"] = r.instance.m;
    j["canonical_absent"] = nlohmann::json::array();
    for (Mask h : r.instance.absent)
      j["canonical_absent"].push_back(mask_messages(h));
    j["n_absent"] = r.n_absent;
    j["lb_chain"] = r.lb_chain;
    j["lb_algo"] = r.lb_algo;
    j["closed_form"] = r.closed_form ? nlohmann::json(*r.closed_form) : nullptr;
    j["oracle_len"] = r.oracle_len ? nlohmann::json(*r.oracle_len) : nullptr;
    j["oracle_q"] = r.oracle_q;
    j["agree"] = r.agree;
    arr.push_back(std::move(j));
  }
  return arr.dump();
}

}  // namespace pic
