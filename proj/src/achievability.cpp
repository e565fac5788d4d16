#include "pic/achievability.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace pic {

Partition Partition::make(int m, Mask p0, std::vector<Mask> parts) {
  if (m < 1 || m > kMaxMessages)
    throw std::invalid_argument("partition message count out of range");
  const Mask full = (Mask{1} << m) - 1;
  Mask seen = p0;
  if ((p0 & ~full) != 0)
    throw std::invalid_argument("P_0 exceeds the message range");
  for (Mask p : parts) {
    if (p == 0) throw std::invalid_argument("parts P_1..P_L must be nonempty");
    if ((p & ~full) != 0 || (p & seen) != 0)
      throw std::invalid_argument("partition parts must be disjoint");
    seen |= p;
  }
  if (seen != full)
    throw std::invalid_argument("partition must cover all messages");
  if (parts.empty() || static_cast<int>(parts.size()) > m)
    throw std::invalid_argument("part count must be in [1:m]");
  Partition out;
  out.m = m;
  out.p0 = p0;
  out.parts = std::move(parts);
  return out;
}

Mask Partition::union_for(const std::set<int>& q) const {
  Mask h = p0;
  for (int i : q) {
    if (i < 1 || i > L())
      throw std::invalid_argument("part index out of range");
    h |= parts[static_cast<std::size_t>(i - 1)];
  }
  return h;
}

std::vector<Mask> Partition::perfect_family() const {
  return truncated_family(L() - 1);
}

std::vector<Mask> Partition::truncated_family(int t) const {
  if (t < 0 || t > L() - 1)
    throw std::invalid_argument("truncation level must be in [0:L-1]");
  std::vector<Mask> fam;
  const int l = L();
  for (Mask q = 0; q < (Mask{1} << l); ++q) {
    if (q == (Mask{1} << l) - 1) continue;  // Q must be a proper subset
    if (popcount(q) > t) continue;
    Mask h = p0;
    for (int i = 0; i < l; ++i)
      if (q & (Mask{1} << i)) h |= parts[static_cast<std::size_t>(i)];
    fam.push_back(h);
  }
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  return fam;
}

LinearCode cyclic_partition_code(const Partition& p, int q) {
  if (!is_prime(q)) throw std::invalid_argument("field size must be prime");
  LinearCode code;
  code.q = q;
  code.m = p.m;
  for (int msg : mask_messages(p.p0)) {
    GfRow r(static_cast<std::size_t>(p.m), 0);
    r[static_cast<std::size_t>(msg - 1)] = 1;
    code.rows.push_back(std::move(r));
  }
  for (Mask part : p.parts) {
    const auto msgs = mask_messages(part);
    for (std::size_t j = 0; j + 1 < msgs.size(); ++j) {
      GfRow r(static_cast<std::size_t>(p.m), 0);
      r[static_cast<std::size_t>(msgs[j] - 1)] = 1;
      r[static_cast<std::size_t>(msgs[j + 1] - 1)] = 1;
      code.rows.push_back(std::move(r));
    }
  }
  return code;
}

int auto_prime(const Partition& p, int T) {
  const int l = p.L();
  if (l - 1 - T <= 1) return 2;
  return next_prime(l + 1);
}

LinearCode truncated_code(const Partition& p, int T, int q) {
  const int l = p.L();
  if (T < 0 || T > l - 1)
    throw std::invalid_argument("truncation level must be in [0:L-1]");
  if (q == 0) q = auto_prime(p, T);
  if (!is_prime(q)) throw std::invalid_argument("field size must be prime");
  if (l - 1 - T >= 2 && q - 1 < l)
    throw std::invalid_argument(
        "field too small: powers of the primitive root collide");
  LinearCode code = cyclic_partition_code(p, q);
  const PrimeField f(q);
  const int gamma = q == 2 ? 1 : f.primitive_root();
  for (int k = 1; k <= l - 1 - T; ++k) {
    GfRow r(static_cast<std::size_t>(p.m), 0);
    for (int i = 1; i <= l; ++i) {
      const int leader = mask_messages(p.parts[static_cast<std::size_t>(i - 1)])
                             .front();
      r[static_cast<std::size_t>(leader - 1)] = f.pow(gamma, (k - 1) * i);
    }
    code.rows.push_back(std::move(r));
  }
  return code;
}

LinearCode imperfect_patch_code(const Partition& p, const std::set<int>& q_set,
                                int q) {
  const int l = p.L();
  for (int i : q_set)
    if (i < 1 || i > l)
      throw std::invalid_argument("part index out of range");
  int k = 0;
  for (int i = 1; i <= l; ++i)
    if (!q_set.count(i)) {
      k = i;
      break;
    }
  if (k == 0)
    throw std::invalid_argument("Q must leave at least one part unpatched");
  LinearCode code = cyclic_partition_code(p, q);
  const int a = mask_messages(p.parts[static_cast<std::size_t>(k - 1)]).front();
  GfRow r(static_cast<std::size_t>(p.m), 0);
  r[static_cast<std::size_t>(a - 1)] = 1;
  code.rows.push_back(std::move(r));
  return code;
}

std::optional<DecodingChoice> verify_code(const PliableInstance& inst,
                                          const LinearCode& code) {
  if (code.m != inst.m)
    throw std::invalid_argument("code width does not match the instance");
  GfMatrix base(code.q, code.m);
  for (const auto& r : code.rows) base.add_row(r);

  auto unit = [&](int msg) {
    GfRow r(static_cast<std::size_t>(code.m), 0);
    r[static_cast<std::size_t>(msg - 1)] = 1;
    return r;
  };

  DecodingChoice d;
  const Mask full = inst.full();
  for (Mask h = 0; h < full; ++h) {
    if (inst.is_absent(h)) continue;
    GfMatrix mat = base;
    for (int j : mask_messages(h)) mat.add_row(unit(j));
    bool ok = false;
    for (int i : mask_messages(full & ~h)) {
      if (mat.in_rowspace(unit(i))) {
        d[h] = i;
        ok = true;
        break;
      }
    }
    if (!ok) return std::nullopt;
  }
  return d;
}

LinearCode parse_code(const std::string& text, int m) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("q") || !j.contains("rows"))
    throw std::invalid_argument("code JSON needs \"q\" and \"rows\"");
  LinearCode code;
  code.q = j["q"].get<int>();
  if (!is_prime(code.q))
    throw std::invalid_argument("code field size must be prime");
  code.m = m;
  for (const auto& row : j["rows"]) {
    GfRow r;
    for (const auto& v : row) {
      const int c = v.get<int>();
      if (c < 0 || c >= code.q)
        throw std::invalid_argument("coefficient outside [0:q-1]");
      r.push_back(c);
    }
    if (static_cast<int>(r.size()) != m)
      throw std::invalid_argument("code row width does not match m");
    code.rows.push_back(std::move(r));
  }
  return code;
}

std::string code_to_json(const LinearCode& code) {
  nlohmann::json j;
  j["q"] = code.q;
  j["rows"] = code.rows;
  return j.dump();
}

}  // namespace pic
