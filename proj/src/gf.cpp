#include "pic/gf.hpp"

#include <stdexcept>

namespace pic {

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

int next_prime(int q) {
  int p = q < 2 ? 2 : q;
  while (!is_prime(p)) ++p;
  return p;
}

PrimeField::PrimeField(int q) : q(q) {
  if (!is_prime(q)) throw std::invalid_argument("field size must be prime");
}

int PrimeField::pow(int a, int e) const {
  long long base = a % q, acc = 1;
  for (; e > 0; e >>= 1) {
    if (e & 1) acc = acc * base % q;
    base = base * base % q;
  }
  return static_cast<int>(acc);
}

int PrimeField::inv(int a) const {
  a %= q;
  if (a == 0) throw std::invalid_argument("zero has no inverse");
  return pow(a, q - 2);
}

int PrimeField::primitive_root() const {
  if (q == 2) return 1;
  for (int g = 2; g < q; ++g) {
    bool ok = true;
    // g is primitive iff g^((q-1)/p) != 1 for every prime p | q-1.
    int n = q - 1;
    for (int p = 2; p * p <= n; ++p) {
      if (n % p) continue;
      while (n % p == 0) n /= p;
      if (pow(g, (q - 1) / p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok && n > 1 && pow(g, (q - 1) / n) == 1) ok = false;
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found");
}

void GfMatrix::add_row(GfRow r) {
  if (static_cast<int>(r.size()) != cols)
    throw std::invalid_argument("row width mismatch");
  rows.push_back(r);
  if (!reduce(r)) {
    int pc = 0;
    while (r[static_cast<std::size_t>(pc)] == 0) ++pc;
    const int scale = field.inv(r[static_cast<std::size_t>(pc)]);
    for (int& x : r) x = field.mul(x, scale);
    // Clear the pivot column from earlier reduced rows.
    for (std::size_t i = 0; i < reduced_.size(); ++i) {
      const int c = reduced_[i][static_cast<std::size_t>(pc)];
      if (c == 0) continue;
      for (int j = 0; j < cols; ++j)
        reduced_[i][static_cast<std::size_t>(j)] =
            field.sub(reduced_[i][static_cast<std::size_t>(j)],
                      field.mul(c, r[static_cast<std::size_t>(j)]));
    }
    reduced_.push_back(std::move(r));
    pivot_col_.push_back(pc);
    ++rank_;
  }
}

bool GfMatrix::reduce(GfRow& r) const {
  for (std::size_t i = 0; i < reduced_.size(); ++i) {
    const int pc = pivot_col_[i];
    const int c = r[static_cast<std::size_t>(pc)];
    if (c == 0) continue;
    for (int j = 0; j < cols; ++j)
      r[static_cast<std::size_t>(j)] =
          field.sub(r[static_cast<std::size_t>(j)],
                    field.mul(c, reduced_[i][static_cast<std::size_t>(j)]));
  }
  for (int x : r)
    if (x != 0) return false;
  return true;
}

bool GfMatrix::in_rowspace(const GfRow& v) const {
  if (static_cast<int>(v.size()) != cols)
    throw std::invalid_argument("vector width mismatch");
  GfRow r = v;
  return reduce(r);
}

}  // namespace pic
