#pragma once

// Prime-field arithmetic and Gaussian elimination, enough for code
// verification and rowspace enumeration.

#include <vector>

namespace pic {

bool is_prime(int q);
int next_prime(int q);  // smallest prime >= q

// Arithmetic mod a prime q.  Elements are ints in [0:q-1].
struct PrimeField {
  int q;
  explicit PrimeField(int q);
  int add(int a, int b) const { return (a + b) % q; }
  int sub(int a, int b) const { return (a - b % q + q) % q; }
  int mul(int a, int b) const { return static_cast<int>(
      static_cast<long long>(a) * b % q); }
  int neg(int a) const { return (q - a % q) % q; }
  int pow(int a, int e) const;
  int inv(int a) const;
  // Smallest primitive root mod q.
  int primitive_root() const;
};

using GfRow = std::vector<int>;

// Row-major matrix over GF(q) with in-place reduction.
struct GfMatrix {
  PrimeField field;
  int cols = 0;
  std::vector<GfRow> rows;

  GfMatrix(int q, int cols) : field(q), cols(cols) {}
  void add_row(GfRow r);
  int rank() const { return rank_; }
  // True iff v lies in the span of the rows added so far.
  bool in_rowspace(const GfRow& v) const;

 private:
  // Reduced rows with pivot bookkeeping, maintained incrementally.
  std::vector<GfRow> reduced_;
  std::vector<int> pivot_col_;
  int rank_ = 0;
  bool reduce(GfRow& r) const;  // returns true if r becomes zero
};

}  // namespace pic
