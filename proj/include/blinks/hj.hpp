#pragma once

#include "linalg.hpp"

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace blinks {

// Cyclic quotient singularity of order n with weight q.
struct HjType {
  long long n = 0;
  long long q = 0;
  bool operator==(const HjType&) const = default;
};

// Self-intersections of the minimal-resolution chain, recorded positively:
// entry a_i means the i-th curve has self-intersection -a_i.
using ChainWeights = std::vector<long long>;

enum class ChainEnd { First, Last };

inline void check_hj_type(const HjType& t) {
  if (t.n < 2 || t.q < 1 || t.q > t.n - 1 || std::gcd(t.n, t.q) != 1)
    throw std::invalid_argument("invalid cyclic quotient type (n,q)");
}

inline void check_chain(const ChainWeights& w) {
  if (w.empty()) throw std::invalid_argument("empty resolution chain");
  for (long long a : w)
    if (a < 2) throw std::invalid_argument("resolution chain entry below 2");
}

// Negative continued fraction of n/q via the ceiling-division recurrence.
inline ChainWeights hj_expand(const HjType& t) {
  check_hj_type(t);
  ChainWeights w;
  long long n = t.n, q = t.q;
  while (q > 0) {
    const long long a = (n + q - 1) / q;  // ceil(n/q)
    w.push_back(a);
    const long long r = a * q - n;
    n = q;
    q = r;
  }
  return w;
}

// Evaluates a_1 - 1/(a_2 - 1/(...)) right to left and reads off n/q.
inline HjType hj_contract(const ChainWeights& w) {
  check_chain(w);
  Rational x = w.back();
  for (std::size_t i = w.size() - 1; i-- > 0;) x = Rational(w[i]) - Rational(1) / x;
  const Integer n = rational_num(x);
  const Integer q = rational_den(x);
  return HjType{n.convert_to<long long>(), q.convert_to<long long>()};
}

// Coefficients c_i of the exceptional curves in the canonical ramification
// formula, solved exactly against the chain intersection matrix.
inline Vec chain_discrepancies(const ChainWeights& w) {
  check_chain(w);
  const std::size_t s = w.size();
  Mat m(s, Vec(s, 0));
  Vec rhs(s);
  for (std::size_t j = 0; j < s; ++j) {
    m[j][j] = Rational(-w[j]);
    if (j > 0) m[j][j - 1] = 1;
    if (j + 1 < s) m[j][j + 1] = 1;
    rhs[j] = Rational(-2 + w[j]);
  }
  return solve_linear(std::move(m), std::move(rhs));
}

// Weight of the chain curve meeting the boundary strict transform.
inline long long boundary_index(const ChainWeights& w, ChainEnd end) {
  check_chain(w);
  return end == ChainEnd::First ? w.front() : w.back();
}

}  // namespace blinks
