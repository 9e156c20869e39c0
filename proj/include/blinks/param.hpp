#pragma once

#include "rational.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace blinks {

// Quadratic extension of the rationals: elements a + b*w with w^2 = c0 + c1*w.
struct QuadExtSpec {
  Rational c0;
  Rational c1;
  bool operator==(const QuadExtSpec&) const = default;
};

struct QuadExt {
  Rational a;
  Rational b;
  bool operator==(const QuadExt&) const = default;
};

inline QuadExt qe(Rational r) { return {std::move(r), Rational(0)}; }
inline QuadExt qe(long long n) { return {Rational(n), Rational(0)}; }

inline bool qe_is_zero(const QuadExt& x) { return x.a == 0 && x.b == 0; }
inline QuadExt qe_add(const QuadExt& x, const QuadExt& y) { return {x.a + y.a, x.b + y.b}; }
inline QuadExt qe_sub(const QuadExt& x, const QuadExt& y) { return {x.a - y.a, x.b - y.b}; }
inline QuadExt qe_neg(const QuadExt& x) { return {-x.a, -x.b}; }

inline QuadExt qe_mul(const QuadExtSpec& s, const QuadExt& x, const QuadExt& y) {
  return {x.a * y.a + x.b * y.b * s.c0, x.a * y.b + x.b * y.a + x.b * y.b * s.c1};
}

// x * conj(x) with conj(w) = c1 - w; always rational.
inline Rational qe_norm(const QuadExtSpec& s, const QuadExt& x) {
  return x.a * x.a + x.a * x.b * s.c1 - x.b * x.b * s.c0;
}

inline QuadExt qe_inv(const QuadExtSpec& s, const QuadExt& x) {
  const Rational n = qe_norm(s, x);
  if (n == 0) throw std::domain_error("quadratic extension element is not invertible");
  return {(x.a + x.b * s.c1) / n, -x.b / n};
}

inline QuadExt qe_div(const QuadExtSpec& s, const QuadExt& x, const QuadExt& y) {
  return qe_mul(s, x, qe_inv(s, y));
}

// A point of the boundary line: a finite extension element or infinity.
struct Param {
  bool infinite = false;
  QuadExt v{};
  bool operator==(const Param&) const = default;
};

inline bool param_less(const Param& x, const Param& y) {
  if (x.infinite != y.infinite) return y.infinite;
  if (x.infinite) return false;
  if (x.v.a != y.v.a) return x.v.a < y.v.a;
  return x.v.b < y.v.b;
}

struct ParamLess {
  bool operator()(const Param& x, const Param& y) const { return param_less(x, y); }
};

inline Param param_inf() { return {true, {}}; }
inline Param param(QuadExt x) { return {false, std::move(x)}; }
inline Param param(Rational r) { return {false, qe(std::move(r))}; }
inline Param param(long long n) { return {false, qe(n)}; }

inline std::string qe_str(const QuadExt& x) {
  if (x.b == 0) return rational_str(x.a);
  const Rational babs = x.b < 0 ? Rational(-x.b) : x.b;
  const std::string wpart = (babs == 1) ? "w" : rational_str(babs) + "*w";
  if (x.a == 0) return (x.b < 0 ? "-" : "") + wpart;
  return rational_str(x.a) + (x.b < 0 ? "-" : "+") + wpart;
}

inline std::string param_str(const Param& p) { return p.infinite ? "inf" : qe_str(p.v); }

// Accepts "a", "b*w", "a+b*w", "a-b*w", "w", "-w" with rational a, b.
inline QuadExt parse_quad_ext(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty extension element");

  std::vector<std::string> terms;
  std::size_t start = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const char prev = s[i - 1];
    if ((s[i] == '+' || s[i] == '-') &&
        (std::isdigit(static_cast<unsigned char>(prev)) || prev == 'w')) {
      terms.push_back(s.substr(start, i - start));
      start = i;
    }
  }
  terms.push_back(s.substr(start));
  if (terms.size() > 2) throw std::invalid_argument("malformed extension element: " + raw);

  QuadExt out{Rational(0), Rational(0)};
  bool have_a = false, have_b = false;
  for (std::string t : terms) {
    bool neg = false;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
      neg = t[0] == '-';
      t.erase(t.begin());
    }
    if (t.empty()) throw std::invalid_argument("malformed extension element: " + raw);
    if (t.back() == 'w') {
      t.pop_back();
      if (!t.empty() && t.back() == '*') t.pop_back();
      Rational b = t.empty() ? Rational(1) : parse_rational(t);
      if (have_b) throw std::invalid_argument("duplicate w-term: " + raw);
      out.b = neg ? Rational(-b) : b;
      have_b = true;
    } else {
      Rational a = parse_rational(t);
      if (have_a) throw std::invalid_argument("duplicate constant term: " + raw);
      out.a = neg ? Rational(-a) : a;
      have_a = true;
    }
  }
  return out;
}

inline Param parse_param(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s == "inf" || s == "oo") return param_inf();
  return param(parse_quad_ext(s));
}

// Exact Moebius transformation t -> (alpha t + beta) / (gamma t + delta).
struct Mobius {
  QuadExt alpha, beta, gamma, delta;
};

inline QuadExt mobius_det(const QuadExtSpec& s, const Mobius& m) {
  return qe_sub(qe_mul(s, m.alpha, m.delta), qe_mul(s, m.beta, m.gamma));
}

inline Mobius mobius_identity() { return {qe(1), qe(0), qe(0), qe(1)}; }

// Projective identity: a nonzero scalar matrix.
inline bool mobius_is_identity(const Mobius& m) {
  return qe_is_zero(m.beta) && qe_is_zero(m.gamma) && m.alpha == m.delta &&
         !qe_is_zero(m.alpha);
}

inline Mobius mobius_inverse(const Mobius& m) {
  return {m.delta, qe_neg(m.beta), qe_neg(m.gamma), m.alpha};
}

// f after g, as matrices F*G.
inline Mobius mobius_compose(const QuadExtSpec& s, const Mobius& f, const Mobius& g) {
  return {qe_add(qe_mul(s, f.alpha, g.alpha), qe_mul(s, f.beta, g.gamma)),
          qe_add(qe_mul(s, f.alpha, g.beta), qe_mul(s, f.beta, g.delta)),
          qe_add(qe_mul(s, f.gamma, g.alpha), qe_mul(s, f.delta, g.gamma)),
          qe_add(qe_mul(s, f.gamma, g.beta), qe_mul(s, f.delta, g.delta))};
}

inline Param mobius_apply(const QuadExtSpec& s, const Mobius& m, const Param& p) {
  if (qe_is_zero(mobius_det(s, m))) throw std::domain_error("mobius: singular matrix");
  if (p.infinite) {
    if (qe_is_zero(m.gamma)) return param_inf();
    return param(qe_div(s, m.alpha, m.gamma));
  }
  const QuadExt num = qe_add(qe_mul(s, m.alpha, p.v), m.beta);
  const QuadExt den = qe_add(qe_mul(s, m.gamma, p.v), m.delta);
  if (qe_is_zero(den)) return param_inf();
  return param(qe_div(s, num, den));
}

}  // namespace blinks
