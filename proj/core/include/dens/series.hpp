// Truncated formal power series over double or double-double coefficients.
// Arithmetic is closed at the degree cap: multiplication never consults a
// coefficient above the cap, so coefficient extraction is exactly truncation
// independent (a cap-q and a cap-2q computation agree bit for bit).
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace dens {

// Minimal error-free-transform double-double: ~106-bit mantissa. Used where
// the alternating product prod_j (alpha_j - x) cancels against (1-x)^{-N}
// for large N; plain doubles run out of headroom around N ~ 60.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  DoubleDouble() = default;
  DoubleDouble(double h) : hi(h) {}
  DoubleDouble(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = dd_detail::two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = dd_detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  const double q1 = a.hi / b.hi;
  DoubleDouble r = a - b * DoubleDouble(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * DoubleDouble(q2);
  const double q3 = r.hi / b.hi;
  return dd_detail::quick_two_sum(q1, q2) + DoubleDouble(q3);
}

inline DoubleDouble& operator+=(DoubleDouble& a, DoubleDouble b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, DoubleDouble b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, DoubleDouble b) { return a = a * b; }

template <typename R>
inline double to_double(R v) {
  if constexpr (std::is_same_v<R, DoubleDouble>) return v.hi + v.lo;
  else return v;
}

// Coefficients c_0..c_D of a formal power series truncated at degree D.
template <typename R = double>
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int degree_cap) : c_(check_cap(degree_cap) + 1, R(0)) {}

  static TruncatedSeries constant(double v, int degree_cap) {
    TruncatedSeries s(degree_cap);
    s.c_[0] = R(v);
    return s;
  }

  int degree_cap() const { return static_cast<int>(c_.size()) - 1; }
  R& operator[](int q) { return c_[static_cast<std::size_t>(q)]; }
  const R& operator[](int q) const { return c_[static_cast<std::size_t>(q)]; }
  // Coefficient read with the contour-extraction convention: negative powers
  // vanish, reads above the cap are a caller bug.
  double coeff(int q) const {
    if (q < 0) return 0.0;
    if (q > degree_cap()) throw std::out_of_range("TruncatedSeries::coeff beyond cap");
    return to_double(c_[static_cast<std::size_t>(q)]);
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    require_same_cap(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }

  // Truncating Cauchy product. For plain doubles each output coefficient is
  // accumulated with Neumaier compensation; the convolutions here are exactly
  // where the cancellation lives.
  TruncatedSeries operator*(const TruncatedSeries& o) const {
    require_same_cap(o);
    const int cap = degree_cap();
    TruncatedSeries out(cap);
    for (int q = 0; q <= cap; ++q) {
      if constexpr (std::is_same_v<R, double>) {
        double acc = 0.0, comp = 0.0;
        for (int k = 0; k <= q; ++k) {
          const double term = c_[k] * o.c_[q - k];
          const double t = acc + term;
          if (std::abs(acc) >= std::abs(term))
            comp += (acc - t) + term;
          else
            comp += (term - t) + acc;
          acc = t;
        }
        out.c_[q] = acc + comp;
      } else {
        R acc(0.0);
        for (int k = 0; k <= q; ++k) acc += c_[k] * o.c_[q - k];
        out.c_[q] = acc;
      }
    }
    return out;
  }

  // Multiply by the linear factor (a + b x) in place.
  void mul_linear(double a, double b) {
    const R ra(a), rb(b);
    for (int q = degree_cap(); q >= 1; --q)
      c_[q] = ra * c_[q] + rb * c_[q - 1];
    c_[0] = ra * c_[0];
  }

  // Divide by (1 - c x) in place: the forward recurrence c'_q = c_q + c*c'_{q-1}
  // is a condition-1 update for 0 < c < 1.
  void div_one_minus(double c) {
    const R rc(c);
    for (std::size_t q = 1; q < c_.size(); ++q) c_[q] += rc * c_[q - 1];
  }

  // Reciprocal of a unit-constant-term series.
  TruncatedSeries reciprocal() const {
    const double c0 = to_double(c_[0]);
    if (c0 == 0.0) throw std::domain_error("TruncatedSeries::reciprocal: zero constant term");
    const int cap = degree_cap();
    TruncatedSeries out(cap);
    out.c_[0] = R(1.0) / c_[0];
    for (int q = 1; q <= cap; ++q) {
      R acc(0.0);
      for (int k = 1; k <= q; ++k) acc += c_[k] * out.c_[q - k];
      out.c_[q] = -acc / c_[0];
    }
    return out;
  }

 private:
  static int check_cap(int cap) {
    if (cap < 0) throw std::invalid_argument("TruncatedSeries: degree cap must be >= 0");
    return cap;
  }
  void require_same_cap(const TruncatedSeries& o) const {
    if (o.degree_cap() != degree_cap())
      throw std::invalid_argument("TruncatedSeries: degree cap mismatch");
  }

  std::vector<R> c_;

  template <typename>
  friend class TruncatedSeries;
};

}  // namespace dens
