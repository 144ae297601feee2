#pragma once

// Truncated multivariate Taylor arithmetic in three chart variables.
//
// A Jet stores the normalized Taylor coefficients f_alpha = d^alpha f(p) / alpha!
// for every multi-index |alpha| <= order, densely, in graded order: all
// coefficients of degree d precede those of degree d + 1, so an order-k jet is
// a prefix of an order-(k+1) jet.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ddvv/errors.hpp"

namespace ddvv {

using MultiIndex = std::array<int, 3>;

inline constexpr int kMaxJetOrder = 6;
inline constexpr int kJetVariables = 3;

/// Number of multi-indices in three variables with |alpha| <= order.
constexpr int jet_size(int order) { return (order + 1) * (order + 2) * (order + 3) / 6; }

inline constexpr int kJetCapacity = jet_size(kMaxJetOrder);

namespace detail {

struct JetTables {
  std::array<MultiIndex, kJetCapacity> alpha{};
  std::array<int, kJetCapacity> degree{};
  int flat[kMaxJetOrder + 1][kMaxJetOrder + 1][kMaxJetOrder + 1]{};

  // Cauchy-product triples (i, j, k) with alpha_i + alpha_j = alpha_k, sorted by
  // k; pairs_upto[d] counts the triples whose target has degree <= d.
  std::vector<std::array<std::uint8_t, 3>> pairs;
  std::array<int, kMaxJetOrder + 1> pairs_upto{};
  // Triples grouped by target k: [target_begin[k], target_begin[k + 1]).
  std::array<int, kJetCapacity + 1> target_begin{};
  // The triples with i <= j, same ordering; the product sums a_i b_j + a_j b_i
  // per unordered pair, which makes a * b and b * a bitwise identical.
  std::vector<std::array<std::uint8_t, 3>> sym_pairs;
  std::array<int, kMaxJetOrder + 1> sym_pairs_upto{};

  // raise[k][v] = flat index of alpha_k + e_v, or -1 beyond the capacity.
  std::array<std::array<int, 3>, kJetCapacity> raise{};

  JetTables() {
    int n = 0;
    for (int d = 0; d <= kMaxJetOrder; ++d) {
      for (int a = d; a >= 0; --a) {
        for (int b = d - a; b >= 0; --b) {
          const int c = d - a - b;
          alpha[n] = {a, b, c};
          degree[n] = d;
          flat[a][b][c] = n;
          ++n;
        }
      }
    }
    for (int k = 0; k < kJetCapacity; ++k) {
      target_begin[k] = static_cast<int>(pairs.size());
      for (int i = 0; i < kJetCapacity; ++i) {
        const MultiIndex& ai = alpha[i];
        const MultiIndex& ak = alpha[k];
        if (ai[0] > ak[0] || ai[1] > ak[1] || ai[2] > ak[2]) continue;
        const int j = flat[ak[0] - ai[0]][ak[1] - ai[1]][ak[2] - ai[2]];
        pairs.push_back({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                         static_cast<std::uint8_t>(k)});
      }
    }
    target_begin[kJetCapacity] = static_cast<int>(pairs.size());
    for (int d = 0; d <= kMaxJetOrder; ++d) pairs_upto[d] = target_begin[jet_size(d)];
    for (int d = 0, q = 0; d <= kMaxJetOrder; ++d) {
      for (; q < pairs_upto[d]; ++q)
        if (pairs[q][0] <= pairs[q][1]) sym_pairs.push_back(pairs[q]);
      sym_pairs_upto[d] = static_cast<int>(sym_pairs.size());
    }
    for (int k = 0; k < kJetCapacity; ++k) {
      for (int v = 0; v < 3; ++v) {
        MultiIndex up = alpha[k];
        ++up[v];
        const int d = up[0] + up[1] + up[2];
        raise[k][v] = d <= kMaxJetOrder ? flat[up[0]][up[1]][up[2]] : -1;
      }
    }
  }
};

inline const JetTables& jet_tables() {
  static const JetTables tables;
  return tables;
}

}  // namespace detail

/// Truncated Taylor expansion of a scalar field at a chart point.
///
/// Binary operators between jets of different orders return a jet of the
/// smaller order (the common truncation). A default-constructed jet is the
/// zero jet of maximal order, which is neutral under that rule.
class Jet {
public:
  Jet() : order_(kMaxJetOrder) { c_.fill(0.0); }

  static Jet constant(double value, int order) {
    check_order(order);
    Jet j;
    j.order_ = order;
    j.c_[0] = value;
    return j;
  }

  /// Coordinate function u_axis (axis in 0..2) expanded at `value`.
  static Jet variable(int axis, double value, int order) {
    if (axis < 0 || axis >= kJetVariables)
      throw OrderError("variable axis " + std::to_string(axis) + " outside 0..2");
    Jet j = constant(value, order);
    if (order >= 1) j.c_[1 + axis] = 1.0;
    return j;
  }

  int order() const noexcept { return order_; }
  int size() const noexcept { return jet_size(order_); }
  double value() const noexcept { return c_[0]; }

  double operator[](int flat) const noexcept { return c_[flat]; }
  double& operator[](int flat) noexcept { return c_[flat]; }

  /// Normalized coefficient d^alpha f / alpha!; zero beyond the order.
  double coeff(const MultiIndex& alpha) const {
    const int d = alpha[0] + alpha[1] + alpha[2];
    if (alpha[0] < 0 || alpha[1] < 0 || alpha[2] < 0) throw OrderError("negative multi-index");
    if (d > order_) return 0.0;
    return c_[detail::jet_tables().flat[alpha[0]][alpha[1]][alpha[2]]];
  }

  /// Raw partial derivative d^alpha f(p).
  double partial(const MultiIndex& alpha) const {
    double fact = 1.0;
    for (int v = 0; v < 3; ++v)
      for (int k = 2; k <= alpha[v]; ++k) fact *= k;
    return coeff(alpha) * fact;
  }

  Jet truncated(int order) const {
    check_order(order);
    if (order > order_) throw OrderError("cannot raise a jet's order by truncation");
    Jet j = *this;
    j.order_ = order;
    for (int k = jet_size(order); k < kJetCapacity; ++k) j.c_[k] = 0.0;
    return j;
  }

  /// Exact partial derivative along chart axis; the result has order - 1.
  Jet derivative(int axis) const {
    if (order_ == 0) throw InsufficientOrder("derivative of an order-0 jet");
    const auto& t = detail::jet_tables();
    Jet r;
    r.order_ = order_ - 1;
    const int n = jet_size(r.order_);
    for (int k = 0; k < n; ++k) {
      const int up = t.raise[k][axis];
      r.c_[k] = static_cast<double>(t.alpha[k][axis] + 1) * c_[up];
    }
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    for (int k = 0; k < size(); ++k) r.c_[k] = -c_[k];
    return r;
  }

  Jet& operator+=(const Jet& b) { return *this = *this + b; }
  Jet& operator-=(const Jet& b) { return *this = *this - b; }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }
  Jet& operator/=(const Jet& b) { return *this = *this / b; }
  Jet& operator+=(double s) { c_[0] += s; return *this; }
  Jet& operator-=(double s) { c_[0] -= s; return *this; }
  Jet& operator*=(double s) {
    for (int k = 0; k < size(); ++k) c_[k] *= s;
    return *this;
  }
  Jet& operator/=(double s) { return *this *= 1.0 / s; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    r.order_ = std::min(a.order_, b.order_);
    for (int k = 0; k < r.size(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    r.order_ = std::min(a.order_, b.order_);
    for (int k = 0; k < r.size(); ++k) r.c_[k] = a.c_[k] - b.c_[k];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    const auto& t = detail::jet_tables();
    Jet r;
    r.order_ = std::min(a.order_, b.order_);
    const int np = t.sym_pairs_upto[r.order_];
    const auto* p = t.sym_pairs.data();
    for (int q = 0; q < np; ++q) {
      const int i = p[q][0], j = p[q][1];
      r.c_[p[q][2]] += i == j ? a.c_[i] * b.c_[i] : a.c_[i] * b.c_[j] + a.c_[j] * b.c_[i];
    }
    return r;
  }
  /// Solves b * q = a coefficient by coefficient in increasing degree.
  friend Jet operator/(const Jet& a, const Jet& b) {
    const double b0 = b.c_[0];
    if (b0 == 0.0 || !std::isfinite(b0)) throw SingularJet("division by a jet with zero constant term");
    const auto& t = detail::jet_tables();
    Jet q;
    q.order_ = std::min(a.order_, b.order_);
    const int n = q.size();
    for (int k = 0; k < n; ++k) {
      double s = a.c_[k];
      // Triples of target k with i = 0 pair b_0 with q_k itself; skip it.
      for (int e = t.target_begin[k]; e < t.target_begin[k + 1]; ++e) {
        const auto& tr = t.pairs[e];
        if (tr[0] != 0) s -= b.c_[tr[0]] * q.c_[tr[1]];
      }
      q.c_[k] = s / b0;
    }
    return q;
  }

  friend Jet operator+(Jet a, double s) { a.c_[0] += s; return a; }
  friend Jet operator+(double s, Jet a) { a.c_[0] += s; return a; }
  friend Jet operator-(Jet a, double s) { a.c_[0] -= s; return a; }
  friend Jet operator-(double s, const Jet& a) { Jet r = -a; r.c_[0] += s; return r; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
  friend Jet operator/(double s, const Jet& a) { return Jet::constant(s, a.order_) / a; }

private:
  static void check_order(int order) {
    if (order < 0 || order > kMaxJetOrder)
      throw OrderError("jet order " + std::to_string(order) + " outside 0.." +
                       std::to_string(kMaxJetOrder));
  }

  int order_;
  std::array<double, kJetCapacity> c_;
};

/// Applies a univariate function given its normalized Taylor coefficients
/// taylor[k] = f^(k)(a0) / k! at the jet's constant term a0.
inline Jet compose_taylor(const Jet& a, const std::array<double, kMaxJetOrder + 1>& taylor) {
  Jet h = a;
  h[0] = 0.0;
  Jet result = Jet::constant(taylor[0], a.order());
  Jet power = h;
  for (int k = 1; k <= a.order(); ++k) {
    result += taylor[k] * power;
    if (k < a.order()) power = power * h;
  }
  return result;
}

inline Jet sqrt(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw DomainError("sqrt of a jet with non-positive constant term " + std::to_string(a0));
  std::array<double, kMaxJetOrder + 1> t{};
  // binom(1/2, k) * a0^(1/2 - k)
  double binom = 1.0;
  double pw = std::sqrt(a0);
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    t[k] = binom * pw;
    binom *= (0.5 - k) / (k + 1);
    pw /= a0;
  }
  return compose_taylor(a, t);
}

inline Jet exp(const Jet& a) {
  std::array<double, kMaxJetOrder + 1> t{};
  const double e = std::exp(a.value());
  double fact = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    if (k > 0) fact *= k;
    t[k] = e / fact;
  }
  return compose_taylor(a, t);
}

namespace detail {
// k-th derivative of sin at a0, divided by k!; shift = 0 for sin, 1 for cos.
inline std::array<double, kMaxJetOrder + 1> trig_taylor(double a0, int shift) {
  std::array<double, kMaxJetOrder + 1> t{};
  const double s = std::sin(a0), c = std::cos(a0);
  const double cycle[4] = {s, c, -s, -c};
  double fact = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    if (k > 0) fact *= k;
    t[k] = cycle[(k + shift) % 4] / fact;
  }
  return t;
}
}  // namespace detail

inline Jet sin(const Jet& a) { return compose_taylor(a, detail::trig_taylor(a.value(), 0)); }
inline Jet cos(const Jet& a) { return compose_taylor(a, detail::trig_taylor(a.value(), 1)); }

/// Integer power by repeated squaring; negative exponents divide.
inline Jet pow(const Jet& a, int k) {
  if (k < 0) return 1.0 / pow(a, -k);
  Jet result = Jet::constant(1.0, a.order());
  Jet base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

inline Jet square(const Jet& a) { return a * a; }
inline double square(double a) { return a * a; }

enum class JetOp { add, sub, mul, div };

/// Checked binary arithmetic: both operands must carry the same order.
inline Jet jet_arith(const Jet& a, const Jet& b, JetOp op) {
  if (a.order() != b.order())
    throw OrderError("jet orders differ: " + std::to_string(a.order()) + " vs " +
                     std::to_string(b.order()));
  switch (op) {
    case JetOp::add: return a + b;
    case JetOp::sub: return a - b;
    case JetOp::mul: return a * b;
    case JetOp::div: return a / b;
  }
  return a;
}

/// Constant term of a jet; identity on plain reals. Lets generic code read values.
// Generic evaluators call these unqualified for both doubles and jets.
using std::cos;
using std::exp;
using std::sin;
using std::sqrt;

inline double value_of(const Jet& a) { return a.value(); }
inline double value_of(double a) { return a; }

}  // namespace ddvv
