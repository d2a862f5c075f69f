#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace conelab {

/// Shared per-(nvars, order) tables: monomial enumeration in graded
/// lexicographic order, index lookup, and the precomputed convolution
/// triples used by multiplication. Built once, cached for the process.
struct JetTable {
  int nvars = 0;
  int order = 0;
  std::vector<std::vector<int>> monomials;  // exponent vectors, graded lex
  std::vector<int> degree;                  // total degree per monomial
  std::vector<double> factorial;            // alpha! per monomial
  std::vector<std::array<std::uint32_t, 3>> prod;  // (ia, ib, iout)
  std::vector<std::vector<std::uint32_t>> up;  // per var: index of alpha+e_v (NPOS if out of range)
  std::vector<std::int32_t> radix;  // mixed-radix (order+1)^nvars lookup

  static constexpr std::uint32_t NPOS = 0xffffffffu;

  std::size_t size() const { return monomials.size(); }
  int index_of(std::span<const int> alpha) const;  // -1 if degree > order

  static const JetTable& get(int nvars, int order);
};

/// Truncated multivariate Taylor expansion of a scalar function about a
/// fixed base point, in `nvars` displacement variables up to total degree
/// `order`. Arithmetic is exact truncated polynomial algebra, so the
/// coefficients *are* the (scaled) partial derivatives: no finite
/// differencing anywhere downstream.
class Jet {
 public:
  Jet() = default;
  Jet(int nvars, int order);  // zero jet

  static Jet constant(double c, int nvars, int order);
  /// Jet of the coordinate function x_index about value `value`.
  static Jet variable(double value, int index, int nvars, int order);

  int nvars() const { return table_ ? table_->nvars : 0; }
  int order() const { return table_ ? table_->order : 0; }
  bool empty() const { return table_ == nullptr; }

  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  double coeff(std::span<const int> alpha) const;
  /// Partial derivative of the underlying function at the base point,
  /// i.e. coeff(alpha) * alpha!.
  double derivative(std::span<const int> alpha) const;

  std::span<const double> coeffs() const { return c_; }
  double& raw(std::size_t i) { return c_[i]; }

  /// Truncation to a lower order (same variables).
  Jet truncated(int new_order) const;
  /// Re-embed into a larger variable set: variable i becomes variable
  /// i + var_offset. Order preserved.
  Jet embedded(int new_nvars, int var_offset) const;
  /// Formal partial derivative; order drops by one.
  Jet partial(int var) const;
  /// Formal antiderivative in `var` with vanishing constant term; terms
  /// that would exceed `order` are dropped.
  Jet antiderivative(int var) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator+=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
  friend Jet operator/(double s, const Jet& b);

  /// Composition with an analytic outer function given by its Taylor
  /// coefficients a_k about this jet's value: sum a_k (f - f0)^k.
  Jet compose_outer(std::span<const double> outer) const;

  friend Jet inverse(const Jet& f);  // 1/f, requires f.value() != 0
  friend Jet exp(const Jet& f);
  friend Jet log(const Jet& f);
  friend Jet sqrt(const Jet& f);
  friend Jet sin(const Jet& f);
  friend Jet cos(const Jet& f);
  friend Jet pow(const Jet& f, double p);

  /// max |coeff| over all stored coefficients.
  double max_abs() const;

 private:
  Jet(const JetTable* t) : table_(t), c_(t->size(), 0.0) {}
  const JetTable* table_ = nullptr;
  std::vector<double> c_;
};

}  // namespace conelab
