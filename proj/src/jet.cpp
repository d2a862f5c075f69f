#include "conelab/jet.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace conelab {

namespace {

// All exponent vectors of total degree exactly d, lexicographic.
void monomials_of_degree(int nvars, int d, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == nvars - 1) {
    cur.push_back(d);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur.push_back(k);
    monomials_of_degree(nvars, d - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

int JetTable::index_of(std::span<const int> alpha) const {
  int d = 0;
  for (int a : alpha) d += a;
  if (d > order) return -1;
  std::size_t key = 0;
  for (int v = 0; v < nvars; ++v) key = key * (order + 1) + alpha[v];
  return radix[key];
}

const JetTable& JetTable::get(int nvars, int order) {
  if (nvars < 0 || order < 0) throw std::invalid_argument("jet: bad table shape");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetTable>> cache;
  std::scoped_lock lock(mu);
  auto key = std::make_pair(nvars, order);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  auto t = std::make_unique<JetTable>();
  t->nvars = nvars;
  t->order = order;
  if (nvars == 0) {
    t->monomials.push_back({});
    t->degree.push_back(0);
    t->factorial.push_back(1.0);
    t->prod.push_back({0, 0, 0});
    t->radix.assign(1, 0);
    const JetTable& ref = *t;
    cache[key] = std::move(t);
    return ref;
  }
  std::vector<int> cur;
  for (int d = 0; d <= order; ++d)
    monomials_of_degree(nvars, d, cur, t->monomials);
  const std::size_t n = t->monomials.size();
  std::size_t radix_size = 1;
  for (int v = 0; v < nvars; ++v) radix_size *= (order + 1);
  t->radix.assign(radix_size, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t key = 0;
    for (int v = 0; v < nvars; ++v) key = key * (order + 1) + t->monomials[i][v];
    t->radix[key] = static_cast<std::int32_t>(i);
  }
  t->degree.resize(n);
  t->factorial.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int d = 0;
    double f = 1.0;
    for (int a : t->monomials[i]) {
      d += a;
      for (int k = 2; k <= a; ++k) f *= k;
    }
    t->degree[i] = d;
    t->factorial[i] = f;
  }
  t->up.assign(nvars, std::vector<std::uint32_t>(n, NPOS));
  std::vector<int> tmp(nvars);
  for (std::size_t i = 0; i < n; ++i) {
    if (t->degree[i] + 1 > order) continue;
    for (int v = 0; v < nvars; ++v) {
      tmp = t->monomials[i];
      ++tmp[v];
      t->up[v][i] = static_cast<std::uint32_t>(t->index_of(tmp));
    }
  }
  for (std::size_t ia = 0; ia < n; ++ia) {
    for (std::size_t ib = 0; ib < n; ++ib) {
      if (t->degree[ia] + t->degree[ib] > order) continue;
      for (int v = 0; v < nvars; ++v) tmp[v] = t->monomials[ia][v] + t->monomials[ib][v];
      int io = t->index_of(tmp);
      t->prod.push_back({static_cast<std::uint32_t>(ia), static_cast<std::uint32_t>(ib),
                         static_cast<std::uint32_t>(io)});
    }
  }
  const JetTable& ref = *t;
  cache[key] = std::move(t);
  return ref;
}

Jet::Jet(int nvars, int order) : Jet(&JetTable::get(nvars, order)) {}

Jet Jet::constant(double c, int nvars, int order) {
  Jet j(nvars, order);
  j.c_[0] = c;
  return j;
}

Jet Jet::variable(double value, int index, int nvars, int order) {
  if (index < 0 || index >= nvars) throw std::invalid_argument("jet: variable index");
  Jet j(nvars, order);
  j.c_[0] = value;
  if (order >= 1) {
    std::vector<int> e(nvars, 0);
    e[index] = 1;
    j.c_[j.table_->index_of(e)] = 1.0;
  }
  return j;
}

double Jet::coeff(std::span<const int> alpha) const {
  int i = table_->index_of(alpha);
  return i < 0 ? 0.0 : c_[i];
}

double Jet::derivative(std::span<const int> alpha) const {
  int i = table_->index_of(alpha);
  return i < 0 ? 0.0 : c_[i] * table_->factorial[i];
}

Jet Jet::truncated(int new_order) const {
  if (new_order >= order()) return *this;
  Jet r(nvars(), new_order);
  // Graded ordering: the smaller table's monomials are a prefix of ours.
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = c_[i];
  return r;
}

Jet Jet::embedded(int new_nvars, int var_offset) const {
  if (var_offset < 0 || nvars() + var_offset > new_nvars)
    throw std::invalid_argument("jet: bad embedding");
  Jet r(new_nvars, order());
  std::vector<int> alpha(new_nvars, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0) continue;
    std::fill(alpha.begin(), alpha.end(), 0);
    for (int v = 0; v < nvars(); ++v) alpha[v + var_offset] = table_->monomials[i][v];
    r.c_[r.table_->index_of(alpha)] = c_[i];
  }
  return r;
}

Jet Jet::partial(int var) const {
  if (order() == 0 || var < 0 || var >= nvars())
    throw std::invalid_argument("jet: partial out of range");
  Jet r(nvars(), order() - 1);
  for (std::size_t i = 0; i < r.c_.size(); ++i) {
    std::uint32_t j = table_->up[var][i];
    r.c_[i] = c_[j] * (table_->monomials[j][var]);
  }
  return r;
}

Jet Jet::antiderivative(int var) const {
  if (var < 0 || var >= nvars())
    throw std::invalid_argument("jet: antiderivative out of range");
  Jet r(nvars(), order());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0 || table_->degree[i] >= order()) continue;
    std::uint32_t j = table_->up[var][i];
    r.c_[j] += c_[i] / (table_->monomials[j][var]);
  }
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& x : r.c_) x = -x;
  return r;
}

namespace {
void check_same(const JetTable* a, const JetTable* b) {
  if (a != b) throw std::invalid_argument("jet: mixed tables (nvars/order mismatch)");
}
}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  check_same(table_, o.table_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_same(table_, o.table_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_same(a.table_, b.table_);
  Jet r(a.table_);
  for (const auto& [ia, ib, io] : a.table_->prod) r.c_[io] += a.c_[ia] * b.c_[ib];
  return r;
}

Jet Jet::compose_outer(std::span<const double> outer) const {
  // Horner evaluation of sum_k outer[k] w^k, w = *this - value().
  Jet w = *this;
  w.c_[0] = 0.0;
  Jet r = Jet::constant(outer.empty() ? 0.0 : outer.back(), nvars(), order());
  for (int k = static_cast<int>(outer.size()) - 2; k >= 0; --k) {
    r = r * w;
    r.c_[0] += outer[k];
  }
  return r;
}

Jet inverse(const Jet& f) {
  double c = f.value();
  if (c == 0.0) throw std::invalid_argument("jet: inverse at zero");
  std::vector<double> outer(f.order() + 1);
  double p = 1.0 / c;
  for (int k = 0; k <= f.order(); ++k) {
    outer[k] = p;          // (-1)^k / c^{k+1}
    p *= -1.0 / c;
  }
  return f.compose_outer(outer);
}

Jet operator/(const Jet& a, const Jet& b) { return a * inverse(b); }
Jet operator/(double s, const Jet& b) { return inverse(b) * s; }

Jet exp(const Jet& f) {
  std::vector<double> outer(f.order() + 1);
  double e = std::exp(f.value());
  double fk = 1.0;
  for (int k = 0; k <= f.order(); ++k) {
    outer[k] = e / fk;
    fk *= (k + 1);
  }
  return f.compose_outer(outer);
}

Jet log(const Jet& f) {
  double c = f.value();
  if (c <= 0.0) throw std::invalid_argument("jet: log of non-positive value");
  std::vector<double> outer(f.order() + 1);
  outer[0] = std::log(c);
  double p = 1.0 / c;
  for (int k = 1; k <= f.order(); ++k) {
    outer[k] = (k % 2 ? p : -p) / k;
    p /= c;
  }
  return f.compose_outer(outer);
}

Jet sqrt(const Jet& f) { return pow(f, 0.5); }

Jet pow(const Jet& f, double p) {
  double c = f.value();
  if (c <= 0.0) throw std::invalid_argument("jet: pow of non-positive base");
  std::vector<double> outer(f.order() + 1);
  double coef = std::pow(c, p);
  for (int k = 0; k <= f.order(); ++k) {
    outer[k] = coef;
    coef *= (p - k) / ((k + 1) * c);  // binomial series term ratio
  }
  return f.compose_outer(outer);
}

Jet sin(const Jet& f) {
  std::vector<double> outer(f.order() + 1);
  double s = std::sin(f.value()), c = std::cos(f.value());
  double fk = 1.0;
  static const double cycle_s[4] = {1, 0, -1, 0}, cycle_c[4] = {0, 1, 0, -1};
  for (int k = 0; k <= f.order(); ++k) {
    outer[k] = (s * cycle_s[k % 4] + c * cycle_c[k % 4]) / fk;
    fk *= (k + 1);
  }
  return f.compose_outer(outer);
}

Jet cos(const Jet& f) {
  std::vector<double> outer(f.order() + 1);
  double s = std::sin(f.value()), c = std::cos(f.value());
  double fk = 1.0;
  static const double cycle_c[4] = {1, 0, -1, 0}, cycle_s[4] = {0, -1, 0, 1};
  for (int k = 0; k <= f.order(); ++k) {
    outer[k] = (c * cycle_c[k % 4] + s * cycle_s[k % 4]) / fk;
    fk *= (k + 1);
  }
  return f.compose_outer(outer);
}

double Jet::max_abs() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace conelab
