#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "conelab/expression.hpp"
#include "conelab/jet.hpp"
#include "conelab/pseudo_linear.hpp"

namespace conelab {

/// Dense multi-dimensional array of doubles, all axes the same length n.
struct NdArray {
  int n = 0;
  int rank = 0;
  std::vector<double> a;

  NdArray() = default;
  NdArray(int n_, int rank_) : n(n_), rank(rank_) {
    std::size_t sz = 1;
    for (int i = 0; i < rank; ++i) sz *= n;
    a.assign(sz, 0.0);
  }
  std::size_t flat(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int i : idx) f = f * n + i;
    return f;
  }
  double& at(std::span<const int> idx) { return a[flat(idx)]; }
  double at(std::span<const int> idx) const { return a[flat(idx)]; }
  double& operator()(std::initializer_list<int> idx) { return a[flat(idx)]; }
  double operator()(std::initializer_list<int> idx) const { return a[flat(idx)]; }
  double max_abs() const {
    double m = 0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
  }
};

/// Same shape conventions, jet entries.
struct NdJet {
  int n = 0;
  int rank = 0;
  std::vector<Jet> a;

  NdJet() = default;
  NdJet(int n_, int rank_, const Jet& zero) : n(n_), rank(rank_) {
    std::size_t sz = 1;
    for (int i = 0; i < rank; ++i) sz *= n;
    a.assign(sz, zero);
  }
  std::size_t flat(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int i : idx) f = f * n + i;
    return f;
  }
  Jet& at(std::span<const int> idx) { return a[flat(idx)]; }
  const Jet& at(std::span<const int> idx) const { return a[flat(idx)]; }
  Jet& operator()(std::initializer_list<int> idx) { return a[flat(idx)]; }
  const Jet& operator()(std::initializer_list<int> idx) const {
    return a[flat(idx)];
  }
  NdArray values() const {
    NdArray v(n, rank);
    for (std::size_t i = 0; i < a.size(); ++i) v.a[i] = a[i].value();
    return v;
  }
};

/// Coordinate chart of a pseudo-Riemannian metric: evaluates the matrix of
/// metric components as jets about any point of the domain box.
struct MetricChart {
  int dim = 0;
  Signature signature;
  std::vector<std::string> coord_names;
  std::vector<std::pair<double, double>> domain;  // closed box per coordinate
  std::string label;
  /// Returns dim*dim jets (row-major, symmetric) about p at the given order.
  std::function<std::vector<Jet>(const Eigen::VectorXd&, int)> components;

  bool in_domain(const Eigen::VectorXd& p) const;
};

/// Vector field on a chart: components as jets about a point.
struct VectorField {
  int dim = 0;
  std::function<std::vector<Jet>(const Eigen::VectorXd&, int)> components;

  /// Constant coordinate field e_i.
  static VectorField coordinate(int dim, int index);
};

/// Point data of the Levi-Civita connection and the covariant derivatives
/// of curvature up to max_order, produced by exact jet arithmetic.
///
/// Layout: christoffel[k][i][j] = Gamma^k_ij;
/// derivs[q] has q+4 axes [m1..mq][l][i][j][c]: the partial_l component of
/// (nabla_{m1} ... nabla_{mq} R)(partial_i, partial_j) partial_c, with
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
struct CurvatureJet {
  Eigen::VectorXd point;
  int dim = 0;
  Eigen::MatrixXd metric;
  Eigen::MatrixXd metric_inv;
  NdArray christoffel;
  std::vector<NdArray> derivs;
  std::vector<Jet> metric_jets;  // order max_order + 2
  NdJet christoffel_jets;        // order max_order + 1
};

CurvatureJet curvature_jet(const MetricChart& chart, const Eigen::VectorXd& p,
                           int max_order);

/// Ric(X,Y) = tr(Z -> R(Z,X)Y).
Eigen::MatrixXd ricci(const CurvatureJet& cj);

struct CurvatureInvariants {
  double first_bianchi;
  double second_bianchi;  // NaN when derivs has no order-1 entry
  double metricity;       // max |nabla g|
  double lower_antisymmetry;
};
CurvatureInvariants curvature_invariants(const CurvatureJet& cj);

/// max |R^l_ijc - kappa (g_jc d^l_i - g_ic d^l_j)| at p.
double constant_curvature_residual(const MetricChart& chart,
                                   const Eigen::VectorXd& p, double kappa);

/// max |nabla xi - a Id| at p.
double homothety_residual(const MetricChart& chart, const VectorField& xi,
                          const Eigen::VectorXd& p, double a);

/// Christoffel values only (cheap; order-1 jets), for transport loops.
NdArray christoffel_values(const MetricChart& chart, const Eigen::VectorXd& p);

/// Deterministic low-discrepancy sample of the domain box.
std::vector<Eigen::VectorXd> sample_grid(const MetricChart& chart, int count,
                                         std::uint64_t seed);

/// Eigenvalue sign count of the metric at p.
Signature signature_at(const MetricChart& chart, const Eigen::VectorXd& p);

// --- catalog -------------------------------------------------------------

MetricChart flat_chart(int t, int s);
MetricChart sphere_chart(int n);
MetricChart hyperbolic_chart(int n);
/// g = 2 dx dz + 2 f(y, z) dz^2 + sum_i (dy^i)^2, coords (x, y1..ym, z).
MetricChart pp_wave_chart(int m, const Expression& profile, std::string label);
/// Profile coefficient on dz^2 equal to sum_ij S_ij y^i y^j (S symmetric,
/// det S != 0).
MetricChart cahen_wallach_chart(const Eigen::MatrixXd& S);
/// Profile coefficient on dz^2 equal to e^z y^2 (one transverse direction).
MetricChart plane_wave_exp_chart();
/// Profile coefficient 2xy on dz^2: carries a strictly recurrent (non
/// parallel) null coordinate field, used as a negative-control base.
MetricChart recurrent_wave_chart();
/// Chart from an expression-grammar JSON document (see docs/charts.md).
MetricChart custom_chart_from_json(const std::string& json_text);

/// Catalog lookup by id: flat{T}_{S}, sphere{N}, hyperbolic{N},
/// cahen_wallach, plane_wave_exp, pp_wave_sq2, recurrent_wave, or a path to
/// a JSON chart document.
MetricChart base_chart_by_id(const std::string& id);

}  // namespace conelab
