#pragma once

#include <cstdint>

#include "conelab/chart.hpp"

namespace conelab {

/// (r, base): -dr^2 + r^2 g on r in [0.1, 2]. Signature gains a timelike
/// direction.
MetricChart cone(const MetricChart& base);

/// (u, v, base): 2 du dv + u^2 g on u in [0.1, 2], v in [-1, 1]. Signature
/// gains one timelike and one spacelike direction.
MetricChart double_warped(const MetricChart& base);

/// (s, base): ds^2 + e^{2s} g on s in [-1, 1]. One extra spacelike
/// direction.
MetricChart exponential_extension(const MetricChart& base);

/// Composable chart lookup: accepts every base_chart_by_id id plus the
/// recursive prefixes cone:, doubled:, exp: (e.g. "cone:exp:flat0_1").
MetricChart chart_by_id(const std::string& id);

/// Residuals, at the cone point (r=1, p), of the closed forms tying the
/// cone's Levi-Civita data to the base's:
///   connection: Christoffel symbols against Gamma^r_ij = r g_ij,
///     Gamma^k_ri = (1/r) delta^k_i, base block unchanged, and the Euler
///     field r d/dr satisfying nabla(r d/dr) = Id;
///   curvature:  R_cone(X,Y)Z = R(X,Y)Z + g(Y,Z)X - g(X,Z)Y with every
///     r-indexed component zero;
///   ricci:      Ric_cone = Ric + (n-1) g bordered by zeros.
struct ConeIdentityResiduals {
  double connection = 0;
  double curvature = 0;
  double ricci = 0;
  double max() const;
};
ConeIdentityResiduals cone_identity_residuals(const MetricChart& base,
                                              const Eigen::VectorXd& p);

/// Residual of the coordinate map (r, s, x) -> (u = stretch r e^s,
/// v = -r e^{-s}/2, x) as an isometry from the cone over the exponential
/// extension of `base` onto the doubled chart of `base`: max-norm of
/// (pullback of the doubled metric) minus (source metric) at p, with the
/// differential taken from order-1 jets. stretch = 1 is the isometry;
/// other values quantify detector sensitivity.
double doubling_isometry_residual(const MetricChart& base,
                                  const Eigen::VectorXd& p,
                                  double stretch = 1.0);

/// Compares jet-computed covariant derivatives of the doubled chart's
/// curvature against their closed form in base data. For q derivatives in
/// the u-direction (outermost) followed by p base directions, the
/// component form is
///   c(p,q)/u^q * [ (nabla^p R)(X,Y)Z
///                  - u sum_i (nabla^{p-1}_{omit i} R)(X,Y,Z,X_i) d/dv ]
/// with c(p,0) = 1 and c(p,q) = (-1)^q (p+2)(p+3)...(p+q+1); every other
/// component vanishes. Also checks that the u-derivative commutes past one
/// base derivative. Returns the max residual over all p <= pmax,
/// q <= qmax and all index combinations. `p` is a point of the doubled
/// chart. Requires pmax + qmax + 3 <= jet_order.
double doubled_derivative_residuals(const MetricChart& base,
                                    const Eigen::VectorXd& p, int pmax,
                                    int qmax, int jet_order);

/// A vector field built on the doubled chart from base data.
struct LiftedField {
  enum class Kind { parallel_vector, null_plane, distribution };
  Kind kind = Kind::parallel_vector;
  VectorField base_field;   // on the base chart
  VectorField total_field;  // on the doubled chart
};

/// Lift of a homothetic gradient field: given xi with nabla xi = a Id and
/// xi^flat = dF, returns F d/dv + (1/u) xi - a d/du, which is parallel on
/// the doubled chart. Both hypotheses are verified on the deterministic
/// 32-point grid (residuals < 1e-8) before construction; a violation
/// raises std::invalid_argument naming the offending point.
LiftedField lift_parallel_vector(const MetricChart& base,
                                 const VectorField& xi,
                                 const Expression& potential, double a);

/// Lift of a null recurrent gradient field chi (nabla chi = alpha (x) chi,
/// g(chi,chi) = 0, chi^flat = dF): returns F d/dv + (1/u) chi. Together
/// with d/dv it spans a totally null plane that parallel transport
/// preserves. Hypotheses are grid-checked as above.
LiftedField lift_recurrent_vector(const MetricChart& base,
                                  const VectorField& chi,
                                  const Expression& potential);

/// Lift d/dv + (1/u) W of a single spanning field of a base distribution.
/// No hypotheses are checked; parallelness of the resulting span is for
/// the caller to measure.
LiftedField lift_distribution_field(const MetricChart& base,
                                    const VectorField& w);

/// Max component, over all coordinate directions and both fields, of the
/// covariant derivative's part outside span{a, b}, projected with the
/// auxiliary Euclidean inner product (the spans of interest are totally
/// null, so metric projection is unavailable). Throws if the fields are
/// linearly dependent at p.
double parallel_plane_residual(const MetricChart& chart, const VectorField& a,
                               const VectorField& b, const Eigen::VectorXd& p);

/// Pointwise recurrence data of a nowhere vanishing field chi: the 1-form
/// alpha minimizing |nabla chi - alpha (x) chi| in the least-squares
/// sense, the residual it achieves, and how far alpha is from being a
/// multiple of the metric dual chi^flat (relevant when chi is a gradient).
struct RecurrenceAnalysis {
  Eigen::VectorXd alpha;
  double residual = 0;
  double dual_proportionality = 0;
};
RecurrenceAnalysis recurrence_analysis(const MetricChart& chart,
                                       const VectorField& chi,
                                       const Eigen::VectorXd& p);

/// Least-squares feasibility probe for the first-order system
/// dh = (F + h) alpha on the base, the condition for xi-lift + h d/dv to
/// be recurrent on the doubled chart (alpha recovered pointwise from chi).
/// h ranges over polynomials of total degree <= poly_degree; the returned
/// value is the root-mean-square residual of the best candidate over the
/// sample grid. Values far above zero certify that no such field exists
/// within the family.
double recurrence_obstruction_residual(const MetricChart& base,
                                       const VectorField& chi,
                                       const Expression& potential,
                                       int poly_degree = 3,
                                       int grid_count = 32,
                                       std::uint64_t seed = 0);

}  // namespace conelab
