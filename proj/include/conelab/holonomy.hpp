#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "conelab/chart.hpp"
#include "conelab/lie_matrix.hpp"

namespace conelab {

/// Bracket-closed span of metric-skew endomorphisms of the tangent space
/// at a point, in coordinate components.
struct EndoSpan {
  Eigen::VectorXd point;
  Eigen::MatrixXd metric;  // ambient metric components at the point
  std::vector<Eigen::MatrixXd> basis;
  int generation_order = 0;
  bool converged = false;  // dimension already stable one order earlier
  double tol = 1e-8;

  int dim() const { return static_cast<int>(basis.size()); }
};

/// Lie closure of the curvature-derivative endomorphisms
/// (nabla^k R)(e_a, e_b), k <= max_order, over the coordinate frame at p.
/// jet_order is the analytic budget backing the computation; it defaults
/// to (and must be at least) max_order + 3.
EndoSpan ambrose_singer_span(const MetricChart& chart, const Eigen::VectorXd& p,
                             int max_order, double tol = 1e-8,
                             int jet_order = -1);

/// One smooth piece of a path: position and velocity over t in [0, 1].
struct PathSegment {
  std::function<Eigen::VectorXd(double)> curve;
  std::function<Eigen::VectorXd(double)> velocity;
};

/// Piecewise-smooth path; consecutive endpoints must chain and a closed
/// path must return to its start (coordinate residual below 1e-12).
struct PathSpec {
  std::vector<PathSegment> segments;
  bool closed = false;

  static PathSpec make(std::vector<PathSegment> segments, bool closed);
  /// Straight edges through the listed vertices; a closed polygon gains
  /// the returning edge automatically.
  static PathSpec polygon(const std::vector<Eigen::VectorXd>& vertices,
                          bool closed);
};

/// Transport matrix in coordinate components along the path: solves
/// X' = -Gamma(gamma') X with fixed-step RK4 (`steps` per segment).
/// Leaving the chart domain or drifting off the metric (residual of
/// P^T g P - g above 1e-7) raises an integration error.
Eigen::MatrixXd parallel_transport(const MetricChart& chart,
                                   const PathSpec& path, int steps = 4096);

/// Principal logarithm of a matrix near the identity: Denman-Beavers
/// square roots until the argument is small, then a plain Taylor series.
Eigen::MatrixXd matrix_log_near_identity(const Eigen::MatrixXd& p);

struct LoopCurvatureCheck {
  int axis_a = 0;
  int axis_b = 0;
  double side = 0;
  Eigen::MatrixXd log_over_h2;
  Eigen::MatrixXd expected;  // -R(e_a, e_b) at the base point
  double residual = 0;
};

/// Coordinate parallelogram loops of the given sides in every coordinate
/// plane through p; log(P)/h^2 approaches -R(e_a, e_b) to first order in
/// the side length.
std::vector<LoopCurvatureCheck> loop_curvature_battery(
    const MetricChart& chart, const Eigen::VectorXd& p,
    const std::vector<double>& sides, int steps = 1024);

/// Holonomy span from transport alone: logs of parallelogram loops at p
/// and of lasso loops conjugated through displaced base points. Each log
/// is an exact holonomy element up to integration error, so the Lie
/// closure recovers the algebra without any curvature jets.
EndoSpan loop_generated_span(const MetricChart& chart, const Eigen::VectorXd& p,
                             double side = 0.1, double displacement = 0.15,
                             int steps = 1024, double tol = 1e-6);

struct SpanComparison {
  int dim_a = 0;
  int dim_b = 0;
  double distance = 1;  // projector distance between the two spans
  bool a_in_b = false;
  bool b_in_a = false;
};
SpanComparison compare_endo_sets(const std::vector<Eigen::MatrixXd>& a,
                                 const std::vector<Eigen::MatrixXd>& b,
                                 double tol);

/// Block decomposition of an endomorphism of a doubled chart (coordinates
/// u, v, base...) that kills the parallel coordinate direction d_v: the
/// base-block so-part and the translation column paired against d_u.
/// residual measures the entries forced to vanish by that layout.
struct SplitEndo {
  Eigen::MatrixXd so_part;
  Eigen::VectorXd translation;
  double residual = 0;
};
SplitEndo split_doubled_endo(const Eigen::MatrixXd& m);

struct StabilizerAnalysis {
  bool stabilises = false;
  double annihilation_residual = 0;
  MatrixAlgebra linear_part;   // acting on V0 coordinates of the frame
  SubspaceBasis translations;  // V0 coordinates
  std::optional<SubspaceBasis> decomposable_witness;  // ambient coordinates
  std::optional<SubspaceBasis> null_line;             // ambient coordinates
};

/// Reads a span inside the annihilator of the frame's e- as linear part
/// plus translational ideal and runs the invariant-subspace probes.
/// Always returns a record; a span that moves e- is only diagnosed.
StabilizerAnalysis stabilizer_analysis(const EndoSpan& span,
                                       const NullFrame& frame);

/// Reference two-matrix span for the holonomy of the doubled exponential
/// plane wave, in coordinate components (u, v, x, y, z), valid at points
/// with y = 0. Catalog checks compare computed spans against it.
std::vector<Eigen::MatrixXd> doubled_plane_wave_reference_span();

}  // namespace conelab
