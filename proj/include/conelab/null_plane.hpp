#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "conelab/chart.hpp"

namespace conelab {

/// Scalar function evaluated in jet arithmetic. Each slot below documents
/// its own argument layout; arguments are always coordinate jets (the
/// i-th argument is jet variable i of the evaluation space).
using JetFunction = std::function<Jet(std::span<const Jet>)>;

/// Covector field as point data: components of a 1-form at p.
using CovectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Ingredients of the warped normal form
///     g = ds^2 + e^{-2s} g0(u) + 2 du eta
/// on coordinates (x^1..x^m, t, s, u), m = m0_dim. Argument layouts:
/// f1(u); f2(x, s, u); c[i](x, u); g0[i*m+j](x, u), symmetric;
/// eta_u(x, t, s, u), optional (empty means 0). `domain`, when non-empty,
/// overrides the default box x, t, s in [-1, 1], u in [0.1, 2].
struct NullPlaneData {
  int m0_dim = 0;
  JetFunction f1;
  JetFunction f2;
  std::vector<JetFunction> c;
  std::vector<JetFunction> g0;
  JetFunction eta_u;
  std::vector<std::pair<double, double>> domain;
  std::string label = "null_plane";
};

/// The 1-form eta = eta_t dt + eta_s ds + sum_i eta_x[i] dx^i + eta_u du.
/// Every slot takes the full coordinate jets (x, t, s, u). The defining
/// first-order system is
///   dt eta_t = ds eta_t = dx_i eta_t = 0,   dt eta_s = 2 eta_t,
///   dt eta_x[i] = 0,   ds eta_x[i] - dx_i eta_s = -2 eta_x[i].
struct EtaField {
  int m0_dim = 0;
  JetFunction eta_t;
  JetFunction eta_s;
  std::vector<JetFunction> eta_x;
  JetFunction eta_u;
};

/// General solution of the system: eta_t = f1(u), eta_s = 2t f1 + f2, and
/// eta_x[i] = e^{-2s}( c_i(x,u) + int_0^s e^{2r} dx_i f2(x,r,u) dr ), the
/// integral evaluated by Gauss-Legendre quadrature in jet arithmetic
/// (node count scales with |s|, 32 per unit). Rejects f1 with a zero on
/// the u-interval of the domain.
EtaField solve_eta(const NullPlaneData& data);

/// Max violation of the six defining equations over a deterministic
/// low-discrepancy grid of the chart domain.
double eta_system_residual(const NullPlaneData& data, const EtaField& eta,
                           int grid_count = 32);

/// Chart of g = ds^2 + e^{-2s} g0(u) + 2 du eta on (x, t, s, u). Verifies
/// non-degeneracy on a 32-point grid (eta_t != 0 makes the determinant
/// -eta_t^2 det g0 up to sign) and reports the signature.
MetricChart build_metric(const NullPlaneData& data, const EtaField& eta);

/// The distinguished frame of the normal form: V = d/dt, Z = d/ds, and the
/// covector fields
///   alpha = Z^flat + f_alpha V^flat,  f_alpha = dt(eta_u)/eta_t^2 - 2 eta_s/eta_t,
///   beta(V) = 2,  beta(Z) = ds(eta_s)/eta_t,
///   beta(X) = (X eta_s + ds eta(X) + 2 eta(X)) / (2 eta_t),
///   beta(du) = (ds(eta_u) - eta_s^2 + 2 eta_u)/eta_t.
struct NormalFormFrame {
  VectorField V;
  VectorField Z;
  CovectorField alpha;
  CovectorField beta;
};
NormalFormFrame normal_form_frame(const NullPlaneData& data,
                                  const EtaField& eta);

struct AlphaBeta {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  /// Max violation at p of nabla_X V = alpha(X) V + g(X,V) Z and
  /// nabla_X Z = -X + beta(X) V + g(X,Z) Z over coordinate directions X.
  double residual = 0;
};
AlphaBeta alpha_beta(const NullPlaneData& data, const EtaField& eta,
                     const Eigen::VectorXd& p);

/// Residuals of the structure equations of a null-unit frame pair at p:
///   d V^flat = (alpha - Z^flat) ^ V^flat
///   d Z^flat = beta ^ V^flat
///   [Z, V]   = (alpha(Z) - beta(V) + 1) V
///   L_V g    = 2 (alpha + Z^flat) . V^flat      (symmetric product)
///   L_Z g    = -2 g + 2 (Z^flat)^2 + 2 beta . V^flat
/// plus the scalar identity beta(V) - alpha(Z) - 1 = 0 that the
/// distinguished normalization satisfies. Lie derivatives are evaluated
/// as twice the symmetric part of nabla X^flat. Throws when the frame
/// fails g(V,V) = 0, g(Z,Z) = 1, g(V,Z) = 0 at p (residual > 1e-9).
struct FundamentalResiduals {
  double d_vflat = 0;
  double d_zflat = 0;
  double bracket = 0;
  double lie_v = 0;
  double lie_z = 0;
  double duality = 0;
  double frame = 0;  // the g(V,V), g(Z,Z)-1, g(V,Z) precondition residual
  double max() const;
};
FundamentalResiduals fundamental_residuals(const MetricChart& chart,
                                           const VectorField& V,
                                           const VectorField& Z,
                                           const CovectorField& alpha,
                                           const CovectorField& beta,
                                           const Eigen::VectorXd& p);

/// Rescale-and-shear frame change V' = e^f V, Z' = Z + h V with the
/// induced covectors alpha' = alpha + df - h V^flat and
/// beta' = e^{-f} (beta + h alpha + dh - h Z^flat - h^2 V^flat), under
/// which the structure equations above are covariant. The scalar identity
/// beta(V) = alpha(Z) + 1 survives exactly when V(h) = Z(f) + h V(f),
/// e.g. for f, h independent of t and s.
NormalFormFrame change_frame(const MetricChart& chart,
                             const NormalFormFrame& frame,
                             const Expression& f, const Expression& h);

/// Least-squares deviation of nabla_V V from a multiple of V at p.
double geodesic_residual(const MetricChart& chart, const VectorField& V,
                         const Eigen::VectorXd& p);

/// On the cone over the built chart, the plane spanned by V = d/dt and
/// W = r d/dr + d/ds is totally null and invariant under parallel
/// transport. `parallel` is the worst parallelness residual of that span
/// over a grid; `frame` the worst violation of g(V,V) = g(W,W) =
/// g(V,W) = 0 on the cone.
struct ConePlaneCheck {
  double parallel = 0;
  double frame = 0;
  double max() const { return parallel > frame ? parallel : frame; }
};
ConePlaneCheck cone_null_plane_check(const NullPlaneData& data,
                                     const EtaField& eta,
                                     int grid_count = 16);

/// eta with eta_t replaced by eta_t + amount * t, which breaks the first
/// equation of the defining system (detector sanity input).
EtaField corrupt_eta_t(const EtaField& eta, double amount);

/// Frame whose beta has `amount` added to one covector component
/// (detector sanity input; component indexed in chart coordinates).
NormalFormFrame corrupt_beta(const NormalFormFrame& frame, int component,
                             double amount);

/// Parses the JSON configuration format (shared expression grammar):
/// { "label"?, "m0_dim", "f1", "f2", "c"?: [..], "g0": [[..]],
///   "eta_u"?, "domain"?: [[lo,hi],..] }.
/// Expression variables per slot: f1 over (u); f2 over (x1..xm, s, u);
/// c and g0 over (x1..xm, u); eta_u over (x1..xm, t, s, u).
NullPlaneData null_plane_data_from_json(const std::string& json_text);
NullPlaneData null_plane_data_from_file(const std::string& path);

/// Built-in example documents: "basic" (f2 = 0), "coupled" (f2 = x1),
/// "resonant" (f2 = e^{-2s} x1), "ufamily" (u-dependent g0 with nonzero
/// eta_u), "minimal" (m0_dim = 0). Unknown name throws.
std::string builtin_null_plane_config(const std::string& name);

}  // namespace conelab
