#include "conelab/cohomology.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "conelab/linalg.hpp"

namespace conelab {

namespace {

Eigen::VectorXd vec_row_major(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(m.size());
  int k = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v(k++) = m(i, j);
  return v;
}

}  // namespace

StructureConstants StructureConstants::zero(int dim) {
  StructureConstants c;
  c.dim = dim;
  c.flat.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  return c;
}

StructureConstants structure_constants(const MatrixAlgebra& alg) {
  const int d = alg.dim();
  StructureConstants c = StructureConstants::zero(d);
  if (d == 0) return c;
  Eigen::MatrixXd span = stack_vectorized(alg.basis).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(span,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      Eigen::MatrixXd br = alg.basis[a] * alg.basis[b] - alg.basis[b] * alg.basis[a];
      Eigen::VectorXd rhs = vec_row_major(br);
      Eigen::VectorXd x = svd.solve(rhs);
      double residual = (span * x - rhs).norm();
      if (residual > 1e-9 * std::max(1.0, rhs.norm()))
        throw std::runtime_error(
            "structure constants: bracket expansion is ill-conditioned "
            "(residual " +
            std::to_string(residual) + ")");
      for (int k = 0; k < d; ++k) {
        c.at(a, b, k) = x(k);
        c.at(b, a, k) = -x(k);
      }
    }
  return c;
}

Eigen::MatrixXd killing_form(const StructureConstants& c) {
  const int d = c.dim;
  Eigen::MatrixXd kappa = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          kappa(a, b) += c.at(a, l, k) * c.at(b, k, l);
  return kappa;
}

LieModule LieModule::make(StructureConstants constants,
                          std::vector<Eigen::MatrixXd> action, double tol) {
  const int d = constants.dim;
  if (static_cast<int>(action.size()) != d)
    throw std::invalid_argument("module: one action matrix per basis element");
  LieModule mod;
  mod.alg_dim = d;
  mod.mod_dim = action.empty() ? 0 : static_cast<int>(action.front().rows());
  mod.tol = tol;
  for (const Eigen::MatrixXd& m : action)
    if (m.rows() != mod.mod_dim || m.cols() != mod.mod_dim)
      throw std::invalid_argument("module: action matrices must be square of equal size");

  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k)
        if (std::abs(constants.at(a, b, k) + constants.at(b, a, k)) > tol)
          throw std::invalid_argument("module: structure constants not antisymmetric");

  double cmax = 1.0;
  for (double v : constants.flat) cmax = std::max(cmax, std::abs(v));
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int e = b + 1; e < d; ++e)
        for (int l = 0; l < d; ++l) {
          double jac = 0;
          for (int k = 0; k < d; ++k)
            jac += constants.at(a, b, k) * constants.at(k, e, l) +
                   constants.at(b, e, k) * constants.at(k, a, l) +
                   constants.at(e, a, k) * constants.at(k, b, l);
          if (std::abs(jac) > tol * cmax * cmax)
            throw std::invalid_argument("module: Jacobi identity fails (residual " +
                                        std::to_string(jac) + ")");
        }

  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      Eigen::MatrixXd lhs = action[a] * action[b] - action[b] * action[a];
      for (int k = 0; k < d; ++k) lhs -= constants.at(a, b, k) * action[k];
      double scale = 1.0 + action[a].norm() * action[b].norm();
      if (lhs.norm() > tol * scale * std::max(1.0, cmax))
        throw std::invalid_argument(
            "module: action does not respect the bracket (residual " +
            std::to_string(lhs.norm()) + ")");
    }

  mod.constants = std::move(constants);
  mod.action = std::move(action);
  return mod;
}

LieModule LieModule::matrix(const MatrixAlgebra& alg) {
  return make(structure_constants(alg), alg.basis);
}

LieModule LieModule::adjoint(const StructureConstants& constants) {
  const int d = constants.dim;
  std::vector<Eigen::MatrixXd> action;
  for (int a = 0; a < d; ++a) {
    Eigen::MatrixXd ad = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) ad(l, k) = constants.at(a, k, l);
    action.push_back(ad);
  }
  return make(constants, std::move(action));
}

LieModule LieModule::trivial(int alg_dim, int mod_dim) {
  std::vector<Eigen::MatrixXd> action(alg_dim,
                                      Eigen::MatrixXd::Zero(mod_dim, mod_dim));
  return make(StructureConstants::zero(alg_dim), std::move(action));
}

CohomologyResult cohomology(const LieModule& mod) {
  const int d = mod.alg_dim;
  const int n = mod.mod_dim;
  const int unknowns = n * d;  // phi(i, a) flattened as i * d + a
  CohomologyResult out;

  const int pairs = d * (d - 1) / 2;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(std::max(1, pairs * n), unknowns);
  int row = 0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int i = 0; i < n; ++i, ++row) {
        for (int m = 0; m < n; ++m) {
          sys(row, m * d + b) += mod.action[a](i, m);
          sys(row, m * d + a) -= mod.action[b](i, m);
        }
        for (int k = 0; k < d; ++k) sys(row, i * d + k) -= mod.constants.at(a, b, k);
      }
  Eigen::MatrixXd z = pairs == 0 ? Eigen::MatrixXd::Identity(unknowns, unknowns)
                                 : kernel(sys, mod.tol);
  for (int t = 0; t < z.cols(); ++t)
    out.z1_basis.push_back(unvectorize(z.col(t), n, d));

  Eigen::MatrixXd dmat = Eigen::MatrixXd::Zero(unknowns, n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < d; ++a)
      for (int j = 0; j < n; ++j) dmat(i * d + a, j) = mod.action[a](i, j);
  Eigen::MatrixXd b = col_space(dmat, mod.tol);
  for (int t = 0; t < b.cols(); ++t)
    out.b1_basis.push_back(unvectorize(b.col(t), n, d));
  out.invariants_dim = n - static_cast<int>(b.cols());

  out.h1_dim = static_cast<int>(z.cols() - b.cols());
  Eigen::MatrixXd reduced = z;
  if (b.cols() > 0) reduced -= b * (b.transpose() * z);
  Eigen::MatrixXd h = col_space(reduced, mod.tol);
  for (int t = 0; t < h.cols(); ++t)
    out.h1_complement.push_back(unvectorize(h.col(t), n, d));
  return out;
}

LieModule quotient_module(const LieModule& mod, const SubspaceBasis& sub) {
  const int n = mod.mod_dim;
  if (sub.ambient_dim != n)
    throw std::invalid_argument("quotient: subspace lives in a different space");
  if (sub.vectors.cols() == 0) return mod;

  Eigen::MatrixXd q = col_space(sub.vectors, 1e-12);
  double worst = 0;
  for (const Eigen::MatrixXd& rho : mod.action) {
    Eigen::MatrixXd img = rho * q;
    worst = std::max(worst,
                     (img - q * (q.transpose() * img)).cwiseAbs().maxCoeff());
  }
  if (worst > mod.tol * 10)
    throw std::invalid_argument(
        "quotient: subspace is not invariant (max residual " +
        std::to_string(worst) + ")");

  Eigen::MatrixXd qc = kernel(q.transpose(), 1e-12);
  std::vector<Eigen::MatrixXd> action;
  for (const Eigen::MatrixXd& rho : mod.action)
    action.push_back(qc.transpose() * rho * qc);
  return LieModule::make(mod.constants, std::move(action), mod.tol);
}

int predicted_h1_dimension(const MatrixAlgebra& g0, int n) {
  if (g0.ambient_dim != n)
    throw std::invalid_argument("predicted dimension: algebra must act on R^n");
  MatrixAlgebra checked = g0.dim() ? MatrixAlgebra::make(g0.basis, g0.tol)
                                   : MatrixAlgebra::trivial(n, g0.tol);
  const int d = checked.dim();

  // Trace-free symmetric commutant of the algebra.
  const int n2 = n * n;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(d * n2 + n2 + 1, n2);
  int r0 = 0;
  for (const Eigen::MatrixXd& x : checked.basis) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int row = r0 + i * n + j;
        for (int k = 0; k < n; ++k) {
          sys(row, i * n + k) += x(k, j);   // (C X)_ij
          sys(row, k * n + j) -= x(i, k);   // (X C)_ij
        }
      }
    r0 += n2;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int row = r0 + i * n + j;
      sys(row, i * n + j) += 1;
      sys(row, j * n + i) -= 1;
    }
  for (int i = 0; i < n; ++i) sys(d * n2 + n2, i * n + i) = 1;
  const int sym_dim = static_cast<int>(kernel(sys, 1e-9).cols());

  // Centre: coefficient vectors y with sum_k y_k [X_k, X_a] = 0 for all a.
  int centre_dim = 0;
  if (d > 0) {
    Eigen::MatrixXd zsys(d * n2, d);
    for (int a = 0; a < d; ++a)
      for (int k = 0; k < d; ++k) {
        Eigen::MatrixXd br =
            checked.basis[k] * checked.basis[a] - checked.basis[a] * checked.basis[k];
        zsys.block(a * n2, k, n2, 1) = vec_row_major(br);
      }
    centre_dim = static_cast<int>(kernel(zsys, 1e-9).cols());
  }

  // Common kernel of the action.
  int common_kernel = n;
  if (d > 0) {
    Eigen::MatrixXd stacked(d * n, n);
    for (int a = 0; a < d; ++a) stacked.middleRows(a * n, n) = checked.basis[a];
    common_kernel = static_cast<int>(kernel(stacked, 1e-9).cols());
  }
  return sym_dim + centre_dim + common_kernel;
}

}  // namespace conelab
