#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gspec/assemble.hpp"
#include "gspec/geometry.hpp"
#include "gspec/spectral_result.hpp"

namespace gspec::fem {

struct EigOptions {
  int count = 1;
  double shift = 0.5;   // shift-invert target for Neumann mu1
  double tol = 1e-10;   // residual target; the contract ceiling is 1e-8
  int max_outer = 500;
  bool force_dense = false;
  bool force_iterative = false;
  uint64_t seed = 20240817;  // deterministic iteration start block
};

/// Smallest `count` nonzero Neumann eigenvalues of K u = mu M u after
/// deflating the constant mode.  Dense full solve below 2000 dofs, deflated
/// shift-invert subspace iteration above.
SpectralResult solve_neumann_mu1(const AssembledSystem& sys, const EigOptions& opt);
SpectralResult solve_neumann_mu1(const AssembledSystem& sys, int count = 1);

/// Smallest Dirichlet eigenvalues with the given dofs eliminated.
/// Eigenvectors come back embedded in the full dof set, zero on the boundary.
SpectralResult solve_dirichlet_lambda1(const AssembledSystem& sys,
                                       const std::vector<int>& boundary_dofs,
                                       const EigOptions& opt);
SpectralResult solve_dirichlet_lambda1(const AssembledSystem& sys,
                                       const std::vector<int>& boundary_dofs, int count = 1);

/// (w'Kw)/(w'Mw) with the dgamma-mean of v removed.  An upper bound for the
/// discrete mu1 by the variational principle.
double rayleigh_quotient(const AssembledSystem& sys, const std::vector<double>& v);

struct SourceSolution {
  std::vector<double> u;  // mean-zero coefficients
  double c_k = 0.0;       // dgamma-mean of the datum
  double flux_residual = 0.0;
};

/// Mean-zero solution of K u = M (f - c_k), the discrete realization of the
/// inverse operator on mean-zero data.
SourceSolution solve_neumann_source(const AssembledSystem& sys, const std::vector<double>& f);

struct OperatorStudyRow {
  int k;
  double c_k;
  double gamma_gap;  // gamma(Omega \ Omega_k)
  double error;      // L2(dgamma) distance between the two solutions
  int dofs;
};

struct OperatorStudy {
  std::vector<OperatorStudyRow> rows;
  double h = 0.0;
  double tail_tol = 0.0;
  double truncation_radius = 0.0;
  int dofs_full = 0;
};

/// For a strip and nested box truncations Omega_k, solves the source problem
/// on each Omega_k and on the truncated strip, extends the Omega_k solution
/// by reflection and cutoff, and tabulates the L2(dgamma) errors.
OperatorStudy operator_convergence_study(const geom::ConvexDomain& dom,
                                         const std::function<double(geom::Vec2)>& f,
                                         int k_max, double h = 0.05,
                                         double tail_tol = 1e-10);

}  // namespace gspec::fem
