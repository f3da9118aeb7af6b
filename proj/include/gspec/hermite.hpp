#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gspec/spectral_result.hpp"

namespace gspec::hermite {

enum class Normalization { Monic, Orthonormal };

/// Monic probabilists' Hermite polynomial H_n(t), weight exp(-t^2/2).
/// H_0 = 1, H_1 = t, H_{n+1} = t H_n - n H_{n-1}.
double hermite_eval(int n, double t);

/// H_n(t) / sqrt(n!), orthonormal in L^2(gamma_1).
double hermite_eval_orthonormal(int n, double t);

/// Values of orders 0..n_max at t, by the stable normalized recurrence.
void hermite_eval_all_orthonormal(int n_max, double t, std::span<double> out);

/// Residual |-(e^{-t^2/2} H_n')'(t) - n e^{-t^2/2} H_n(t)| with both
/// derivatives taken by central differences of step h.
double hermite_ode_residual(int n, double t, double h);

struct HermiteBasis {
  int max_order = 0;
  Normalization normalization = Normalization::Monic;

  double eval(int n, double t) const;
  void eval_all(double t, std::span<double> out) const;  // orders 0..max_order
};

// Nodes/weights for integration against gamma_1; weights sum to 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  double integrate(const std::function<double(double)>& f) const;
};

/// m-point Gauss rule for gamma_1, exact on polynomials of degree <= 2m-1.
/// Nodes are the roots of H_m, found by Newton iteration with asymptotic
/// initial guesses; weights via the Christoffel function of the orthonormal
/// basis.  Throws SolverError on non-convergence.
QuadratureRule gauss_hermite_rule(int m);

/// Neumann spectrum of the Hermite operator on the whole real line in the
/// truncated orthonormal Hermite basis of orders 0..n_max.  The Dirichlet
/// form is assembled by quadrature, checked to be diagonal to roundoff, and
/// the verified integer eigenvalues 0..n_max are returned with coefficient
/// eigenvectors.
SpectralResult spectral_solve_real_line(int n_max);

}  // namespace gspec::hermite
