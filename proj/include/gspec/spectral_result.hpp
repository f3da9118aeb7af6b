#pragma once

#include <vector>

namespace gspec {

// Shared result of an eigenvalue computation.  For FEM Neumann solves the
// eigenvectors are M-orthonormal nodal vectors with the constant deflated;
// for the 1D spectral reference solver they are coefficient vectors in the
// orthonormal Hermite basis and the constant mode (eigenvalue 0) is kept.
struct SpectralResult {
  std::vector<double> eigenvalues;                 // ascending
  std::vector<std::vector<double>> eigenvectors;   // one per eigenvalue
  std::vector<double> residual_norms;              // ||K v - mu M v|| / ||M v||
  bool deflated_constant = false;
};

}  // namespace gspec
