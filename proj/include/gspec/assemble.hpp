#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gspec/kernels.hpp"
#include "gspec/mesh.hpp"

namespace gspec::fem {

struct Csr {
  std::vector<int32_t> rowptr, colidx;
  std::vector<double> values;
  int32_t rows = 0;

  kern::CsrView view() const { return {rowptr.data(), colidx.data(), values.data(), rows}; }
  void spmv(const double* x, double* y) const { kern::ops().spmv(view(), x, y); }
  double coeff(int32_t i, int32_t j) const;
  int64_t nnz() const { return static_cast<int64_t>(values.size()); }
};

Csr csr_from_triplets(int32_t n, std::vector<std::array<int64_t, 2>> idx,
                      std::vector<double> vals);

struct AssembledSystem {
  Csr K;  // weighted stiffness, int Dphi_i . Dphi_j dgamma
  Csr M;  // weighted mass, int phi_i phi_j dgamma
  int n_dofs = 0;
  double gaussian_mass = 0.0;  // gamma(Omega_h) = sum of all M entries
  std::vector<double> m1;      // M * ones, for mean-zero projections
};

/// Gaussian-weighted P1 assembly: 2-point Gauss per interval cell, 3-point
/// edge-midpoint rule per triangle, weight evaluated at quadrature nodes.
AssembledSystem assemble(const mesh::Mesh& m);

/// Coordinate text format: "row col value" per line, 0-based.
void write_triplets(const Csr& a, const std::string& path);
Csr read_triplets(const std::string& path);

}  // namespace gspec::fem
