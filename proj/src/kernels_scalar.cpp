#include "gspec/kernels.hpp"

namespace gspec::kern {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double nrm2sq_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void spmv_scalar(const CsrView& a, const double* x, double* y) {
  for (std::int32_t r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    for (std::int32_t k = a.rowptr[r]; k < a.rowptr[r + 1]; ++k)
      acc += a.values[k] * x[a.colidx[k]];
    y[r] = acc;
  }
}

// H_{k+1}(t) = t H_k(t) - k H_{k-1}(t), H_0 = 1, H_1 = t.
void hermite_batch_scalar(int n, const double* t, double* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    if (n == 0) {
      out[i] = 1.0;
      continue;
    }
    double hm1 = 1.0;
    double h = t[i];
    for (int k = 1; k < n; ++k) {
      const double next = t[i] * h - static_cast<double>(k) * hm1;
      hm1 = h;
      h = next;
    }
    out[i] = h;
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table{"scalar",     dot_scalar,  nrm2sq_scalar,
                         sum_scalar,   axpy_scalar, scal_scalar,
                         spmv_scalar,  hermite_batch_scalar};
  return table;
}

}  // namespace gspec::kern
