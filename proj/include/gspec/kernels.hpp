#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace gspec::kern {

// Read-only view of a CSR matrix, 32-bit indices.
struct CsrView {
  const std::int32_t* rowptr;
  const std::int32_t* colidx;
  const double* values;
  std::int32_t rows;
};

// Data-parallel inner loops. Every entry has a scalar reference
// implementation; on x86-64 an AVX2+FMA variant is selected at runtime.
struct Ops {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*nrm2sq)(const double* a, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*scal)(double alpha, double* x, std::size_t n);
  void (*spmv)(const CsrView& a, const double* x, double* y);
  // out[i] = H_n(t[i]), monic probabilists' Hermite via the three-term
  // recurrence carried across lanes.
  void (*hermite_batch)(int n, const double* t, double* out, std::size_t len);
};

const Ops& scalar_ops();

#if defined(__x86_64__)
bool avx2_supported();
const Ops& avx2_ops();
#endif

// Backend chosen once per process: AVX2 when the CPU supports AVX2+FMA,
// scalar otherwise. GSPEC_KERNELS=scalar|avx2|auto overrides.
const Ops& ops();
std::string_view active_backend();

}  // namespace gspec::kern
