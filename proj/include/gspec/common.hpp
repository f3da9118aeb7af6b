#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace gspec {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;

// Gaussian weight in N dimensions, density of gamma_N against Lebesgue.
inline double gauss_weight_1d(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }
inline double gauss_weight_2d(double x, double y) {
  return std::exp(-0.5 * (x * x + y * y)) / (2.0 * kPi);
}

// gamma_1((-inf, -t]) = gamma_1([t, inf)), the upper Gaussian tail.
inline double gauss_tail(double t) { return 0.5 * std::erfc(t / std::sqrt(2.0)); }

// gamma_1((a, b)).
inline double gauss_mass_interval(double a, double b) {
  const double s = std::sqrt(2.0);
  return 0.5 * (std::erf(b / s) - std::erf(a / s));
}

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A query outside an operation's domain of validity (e.g. a reflection
// request with d >= rbar/2, or a cutoff on a domain without a sphere radius).
struct DomainOfValidityError : std::domain_error {
  using std::domain_error::domain_error;
};

// Geometric query with no unique answer (medial-axis ties, vertex projections).
struct DegenerateQueryError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gspec
