#include "gspec/hermite.hpp"

#include <cmath>
#include <cstdlib>

#include "gspec/common.hpp"
#include "gspec/kernels.hpp"

namespace gspec::hermite {

double hermite_eval(int n, double t) {
  if (n < 0) throw InputError("hermite_eval: order must be >= 0");
  double out = 0.0;
  kern::ops().hermite_batch(n, &t, &out, 1);
  return out;
}

void hermite_eval_all_orthonormal(int n_max, double t, std::span<double> out) {
  if (n_max < 0) throw InputError("hermite_eval_all_orthonormal: order must be >= 0");
  out[0] = 1.0;
  if (n_max == 0) return;
  out[1] = t;
  for (int k = 1; k < n_max; ++k) {
    out[k + 1] =
        (t * out[k] - std::sqrt(static_cast<double>(k)) * out[k - 1]) /
        std::sqrt(static_cast<double>(k + 1));
  }
}

double hermite_eval_orthonormal(int n, double t) {
  std::vector<double> buf(static_cast<std::size_t>(n) + 1);
  hermite_eval_all_orthonormal(n, t, buf);
  return buf.back();
}

double HermiteBasis::eval(int n, double t) const {
  if (n > max_order) throw InputError("HermiteBasis::eval: order above max_order");
  return normalization == Normalization::Monic ? hermite_eval(n, t)
                                               : hermite_eval_orthonormal(n, t);
}

void HermiteBasis::eval_all(double t, std::span<double> out) const {
  if (normalization == Normalization::Orthonormal) {
    hermite_eval_all_orthonormal(max_order, t, out);
    return;
  }
  out[0] = 1.0;
  if (max_order == 0) return;
  out[1] = t;
  for (int k = 1; k < max_order; ++k)
    out[k + 1] = t * out[k] - static_cast<double>(k) * out[k - 1];
}

double hermite_ode_residual(int n, double t, double h) {
  if (n < 0 || h <= 0.0) throw InputError("hermite_ode_residual: need n >= 0, h > 0");
  const auto weight = [](double s) { return std::exp(-0.5 * s * s); };
  const auto flux = [&](double s) {
    const double dh = (hermite_eval(n, s + h) - hermite_eval(n, s - h)) / (2.0 * h);
    return weight(s) * dh;
  };
  const double lhs = -(flux(t + h) - flux(t - h)) / (2.0 * h);
  const double rhs = static_cast<double>(n) * weight(t) * hermite_eval(n, t);
  return std::abs(lhs - rhs);
}

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
  std::vector<double> vals(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = weights[i] * f(nodes[i]);
  return kern::ops().sum(vals.data(), vals.size());
}

QuadratureRule gauss_hermite_rule(int m) {
  if (m < 1) throw InputError("gauss_hermite_rule: need m >= 1");
  const double sqrt2 = std::sqrt(2.0);

  QuadratureRule rule;
  rule.nodes.assign(m, 0.0);
  rule.weights.assign(m, 0.0);

  std::vector<double> values(static_cast<std::size_t>(m) + 1);
  // Roots of H_m come in +/- pairs around 0; polish the positive half and
  // mirror.  Initial guesses follow the classical physicists'-scale
  // asymptotics, converted by sqrt(2).
  const int half = (m + 1) / 2;
  std::vector<double> phys(half, 0.0);
  for (int i = 0; i < half; ++i) {
    double z;
    if (i == 0) {
      z = std::sqrt(2.0 * m + 1.0) - 1.85575 * std::pow(2.0 * m + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z = phys[0] - 1.14 * std::pow(static_cast<double>(m), 0.426) / phys[0];
    } else if (i == 2) {
      z = 1.86 * phys[1] - 0.86 * phys[0];
    } else if (i == 3) {
      z = 1.91 * phys[2] - 0.91 * phys[1];
    } else {
      z = 2.0 * phys[i - 1] - phys[i - 2];
    }

    double x = sqrt2 * z;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      hermite_eval_all_orthonormal(m, x, values);
      const double p = values[m];
      const double dp = std::sqrt(static_cast<double>(m)) * values[m - 1];
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15 * (1.0 + std::abs(x))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw SolverError("gauss_hermite_rule: Newton did not converge");

    phys[i] = x / sqrt2;
    rule.nodes[m - 1 - i] = x;
    rule.nodes[i] = -x;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;

  for (int i = 0; i < m; ++i) {
    hermite_eval_all_orthonormal(m, rule.nodes[i], values);
    double chr = 0.0;
    for (int j = 0; j < m; ++j) chr += values[j] * values[j];
    rule.weights[i] = 1.0 / chr;
  }
  return rule;
}

SpectralResult spectral_solve_real_line(int n_max) {
  if (n_max < 1) throw InputError("spectral_solve_real_line: need n_max >= 1");
  const int n = n_max + 1;
  const QuadratureRule rule = gauss_hermite_rule(n_max + 2);

  // Dirichlet form in the orthonormal basis: A_ij = \int h_i' h_j' dgamma,
  // with h_k' = sqrt(k) h_{k-1}.  Exact quadrature makes A diagonal with
  // integer entries; verify and return the verified integers.
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> values(static_cast<std::size_t>(n_max) + 1);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    hermite_eval_all_orthonormal(n_max, rule.nodes[q], values);
    for (int i = 0; i < n; ++i) {
      const double di = i == 0 ? 0.0 : std::sqrt(static_cast<double>(i)) * values[i - 1];
      for (int j = 0; j <= i; ++j) {
        const double dj = j == 0 ? 0.0 : std::sqrt(static_cast<double>(j)) * values[j - 1];
        a[static_cast<std::size_t>(i) * n + j] += rule.weights[q] * di * dj;
      }
    }
  }

  const double scale = static_cast<double>(n_max);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (std::abs(a[static_cast<std::size_t>(i) * n + j]) > 1e-10 * (1.0 + scale))
        throw SolverError("spectral_solve_real_line: operator not diagonal");
    }
    const double diag = a[static_cast<std::size_t>(i) * n + i];
    if (std::abs(diag - static_cast<double>(i)) > 1e-10 * (1.0 + scale))
      throw SolverError("spectral_solve_real_line: diagonal entry off its integer");
  }

  SpectralResult result;
  result.deflated_constant = false;
  result.eigenvalues.resize(n);
  result.eigenvectors.assign(n, std::vector<double>(n, 0.0));
  result.residual_norms.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    result.eigenvalues[i] = static_cast<double>(i);
    result.eigenvectors[i][i] = 1.0;
  }
  return result;
}

}  // namespace gspec::hermite
