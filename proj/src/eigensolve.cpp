#include "gspec/eigensolve.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "gspec/extension.hpp"
#include "gspec/kernels.hpp"

namespace gspec::fem {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using geom::Vec2;

SpMat to_sparse(const Csr& a) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.values.size());
  for (int32_t i = 0; i < a.rows; ++i)
    for (int32_t k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k)
      trips.emplace_back(i, a.colidx[k], a.values[k]);
  SpMat s(a.rows, a.rows);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

MatrixXd to_dense(const Csr& a) {
  MatrixXd d = MatrixXd::Zero(a.rows, a.rows);
  for (int32_t i = 0; i < a.rows; ++i)
    for (int32_t k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k) d(i, a.colidx[k]) = a.values[k];
  return d;
}

void check_mass(const AssembledSystem& sys) {
  for (int32_t i = 0; i < sys.M.rows; ++i)
    if (!(sys.M.coeff(i, i) > 0.0)) throw InputError("mass matrix is not positive definite");
}

// ||Kv - mu Mv|| / ||Mv||, Euclidean norms, via the kernel backend
double pair_residual(const AssembledSystem& sys, double mu, const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<double> kv(n), mv(n);
  sys.K.spmv(v.data(), kv.data());
  sys.M.spmv(v.data(), mv.data());
  const auto& o = kern::ops();
  o.axpy(-mu, mv.data(), kv.data(), n);
  return std::sqrt(o.nrm2sq(kv.data(), n)) / std::sqrt(o.nrm2sq(mv.data(), n));
}

double gamma_mean(const AssembledSystem& sys, const double* v) {
  const auto& o = kern::ops();
  return o.dot(sys.m1.data(), v, static_cast<size_t>(sys.n_dofs)) / sys.gaussian_mass;
}

void remove_gamma_mean(const AssembledSystem& sys, std::vector<double>& v) {
  const double m = gamma_mean(sys, v.data());
  for (double& x : v) x -= m;
}

// finalize a Neumann eigenpair: exact mean removal, M-normalization
void polish_neumann_vector(const AssembledSystem& sys, std::vector<double>& v) {
  remove_gamma_mean(sys, v);
  std::vector<double> mv(v.size());
  sys.M.spmv(v.data(), mv.data());
  const double nrm = std::sqrt(kern::ops().dot(v.data(), mv.data(), v.size()));
  if (nrm > 0)
    for (double& x : v) x /= nrm;
}

SpectralResult dense_neumann(const AssembledSystem& sys, const EigOptions& opt) {
  const int n = sys.n_dofs;
  if (opt.count + 1 > n) throw InputError("not enough dofs for the requested count");
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges;
  ges.compute(to_dense(sys.K), to_dense(sys.M));
  if (ges.info() != Eigen::Success) throw SolverError("dense generalized eigensolve failed");
  const VectorXd& ev = ges.eigenvalues();
  if (!(std::abs(ev[0]) < 1e-6) || !(ev[1] > 1e-6))
    throw SolverError("constant-kernel structure not found in the spectrum");

  SpectralResult out;
  out.deflated_constant = true;
  for (int j = 1; j <= opt.count; ++j) {
    std::vector<double> v(ges.eigenvectors().col(j).data(),
                          ges.eigenvectors().col(j).data() + n);
    polish_neumann_vector(sys, v);
    out.eigenvalues.push_back(ev[j]);
    out.residual_norms.push_back(pair_residual(sys, ev[j], v));
    out.eigenvectors.push_back(std::move(v));
  }
  return out;
}

// deterministic start block
MatrixXd seeded_block(int n, int q, uint64_t seed) {
  std::mt19937_64 gen(seed);
  MatrixXd x(n, q);
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < n; ++i)
      x(i, j) = static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
  return x;
}

struct IterativeCore {
  const SpMat& K;
  const SpMat& M;
  Eigen::SimplicialLDLT<SpMat>& solver;
  // optional constant deflation in the M-inner product
  const VectorXd* m1 = nullptr;
  double mass = 0.0;

  void deflate(VectorXd& v) const {
    if (m1) v.array() -= m1->dot(v) / mass;
  }

  // two-pass modified Gram-Schmidt in the M inner product
  void orthonormalize(MatrixXd& x) const {
    const auto cols = x.cols();
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < cols; ++i) {
        VectorXd v = x.col(i);
        for (int j = 0; j < i; ++j) {
          const double c = x.col(j).dot(M * v);
          v -= c * x.col(j);
        }
        const double nrm = std::sqrt(v.dot(M * v));
        if (!(nrm > 1e-140)) throw SolverError("iteration block collapsed");
        x.col(i) = v / nrm;
      }
    }
  }
};

struct RitzPairs {
  std::vector<double> values;
  MatrixXd vectors;
  std::vector<double> residuals;
};

RitzPairs subspace_iterate(IterativeCore& core, int n, int count, const EigOptions& opt) {
  const int q = std::min(n - 1, std::max(count + 3, 8));
  if (q < count) throw InputError("not enough dofs for the requested count");
  MatrixXd x = seeded_block(n, q, opt.seed);
  for (int j = 0; j < q; ++j) {
    VectorXd v = x.col(j);
    core.deflate(v);
    x.col(j) = v;
  }
  core.orthonormalize(x);

  RitzPairs best;
  double worst_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_outer; ++it) {
    MatrixXd y(n, q);
    for (int j = 0; j < q; ++j) {
      VectorXd v = core.solver.solve(core.M * x.col(j));
      core.deflate(v);
      y.col(j) = v;
    }
    core.orthonormalize(y);
    MatrixXd h = y.transpose() * (core.K * y);
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
    x = y * es.eigenvectors();

    best.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + count);
    best.vectors = x.leftCols(count);
    best.residuals.clear();
    worst_res = 0.0;
    for (int j = 0; j < count; ++j) {
      const VectorXd mv = core.M * x.col(j);
      const double r = (core.K * x.col(j) - best.values[static_cast<size_t>(j)] * mv).norm() /
                       mv.norm();
      best.residuals.push_back(r);
      worst_res = std::max(worst_res, r);
    }
    if (worst_res <= opt.tol) return best;
  }
  if (worst_res <= 1e-8) return best;  // contract ceiling
  std::ostringstream msg;
  msg << "subspace iteration stalled, residual " << worst_res << " after " << opt.max_outer
      << " iterations";
  throw SolverError(msg.str());
}

SpectralResult iterative_neumann(const AssembledSystem& sys, const EigOptions& opt) {
  const int n = sys.n_dofs;
  const SpMat k = to_sparse(sys.K), m = to_sparse(sys.M);
  Eigen::SimplicialLDLT<SpMat> solver;

  // shift-invert around opt.shift; the factorization is unpivoted, so verify
  // by a test solve and fall back to the positive definite K + M when needed
  auto factor_ok = [&](const SpMat& a) {
    solver.compute(a);
    if (solver.info() != Eigen::Success) return false;
    const VectorXd b = VectorXd::Ones(n);
    const VectorXd xs = solver.solve(b);
    return (a * xs - b).norm() <= 1e-8 * b.norm();
  };
  const SpMat shifted = k - opt.shift * m;
  if (!factor_ok(shifted)) {
    const SpMat spd = k + m;
    if (!factor_ok(spd)) throw SolverError("shift-invert factorization failed");
  }

  const VectorXd m1 = Eigen::Map<const VectorXd>(sys.m1.data(), n);
  IterativeCore core{k, m, solver, &m1, sys.gaussian_mass};
  RitzPairs pairs = subspace_iterate(core, n, opt.count, opt);

  SpectralResult out;
  out.deflated_constant = true;
  for (int j = 0; j < opt.count; ++j) {
    std::vector<double> v(pairs.vectors.col(j).data(), pairs.vectors.col(j).data() + n);
    polish_neumann_vector(sys, v);
    out.eigenvalues.push_back(pairs.values[static_cast<size_t>(j)]);
    out.residual_norms.push_back(pair_residual(sys, pairs.values[static_cast<size_t>(j)], v));
    out.eigenvectors.push_back(std::move(v));
  }
  return out;
}

}  // namespace

SpectralResult solve_neumann_mu1(const AssembledSystem& sys, const EigOptions& opt) {
  if (opt.count < 1) throw InputError("eigenpair count must be positive");
  check_mass(sys);
  const bool dense = opt.force_dense || (!opt.force_iterative && sys.n_dofs < 2000);
  return dense ? dense_neumann(sys, opt) : iterative_neumann(sys, opt);
}

SpectralResult solve_neumann_mu1(const AssembledSystem& sys, int count) {
  EigOptions opt;
  opt.count = count;
  return solve_neumann_mu1(sys, opt);
}

// ---------------------------------------------------------------------------

SpectralResult solve_dirichlet_lambda1(const AssembledSystem& sys,
                                       const std::vector<int>& boundary_dofs,
                                       const EigOptions& opt) {
  if (opt.count < 1) throw InputError("eigenpair count must be positive");
  if (boundary_dofs.empty()) throw InputError("Dirichlet solve needs boundary dofs");
  check_mass(sys);
  const int n = sys.n_dofs;
  std::vector<char> on_boundary(static_cast<size_t>(n), 0);
  for (int d : boundary_dofs) {
    if (d < 0 || d >= n) throw InputError("boundary dof out of range");
    on_boundary[static_cast<size_t>(d)] = 1;
  }
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (!on_boundary[static_cast<size_t>(i)]) keep.push_back(i);
  if (keep.empty()) throw InputError("all dofs on the boundary");
  const int nr = static_cast<int>(keep.size());
  if (opt.count > nr) throw InputError("not enough interior dofs for the requested count");

  std::vector<int> renumber(static_cast<size_t>(n), -1);
  for (int i = 0; i < nr; ++i) renumber[static_cast<size_t>(keep[static_cast<size_t>(i)])] = i;

  auto restrict_csr = [&](const Csr& a) {
    std::vector<Eigen::Triplet<double>> trips;
    for (int32_t i = 0; i < a.rows; ++i) {
      const int ri = renumber[static_cast<size_t>(i)];
      if (ri < 0) continue;
      for (int32_t kk = a.rowptr[i]; kk < a.rowptr[i + 1]; ++kk) {
        const int rj = renumber[static_cast<size_t>(a.colidx[kk])];
        if (rj >= 0) trips.emplace_back(ri, rj, a.values[kk]);
      }
    }
    SpMat s(nr, nr);
    s.setFromTriplets(trips.begin(), trips.end());
    return s;
  };
  const SpMat kr = restrict_csr(sys.K), mr = restrict_csr(sys.M);

  std::vector<double> values;
  MatrixXd vectors;
  std::vector<double> residuals;

  const bool dense = opt.force_dense || (!opt.force_iterative && nr < 2000);
  if (dense) {
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges;
    ges.compute(MatrixXd(kr), MatrixXd(mr));
    if (ges.info() != Eigen::Success) throw SolverError("dense generalized eigensolve failed");
    values.assign(ges.eigenvalues().data(), ges.eigenvalues().data() + opt.count);
    vectors = ges.eigenvectors().leftCols(opt.count);
  } else {
    Eigen::SimplicialLDLT<SpMat> solver;
    solver.compute(kr);  // Dirichlet stiffness is positive definite
    if (solver.info() != Eigen::Success) throw SolverError("Dirichlet factorization failed");
    IterativeCore core{kr, mr, solver, nullptr, 0.0};
    RitzPairs pairs = subspace_iterate(core, nr, opt.count, opt);
    values = pairs.values;
    vectors = pairs.vectors;
  }
  for (int j = 0; j < opt.count; ++j) {
    const VectorXd mv = mr * vectors.col(j);
    const double nrm = std::sqrt(vectors.col(j).dot(mv));
    vectors.col(j) /= nrm;
    residuals.push_back((kr * vectors.col(j) - values[static_cast<size_t>(j)] * mr * vectors.col(j)).norm() /
                        (mr * vectors.col(j)).norm());
  }

  SpectralResult out;
  out.deflated_constant = false;
  for (int j = 0; j < opt.count; ++j) {
    std::vector<double> full(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < nr; ++i) full[static_cast<size_t>(keep[static_cast<size_t>(i)])] = vectors(i, j);
    out.eigenvalues.push_back(values[static_cast<size_t>(j)]);
    out.eigenvectors.push_back(std::move(full));
    out.residual_norms.push_back(residuals[static_cast<size_t>(j)]);
  }
  return out;
}

SpectralResult solve_dirichlet_lambda1(const AssembledSystem& sys,
                                       const std::vector<int>& boundary_dofs, int count) {
  EigOptions opt;
  opt.count = count;
  opt.shift = 0.0;
  return solve_dirichlet_lambda1(sys, boundary_dofs, opt);
}

// ---------------------------------------------------------------------------

double rayleigh_quotient(const AssembledSystem& sys, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != sys.n_dofs) throw InputError("vector size mismatch");
  std::vector<double> w = v;
  remove_gamma_mean(sys, w);
  const size_t n = w.size();
  std::vector<double> kw(n), mw(n);
  sys.K.spmv(w.data(), kw.data());
  sys.M.spmv(w.data(), mw.data());
  const auto& o = kern::ops();
  const double den = o.dot(w.data(), mw.data(), n);
  if (!(den > 1e-280)) throw InputError("vector is constant after mean removal");
  return o.dot(w.data(), kw.data(), n) / den;
}

SourceSolution solve_neumann_source(const AssembledSystem& sys, const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != sys.n_dofs) throw InputError("vector size mismatch");
  const size_t n = f.size();
  const auto& o = kern::ops();

  SourceSolution sol;
  sol.c_k = gamma_mean(sys, f.data());
  std::vector<double> g = f;
  for (double& x : g) x -= sol.c_k;
  std::vector<double> rhs(n);
  sys.M.spmv(g.data(), rhs.data());

  const double rhs_norm = std::sqrt(o.nrm2sq(rhs.data(), n));
  sol.u.assign(n, 0.0);
  if (rhs_norm == 0.0) return sol;

  std::vector<double> diag(n);
  for (int32_t i = 0; i < sys.K.rows; ++i) {
    const double d = sys.K.coeff(i, i);
    if (!(d > 0)) throw SolverError("stiffness diagonal vanishes at dof " + std::to_string(i));
    diag[static_cast<size_t>(i)] = d;
  }

  // Jacobi-preconditioned CG; the constant kernel is harmless because the
  // right-hand side is exactly range-compatible
  std::vector<double> r = rhs, z(n), p(n), kp(n);
  for (size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = o.dot(r.data(), z.data(), n);
  const double tol = 1e-12 * rhs_norm;
  bool done = false;
  for (int it = 0; it < 50000; ++it) {
    sys.K.spmv(p.data(), kp.data());
    const double pkp = o.dot(p.data(), kp.data(), n);
    if (!(pkp > 0)) throw SolverError("system singular beyond the constant kernel");
    const double alpha = rz / pkp;
    o.axpy(alpha, p.data(), sol.u.data(), n);
    o.axpy(-alpha, kp.data(), r.data(), n);
    if (std::sqrt(o.nrm2sq(r.data(), n)) <= tol) {
      done = true;
      break;
    }
    for (size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_new = o.dot(r.data(), z.data(), n);
    const double beta = rz_new / rz;
    rz = rz_new;
    o.scal(beta, p.data(), n);
    o.axpy(1.0, z.data(), p.data(), n);
  }
  if (!done) {
    const double rn = std::sqrt(o.nrm2sq(r.data(), n)) / rhs_norm;
    if (rn > 1e-9)
      throw SolverError("source solve stalled at relative residual " + std::to_string(rn));
  }

  remove_gamma_mean(sys, sol.u);
  std::vector<double> ku(n);
  sys.K.spmv(sol.u.data(), ku.data());
  o.axpy(-1.0, rhs.data(), ku.data(), n);
  sol.flux_residual = std::sqrt(o.nrm2sq(ku.data(), n)) / rhs_norm;
  return sol;
}

// ---------------------------------------------------------------------------

namespace {

// breakpoint vector that resolves every integer level +-k and the truncation
// radius exactly; records the index of each special value
std::vector<double> study_breakpoints(double r, int k_max, double h,
                                      std::vector<std::array<int, 2>>& level_span) {
  std::vector<double> specials;
  specials.push_back(-r);
  for (int k = k_max; k >= 1; --k) specials.push_back(-static_cast<double>(k));
  for (int k = 1; k <= k_max; ++k) specials.push_back(static_cast<double>(k));
  specials.push_back(r);

  std::vector<double> ys{specials.front()};
  std::vector<int> special_idx{0};
  for (size_t s = 0; s + 1 < specials.size(); ++s) {
    const double a = specials[s], b = specials[s + 1];
    const int cells = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-12)));
    const auto piece = mesh::linspace(a, b, cells);
    ys.insert(ys.end(), piece.begin() + 1, piece.end());
    special_idx.push_back(static_cast<int>(ys.size()) - 1);
  }
  level_span.assign(static_cast<size_t>(k_max), {0, 0});
  for (int k = 1; k <= k_max; ++k) {
    // specials: index of -k is (k_max - k + 1), of +k is (k_max + k)
    level_span[static_cast<size_t>(k - 1)] = {special_idx[static_cast<size_t>(k_max - k + 1)],
                                              special_idx[static_cast<size_t>(k_max + k)]};
  }
  return ys;
}

double interp_on_column(const std::vector<double>& ys, const std::vector<double>& u, int nx1,
                        int i, double y) {
  const auto it = std::upper_bound(ys.begin(), ys.end(), y);
  size_t j1 = static_cast<size_t>(std::clamp<std::ptrdiff_t>(it - ys.begin(), 1,
                                                             static_cast<std::ptrdiff_t>(ys.size()) - 1));
  const size_t j0 = j1 - 1;
  const double t = (y - ys[j0]) / (ys[j1] - ys[j0]);
  const double v0 = u[j0 * static_cast<size_t>(nx1) + static_cast<size_t>(i)];
  const double v1 = u[j1 * static_cast<size_t>(nx1) + static_cast<size_t>(i)];
  return v0 + t * (v1 - v0);
}

}  // namespace

OperatorStudy operator_convergence_study(const geom::ConvexDomain& dom,
                                         const std::function<double(Vec2)>& f, int k_max,
                                         double h, double tail_tol) {
  const auto* st = std::get_if<geom::Strip>(&dom.shape());
  if (!st) throw InputError("the operator study runs on strips");
  if (k_max < 1) throw InputError("k_max must be at least 1");
  const double a = st->a;

  const auto trunc = mesh::truncate_unbounded(dom, tail_tol);
  const double r = trunc.radius;
  if (!(static_cast<double>(k_max) < r))
    throw InputError("k_max must stay below the truncation radius; tighten tail_tol");

  const int nx = std::max(2, static_cast<int>(std::ceil(2.0 * a / h - 1e-12)));
  const auto xs = mesh::linspace(-a, a, nx);
  std::vector<std::array<int, 2>> span;
  const auto ys = study_breakpoints(r, k_max, h, span);

  const mesh::Mesh big = mesh::mesh_tensor(xs, ys);
  const AssembledSystem sys_full = assemble(big);
  std::vector<double> f_full(big.nodes.size());
  for (size_t i = 0; i < big.nodes.size(); ++i) f_full[i] = f(big.nodes[i]);
  const SourceSolution sol_full = solve_neumann_source(sys_full, f_full);

  OperatorStudy study;
  study.h = h;
  study.tail_tol = tail_tol;
  study.truncation_radius = r;
  study.dofs_full = sys_full.n_dofs;

  const int nx1 = nx + 1;
  const auto& o = kern::ops();
  for (int k = 1; k <= k_max; ++k) {
    const auto [j_lo, j_hi] = span[static_cast<size_t>(k - 1)];
    const std::vector<double> ys_k(ys.begin() + j_lo, ys.begin() + j_hi + 1);
    const mesh::Mesh sub = mesh::mesh_tensor(xs, ys_k);
    const AssembledSystem sys_k = assemble(sub);
    std::vector<double> f_k(sub.nodes.size());
    for (size_t i = 0; i < sub.nodes.size(); ++i) f_k[i] = f(sub.nodes[i]);
    const SourceSolution sol_k = solve_neumann_source(sys_k, f_k);

    const auto box = geom::ConvexDomain::box(-a, a, -static_cast<double>(k),
                                             static_cast<double>(k));
    const ext::CutoffProfile cutoff = ext::build_cutoff(box);

    // nodal extension of the truncated solution onto the full mesh
    std::vector<double> err(big.nodes.size());
    for (size_t node = 0; node < big.nodes.size(); ++node) {
      const int j = static_cast<int>(node) / nx1;
      const int i = static_cast<int>(node) % nx1;
      const double y = big.nodes[node].y;
      double val;
      if (j >= j_lo && j <= j_hi) {
        val = sol_k.u[static_cast<size_t>(j - j_lo) * static_cast<size_t>(nx1) +
                      static_cast<size_t>(i)];
      } else {
        const double d = std::abs(y) - static_cast<double>(k);
        if (d >= cutoff.r_tilde) {
          val = 0.0;
        } else {
          const double y_ref = (y > 0 ? 2.0 * k - y : -2.0 * k - y);
          val = interp_on_column(ys_k, sol_k.u, nx1, i, y_ref) *
                cutoff.value_at_distance(d);
        }
      }
      err[node] = val - sol_full.u[node];
    }
    std::vector<double> merr(err.size());
    sys_full.M.spmv(err.data(), merr.data());
    const double error = std::sqrt(o.dot(err.data(), merr.data(), err.size()));
    const double gap = 2.0 * gauss_tail(static_cast<double>(k)) * gauss_mass_interval(-a, a);
    study.rows.push_back({k, sol_k.c_k, gap, error, sys_k.n_dofs});
  }
  return study;
}

}  // namespace gspec::fem
