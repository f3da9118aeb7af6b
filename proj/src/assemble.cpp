#include "gspec/assemble.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>

#include "gspec/common.hpp"

namespace gspec::fem {

using geom::Vec2;

double Csr::coeff(int32_t i, int32_t j) const {
  for (int32_t k = rowptr[i]; k < rowptr[i + 1]; ++k)
    if (colidx[k] == j) return values[k];
  return 0.0;
}

Csr csr_from_triplets(int32_t n, std::vector<std::array<int64_t, 2>> idx,
                      std::vector<double> vals) {
  std::vector<size_t> order(idx.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return idx[a] < idx[b];
  });
  Csr out;
  out.rows = n;
  out.rowptr.assign(static_cast<size_t>(n) + 1, 0);
  int64_t prev_i = -1, prev_j = -1;
  for (size_t o : order) {
    const int64_t i = idx[o][0], j = idx[o][1];
    if (i == prev_i && j == prev_j) {
      out.values.back() += vals[o];
    } else {
      out.colidx.push_back(static_cast<int32_t>(j));
      out.values.push_back(vals[o]);
      ++out.rowptr[static_cast<size_t>(i) + 1];
      prev_i = i;
      prev_j = j;
    }
  }
  for (int32_t r = 0; r < n; ++r) out.rowptr[static_cast<size_t>(r) + 1] += out.rowptr[r];
  return out;
}

namespace {

struct Accumulator {
  std::vector<std::array<int64_t, 2>> idx;
  std::vector<double> vals;
  void add(int i, int j, double v) {
    idx.push_back({i, j});
    vals.push_back(v);
  }
};

}  // namespace

AssembledSystem assemble(const mesh::Mesh& m) {
  const int n = m.n_nodes();
  Accumulator k_acc, m_acc;

  if (m.dim == 1) {
    const double g = 1.0 / std::sqrt(3.0);
    for (size_t c = 0; c < m.cells1d.size(); ++c) {
      const int i0 = m.cells1d[c][0], i1 = m.cells1d[c][1];
      const double x0 = m.nodes[i0].x, x1 = m.nodes[i1].x;
      const double len = x1 - x0;
      if (!(len > 0)) throw SolverError("degenerate cell " + std::to_string(c));
      const double mid = 0.5 * (x0 + x1), half = 0.5 * len;
      const double xg[2] = {mid - half * g, mid + half * g};
      double kq = 0.0;  // int rho over the cell
      double mloc[2][2] = {{0, 0}, {0, 0}};
      for (double x : xg) {
        const double w = half * gauss_weight_1d(x);
        kq += w;
        const double t = (x - x0) / len;
        const double phi[2] = {1.0 - t, t};
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) mloc[a][b] += w * phi[a] * phi[b];
      }
      const double dphi[2] = {-1.0 / len, 1.0 / len};
      const int ids[2] = {i0, i1};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          k_acc.add(ids[a], ids[b], kq * dphi[a] * dphi[b]);
          m_acc.add(ids[a], ids[b], mloc[a][b]);
        }
    }
  } else {
    for (size_t c = 0; c < m.tris.size(); ++c) {
      const auto& t = m.tris[c];
      const Vec2 p0 = m.nodes[t[0]], p1 = m.nodes[t[1]], p2 = m.nodes[t[2]];
      const double area2 = geom::cross(p1 - p0, p2 - p0);
      if (!(area2 > 0)) throw SolverError("degenerate cell " + std::to_string(c));
      const double area = 0.5 * area2;
      // constant P1 gradients
      const Vec2 grads[3] = {
          (1.0 / area2) * geom::rot90(p2 - p1),
          (1.0 / area2) * geom::rot90(p0 - p2),
          (1.0 / area2) * geom::rot90(p1 - p0),
      };
      // edge-midpoint rule, exact through degree 2
      const Vec2 mids[3] = {0.5 * (p0 + p1), 0.5 * (p1 + p2), 0.5 * (p2 + p0)};
      // barycentric values of phi_a at the midpoints
      const double bary[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
      double kq = 0.0;
      double mloc[3][3] = {};
      for (int q = 0; q < 3; ++q) {
        const double w = (area / 3.0) * gauss_weight_2d(mids[q].x, mids[q].y);
        kq += w;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) mloc[a][b] += w * bary[q][a] * bary[q][b];
      }
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          k_acc.add(t[a], t[b], kq * geom::dot(grads[a], grads[b]));
          m_acc.add(t[a], t[b], mloc[a][b]);
        }
    }
  }

  AssembledSystem sys;
  sys.K = csr_from_triplets(n, std::move(k_acc.idx), std::move(k_acc.vals));
  sys.M = csr_from_triplets(n, std::move(m_acc.idx), std::move(m_acc.vals));
  sys.n_dofs = n;
  sys.gaussian_mass = std::accumulate(sys.M.values.begin(), sys.M.values.end(), 0.0);
  sys.m1.assign(static_cast<size_t>(n), 0.0);
  std::vector<double> ones(static_cast<size_t>(n), 1.0);
  sys.M.spmv(ones.data(), sys.m1.data());
  return sys;
}

void write_triplets(const Csr& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path);
  out.precision(17);
  for (int32_t i = 0; i < a.rows; ++i)
    for (int32_t k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k)
      out << i << ' ' << a.colidx[k] << ' ' << a.values[k] << '\n';
}

Csr read_triplets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::array<int64_t, 2>> idx;
  std::vector<double> vals;
  int64_t i, j;
  double v;
  int64_t n = 0;
  while (in >> i >> j >> v) {
    if (i < 0 || j < 0) throw InputError("negative index in triplet file");
    idx.push_back({i, j});
    vals.push_back(v);
    n = std::max({n, i + 1, j + 1});
  }
  return csr_from_triplets(static_cast<int32_t>(n), std::move(idx), std::move(vals));
}

}  // namespace gspec::fem
