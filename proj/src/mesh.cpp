#include "gspec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gspec::mesh {

using geom::Vec2;

double Mesh::h_max() const {
  double h = 0.0;
  if (dim == 1) {
    for (const auto& c : cells1d) h = std::max(h, std::abs(nodes[c[1]].x - nodes[c[0]].x));
  } else {
    for (const auto& t : tris)
      for (int e = 0; e < 3; ++e)
        h = std::max(h, geom::norm(nodes[t[(e + 1) % 3]] - nodes[t[e]]));
  }
  return h;
}

double Mesh::min_angle_deg() const {
  double worst = 180.0;
  for (const auto& t : tris) {
    for (int e = 0; e < 3; ++e) {
      const Vec2 a = nodes[t[e]], b = nodes[t[(e + 1) % 3]], c = nodes[t[(e + 2) % 3]];
      const Vec2 u = b - a, v = c - a;
      const double cosang =
          std::clamp(geom::dot(u, v) / (geom::norm(u) * geom::norm(v)), -1.0, 1.0);
      worst = std::min(worst, std::acos(cosang) * 180.0 / kPi);
    }
  }
  return worst;
}

std::vector<double> linspace(double a, double b, int n_cells) {
  if (n_cells < 1) throw InputError("linspace needs at least one cell");
  std::vector<double> v(static_cast<size_t>(n_cells) + 1);
  for (int i = 1; i < n_cells; ++i)
    v[static_cast<size_t>(i)] = a + (b - a) * static_cast<double>(i) / n_cells;
  v.front() = a;
  v.back() = b;
  return v;
}

Mesh mesh_interval(double a, double b, int n_cells) {
  if (!(a < b)) throw InputError("interval needs a < b");
  if (n_cells < 2) throw InputError("interval mesh needs at least 2 cells");
  Mesh m;
  m.dim = 1;
  const auto xs = linspace(a, b, n_cells);
  m.nodes.reserve(xs.size());
  for (double x : xs) m.nodes.push_back({x, 0.0});
  for (int i = 0; i < n_cells; ++i) m.cells1d.push_back({i, i + 1});
  m.boundary_nodes = {0, n_cells};
  m.tensor_x = xs;
  return m;
}

Mesh mesh_tensor(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 2 || ys.size() < 2) throw InputError("tensor mesh needs >= 2 breakpoints");
  Mesh m;
  m.dim = 2;
  const int nx = static_cast<int>(xs.size()) - 1;
  const int ny = static_cast<int>(ys.size()) - 1;
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.nodes.push_back({xs[static_cast<size_t>(i)], ys[static_cast<size_t>(j)]});
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int n00 = id(i, j), n10 = id(i + 1, j), n11 = id(i + 1, j + 1), n01 = id(i, j + 1);
      m.tris.push_back({n00, n10, n11});
      m.tris.push_back({n00, n11, n01});
    }
  m.tensor_x = xs;
  m.tensor_y = ys;
  finalize_mesh(m);
  return m;
}

Mesh mesh_tensor_uniform(double x0, double x1, double y0, double y1, double h) {
  if (!(h > 0)) throw InputError("mesh size must be positive");
  const int nx = std::max(1, static_cast<int>(std::ceil((x1 - x0) / h - 1e-12)));
  const int ny = std::max(1, static_cast<int>(std::ceil((y1 - y0) / h - 1e-12)));
  return mesh_tensor(linspace(x0, x1, nx), linspace(y0, y1, ny));
}

// ---------------------------------------------------------------------------
// Ring-stitched meshes.

namespace {

struct Ring {
  std::vector<int> ids;
  std::vector<double> ang;  // unwrapped, increasing, same start window per mesh
};

// Triangulates the annulus between consecutive closed loops by a two-pointer
// zipper over the unwrapped angles.
void stitch(Mesh& m, const Ring& inner, const Ring& outer) {
  const size_t ni = inner.ids.size(), no = outer.ids.size();
  auto ang = [](const Ring& r, size_t idx) {
    const size_t n = r.ang.size();
    return r.ang[idx % n] + 2.0 * kPi * static_cast<double>(idx / n);
  };
  size_t i = 0, j = 0;
  while (i < ni || j < no) {
    bool take_inner;
    if (i == ni)
      take_inner = false;
    else if (j == no)
      take_inner = true;
    else
      take_inner = ang(inner, i + 1) <= ang(outer, j + 1);
    if (take_inner) {
      m.tris.push_back({inner.ids[i % ni], outer.ids[j % no], inner.ids[(i + 1) % ni]});
      ++i;
    } else {
      m.tris.push_back({inner.ids[i % ni], outer.ids[j % no], outer.ids[(j + 1) % no]});
      ++j;
    }
  }
}

void fan_center(Mesh& m, int center, const Ring& first) {
  const size_t n = first.ids.size();
  for (size_t i = 0; i < n; ++i)
    m.tris.push_back({center, first.ids[i], first.ids[(i + 1) % n]});
}

double unwrap(double raw, double prev) {
  while (raw < prev - 1e-12) raw += 2.0 * kPi;
  return raw;
}

// Concentric scaled copies of an oval boundary, 6j nodes on ring j.
Mesh oval_rings(Vec2 center, double rx, double ry, double h) {
  const double r_big = std::max(rx, ry);
  const int n_r = std::max(2, static_cast<int>(std::ceil(r_big / h - 1e-12)));
  Mesh m;
  m.dim = 2;
  m.nodes.push_back(center);
  std::vector<Ring> rings(static_cast<size_t>(n_r));
  for (int j = 1; j <= n_r; ++j) {
    Ring& r = rings[static_cast<size_t>(j - 1)];
    const int cnt = 6 * j;
    const double s = static_cast<double>(j) / n_r;
    for (int i = 0; i < cnt; ++i) {
      const double th = 2.0 * kPi * i / cnt;
      r.ids.push_back(static_cast<int>(m.nodes.size()));
      m.nodes.push_back({center.x + s * rx * std::cos(th), center.y + s * ry * std::sin(th)});
      r.ang.push_back(th);
    }
  }
  fan_center(m, 0, rings.front());
  for (size_t j = 0; j + 1 < rings.size(); ++j) stitch(m, rings[j], rings[j + 1]);
  finalize_mesh(m);
  return m;
}

Mesh polygon_rings(const std::vector<Vec2>& verts, double h) {
  // scale toward the deepest interior point so every ring stays convex
  const geom::ConvexDomain dom = geom::ConvexDomain::polygon(verts);
  Vec2 c{0, 0};
  for (const auto& v : verts) c = c + v;
  c = (1.0 / static_cast<double>(verts.size())) * c;

  double r_max = 0.0;
  for (const auto& v : verts) r_max = std::max(r_max, geom::norm(v - c));
  const int n_r = std::max(2, static_cast<int>(std::ceil(r_max / h - 1e-12)));

  Mesh m;
  m.dim = 2;
  m.nodes.push_back(c);
  std::vector<Ring> rings(static_cast<size_t>(n_r));
  const size_t nv = verts.size();
  for (int j = 1; j <= n_r; ++j) {
    Ring& r = rings[static_cast<size_t>(j - 1)];
    const double s = static_cast<double>(j) / n_r;
    double prev = -std::numeric_limits<double>::infinity();
    for (size_t e = 0; e < nv; ++e) {
      const Vec2 a = c + s * (verts[e] - c);
      const Vec2 b = c + s * (verts[(e + 1) % nv] - c);
      const int pieces =
          std::max(1, static_cast<int>(std::round(geom::norm(b - a) / h)));
      for (int q = 0; q < pieces; ++q) {
        const double t = static_cast<double>(q) / pieces;
        const Vec2 p = a + t * (b - a);
        r.ids.push_back(static_cast<int>(m.nodes.size()));
        m.nodes.push_back(p);
        const double raw = std::atan2(p.y - c.y, p.x - c.x);
        const double aa = r.ang.empty()
                              ? raw
                              : unwrap(raw, prev);
        r.ang.push_back(aa);
        prev = aa;
      }
    }
    // shift so all rings share the start window of ring 0's first node
    const double base = r.ang.front();
    for (double& a : r.ang) a -= base;
  }
  fan_center(m, 0, rings.front());
  for (size_t j = 0; j + 1 < rings.size(); ++j) stitch(m, rings[j], rings[j + 1]);
  finalize_mesh(m);
  return m;
}

}  // namespace

Mesh mesh_convex_2d(const geom::ConvexDomain& dom, double h) {
  if (!(h > 0)) throw InputError("mesh size must be positive");
  if (!dom.bounded()) throw InputError("mesh_convex_2d needs a bounded domain");
  if (dom.dim() != 2) throw InputError("mesh_convex_2d needs a 2D domain");
  if (h > dom.inradius()) throw InputError("mesh size exceeds the inradius");
  if (const auto* bx = std::get_if<geom::Box>(&dom.shape()))
    return mesh_tensor_uniform(bx->x0, bx->x1, bx->y0, bx->y1, h);
  if (const auto* dk = std::get_if<geom::Disk>(&dom.shape()))
    return oval_rings(dk->center, dk->radius, dk->radius, h);
  if (const auto* el = std::get_if<geom::Ellipse>(&dom.shape()))
    return oval_rings(el->center, el->rx, el->ry, h);
  if (const auto* pg = std::get_if<geom::ConvexPolygon>(&dom.shape()))
    return polygon_rings(pg->verts, h);
  throw InputError("unsupported domain kind for meshing");
}

// ---------------------------------------------------------------------------

namespace {

// Append src to dst, identifying nodes with bit-identical coordinates.
void merge_into(Mesh& dst, const Mesh& src, std::map<std::pair<double, double>, int>& index) {
  std::vector<int> remap(src.nodes.size());
  for (size_t k = 0; k < src.nodes.size(); ++k) {
    const auto key = std::make_pair(src.nodes[k].x, src.nodes[k].y);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, static_cast<int>(dst.nodes.size())).first;
      dst.nodes.push_back(src.nodes[k]);
    }
    remap[k] = it->second;
  }
  for (const auto& t : src.tris)
    dst.tris.push_back({remap[static_cast<size_t>(t[0])], remap[static_cast<size_t>(t[1])],
                        remap[static_cast<size_t>(t[2])]});
}

}  // namespace

Mesh mesh_dumbbell(const geom::NonconvexDumbbell& db, double h) {
  db.validate();
  if (!(h > 0)) throw InputError("mesh size must be positive");
  const double hs = 0.5 * db.square_side, hw = 0.5 * db.corridor_width,
               hl = 0.5 * db.corridor_length;

  const int k_mid = std::max(1, static_cast<int>(std::ceil(2.0 * hw / h - 1e-12)));
  const int k_out = std::max(1, static_cast<int>(std::ceil((hs - hw) / h - 1e-12)));
  const int nx_sq = std::max(1, static_cast<int>(std::ceil(db.square_side / h - 1e-12)));
  const int nx_co = std::max(1, static_cast<int>(std::ceil(2.0 * hl / h - 1e-12)));

  // squares resolve y = +-hw exactly so the corridor interface nodes match
  const auto ys_mid = linspace(-hw, hw, k_mid);
  std::vector<double> ys_sq = linspace(-hs, -hw, k_out);
  ys_sq.insert(ys_sq.end(), ys_mid.begin() + 1, ys_mid.end());
  {
    const auto top = linspace(hw, hs, k_out);
    ys_sq.insert(ys_sq.end(), top.begin() + 1, top.end());
  }

  const Mesh left = mesh_tensor(linspace(-hl - db.square_side, -hl, nx_sq), ys_sq);
  const Mesh mid = mesh_tensor(linspace(-hl, hl, nx_co), ys_mid);
  const Mesh right = mesh_tensor(linspace(hl, hl + db.square_side, nx_sq), ys_sq);

  Mesh m;
  m.dim = 2;
  std::map<std::pair<double, double>, int> index;
  merge_into(m, left, index);
  merge_into(m, mid, index);
  merge_into(m, right, index);
  finalize_mesh(m);
  return m;
}

// ---------------------------------------------------------------------------

double truncation_radius(double tail_tol) {
  if (!(tail_tol > 0 && tail_tol < 1)) throw InputError("tail tolerance must be in (0,1)");
  for (double r = 0.5; r <= 40.0; r += 0.5)
    if (2.0 * gauss_tail(r) <= tail_tol) return r;
  throw InputError("tail tolerance out of reach");
}

TruncatedDomain truncate_unbounded(const geom::ConvexDomain& dom, double tail_tol) {
  if (dom.bounded()) throw InputError("truncation expects an unbounded domain");
  const double r = truncation_radius(tail_tol);
  const bool crude = tail_tol > 1e-6;
  if (std::holds_alternative<geom::RealLine>(dom.shape()))
    return {geom::ConvexDomain::interval(-r, r), r, true, crude};
  if (const auto* st = std::get_if<geom::Strip>(&dom.shape()))
    return {geom::ConvexDomain::box(-st->a, st->a, -r, r), r, true, crude};
  throw InputError("truncation supports the real line and strips");
}

// ---------------------------------------------------------------------------

void finalize_mesh(Mesh& m) {
  if (m.dim == 1) {
    std::sort(m.boundary_nodes.begin(), m.boundary_nodes.end());
    return;
  }
  const int nn = m.n_nodes();
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : m.tris) {
    for (int k = 0; k < 3; ++k)
      if (t[k] < 0 || t[k] >= nn) throw SolverError("triangle references a missing node");
    const Vec2 a = m.nodes[t[0]], b = m.nodes[t[1]], c = m.nodes[t[2]];
    if (geom::cross(b - a, c - a) <= 0.0) throw SolverError("triangle with nonpositive area");
    for (int k = 0; k < 3; ++k) {
      const int u = t[k], v = t[(k + 1) % 3];
      ++edge_count[{std::min(u, v), std::max(u, v)}];
    }
  }
  std::map<int, int> boundary_degree;
  for (const auto& [e, cnt] : edge_count) {
    if (cnt > 2) throw SolverError("edge shared by more than two triangles");
    if (cnt == 1) {
      ++boundary_degree[e.first];
      ++boundary_degree[e.second];
    }
  }
  m.boundary_nodes.clear();
  for (const auto& [node, deg] : boundary_degree) {
    if (deg != 2) throw SolverError("boundary does not close into loops");
    m.boundary_nodes.push_back(node);
  }
}

}  // namespace gspec::mesh
