#pragma once

#include <array>
#include <vector>

#include "gspec/geometry.hpp"

namespace gspec::mesh {

struct Mesh {
  int dim = 2;
  std::vector<geom::Vec2> nodes;           // 1D meshes use .x only
  std::vector<std::array<int, 2>> cells1d;
  std::vector<std::array<int, 3>> tris;    // ccw
  std::vector<int> boundary_nodes;         // sorted, unique
  std::vector<double> tensor_x, tensor_y;  // breakpoints when tensor-product

  double h_max() const;
  double min_angle_deg() const;  // 2D only
  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const {
    return dim == 1 ? static_cast<int>(cells1d.size()) : static_cast<int>(tris.size());
  }
};

/// Uniform partition of [a,b] with exact endpoints.
std::vector<double> linspace(double a, double b, int n_cells);

Mesh mesh_interval(double a, double b, int n_cells);  // n_cells >= 2
Mesh mesh_tensor(const std::vector<double>& xs, const std::vector<double>& ys);
Mesh mesh_tensor_uniform(double x0, double x1, double y0, double y1, double h);

/// Target-size mesh of a bounded 2D domain; max cell diameter <= 2h.  Boxes
/// get tensor grids; disks, ellipses and polygons get concentric rings
/// stitched into triangle strips.  Refuses h larger than the inradius.
Mesh mesh_convex_2d(const geom::ConvexDomain& dom, double h);

Mesh mesh_dumbbell(const geom::NonconvexDumbbell& db, double h);

struct TruncatedDomain {
  geom::ConvexDomain domain;
  double radius;                   // half-length of the truncated direction
  bool artificial_boundary = true; // carries Neumann (natural) conditions
  bool low_accuracy = false;       // crude tail tolerance
};

/// Replace an unbounded domain (real line or strip) by a bounded stand-in
/// whose omitted Gaussian mass is below tail_tol.  The truncation radius is
/// chosen on a half-integer grid.
TruncatedDomain truncate_unbounded(const geom::ConvexDomain& dom, double tail_tol);

double truncation_radius(double tail_tol);

/// Validates orientation, conformity (every interior edge shared by exactly
/// two triangles) and closed boundary loops; fills boundary_nodes.
void finalize_mesh(Mesh& m);

}  // namespace gspec::mesh
