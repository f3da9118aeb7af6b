#pragma once

#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "gspec/common.hpp"

namespace gspec::geom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm_sq(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }

// ---------------------------------------------------------------------------
// Domain kinds.  1D: Interval, RealLine.  2D: the rest.

struct Interval {
  double a, b;
};
struct RealLine {};
struct HalfPlane {
  Vec2 normal;  // unit outward
  double offset;  // { x : normal . x <= offset }
};
struct Strip {
  double a;  // { |x1| < a }
};
struct Box {
  double x0, x1, y0, y1;
};
struct Disk {
  Vec2 center;
  double radius;
};
// Axis-aligned C^2 oval with curvature bounded away from 0.
struct Ellipse {
  Vec2 center;
  double rx, ry;
};
struct ConvexPolygon {
  std::vector<Vec2> verts;  // counterclockwise
};

using Shape =
    std::variant<Interval, RealLine, HalfPlane, Strip, Box, Disk, Ellipse, ConvexPolygon>;

class ConvexDomain {
 public:
  explicit ConvexDomain(Shape s);

  const Shape& shape() const { return shape_; }
  int dim() const;
  bool bounded() const;
  bool contains(Vec2 p) const;  // open-set membership
  bool contains_origin() const { return contains({0.0, 0.0}); }
  // Uniform interior sphere radius; empty for general polygons.  Boxes carry
  // their inradius as a documented surrogate.
  std::optional<double> interior_sphere_radius() const;
  double diameter() const;  // bounded domains only
  double d0() const;        // dist(0, boundary), domains with 0 outside
  double inradius() const;  // bounded domains

  static ConvexDomain interval(double a, double b);
  static ConvexDomain real_line();
  static ConvexDomain half_plane(Vec2 outward_normal, double offset);
  static ConvexDomain strip(double a);
  static ConvexDomain box(double x0, double x1, double y0, double y1);
  static ConvexDomain disk(Vec2 center, double radius);
  static ConvexDomain ellipse(Vec2 center, double rx, double ry);
  static ConvexDomain polygon(std::vector<Vec2> verts);

 private:
  Shape shape_;
};

struct BoundaryQuery {
  double d;    // unsigned distance to the boundary
  Vec2 grad;   // (x - p)/d: inward for interior points, outward for exterior
  Vec2 p;      // unique boundary projection
};

/// Distance, gradient, and projection.  Interior queries on polygons and
/// boxes fail with DegenerateQueryError on medial-axis ties.
BoundaryQuery distance_to_boundary(const ConvexDomain& dom, Vec2 x);

struct ReflectionData {
  Vec2 x;
  double d;
  Vec2 grad_d;
  Vec2 p;                          // (x + phi)/2
  Vec2 phi;                        // x - 2 d grad_d
  std::vector<double> curvatures;  // principal curvatures at p, N-1 values
  double jac_analytic;             // prod_i (1 + 2 d k_i / (1 - d k_i))
  double jac_fd;                   // |det DPhi| by central differences
};

/// Normal reflection of an interior point across the boundary.  Requires
/// d(x) < rbar/2; on polygons the projection must land in an edge interior.
ReflectionData reflect(const ConvexDomain& dom, Vec2 x);

/// exp(-|Phi(x)|^2/2 + |x|^2/2) for an interior point of an
/// origin-containing domain; always <= 1 there.
double exp_factor(const ConvexDomain& dom, Vec2 x);

/// Inverse reflection: maps a point of the exterior ring back inside,
/// 2 p(x) - x.  Well defined for every exterior point of a convex domain.
Vec2 reflect_into(const ConvexDomain& dom, Vec2 exterior);

struct InvadingResult {
  ConvexDomain domain;
  bool already_bounded;
};

/// k-th member of a nested bounded exhaustion of an unbounded convex domain.
/// Strip(a) -> box (-a,a) x (-k,k); bounded input is returned unchanged with
/// the flag set.
InvadingResult invading_sequence(const ConvexDomain& dom, int k);

struct TranslationResult {
  ConvexDomain domain;
  double delta;
  Vec2 direction;  // unit vector from the origin toward the old domain
  bool moved;
};

/// Rigid motion carrying a domain with 0 outside onto one containing 0,
/// shifted by delta > d0 along -direction.
TranslationResult translate_to_contain_origin(const ConvexDomain& dom);

/// Boundary curvature at a boundary point of a 2D C^2 domain (disk,
/// ellipse, strip, half-plane); 0 on polygon edge interiors.
double curvature_at(const ConvexDomain& dom, Vec2 p);

// ---------------------------------------------------------------------------

struct NonconvexDumbbell {
  double square_side;
  double corridor_width;
  double corridor_length;

  std::vector<Vec2> outline() const;  // ccw polygon with reflex corners
  void validate() const;
};

}  // namespace gspec::geom
