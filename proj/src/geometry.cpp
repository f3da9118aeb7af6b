#include "gspec/geometry.hpp"

#include <algorithm>
#include <limits>

namespace gspec::geom {

namespace {

constexpr double kTieTol = 1e-12;

bool is_1d(const Shape& s) {
  return std::holds_alternative<Interval>(s) || std::holds_alternative<RealLine>(s);
}

struct Feature {
  double d;
  Vec2 p;
};

// Closest point on segment [a,b].
Feature segment_closest(Vec2 a, Vec2 b, Vec2 x) {
  const Vec2 e = b - a;
  const double len2 = norm_sq(e);
  double t = len2 > 0 ? dot(x - a, e) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 p = a + t * e;
  return {norm(x - p), p};
}

void check_polygon(const std::vector<Vec2>& v) {
  if (v.size() < 3) throw InputError("polygon needs at least 3 vertices");
  const size_t n = v.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2 e0 = v[(i + 1) % n] - v[i];
    const Vec2 e1 = v[(i + 2) % n] - v[(i + 1) % n];
    if (cross(e0, e1) <= 0.0)
      throw InputError("polygon vertices must be strictly convex and counterclockwise");
  }
}

}  // namespace

ConvexDomain::ConvexDomain(Shape s) : shape_(std::move(s)) {
  if (const auto* iv = std::get_if<Interval>(&shape_)) {
    if (!(iv->a < iv->b)) throw InputError("interval needs a < b");
  } else if (const auto* hp = std::get_if<HalfPlane>(&shape_)) {
    if (std::abs(norm(hp->normal) - 1.0) > 1e-12)
      throw InputError("half-plane normal must be unit length");
  } else if (const auto* st = std::get_if<Strip>(&shape_)) {
    if (!(st->a > 0)) throw InputError("strip half-width must be positive");
  } else if (const auto* bx = std::get_if<Box>(&shape_)) {
    if (!(bx->x0 < bx->x1 && bx->y0 < bx->y1)) throw InputError("box needs x0 < x1, y0 < y1");
  } else if (const auto* dk = std::get_if<Disk>(&shape_)) {
    if (!(dk->radius > 0)) throw InputError("disk radius must be positive");
  } else if (const auto* el = std::get_if<Ellipse>(&shape_)) {
    if (!(el->rx > 0 && el->ry > 0)) throw InputError("ellipse semi-axes must be positive");
  } else if (const auto* pg = std::get_if<ConvexPolygon>(&shape_)) {
    check_polygon(pg->verts);
  }
}

int ConvexDomain::dim() const { return is_1d(shape_) ? 1 : 2; }

bool ConvexDomain::bounded() const {
  return !std::holds_alternative<RealLine>(shape_) &&
         !std::holds_alternative<HalfPlane>(shape_) && !std::holds_alternative<Strip>(shape_);
}

bool ConvexDomain::contains(Vec2 q) const {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return s.a < q.x && q.x < s.b;
        } else if constexpr (std::is_same_v<T, RealLine>) {
          return true;
        } else if constexpr (std::is_same_v<T, HalfPlane>) {
          return dot(s.normal, q) < s.offset;
        } else if constexpr (std::is_same_v<T, Strip>) {
          return std::abs(q.x) < s.a;
        } else if constexpr (std::is_same_v<T, Box>) {
          return s.x0 < q.x && q.x < s.x1 && s.y0 < q.y && q.y < s.y1;
        } else if constexpr (std::is_same_v<T, Disk>) {
          return norm(q - s.center) < s.radius;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          const double u = (q.x - s.center.x) / s.rx;
          const double v = (q.y - s.center.y) / s.ry;
          return u * u + v * v < 1.0;
        } else {
          const auto& v = s.verts;
          const size_t n = v.size();
          for (size_t i = 0; i < n; ++i)
            if (cross(v[(i + 1) % n] - v[i], q - v[i]) <= 0.0) return false;
          return true;
        }
      },
      shape_);
}

std::optional<double> ConvexDomain::interior_sphere_radius() const {
  return std::visit(
      [&](const auto& s) -> std::optional<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return 0.5 * (s.b - s.a);
        } else if constexpr (std::is_same_v<T, RealLine>) {
          return std::nullopt;  // no boundary, every radius works
        } else if constexpr (std::is_same_v<T, HalfPlane>) {
          return std::numeric_limits<double>::infinity();
        } else if constexpr (std::is_same_v<T, Strip>) {
          return s.a;
        } else if constexpr (std::is_same_v<T, Box>) {
          // inradius surrogate: curvature vanishes on edges, corners are
          // never projection targets from the interior
          return 0.5 * std::min(s.x1 - s.x0, s.y1 - s.y0);
        } else if constexpr (std::is_same_v<T, Disk>) {
          return s.radius;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          // rolling-ball radius: min radius of curvature, min(rx,ry)^2/max
          const double lo = std::min(s.rx, s.ry);
          const double hi = std::max(s.rx, s.ry);
          return lo * lo / hi;
        } else {
          (void)s;
          return std::nullopt;  // corners obstruct any uniform sphere
        }
      },
      shape_);
}

double ConvexDomain::diameter() const {
  if (!bounded()) throw DomainOfValidityError("diameter of an unbounded domain");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return s.b - s.a;
        } else if constexpr (std::is_same_v<T, Box>) {
          return std::hypot(s.x1 - s.x0, s.y1 - s.y0);
        } else if constexpr (std::is_same_v<T, Disk>) {
          return 2.0 * s.radius;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return 2.0 * std::max(s.rx, s.ry);
        } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
          double best = 0.0;
          for (size_t i = 0; i < s.verts.size(); ++i)
            for (size_t j = i + 1; j < s.verts.size(); ++j)
              best = std::max(best, norm(s.verts[i] - s.verts[j]));
          return best;
        } else {
          return 0.0;  // unreachable
        }
      },
      shape_);
}

double ConvexDomain::inradius() const {
  if (!bounded()) throw DomainOfValidityError("inradius of an unbounded domain");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return 0.5 * (s.b - s.a);
        } else if constexpr (std::is_same_v<T, Box>) {
          return 0.5 * std::min(s.x1 - s.x0, s.y1 - s.y0);
        } else if constexpr (std::is_same_v<T, Disk>) {
          return s.radius;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return std::min(s.rx, s.ry);
        } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
          // largest ball around the Chebyshev-ish center: max over interior
          // of min edge distance, via coordinate descent from the centroid
          const auto& v = s.verts;
          const size_t n = v.size();
          auto min_edge_dist = [&](Vec2 q) {
            double d = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < n; ++i) {
              const Vec2 a = v[i], b = v[(i + 1) % n];
              const Vec2 e = b - a;
              d = std::min(d, cross(e, q - a) / norm(e));
            }
            return d;
          };
          Vec2 c{0, 0};
          for (const auto& p : v) c = c + p;
          c = (1.0 / static_cast<double>(n)) * c;
          double step = 0.25 * diameter();
          double best = min_edge_dist(c);
          while (step > 1e-12) {
            bool improved = false;
            for (const Vec2 dir : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
              const Vec2 q = c + step * dir;
              const double d = min_edge_dist(q);
              if (d > best) {
                best = d;
                c = q;
                improved = true;
              }
            }
            if (!improved) step *= 0.5;
          }
          return best;
        } else {
          return 0.0;  // unreachable
        }
      },
      shape_);
}

ConvexDomain ConvexDomain::interval(double a, double b) { return ConvexDomain(Interval{a, b}); }
ConvexDomain ConvexDomain::real_line() { return ConvexDomain(RealLine{}); }
ConvexDomain ConvexDomain::half_plane(Vec2 n, double c) { return ConvexDomain(HalfPlane{n, c}); }
ConvexDomain ConvexDomain::strip(double a) { return ConvexDomain(Strip{a}); }
ConvexDomain ConvexDomain::box(double x0, double x1, double y0, double y1) {
  return ConvexDomain(Box{x0, x1, y0, y1});
}
ConvexDomain ConvexDomain::disk(Vec2 c, double r) { return ConvexDomain(Disk{c, r}); }
ConvexDomain ConvexDomain::ellipse(Vec2 c, double rx, double ry) {
  return ConvexDomain(Ellipse{c, rx, ry});
}
ConvexDomain ConvexDomain::polygon(std::vector<Vec2> v) {
  return ConvexDomain(ConvexPolygon{std::move(v)});
}

// ---------------------------------------------------------------------------
// Distance queries.

namespace {

BoundaryQuery finish(Vec2 x, Feature f) {
  if (f.d < 1e-300) return {0.0, {0.0, 0.0}, x};
  return {f.d, (1.0 / f.d) * (x - f.p), f.p};
}

// Parametric closest point on an ellipse boundary: minimize |x - B(t)|,
// B(t) = c + (rx cos t, ry sin t).  Coarse scan then Newton.
double ellipse_param_closest(const Ellipse& e, Vec2 x) {
  const Vec2 rel = x - e.center;
  auto B = [&](double t) { return Vec2{e.rx * std::cos(t), e.ry * std::sin(t)}; };
  auto Bp = [&](double t) { return Vec2{-e.rx * std::sin(t), e.ry * std::cos(t)}; };
  auto Bpp = [&](double t) { return Vec2{-e.rx * std::cos(t), -e.ry * std::sin(t)}; };

  const int kScan = 256;
  double t_best = 0.0;
  double d_best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double t = 2.0 * kPi * i / kScan;
    const double d = norm_sq(rel - B(t));
    if (d < d_best) {
      d_best = d;
      t_best = t;
    }
  }
  double t = t_best;
  for (int it = 0; it < 60; ++it) {
    const Vec2 r = rel - B(t);
    const double g = dot(r, Bp(t));                 // stationarity
    const double gp = dot(r, Bpp(t)) - norm_sq(Bp(t));
    if (std::abs(gp) < 1e-300) break;
    const double dt = g / gp;
    t -= dt;
    if (std::abs(dt) < 1e-15) break;
  }
  return t;
}

Feature polygon_closest(const std::vector<Vec2>& v, Vec2 x, bool interior) {
  const size_t n = v.size();
  Feature best{std::numeric_limits<double>::infinity(), {}};
  Feature second{std::numeric_limits<double>::infinity(), {}};
  for (size_t i = 0; i < n; ++i) {
    const Feature f = segment_closest(v[i], v[(i + 1) % n], x);
    if (f.d < best.d) {
      second = best;
      best = f;
    } else if (f.d < second.d) {
      second = f;
    }
  }
  // Adjacent edges sharing a vertex report the same projection point; a
  // genuine tie means two distinct projections at equal distance (interior
  // medial axis), which has no well-defined gradient.
  if (interior && second.d - best.d < kTieTol * (1.0 + best.d) &&
      norm(second.p - best.p) > 1e-9)
    throw DegenerateQueryError("ambiguous boundary projection");
  return best;
}

}  // namespace

BoundaryQuery distance_to_boundary(const ConvexDomain& dom, Vec2 x) {
  return std::visit(
      [&](const auto& s) -> BoundaryQuery {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) {
          const double da = std::abs(x.x - s.a), db = std::abs(x.x - s.b);
          if (dom.contains(x) && std::abs(da - db) < kTieTol * (s.b - s.a))
            throw DegenerateQueryError("ambiguous boundary projection");
          const double p = da <= db ? s.a : s.b;
          return finish({x.x, 0.0}, {std::min(da, db), {p, 0.0}});
        } else if constexpr (std::is_same_v<T, RealLine>) {
          throw DomainOfValidityError("the real line has no boundary");
        } else if constexpr (std::is_same_v<T, HalfPlane>) {
          const double sd = s.offset - dot(s.normal, x);  // > 0 inside
          return finish(x, {std::abs(sd), x + sd * s.normal});
        } else if constexpr (std::is_same_v<T, Strip>) {
          if (std::abs(x.x) < kTieTol * s.a && dom.contains(x))
            throw DegenerateQueryError("ambiguous boundary projection");
          const double side = x.x >= 0 ? 1.0 : -1.0;
          return finish(x, {std::abs(s.a - std::abs(x.x)), {side * s.a, x.y}});
        } else if constexpr (std::is_same_v<T, Box>) {
          if (dom.contains(x)) {
            const double dists[4] = {x.x - s.x0, s.x1 - x.x, x.y - s.y0, s.y1 - x.y};
            const Vec2 proj[4] = {{s.x0, x.y}, {s.x1, x.y}, {x.x, s.y0}, {x.x, s.y1}};
            int k = 0;
            for (int i = 1; i < 4; ++i)
              if (dists[i] < dists[k]) k = i;
            for (int i = 0; i < 4; ++i)
              if (i != k && dists[i] - dists[k] < kTieTol * (1.0 + dists[k]))
                throw DegenerateQueryError("ambiguous boundary projection");
            return finish(x, {dists[k], proj[k]});
          }
          const Vec2 p{std::clamp(x.x, s.x0, s.x1), std::clamp(x.y, s.y0, s.y1)};
          return finish(x, {norm(x - p), p});
        } else if constexpr (std::is_same_v<T, Disk>) {
          const double r = norm(x - s.center);
          if (r < 1e-14)
            throw DegenerateQueryError("ambiguous boundary projection");
          const Vec2 p = s.center + (s.radius / r) * (x - s.center);
          return finish(x, {std::abs(s.radius - r), p});
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          const Vec2 rel = x - s.center;
          if (norm(rel) < 1e-14)
            throw DegenerateQueryError("ambiguous boundary projection");
          const double t = ellipse_param_closest(s, x);
          const Vec2 p = s.center + Vec2{s.rx * std::cos(t), s.ry * std::sin(t)};
          return finish(x, {norm(x - p), p});
        } else {
          return finish(x, polygon_closest(s.verts, x, dom.contains(x)));
        }
      },
      dom.shape());
}

// ---------------------------------------------------------------------------
// Curvature and reflection.

double curvature_at(const ConvexDomain& dom, Vec2 p) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>) {
          (void)p;
          return 1.0 / s.radius;
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          // kappa(t) = rx ry / (rx^2 sin^2 t + ry^2 cos^2 t)^{3/2}
          const double ct = (p.x - s.center.x) / s.rx;
          const double st = (p.y - s.center.y) / s.ry;
          const double q = s.rx * s.rx * st * st + s.ry * s.ry * ct * ct;
          return s.rx * s.ry / (q * std::sqrt(q));
        } else if constexpr (std::is_same_v<T, HalfPlane> || std::is_same_v<T, Strip> ||
                             std::is_same_v<T, Box> || std::is_same_v<T, ConvexPolygon>) {
          (void)p;
          return 0.0;  // flat pieces; callers keep clear of corners
        } else {
          throw DomainOfValidityError("curvature undefined for this domain");
        }
      },
      dom.shape());
}

namespace {

// Phi as a plain map of the ambient point, for finite differencing.
Vec2 phi_map(const ConvexDomain& dom, Vec2 x) {
  const BoundaryQuery q = distance_to_boundary(dom, x);
  return x - (2.0 * q.d) * q.grad;
}

double jac_fd_det(const ConvexDomain& dom, Vec2 x, int dim) {
  const double eps = 1e-6 * (1.0 + norm(x));
  if (dim == 1) {
    const double fp = phi_map(dom, {x.x + eps, 0.0}).x;
    const double fm = phi_map(dom, {x.x - eps, 0.0}).x;
    return std::abs((fp - fm) / (2.0 * eps));
  }
  double J[2][2];
  for (int j = 0; j < 2; ++j) {
    Vec2 dx{j == 0 ? eps : 0.0, j == 1 ? eps : 0.0};
    const Vec2 fp = phi_map(dom, x + dx);
    const Vec2 fm = phi_map(dom, x - dx);
    J[0][j] = (fp.x - fm.x) / (2.0 * eps);
    J[1][j] = (fp.y - fm.y) / (2.0 * eps);
  }
  return std::abs(J[0][0] * J[1][1] - J[0][1] * J[1][0]);
}

}  // namespace

ReflectionData reflect(const ConvexDomain& dom, Vec2 x) {
  if (!dom.contains(x)) throw DomainOfValidityError("reflection needs an interior point");
  const BoundaryQuery q = distance_to_boundary(dom, x);

  const bool polygonal = std::holds_alternative<ConvexPolygon>(dom.shape());
  if (!polygonal) {
    const auto rbar = dom.interior_sphere_radius();
    if (!rbar) throw DomainOfValidityError("interior sphere radius unavailable");
    if (!(q.d < 0.5 * *rbar))
      throw DomainOfValidityError("point too deep for the reflection collar");
  }

  ReflectionData out;
  out.x = x;
  out.d = q.d;
  out.grad_d = q.grad;
  out.p = q.p;
  out.phi = x - (2.0 * q.d) * q.grad;

  if (dom.dim() == 2) {
    // Polygon projections onto a vertex have no tangent plane to reflect
    // across; restrict to edge interiors there.
    if (polygonal) {
      const auto& v = std::get<ConvexPolygon>(dom.shape()).verts;
      for (const Vec2& vert : v)
        if (norm(q.p - vert) < 1e-9)
          throw DegenerateQueryError("projection lands on a polygon vertex");
      out.curvatures.push_back(0.0);
    } else {
      out.curvatures.push_back(curvature_at(dom, q.p));
    }
    const double kappa = out.curvatures[0];
    const double denom = 1.0 - q.d * kappa;
    if (!(denom > 0)) throw DomainOfValidityError("curvature collar violated");
    out.jac_analytic = std::abs(1.0 + 2.0 * q.d * kappa / denom);
  } else {
    out.jac_analytic = 1.0;
  }
  out.jac_fd = jac_fd_det(dom, x, dom.dim());
  return out;
}

double exp_factor(const ConvexDomain& dom, Vec2 x) {
  if (!dom.contains_origin())
    throw DomainOfValidityError("exp factor needs an origin-containing domain");
  if (!dom.contains(x)) throw DomainOfValidityError("exp factor needs an interior point");
  const BoundaryQuery q = distance_to_boundary(dom, x);
  const auto rbar = dom.interior_sphere_radius();
  if (!rbar) throw DomainOfValidityError("interior sphere radius unavailable");
  if (!(q.d < 0.5 * *rbar))
    throw DomainOfValidityError("point too deep for the reflection collar");
  const Vec2 phi = x - (2.0 * q.d) * q.grad;
  return std::exp(0.5 * (norm_sq(x) - norm_sq(phi)));
}

Vec2 reflect_into(const ConvexDomain& dom, Vec2 exterior) {
  if (dom.contains(exterior))
    throw DomainOfValidityError("inverse reflection needs an exterior point");
  const BoundaryQuery q = distance_to_boundary(dom, exterior);
  return (2.0 * q.p) - exterior;
}

// ---------------------------------------------------------------------------

InvadingResult invading_sequence(const ConvexDomain& dom, int k) {
  if (k < 1) throw InputError("invading index must be >= 1");
  const double kk = static_cast<double>(k);
  if (dom.bounded()) return {dom, true};
  if (const auto* st = std::get_if<Strip>(&dom.shape()))
    return {ConvexDomain::box(-st->a, st->a, -kk, kk), false};
  if (std::holds_alternative<RealLine>(dom.shape()))
    return {ConvexDomain::interval(-kk, kk), false};
  const auto& hp = std::get<HalfPlane>(dom.shape());
  // rectangle of half-extent k in the tangent direction, depth 2k inward
  const Vec2 n = hp.normal, t = rot90(hp.normal);
  const double c = hp.offset;
  std::vector<Vec2> verts = {
      c * n + (-kk) * t,
      c * n + kk * t,
      (c - 2.0 * kk) * n + kk * t,
      (c - 2.0 * kk) * n + (-kk) * t,
  };
  return {ConvexDomain::polygon(std::move(verts)), false};
}

TranslationResult translate_to_contain_origin(const ConvexDomain& dom) {
  if (dom.contains_origin()) return {dom, 0.0, {0.0, 0.0}, false};
  if (!dom.bounded())
    throw DomainOfValidityError("translation trick needs a bounded domain");

  const BoundaryQuery q = distance_to_boundary(dom, {0.0, 0.0});
  const double d0 = q.d;
  const Vec2 u = (1.0 / norm(q.p)) * q.p;  // toward the domain
  double delta = d0 + dom.inradius();

  auto shifted_contains_origin = [&](double del) {
    return dom.contains(del * u);  // 0 in (dom - del u)  <=>  del u in dom
  };
  if (!shifted_contains_origin(delta)) {
    // fall back to the midpoint of the chord cut by the ray through the
    // projection point; always interior for a convex body
    double lo = d0, hi = d0 + dom.diameter();
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (dom.contains(mid * u) || mid <= d0 ? lo : hi) = mid;
    }
    delta = 0.5 * (d0 + lo);
  }

  const Vec2 shift = (-delta) * u;
  ConvexDomain moved = std::visit(
      [&](const auto& s) -> ConvexDomain {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return ConvexDomain::interval(s.a + shift.x, s.b + shift.x);
        } else if constexpr (std::is_same_v<T, Box>) {
          return ConvexDomain::box(s.x0 + shift.x, s.x1 + shift.x, s.y0 + shift.y,
                                   s.y1 + shift.y);
        } else if constexpr (std::is_same_v<T, Disk>) {
          return ConvexDomain::disk(s.center + shift, s.radius);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return ConvexDomain::ellipse(s.center + shift, s.rx, s.ry);
        } else if constexpr (std::is_same_v<T, ConvexPolygon>) {
          std::vector<Vec2> v = s.verts;
          for (auto& p : v) p = p + shift;
          return ConvexDomain::polygon(std::move(v));
        } else {
          throw DomainOfValidityError("translation trick needs a bounded domain");
        }
      },
      dom.shape());
  return {std::move(moved), delta, u, true};
}

// ---------------------------------------------------------------------------

void NonconvexDumbbell::validate() const {
  if (!(square_side > 0 && corridor_width > 0 && corridor_length > 0))
    throw InputError("dumbbell dimensions must be positive");
  if (!(corridor_width < square_side))
    throw InputError("corridor must be narrower than the squares");
}

std::vector<Vec2> NonconvexDumbbell::outline() const {
  validate();
  const double s = square_side, w = corridor_width, L = corridor_length;
  const double hl = 0.5 * L, hs = 0.5 * s, hw = 0.5 * w;
  return {
      {-hl - s, -hs}, {-hl, -hs}, {-hl, -hw}, {hl, -hw},
      {hl, -hs},      {hl + s, -hs}, {hl + s, hs}, {hl, hs},
      {hl, hw},       {-hl, hw},  {-hl, hs},  {-hl - s, hs},
  };
}

}  // namespace gspec::geom
