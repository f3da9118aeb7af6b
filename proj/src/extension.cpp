#include "gspec/extension.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "gspec/common.hpp"

namespace gspec::ext {

using geom::Vec2;

double CutoffProfile::value_at_distance(double d) const {
  if (d <= 0.0) return 1.0;
  if (d >= r_tilde) return 0.0;
  const double s = 1.0 - d / r_tilde;
  return s * s * (3.0 - 2.0 * s);
}

CutoffProfile build_cutoff(const geom::ConvexDomain& dom) {
  const auto rbar = dom.interior_sphere_radius();
  if (!rbar) throw DomainOfValidityError("cutoff needs an interior sphere radius");
  if (!std::isfinite(*rbar))
    throw DomainOfValidityError("cutoff needs a finite interior sphere radius");
  CutoffProfile c;
  c.r_tilde = 0.5 * *rbar;
  c.grad_bound = 3.0 / (2.0 * c.r_tilde);
  return c;
}

// ---------------------------------------------------------------------------

ExtensionField::ExtensionField(geom::ConvexDomain dom, std::function<double(Vec2)> inner,
                               CutoffProfile theta, Vec2 pre_shift,
                               std::function<double(Vec2)> post_factor)
    : dom_(std::move(dom)),
      inner_(std::move(inner)),
      theta_(theta),
      pre_shift_(pre_shift),
      post_factor_(std::move(post_factor)) {}

Region ExtensionField::region(Vec2 x) const {
  const Vec2 y = x - pre_shift_;
  if (dom_.contains(y)) return Region::Inner;
  const auto q = geom::distance_to_boundary(dom_, y);
  return q.d < theta_.r_tilde ? Region::Ring : Region::Outer;
}

double ExtensionField::value(Vec2 x) const {
  const Vec2 y = x - pre_shift_;
  double v;
  if (dom_.contains(y)) {
    v = inner_(y);
  } else {
    const auto q = geom::distance_to_boundary(dom_, y);
    if (q.d >= theta_.r_tilde) return 0.0;
    v = inner_((2.0 * q.p) - y) * theta_.value_at_distance(q.d);
  }
  return post_factor_ ? v * post_factor_(x) : v;
}

std::vector<FieldSample> ExtensionField::sample(const std::vector<Vec2>& pts) const {
  std::vector<FieldSample> out;
  out.reserve(pts.size());
  for (const Vec2& p : pts) out.push_back({p, value(p), region(p)});
  return out;
}

void ExtensionField::export_csv(const std::vector<Vec2>& pts, const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw InputError("cannot open " + path);
  f.precision(17);
  f << "x,y,value,region\n";
  for (const auto& s : sample(pts)) {
    const char* tag = s.region == Region::Inner   ? "inner"
                      : s.region == Region::Ring ? "ring"
                                                 : "outer";
    f << s.x.x << ',' << s.x.y << ',' << s.value << ',' << tag << '\n';
  }
}

ExtensionField extend(const geom::ConvexDomain& dom, std::function<double(Vec2)> u) {
  if (!dom.contains_origin())
    throw DomainOfValidityError("direct extension needs 0 inside; use the conjugated route");
  return ExtensionField(dom, std::move(u), build_cutoff(dom));
}

ExtensionField conjugate_extend(const geom::ConvexDomain& dom, std::function<double(Vec2)> u) {
  if (dom.contains_origin())
    throw InputError("conjugated extension expects a domain with 0 outside");
  const auto tr = geom::translate_to_contain_origin(dom);
  const double delta = tr.delta;
  const Vec2 dir = tr.direction;
  auto v = [u = std::move(u), delta, dir](Vec2 y) {
    return u(y + delta * dir) * std::exp(-0.5 * geom::dot(y, dir) * delta - 0.25 * delta * delta);
  };
  auto back = [delta, dir](Vec2 x) {
    return std::exp(0.5 * geom::dot(x, dir) * delta - 0.25 * delta * delta);
  };
  return ExtensionField(tr.domain, std::move(v), build_cutoff(tr.domain), delta * dir,
                        std::move(back));
}

// ---------------------------------------------------------------------------
// Quadrature machinery.

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw InputError("quadrature needs at least one node");
  x.assign(static_cast<size_t>(n), 0.0);
  w.assign(static_cast<size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    x[static_cast<size_t>(i)] = xm - xl * z;
    x[static_cast<size_t>(n - 1 - i)] = xm + xl * z;
    const double wi = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    w[static_cast<size_t>(i)] = wi;
    w[static_cast<size_t>(n - 1 - i)] = wi;
  }
}

namespace {

// int over an annulus r in [r0,r1] around c of g(point), in Lebesgue measure,
// radial Gauss-Legendre x periodic trapezoid
double annulus_integral(Vec2 c, double r0, double r1,
                        const std::function<double(Vec2)>& g, int nr = 120,
                        int nth = 400) {
  std::vector<double> xr, wr;
  gauss_legendre(nr, r0, r1, xr, wr);
  double total = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = xr[static_cast<size_t>(i)];
    double ring = 0.0;
    for (int j = 0; j < nth; ++j) {
      const double th = 2.0 * kPi * j / nth;
      ring += g({c.x + r * std::cos(th), c.y + r * std::sin(th)});
    }
    total += wr[static_cast<size_t>(i)] * r * ring * (2.0 * kPi / nth);
  }
  return total;
}

double segment_integral(double a, double b, const std::function<double(double)>& g,
                        int n = 200) {
  std::vector<double> x, w;
  gauss_legendre(n, a, b, x, w);
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += w[static_cast<size_t>(i)] * g(x[static_cast<size_t>(i)]);
  return total;
}

}  // namespace

double gauss_mass_disk(const geom::Disk& d) {
  return annulus_integral(d.center, 0.0, d.radius,
                          [](Vec2 p) { return gauss_weight_2d(p.x, p.y); });
}

RingMassPair ring_mass_identity(const geom::ConvexDomain& dom,
                                const std::function<double(Vec2)>& u) {
  if (const auto* dk = std::get_if<geom::Disk>(&dom.shape())) {
    const double R = dk->radius, rt = 0.5 * R;
    const Vec2 c = dk->center;
    const double direct = annulus_integral(c, R, R + rt, [&](Vec2 x) {
      const auto q = geom::distance_to_boundary(dom, x);
      const double ubar = u((2.0 * q.p) - x);
      return ubar * ubar * gauss_weight_2d(x.x, x.y);
    });
    const double pulled = annulus_integral(c, R - rt, R, [&](Vec2 y) {
      const auto rd = geom::reflect(dom, y);
      const double ef =
          std::exp(0.5 * (geom::norm_sq(y) - geom::norm_sq(rd.phi)));
      const double uy = u(y);
      return uy * uy * ef * rd.jac_analytic * gauss_weight_2d(y.x, y.y);
    });
    return {direct, pulled};
  }
  if (const auto* iv = std::get_if<geom::Interval>(&dom.shape())) {
    const double rt = 0.25 * (iv->b - iv->a);
    auto side = [&](double edge, double sgn) {
      // sgn = +1 at b, -1 at a
      const double direct = segment_integral(
          std::min(edge, edge + sgn * rt), std::max(edge, edge + sgn * rt), [&](double x) {
            const double ub = u({2.0 * edge - x, 0.0});
            return ub * ub * gauss_weight_1d(x);
          });
      const double pulled = segment_integral(
          std::min(edge, edge - sgn * rt), std::max(edge, edge - sgn * rt), [&](double y) {
            const double phi = 2.0 * edge - y;
            const double ef = std::exp(0.5 * (y * y - phi * phi));
            const double uy = u({y, 0.0});
            return uy * uy * ef * gauss_weight_1d(y);
          });
      return std::pair<double, double>{direct, pulled};
    };
    const auto right = side(iv->b, 1.0);
    const auto left = side(iv->a, -1.0);
    return {right.first + left.first, right.second + left.second};
  }
  throw InputError("ring identity quadratures cover disks and intervals");
}

MeasurePair conjugate_measure_identity(const geom::ConvexDomain& dom,
                                       const std::function<double(Vec2)>& u) {
  if (dom.contains_origin()) throw InputError("identity applies to domains with 0 outside");
  const auto tr = geom::translate_to_contain_origin(dom);
  const double delta = tr.delta;
  const Vec2 dir = tr.direction;
  auto v = [&](Vec2 y) {
    return u(y + delta * dir) *
           std::exp(-0.5 * geom::dot(y, dir) * delta - 0.25 * delta * delta);
  };
  if (const auto* dk = std::get_if<geom::Disk>(&dom.shape())) {
    const auto& td = std::get<geom::Disk>(tr.domain.shape());
    const double lhs = annulus_integral(dk->center, 0.0, dk->radius, [&](Vec2 x) {
      const double ux = u(x);
      return ux * ux * gauss_weight_2d(x.x, x.y);
    });
    const double rhs = annulus_integral(td.center, 0.0, td.radius, [&](Vec2 y) {
      const double vy = v(y);
      return vy * vy * gauss_weight_2d(y.x, y.y);
    });
    return {lhs, rhs, delta};
  }
  if (const auto* iv = std::get_if<geom::Interval>(&dom.shape())) {
    const auto& ti = std::get<geom::Interval>(tr.domain.shape());
    const double lhs = segment_integral(iv->a, iv->b, [&](double x) {
      const double ux = u({x, 0.0});
      return ux * ux * gauss_weight_1d(x);
    });
    const double rhs = segment_integral(ti.a, ti.b, [&](double y) {
      const double vy = v({y, 0.0});
      return vy * vy * gauss_weight_1d(y);
    });
    return {lhs, rhs, delta};
  }
  throw InputError("measure identity quadratures cover disks and intervals");
}

// ---------------------------------------------------------------------------
// Norm ratios.

namespace {

double halton(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
  }
  return r;
}

double field_grad_sq_2d(const ExtensionField& fld, Vec2 p) {
  const double e = 1e-5;
  const double gx = (fld.value({p.x + e, p.y}) - fld.value({p.x - e, p.y})) / (2.0 * e);
  const double gy = (fld.value({p.x, p.y + e}) - fld.value({p.x, p.y - e})) / (2.0 * e);
  return gx * gx + gy * gy;
}

double fn_grad_sq_2d(const std::function<double(Vec2)>& u, Vec2 p) {
  const double e = 1e-5;
  const double gx = (u({p.x + e, p.y}) - u({p.x - e, p.y})) / (2.0 * e);
  const double gy = (u({p.x, p.y + e}) - u({p.x, p.y - e})) / (2.0 * e);
  return gx * gx + gy * gy;
}

}  // namespace

NormRatios extension_norm_ratio(const geom::ConvexDomain& dom,
                                const std::function<double(Vec2)>& u, std::size_t n_samples,
                                std::uint64_t seed) {
  const ExtensionField fld =
      dom.contains_origin() ? extend(dom, u) : conjugate_extend(dom, u);

  double in_l2 = 0.0, in_h1 = 0.0, ext_l2 = 0.0, ext_h1 = 0.0;

  if (dom.dim() == 1) {
    const auto& iv = std::get<geom::Interval>(dom.shape());
    const double rt = fld.theta().r_tilde;
    auto add = [&](double lo, double hi, bool inner_part) {
      // composite Gauss-Legendre panels, derivative by central differences
      const int panels = std::max(8, static_cast<int>(std::ceil((hi - lo) / 0.1)));
      std::vector<double> x, w;
      for (int p = 0; p < panels; ++p) {
        const double pa = lo + (hi - lo) * p / panels;
        const double pb = lo + (hi - lo) * (p + 1) / panels;
        gauss_legendre(12, pa, pb, x, w);
        for (size_t i = 0; i < x.size(); ++i) {
          const double xi = x[i], wi = w[i] * gauss_weight_1d(xi);
          const double e = 1e-6;
          const double fv = fld.value({xi, 0.0});
          const double fg =
              (fld.value({xi + e, 0.0}) - fld.value({xi - e, 0.0})) / (2.0 * e);
          ext_l2 += wi * fv * fv;
          ext_h1 += wi * (fv * fv + fg * fg);
          if (inner_part) {
            const double uv = u({xi, 0.0});
            const double ug = (u({xi + e, 0.0}) - u({xi - e, 0.0})) / (2.0 * e);
            in_l2 += wi * uv * uv;
            in_h1 += wi * (uv * uv + ug * ug);
          }
        }
      }
    };
    add(iv.a - rt, iv.a, false);
    add(iv.a, iv.b, true);
    add(iv.b, iv.b + rt, false);
  } else {
    // Gaussian-importance Halton stream: E_gamma[g] as a sample mean
    for (std::size_t s = 0; s < n_samples; ++s) {
      const std::uint64_t idx = seed + 20 + s;
      const double u1 = std::max(halton(idx, 2), 1e-17);
      const double u2 = halton(idx, 3);
      const double rad = std::sqrt(-2.0 * std::log(u1));
      const Vec2 p{rad * std::cos(2.0 * kPi * u2), rad * std::sin(2.0 * kPi * u2)};
      const double fv = fld.value(p);
      ext_l2 += fv * fv;
      ext_h1 += fv * fv + field_grad_sq_2d(fld, p);
      if (dom.contains(p)) {
        const double uv = u(p);
        in_l2 += uv * uv;
        in_h1 += uv * uv + fn_grad_sq_2d(u, p);
      }
    }
    const double inv = 1.0 / static_cast<double>(n_samples);
    in_l2 *= inv;
    in_h1 *= inv;
    ext_l2 *= inv;
    ext_h1 *= inv;
  }

  if (!(in_l2 > 0.0)) throw InputError("zero input function");
  NormRatios out;
  out.l2_ratio = std::sqrt(ext_l2 / in_l2);
  out.h1_ratio = std::sqrt(ext_h1 / in_h1);
  out.samples = n_samples;
  return out;
}

}  // namespace gspec::ext
