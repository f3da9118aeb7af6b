#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gspec/geometry.hpp"

namespace gspec::ext {

struct CutoffProfile {
  double r_tilde = 0.0;     // rbar / 2
  double grad_bound = 0.0;  // sup |D theta| = 3 / (2 r_tilde)

  // theta as a function of exterior distance: smoothstep S(1 - d/r_tilde),
  // S(s) = 3s^2 - 2s^3 clamped to [0,1]; 1 at the boundary, 0 at d >= r_tilde
  double value_at_distance(double d) const;
};

CutoffProfile build_cutoff(const geom::ConvexDomain& dom);

enum class Region { Inner, Ring, Outer };

struct FieldSample {
  geom::Vec2 x;
  double value;
  Region region;
};

/// The reflected-and-cut-off extension of a function on a convex domain:
/// u inside, u(reflected point) * theta on the exterior ring of width
/// r_tilde, zero beyond.
class ExtensionField {
 public:
  // Plain extensions use dom itself; conjugated ones carry the translated
  // domain plus the shift and the back-conjugation weight.
  ExtensionField(geom::ConvexDomain dom, std::function<double(geom::Vec2)> inner,
                 CutoffProfile theta, geom::Vec2 pre_shift = {0.0, 0.0},
                 std::function<double(geom::Vec2)> post_factor = nullptr);

  double value(geom::Vec2 x) const;
  Region region(geom::Vec2 x) const;
  const CutoffProfile& theta() const { return theta_; }
  const geom::ConvexDomain& domain() const { return dom_; }

  std::vector<FieldSample> sample(const std::vector<geom::Vec2>& pts) const;
  // CSV point cloud: "x,y,value,region"
  void export_csv(const std::vector<geom::Vec2>& pts, const std::string& path) const;

 private:
  geom::ConvexDomain dom_;
  std::function<double(geom::Vec2)> inner_;
  CutoffProfile theta_;
  geom::Vec2 pre_shift_;
  std::function<double(geom::Vec2)> post_factor_;
};

/// Extension for an origin-containing domain (Theorem-style direct route).
ExtensionField extend(const geom::ConvexDomain& dom, std::function<double(geom::Vec2)> u);

/// Extension for a domain with 0 outside: translate to contain the origin,
/// extend the conjugated function, conjugate back.
ExtensionField conjugate_extend(const geom::ConvexDomain& dom,
                                std::function<double(geom::Vec2)> u);

struct NormRatios {
  double h1_ratio = 0.0;
  double l2_ratio = 0.0;
  std::size_t samples = 0;
};

/// Ratios ||ext u|| / ||u|| in L2(dgamma) and H1(dgamma), by deterministic
/// product quadrature in 1D and Gaussian-importance Halton sampling in 2D.
NormRatios extension_norm_ratio(const geom::ConvexDomain& dom,
                                const std::function<double(geom::Vec2)>& u,
                                std::size_t n_samples = 10000, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Matched quadratures for the change-of-variables identities.

struct RingMassPair {
  double direct;       // int over the exterior ring of (u o Phi^{-1})^2 dgamma
  double pulled_back;  // int over the interior collar of u^2 exp-factor |J| dgamma
};

/// Both sides of the reflection transport identity, on disks and intervals.
RingMassPair ring_mass_identity(const geom::ConvexDomain& dom,
                                const std::function<double(geom::Vec2)>& u);

struct MeasurePair {
  double lhs;  // int_Omega u^2 dgamma
  double rhs;  // int_T(Omega) v^2 dgamma for the conjugated v
  double delta;
};

/// Both sides of the conjugation measure identity, on disks and intervals
/// with 0 outside.
MeasurePair conjugate_measure_identity(const geom::ConvexDomain& dom,
                                       const std::function<double(geom::Vec2)>& u);

/// gamma_2 mass of a disk by polar product quadrature (radial Gauss-Legendre
/// x periodic trapezoid).
double gauss_mass_disk(const geom::Disk& d);

/// Nodes/weights of an n-point Gauss-Legendre rule on [a,b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w);

}  // namespace gspec::ext
