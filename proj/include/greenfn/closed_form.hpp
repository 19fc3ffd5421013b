#pragma once

#include <functional>
#include <string>

#include "greenfn/geometry.hpp"

namespace greenfn {

/// Result wrapper used by the CLI: a Green's function value with provenance.
struct GreenEstimate {
  double value = 0.0;       // >= 0 (zero-extended outside the domain)
  std::string method;       // "closed_form" | "mfs" | "wos"
  double error_bound = 0.0; // residual bound / standard error / truncation
};

/// Green's function of the disk D(center, R).  Zero-extended: returns 0 when
/// either point lies outside the open disk.  Throws on z == w.
double green_disk(Point2 center, double R, Point2 z, Point2 w);

/// Green's function of the upper half-plane Im > 0 (zero-extended).
double green_halfplane(Point2 z, Point2 w);

/// Green's function of C minus the ray (-inf, -d] with pole at 0, evaluated
/// at z.  Vanishes on the ray; decreasing along the positive real axis.
double green_slit_ray(double d, Point2 z);

/// Green's function of the concentric annulus q < |z| < 1, via a truncated
/// product expansion (truncation chosen so the tail is below 1e-16).
double green_annulus(double q, Point2 z, Point2 w);

/// Green's function of an arbitrary annulus by conformal rescaling.
double green_annulus_domain(const Annulus& a, Point2 z, Point2 w);

/// Green's function of the ball B(center, R) in 3-space, normalization
/// |x - w|^(-1) + O(1) near the pole (no surface-measure constant).
/// w == center uses the radial limit |x - c|^(-1) - 1/R.
double green_ball3(Point3 center, double R, Point3 x, Point3 w);

using SphereEvaluator = std::function<double(const SpherePoint&)>;

/// Conformal transport: returns z -> g(m^(-1)(z)).  Green's functions are
/// invariant under Moebius maps of the plane, so this moves an evaluator to
/// the image domain (poles at infinity included).
SphereEvaluator transport_green(const MobiusMap& m, SphereEvaluator g);

}  // namespace greenfn
