#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

namespace greenfn {

using Point2 = std::complex<double>;

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(double s, Point3 p) { return {s * p.x, s * p.y, s * p.z}; }
inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(Point3 a, Point3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm3(Point3 p) { return std::sqrt(dot(p, p)); }

/// A point of the Riemann sphere: a finite complex number or the point at
/// infinity.  Infinity is a distinguished variant, not a large magnitude.
class SpherePoint {
 public:
  SpherePoint(Point2 z) : finite_(true), z_(z) {}      // NOLINT: implicit by design
  SpherePoint(double x) : finite_(true), z_(x, 0.0) {} // NOLINT
  static SpherePoint infinity() { return SpherePoint(); }

  bool is_infinite() const { return !finite_; }
  Point2 value() const {
    if (!finite_) throw std::domain_error("SpherePoint: infinity has no finite value");
    return z_;
  }

 private:
  SpherePoint() : finite_(false), z_(0.0) {}
  bool finite_;
  Point2 z_;
};

/// Chordal (spherical) distance between two sphere points; range [0, 2].
double chordal_distance(const SpherePoint& p, const SpherePoint& q);

/// Normalized Moebius transformation z -> (az+b)/(cz+d) with ad - bc = 1.
/// Construction re-scales the coefficients and rejects degenerate maps.
struct MobiusMap {
  std::complex<double> a{1.0}, b{0.0}, c{0.0}, d{1.0};

  MobiusMap() = default;
  MobiusMap(std::complex<double> a_, std::complex<double> b_, std::complex<double> c_,
            std::complex<double> d_);

  static MobiusMap identity() { return MobiusMap(); }

  SpherePoint operator()(const SpherePoint& p) const;
  MobiusMap inverse() const;
};

/// Composition: (m2 * m1)(z) = m2(m1(z)).
MobiusMap operator*(const MobiusMap& m2, const MobiusMap& m1);

// ---------------------------------------------------------------------------
// Boundary curves and domain specifications
// ---------------------------------------------------------------------------

struct Circle {
  Point2 center{0.0, 0.0};
  double radius = 1.0;
};

/// Star-shaped closed curve given by a radial trigonometric polynomial about
/// its center:  r(t) = c[0] + sum_k ( c[k] cos(kt) + s[k-1] sin(kt) ).
/// r must stay strictly positive (validated by dense sampling).
struct TrigCurve {
  Point2 center{0.0, 0.0};
  std::vector<double> cos_coef{1.0};  // c[0..K]
  std::vector<double> sin_coef{};     // s[0..K-1] for frequencies 1..K

  double radius_at(double theta) const;
  Point2 point_at(double theta) const;
};

using BoundaryCurve = std::variant<Circle, TrigCurve>;

struct Disk {
  Point2 center{0.0, 0.0};
  double radius = 1.0;
};

struct Annulus {
  Point2 center{0.0, 0.0};
  double r_inner = 0.25;
  double r_outer = 1.0;
};

/// Outer Jordan curve minus finitely many disjoint holes.
struct CircleDomain {
  BoundaryCurve outer{Circle{}};
  std::vector<BoundaryCurve> holes{};
};

struct Segment2 {
  Point2 a{0.0, 0.0};
  Point2 b{1.0, 0.0};
};

/// Ambient disk minus closed line segments (slits).  Zero-length segments are
/// accepted and act as point punctures.
struct SlitDomain {
  Disk ambient{};
  std::vector<Segment2> segments{};
};

struct Ball3 {
  Point3 center{};
  double radius = 1.0;
};

/// Ambient ball minus the closed tube_radius-neighborhood of a polyline.
struct TubeDomain3 {
  Ball3 ambient{};
  std::vector<Point3> polyline{};
  double tube_radius = 0.1;
};

using DomainSpec = std::variant<Disk, Annulus, CircleDomain, SlitDomain, Ball3, TubeDomain3>;

/// Throws std::invalid_argument if the description violates a structural
/// invariant (non-positive radii, hole overlap, slits escaping the ambient
/// disk, ...).
void validate(const DomainSpec& d);

bool is_planar(const DomainSpec& d);

/// Diameter of the closure (outer boundary extent); used to scale tolerances.
double domain_diameter(const DomainSpec& d);

// ---------------------------------------------------------------------------
// Boundary queries
// ---------------------------------------------------------------------------

struct BoundaryQuery2 {
  double dist = 0.0;   // distance to the boundary set (always >= 0)
  Point2 nearest{};    // a nearest boundary point (ties: smallest parameter)
  bool inside = false; // strict interior membership
};

struct BoundaryQuery3 {
  double dist = 0.0;
  Point3 nearest{};
  bool inside = false;
};

BoundaryQuery2 distance_to_boundary(const DomainSpec& d, Point2 p);
BoundaryQuery3 distance_to_boundary(const DomainSpec& d, Point3 p);

/// Strict-interior membership.  Exact and cheap: radial comparison for star
/// curves, algebra for circles/segments/tubes; no nearest-point search.
bool contains(const DomainSpec& d, Point2 p);
bool contains(const DomainSpec& d, Point3 p);

struct BoundaryPoint2 {
  Point2 p{};
  int component = 0;
};

struct BoundaryPoint3 {
  Point3 p{};
  int component = 0;
};

/// Deterministic, uniformly-parameterized boundary samples; per_component
/// points on each boundary component, outer component first (id 0).
std::vector<BoundaryPoint2> boundary_sample(const DomainSpec& d, int per_component);

/// 3-D variant.  Spheres use a Fibonacci lattice; tube surfaces use a
/// documented coarse polyline-offset sampling.
std::vector<BoundaryPoint3> boundary_sample3(const DomainSpec& d, int per_component);

/// Number of boundary components of a planar domain (3-D variants rejected).
int component_count(const DomainSpec& d);

// ---------------------------------------------------------------------------
// Nets
// ---------------------------------------------------------------------------

/// Open annular region D(center, r_outer) minus the closed disk of r_inner.
struct AnnularRegion {
  Point2 center{0.0, 0.0};
  double r_inner = 1.0;
  double r_outer = 2.0;
};

/// Deterministic square-grid net of pitch spacing/sqrt(2) intersected with the
/// region, ordered row-major by grid index.  Every region point lies within
/// `spacing` of some returned point (covering property; verified in tests).
std::vector<Point2> net_points(double spacing, const AnnularRegion& region);

// ---------------------------------------------------------------------------
// Fast repeated distance queries (exact; accelerates many-hole domains)
// ---------------------------------------------------------------------------

class DistanceOracle {
 public:
  explicit DistanceOracle(const DomainSpec& d);

  double dist(Point2 p) const;
  double dist(Point3 p) const;
  bool inside(Point2 p) const;
  bool inside(Point3 p) const;

  /// Distance to the boundary, positive inside the domain, negative outside.
  double dist_signed(Point2 p) const;
  double dist_signed(Point3 p) const;

  const DomainSpec& spec() const { return spec_; }

 private:
  DomainSpec spec_;

  // uniform-grid index over circular holes (built for CircleDomain with many
  // circular holes; exact because the scan prunes conservatively by max_r_)
  bool accel_ = false;
  double cell_ = 1.0, max_r_ = 0.0;
  double gx0_ = 0.0, gy0_ = 0.0;
  int gnx_ = 0, gny_ = 0;
  std::vector<int> cell_start_;  // CSR layout: gnx_*gny_ + 1 offsets
  std::vector<int> cell_items_;
  std::vector<Point2> hole_center_;
  std::vector<double> hole_radius_;

  double hole_min_dist(Point2 p) const;  // min over holes of |p-c|-r
};

// ---------------------------------------------------------------------------
// Helpers used by tests and the conformal-invariance checks
// ---------------------------------------------------------------------------

/// Circle through three non-collinear points.
Circle circumcircle(Point2 p1, Point2 p2, Point2 p3);

/// Image of a circle-bounded domain under a Moebius map.  Requires every
/// image component to stay a bounded circle (no lines through infinity).
CircleDomain mobius_image(const MobiusMap& m, const CircleDomain& d);

}  // namespace greenfn
