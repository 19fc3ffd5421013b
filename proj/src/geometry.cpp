#include "greenfn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace greenfn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCurveScanSamples = 4096;
constexpr int kCurveRefineSteps = 40;

double sqr(double x) { return x * x; }

}  // namespace

// ---------------------------------------------------------------------------
// Sphere points and Moebius maps
// ---------------------------------------------------------------------------

double chordal_distance(const SpherePoint& p, const SpherePoint& q) {
  if (p.is_infinite() && q.is_infinite()) return 0.0;
  if (p.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(q.value()));
  if (q.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(p.value()));
  const Point2 a = p.value(), b = q.value();
  return 2.0 * std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

MobiusMap::MobiusMap(std::complex<double> a_, std::complex<double> b_, std::complex<double> c_,
                     std::complex<double> d_)
    : a(a_), b(b_), c(c_), d(d_) {
  const std::complex<double> det = a * d - b * c;
  if (std::abs(det) < 1e-14) throw std::invalid_argument("MobiusMap: determinant is (near) zero");
  const std::complex<double> s = std::sqrt(det);
  a /= s;
  b /= s;
  c /= s;
  d /= s;
}

SpherePoint MobiusMap::operator()(const SpherePoint& p) const {
  if (p.is_infinite()) {
    if (std::abs(c) == 0.0) return SpherePoint::infinity();
    return SpherePoint(a / c);
  }
  const Point2 z = p.value();
  const std::complex<double> den = c * z + d;
  if (std::abs(den) == 0.0) return SpherePoint::infinity();
  return SpherePoint((a * z + b) / den);
}

MobiusMap MobiusMap::inverse() const {
  MobiusMap m;
  m.a = d;
  m.b = -b;
  m.c = -c;
  m.d = a;
  return m;  // det already 1, no re-normalization needed
}

MobiusMap operator*(const MobiusMap& m2, const MobiusMap& m1) {
  return MobiusMap(m2.a * m1.a + m2.b * m1.c, m2.a * m1.b + m2.b * m1.d,
                   m2.c * m1.a + m2.d * m1.c, m2.c * m1.b + m2.d * m1.d);
}

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

double TrigCurve::radius_at(double theta) const {
  double r = cos_coef.empty() ? 0.0 : cos_coef[0];
  for (std::size_t k = 1; k < cos_coef.size(); ++k) r += cos_coef[k] * std::cos(double(k) * theta);
  for (std::size_t k = 0; k < sin_coef.size(); ++k)
    r += sin_coef[k] * std::sin(double(k + 1) * theta);
  return r;
}

Point2 TrigCurve::point_at(double theta) const {
  const double r = radius_at(theta);
  return center + Point2(r * std::cos(theta), r * std::sin(theta));
}

namespace {

Point2 curve_point(const BoundaryCurve& c, double theta) {
  if (const auto* circ = std::get_if<Circle>(&c))
    return circ->center + Point2(circ->radius * std::cos(theta), circ->radius * std::sin(theta));
  return std::get<TrigCurve>(c).point_at(theta);
}

Point2 curve_center(const BoundaryCurve& c) {
  if (const auto* circ = std::get_if<Circle>(&c)) return circ->center;
  return std::get<TrigCurve>(c).center;
}

double curve_min_radius(const BoundaryCurve& c) {
  if (const auto* circ = std::get_if<Circle>(&c)) return circ->radius;
  const auto& t = std::get<TrigCurve>(c);
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCurveScanSamples; ++i)
    m = std::min(m, t.radius_at(2.0 * kPi * i / kCurveScanSamples));
  return m;
}

double curve_max_radius(const BoundaryCurve& c) {
  if (const auto* circ = std::get_if<Circle>(&c)) return circ->radius;
  const auto& t = std::get<TrigCurve>(c);
  double m = 0.0;
  for (int i = 0; i < kCurveScanSamples; ++i)
    m = std::max(m, t.radius_at(2.0 * kPi * i / kCurveScanSamples));
  return m;
}

// Point strictly inside a star-shaped radial curve?
bool curve_contains(const BoundaryCurve& c, Point2 p) {
  if (const auto* circ = std::get_if<Circle>(&c)) return std::abs(p - circ->center) < circ->radius;
  const auto& t = std::get<TrigCurve>(c);
  const Point2 v = p - t.center;
  const double rho = std::abs(v);
  if (rho == 0.0) return true;
  return rho < t.radius_at(std::arg(v));
}

// Point in the closed region bounded by the curve?
bool curve_contains_closed(const BoundaryCurve& c, Point2 p) {
  if (const auto* circ = std::get_if<Circle>(&c))
    return std::abs(p - circ->center) <= circ->radius;
  const auto& t = std::get<TrigCurve>(c);
  const Point2 v = p - t.center;
  const double rho = std::abs(v);
  if (rho == 0.0) return true;
  return rho <= t.radius_at(std::arg(v));
}

struct CurveQuery {
  double dist;
  Point2 nearest;
};

// Nearest point of a closed curve.  Circles are exact; trig curves use a
// dense parameter scan followed by local trisection refinement, ties broken
// toward the smallest parameter by the scan order.
CurveQuery curve_distance(const BoundaryCurve& c, Point2 p) {
  if (const auto* circ = std::get_if<Circle>(&c)) {
    const Point2 v = p - circ->center;
    const double rho = std::abs(v);
    if (rho == 0.0)  // center: every boundary point is nearest, pick theta = 0
      return {circ->radius, circ->center + Point2(circ->radius, 0.0)};
    return {std::abs(rho - circ->radius), circ->center + (circ->radius / rho) * v};
  }
  const auto& t = std::get<TrigCurve>(c);
  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < kCurveScanSamples; ++i) {
    const double d = std::abs(p - t.point_at(2.0 * kPi * i / kCurveScanSamples));
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  const double step = 2.0 * kPi / kCurveScanSamples;
  double lo = (best_i - 1) * step, hi = (best_i + 1) * step;
  for (int it = 0; it < kCurveRefineSteps; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (std::abs(p - t.point_at(m1)) <= std::abs(p - t.point_at(m2)))
      hi = m2;
    else
      lo = m1;
  }
  const double theta = 0.5 * (lo + hi);
  const Point2 q = t.point_at(theta);
  return {std::abs(p - q), q};
}

struct SegQuery {
  double dist;
  Point2 nearest;
};

SegQuery segment_distance(const Segment2& s, Point2 p) {
  const Point2 ab = s.b - s.a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return {std::abs(p - s.a), s.a};  // degenerate: point puncture
  double t = ((p.real() - s.a.real()) * ab.real() + (p.imag() - s.a.imag()) * ab.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  const Point2 q = s.a + t * ab;
  return {std::abs(p - q), q};
}

struct Seg3Query {
  double dist;
  Point3 nearest;
};

Seg3Query segment_distance3(Point3 a, Point3 b, Point3 p) {
  const Point3 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return {norm3(p - a), a};
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  const Point3 q = a + t * ab;
  return {norm3(p - q), q};
}

Seg3Query polyline_distance(const std::vector<Point3>& poly, Point3 p) {
  Seg3Query best{std::numeric_limits<double>::infinity(), {}};
  if (poly.size() == 1) return segment_distance3(poly[0], poly[0], p);
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    const Seg3Query q = segment_distance3(poly[i], poly[i + 1], p);
    if (q.dist < best.dist) best = q;
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

void validate(const DomainSpec& d) {
  if (const auto* disk = std::get_if<Disk>(&d)) {
    if (!(disk->radius > 0.0)) throw std::invalid_argument("Disk: radius must be positive");
    return;
  }
  if (const auto* ann = std::get_if<Annulus>(&d)) {
    if (!(ann->r_inner > 0.0) || !(ann->r_outer > ann->r_inner))
      throw std::invalid_argument("Annulus: need 0 < r_inner < r_outer");
    return;
  }
  if (const auto* cd = std::get_if<CircleDomain>(&d)) {
    if (curve_min_radius(cd->outer) <= 0.0)
      throw std::invalid_argument("CircleDomain: outer curve radius must stay positive");
    for (std::size_t i = 0; i < cd->holes.size(); ++i) {
      if (curve_min_radius(cd->holes[i]) <= 0.0)
        throw std::invalid_argument("CircleDomain: hole curve radius must stay positive");
      // hole closure inside the open outer region
      const Point2 hc = curve_center(cd->holes[i]);
      const double hr = curve_max_radius(cd->holes[i]);
      if (!curve_contains(cd->outer, hc) || curve_distance(cd->outer, hc).dist <= hr)
        throw std::invalid_argument("CircleDomain: hole escapes the outer curve");
    }
    // pairwise disjoint hole closures (conservative via enclosing radii for
    // circles this is exact)
    for (std::size_t i = 0; i < cd->holes.size(); ++i)
      for (std::size_t j = i + 1; j < cd->holes.size(); ++j) {
        const double gap = std::abs(curve_center(cd->holes[i]) - curve_center(cd->holes[j]));
        if (gap <= curve_max_radius(cd->holes[i]) + curve_max_radius(cd->holes[j]))
          throw std::invalid_argument("CircleDomain: hole closures overlap");
      }
    return;
  }
  if (const auto* sd = std::get_if<SlitDomain>(&d)) {
    if (!(sd->ambient.radius > 0.0))
      throw std::invalid_argument("SlitDomain: ambient radius must be positive");
    for (const auto& s : sd->segments) {
      if (std::abs(s.a - sd->ambient.center) >= sd->ambient.radius ||
          std::abs(s.b - sd->ambient.center) >= sd->ambient.radius)
        throw std::invalid_argument("SlitDomain: segment escapes the ambient disk");
    }
    return;
  }
  if (const auto* b = std::get_if<Ball3>(&d)) {
    if (!(b->radius > 0.0)) throw std::invalid_argument("Ball3: radius must be positive");
    return;
  }
  const auto& t = std::get<TubeDomain3>(d);
  if (!(t.ambient.radius > 0.0))
    throw std::invalid_argument("TubeDomain3: ambient radius must be positive");
  if (t.polyline.empty()) throw std::invalid_argument("TubeDomain3: polyline must be non-empty");
  if (!(t.tube_radius > 0.0))
    throw std::invalid_argument("TubeDomain3: tube_radius must be positive");
  for (const auto& p : t.polyline)
    if (norm3(p - t.ambient.center) > t.ambient.radius)
      throw std::invalid_argument("TubeDomain3: polyline escapes the ambient ball");
}

bool is_planar(const DomainSpec& d) {
  return !std::holds_alternative<Ball3>(d) && !std::holds_alternative<TubeDomain3>(d);
}

double domain_diameter(const DomainSpec& d) {
  if (const auto* disk = std::get_if<Disk>(&d)) return 2.0 * disk->radius;
  if (const auto* ann = std::get_if<Annulus>(&d)) return 2.0 * ann->r_outer;
  if (const auto* cd = std::get_if<CircleDomain>(&d)) return 2.0 * curve_max_radius(cd->outer);
  if (const auto* sd = std::get_if<SlitDomain>(&d)) return 2.0 * sd->ambient.radius;
  if (const auto* b = std::get_if<Ball3>(&d)) return 2.0 * b->radius;
  return 2.0 * std::get<TubeDomain3>(d).ambient.radius;
}

// ---------------------------------------------------------------------------
// Distance queries
// ---------------------------------------------------------------------------

BoundaryQuery2 distance_to_boundary(const DomainSpec& d, Point2 p) {
  if (!is_planar(d))
    throw std::invalid_argument("distance_to_boundary: 3-D domain queried with a planar point");

  if (const auto* disk = std::get_if<Disk>(&d)) {
    const CurveQuery q = curve_distance(Circle{disk->center, disk->radius}, p);
    return {q.dist, q.nearest, std::abs(p - disk->center) < disk->radius};
  }
  if (const auto* ann = std::get_if<Annulus>(&d)) {
    const double rho = std::abs(p - ann->center);
    const CurveQuery qo = curve_distance(Circle{ann->center, ann->r_outer}, p);
    const CurveQuery qi = curve_distance(Circle{ann->center, ann->r_inner}, p);
    const CurveQuery& q = (qo.dist <= qi.dist) ? qo : qi;
    return {q.dist, q.nearest, rho > ann->r_inner && rho < ann->r_outer};
  }
  if (const auto* cd = std::get_if<CircleDomain>(&d)) {
    CurveQuery best = curve_distance(cd->outer, p);
    bool in = curve_contains(cd->outer, p);
    for (const auto& h : cd->holes) {
      const CurveQuery q = curve_distance(h, p);
      if (q.dist < best.dist) best = q;
      if (curve_contains(h, p) || q.dist == 0.0) in = false;
    }
    return {best.dist, best.nearest, in};
  }
  if (const auto* sd = std::get_if<SlitDomain>(&d)) {
    CurveQuery best = curve_distance(Circle{sd->ambient.center, sd->ambient.radius}, p);
    bool in = std::abs(p - sd->ambient.center) < sd->ambient.radius;
    for (const auto& s : sd->segments) {
      const SegQuery q = segment_distance(s, p);
      if (q.dist < best.dist) best = {q.dist, q.nearest};
      if (q.dist == 0.0) in = false;
    }
    return {best.dist, best.nearest, in};
  }
  throw std::invalid_argument("distance_to_boundary: unsupported planar variant");
}

BoundaryQuery3 distance_to_boundary(const DomainSpec& d, Point3 p) {
  if (const auto* b = std::get_if<Ball3>(&d)) {
    const Point3 v = p - b->center;
    const double rho = norm3(v);
    Point3 nearest;
    if (rho == 0.0)
      nearest = b->center + Point3{b->radius, 0.0, 0.0};
    else
      nearest = b->center + (b->radius / rho) * v;
    return {std::abs(rho - b->radius), nearest, rho < b->radius};
  }
  if (const auto* t = std::get_if<TubeDomain3>(&d)) {
    const Point3 v = p - t->ambient.center;
    const double rho = norm3(v);
    const double d_sphere = std::abs(rho - t->ambient.radius);
    const Seg3Query pq = polyline_distance(t->polyline, p);
    const double d_tube = std::abs(pq.dist - t->tube_radius);
    const bool in = rho < t->ambient.radius && pq.dist > t->tube_radius;

    if (d_sphere <= d_tube) {
      Point3 nearest;
      if (rho == 0.0)
        nearest = t->ambient.center + Point3{t->ambient.radius, 0.0, 0.0};
      else
        nearest = t->ambient.center + (t->ambient.radius / rho) * v;
      return {d_sphere, nearest, in};
    }
    Point3 dir{1.0, 0.0, 0.0};
    if (pq.dist > 0.0) dir = (1.0 / pq.dist) * (p - pq.nearest);
    return {d_tube, pq.nearest + t->tube_radius * dir, in};
  }
  throw std::invalid_argument("distance_to_boundary: planar domain queried with a 3-D point");
}

// ---------------------------------------------------------------------------
// Membership (no nearest-point search)
// ---------------------------------------------------------------------------

bool contains(const DomainSpec& d, Point2 p) {
  if (const auto* disk = std::get_if<Disk>(&d)) return std::abs(p - disk->center) < disk->radius;
  if (const auto* ann = std::get_if<Annulus>(&d)) {
    const double rho = std::abs(p - ann->center);
    return rho > ann->r_inner && rho < ann->r_outer;
  }
  if (const auto* cd = std::get_if<CircleDomain>(&d)) {
    if (!curve_contains(cd->outer, p)) return false;
    for (const auto& h : cd->holes)
      if (curve_contains_closed(h, p)) return false;
    return true;
  }
  if (const auto* sd = std::get_if<SlitDomain>(&d)) {
    if (!(std::abs(p - sd->ambient.center) < sd->ambient.radius)) return false;
    for (const auto& s : sd->segments)
      if (segment_distance(s, p).dist <= 0.0) return false;
    return true;
  }
  throw std::invalid_argument("contains: 3-D domain queried with a planar point");
}

bool contains(const DomainSpec& d, Point3 p) {
  if (const auto* b = std::get_if<Ball3>(&d)) return norm3(p - b->center) < b->radius;
  if (const auto* t = std::get_if<TubeDomain3>(&d)) {
    if (!(norm3(p - t->ambient.center) < t->ambient.radius)) return false;
    return polyline_distance(t->polyline, p).dist > t->tube_radius;
  }
  throw std::invalid_argument("contains: planar domain queried with a 3-D point");
}

// ---------------------------------------------------------------------------
// Boundary sampling
// ---------------------------------------------------------------------------

std::vector<BoundaryPoint2> boundary_sample(const DomainSpec& d, int per_component) {
  if (per_component <= 0) throw std::invalid_argument("boundary_sample: per_component must be > 0");
  if (!is_planar(d)) throw std::invalid_argument("boundary_sample: use boundary_sample3 for 3-D");

  std::vector<BoundaryPoint2> out;
  auto add_curve = [&](const BoundaryCurve& c, int comp) {
    for (int i = 0; i < per_component; ++i)
      out.push_back({curve_point(c, 2.0 * kPi * i / per_component), comp});
  };

  if (const auto* disk = std::get_if<Disk>(&d)) {
    add_curve(Circle{disk->center, disk->radius}, 0);
  } else if (const auto* ann = std::get_if<Annulus>(&d)) {
    add_curve(Circle{ann->center, ann->r_outer}, 0);
    add_curve(Circle{ann->center, ann->r_inner}, 1);
  } else if (const auto* cd = std::get_if<CircleDomain>(&d)) {
    add_curve(cd->outer, 0);
    for (std::size_t i = 0; i < cd->holes.size(); ++i) add_curve(cd->holes[i], int(i) + 1);
  } else if (const auto* sd = std::get_if<SlitDomain>(&d)) {
    add_curve(Circle{sd->ambient.center, sd->ambient.radius}, 0);
    for (std::size_t i = 0; i < sd->segments.size(); ++i) {
      const auto& s = sd->segments[i];
      for (int k = 0; k < per_component; ++k) {
        const double t = (per_component == 1) ? 0.0 : double(k) / (per_component - 1);
        out.push_back({s.a + t * (s.b - s.a), int(i) + 1});
      }
    }
  }
  return out;
}

std::vector<BoundaryPoint3> boundary_sample3(const DomainSpec& d, int per_component) {
  if (per_component <= 0)
    throw std::invalid_argument("boundary_sample3: per_component must be > 0");

  // Fibonacci sphere: near-uniform and deterministic.
  auto add_sphere = [&](std::vector<BoundaryPoint3>& out, Point3 c, double R, int comp) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < per_component; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / per_component;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      out.push_back({c + R * Point3{r * std::cos(phi), r * std::sin(phi), z}, comp});
    }
  };

  std::vector<BoundaryPoint3> out;
  if (const auto* b = std::get_if<Ball3>(&d)) {
    add_sphere(out, b->center, b->radius, 0);
    return out;
  }
  if (const auto* t = std::get_if<TubeDomain3>(&d)) {
    add_sphere(out, t->ambient.center, t->ambient.radius, 0);
    // Coarse tube sampling: arc-length stations offset by tube_radius along a
    // deterministic normal.  Good enough for kernel diagnostics, documented as
    // coarse (not a uniform surface measure).
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < t->polyline.size(); ++i)
      total += norm3(t->polyline[i + 1] - t->polyline[i]);
    if (total == 0.0) {
      out.push_back({t->polyline[0] + Point3{t->tube_radius, 0.0, 0.0}, 1});
      return out;
    }
    for (int k = 0; k < per_component; ++k) {
      double target = total * (k + 0.5) / per_component;
      for (std::size_t i = 0; i + 1 < t->polyline.size(); ++i) {
        const double len = norm3(t->polyline[i + 1] - t->polyline[i]);
        if (target > len && i + 2 < t->polyline.size()) {
          target -= len;
          continue;
        }
        const Point3 tan = (len > 0.0) ? (1.0 / len) * (t->polyline[i + 1] - t->polyline[i])
                                       : Point3{0.0, 0.0, 1.0};
        Point3 n = cross(tan, Point3{0.0, 0.0, 1.0});
        if (norm3(n) < 1e-9) n = cross(tan, Point3{1.0, 0.0, 0.0});
        n = (1.0 / norm3(n)) * n;
        const Point3 q = t->polyline[i] + std::min(1.0, target / std::max(len, 1e-300)) *
                                              (t->polyline[i + 1] - t->polyline[i]);
        out.push_back({q + t->tube_radius * n, 1});
        break;
      }
    }
    return out;
  }
  throw std::invalid_argument("boundary_sample3: planar domain");
}

int component_count(const DomainSpec& d) {
  if (std::holds_alternative<Disk>(d)) return 1;
  if (std::holds_alternative<Annulus>(d)) return 2;
  if (const auto* cd = std::get_if<CircleDomain>(&d)) return 1 + int(cd->holes.size());
  if (const auto* sd = std::get_if<SlitDomain>(&d)) return 1 + int(sd->segments.size());
  throw std::invalid_argument("component_count: defined for planar domains only");
}

// ---------------------------------------------------------------------------
// Nets
// ---------------------------------------------------------------------------

std::vector<Point2> net_points(double spacing, const AnnularRegion& region) {
  if (!(spacing > 0.0)) throw std::invalid_argument("net_points: spacing must be positive");
  std::vector<Point2> out;
  if (region.r_outer <= region.r_inner) return out;
  const double h = spacing / std::sqrt(2.0);
  const int n = int(std::ceil(region.r_outer / h)) + 1;
  for (int j = -n; j <= n; ++j) {    // row-major: y rows, x within a row
    for (int i = -n; i <= n; ++i) {
      const Point2 p = region.center + Point2(i * h, j * h);
      const double rho = std::abs(p - region.center);
      if (rho > region.r_inner && rho < region.r_outer) out.push_back(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DistanceOracle
// ---------------------------------------------------------------------------

DistanceOracle::DistanceOracle(const DomainSpec& d) : spec_(d) {
  const auto* cd = std::get_if<CircleDomain>(&spec_);
  if (!cd || cd->holes.size() < 16) return;
  for (const auto& h : cd->holes)
    if (!std::holds_alternative<Circle>(h)) return;

  hole_center_.reserve(cd->holes.size());
  hole_radius_.reserve(cd->holes.size());
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& h : cd->holes) {
    const auto& c = std::get<Circle>(h);
    hole_center_.push_back(c.center);
    hole_radius_.push_back(c.radius);
    max_r_ = std::max(max_r_, c.radius);
    xmin = std::min(xmin, c.center.real());
    xmax = std::max(xmax, c.center.real());
    ymin = std::min(ymin, c.center.imag());
    ymax = std::max(ymax, c.center.imag());
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  cell_ = std::max(span / 64.0, 4.0 * max_r_);
  if (!(cell_ > 0.0)) cell_ = 1.0;
  gx0_ = xmin;
  gy0_ = ymin;
  gnx_ = std::max(1, int(std::floor((xmax - xmin) / cell_)) + 1);
  gny_ = std::max(1, int(std::floor((ymax - ymin) / cell_)) + 1);

  std::vector<int> count(std::size_t(gnx_) * gny_, 0);
  auto cell_of = [&](Point2 p) {
    int cx = std::clamp(int(std::floor((p.real() - gx0_) / cell_)), 0, gnx_ - 1);
    int cy = std::clamp(int(std::floor((p.imag() - gy0_) / cell_)), 0, gny_ - 1);
    return cy * gnx_ + cx;
  };
  for (const auto& c : hole_center_) ++count[cell_of(c)];
  cell_start_.assign(count.size() + 1, 0);
  for (std::size_t i = 0; i < count.size(); ++i) cell_start_[i + 1] = cell_start_[i] + count[i];
  cell_items_.resize(hole_center_.size());
  std::vector<int> cursor(cell_start_.begin(), cell_start_.end() - 1);
  for (int i = 0; i < int(hole_center_.size()); ++i)
    cell_items_[std::size_t(cursor[cell_of(hole_center_[i])]++)] = i;
  accel_ = true;
}

double DistanceOracle::hole_min_dist(Point2 p) const {
  double best = std::numeric_limits<double>::infinity();
  if (!accel_) {
    const auto& cd = std::get<CircleDomain>(spec_);
    for (const auto& h : cd.holes) best = std::min(best, curve_distance(h, p).dist);
    return best;
  }
  const int cx = int(std::floor((p.real() - gx0_) / cell_));
  const int cy = int(std::floor((p.imag() - gy0_) / cell_));
  // enough rings to sweep the whole grid from any (possibly exterior) cell
  const int rmax = std::max({std::abs(cx), std::abs(gnx_ - 1 - cx), std::abs(cy),
                             std::abs(gny_ - 1 - cy)}) +
                   1;
  for (int ring = 0; ring <= rmax; ++ring) {
    // expanding Chebyshev rings; prune once the ring cannot improve
    if (ring > 0 && (double(ring) - 1.0) * cell_ - max_r_ > best) break;
    const int x0 = cx - ring, x1 = cx + ring, y0 = cy - ring, y1 = cy + ring;
    for (int y = y0; y <= y1; ++y) {
      if (y < 0 || y >= gny_) continue;
      for (int x = x0; x <= x1; ++x) {
        if (x < 0 || x >= gnx_) continue;
        if (ring > 0 && x != x0 && x != x1 && y != y0 && y != y1) continue;  // ring shell only
        for (int k = cell_start_[std::size_t(y) * gnx_ + x];
             k < cell_start_[std::size_t(y) * gnx_ + x + 1]; ++k) {
          const int i = cell_items_[std::size_t(k)];
          best = std::min(best, std::abs(p - hole_center_[std::size_t(i)]) -
                                    hole_radius_[std::size_t(i)]);
        }
      }
    }
  }
  return best;
}

double DistanceOracle::dist_signed(Point2 p) const {
  if (const auto* disk = std::get_if<Disk>(&spec_))
    return disk->radius - std::abs(p - disk->center);
  if (const auto* ann = std::get_if<Annulus>(&spec_)) {
    const double rho = std::abs(p - ann->center);
    return std::min(ann->r_outer - rho, rho - ann->r_inner);
  }
  if (const auto* cd = std::get_if<CircleDomain>(&spec_)) {
    double outer;
    if (const auto* circ = std::get_if<Circle>(&cd->outer))
      outer = circ->radius - std::abs(p - circ->center);
    else
      outer = (curve_contains(cd->outer, p) ? 1.0 : -1.0) * curve_distance(cd->outer, p).dist;
    if (cd->holes.empty()) return outer;
    return std::min(outer, hole_min_dist(p));
  }
  if (const auto* sd = std::get_if<SlitDomain>(&spec_)) {
    double best = sd->ambient.radius - std::abs(p - sd->ambient.center);
    for (const auto& s : sd->segments) best = std::min(best, segment_distance(s, p).dist);
    return best;
  }
  throw std::invalid_argument("DistanceOracle: 3-D domain queried with a planar point");
}

double DistanceOracle::dist_signed(Point3 p) const {
  if (const auto* b = std::get_if<Ball3>(&spec_)) return b->radius - norm3(p - b->center);
  if (const auto* t = std::get_if<TubeDomain3>(&spec_)) {
    const double d_sphere = t->ambient.radius - norm3(p - t->ambient.center);
    const double d_tube = polyline_distance(t->polyline, p).dist - t->tube_radius;
    return std::min(d_sphere, d_tube);
  }
  throw std::invalid_argument("DistanceOracle: planar domain queried with a 3-D point");
}

double DistanceOracle::dist(Point2 p) const { return std::abs(dist_signed(p)); }
double DistanceOracle::dist(Point3 p) const { return std::abs(dist_signed(p)); }

bool DistanceOracle::inside(Point2 p) const {
  if (accel_) {
    const auto& cd = std::get<CircleDomain>(spec_);
    return curve_contains(cd.outer, p) && hole_min_dist(p) > 0.0;
  }
  return contains(spec_, p);
}

bool DistanceOracle::inside(Point3 p) const { return contains(spec_, p); }

// ---------------------------------------------------------------------------
// Circle helpers
// ---------------------------------------------------------------------------

Circle circumcircle(Point2 p1, Point2 p2, Point2 p3) {
  const double ax = p1.real(), ay = p1.imag();
  const double bx = p2.real(), by = p2.imag();
  const double cx = p3.real(), cy = p3.imag();
  const double dd = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  if (std::abs(dd) < 1e-14) throw std::invalid_argument("circumcircle: collinear points");
  const double a2 = sqr(ax) + sqr(ay), b2 = sqr(bx) + sqr(by), c2 = sqr(cx) + sqr(cy);
  const Point2 center((a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / dd,
                      (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / dd);
  return {center, std::abs(p1 - center)};
}

CircleDomain mobius_image(const MobiusMap& m, const CircleDomain& d) {
  auto image_circle = [&](const BoundaryCurve& c) -> Circle {
    const auto* circ = std::get_if<Circle>(&c);
    if (!circ) throw std::invalid_argument("mobius_image: only circle components supported");
    Point2 pts[3];
    for (int k = 0; k < 3; ++k) {
      const SpherePoint q =
          m(SpherePoint(circ->center + circ->radius * std::polar(1.0, 2.0 * kPi * k / 3.0)));
      if (q.is_infinite()) throw std::invalid_argument("mobius_image: image passes through infinity");
      pts[k] = q.value();
    }
    return circumcircle(pts[0], pts[1], pts[2]);
  };
  CircleDomain out;
  out.outer = image_circle(d.outer);
  for (const auto& h : d.holes) out.holes.emplace_back(image_circle(h));
  return out;
}

}  // namespace greenfn
