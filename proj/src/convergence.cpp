#include "greenfn/convergence.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace greenfn {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct BBox2 {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
};

struct BBox3 {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0, zmin = 0, zmax = 0;
};

BBox2 bounding_box2(const DomainSpec& d) {
  auto bs = boundary_sample(d, 512);
  if (bs.empty()) throw std::invalid_argument("bounding_box2: empty boundary");
  BBox2 b{bs[0].p.real(), bs[0].p.real(), bs[0].p.imag(), bs[0].p.imag()};
  for (const auto& s : bs) {
    b.xmin = std::min(b.xmin, s.p.real());
    b.xmax = std::max(b.xmax, s.p.real());
    b.ymin = std::min(b.ymin, s.p.imag());
    b.ymax = std::max(b.ymax, s.p.imag());
  }
  return b;
}

BBox3 bounding_box3(const DomainSpec& d) {
  auto bs = boundary_sample3(d, 512);
  if (bs.empty()) throw std::invalid_argument("bounding_box3: empty boundary");
  const auto& q = bs[0].p;
  BBox3 b{q.x, q.x, q.y, q.y, q.z, q.z};
  for (const auto& s : bs) {
    b.xmin = std::min(b.xmin, s.p.x);
    b.xmax = std::max(b.xmax, s.p.x);
    b.ymin = std::min(b.ymin, s.p.y);
    b.ymax = std::max(b.ymax, s.p.y);
    b.zmin = std::min(b.zmin, s.p.z);
    b.zmax = std::max(b.zmax, s.p.z);
  }
  return b;
}

// Outer boundary curve of a simply connected planar domain.
BoundaryCurve outer_curve(const DomainSpec& d) {
  if (const auto* disk = std::get_if<Disk>(&d)) return Circle{disk->center, disk->radius};
  if (const auto* cd = std::get_if<CircleDomain>(&d)) return cd->outer;
  throw std::invalid_argument("outer_curve: need a Disk or CircleDomain");
}

Point2 curve_center(const BoundaryCurve& c) {
  if (const auto* ci = std::get_if<Circle>(&c)) return ci->center;
  return std::get<TrigCurve>(c).center;
}

Point2 curve_point(const BoundaryCurve& c, double theta) {
  if (const auto* ci = std::get_if<Circle>(&c))
    return ci->center + ci->radius * Point2{std::cos(theta), std::sin(theta)};
  return std::get<TrigCurve>(c).point_at(theta);
}

}  // namespace

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

// ---------------------------------------------------------------------------
// Evaluators
// ---------------------------------------------------------------------------

GreenField make_green_field(const DomainSpec& d, Point2 pole, const FieldOptions& opt) {
  validate(d);
  if (!is_planar(d)) throw std::invalid_argument("make_green_field: planar domain required");
  if (!contains(d, pole)) throw std::invalid_argument("make_green_field: pole outside domain");

  Method m = opt.method;
  if (m == Method::automatic) {
    if (std::holds_alternative<Disk>(d) || std::holds_alternative<Annulus>(d))
      m = Method::closed_form;
    else if (std::holds_alternative<CircleDomain>(d))
      m = Method::mfs;
    else
      m = Method::wos;
  }

  GreenField field;
  switch (m) {
    case Method::closed_form: {
      if (const auto* disk = std::get_if<Disk>(&d)) {
        Disk dd = *disk;
        field.method = "closed_form";
        field.err = 0.0;
        field.f = [dd, pole](Point2 z) { return green_disk(dd.center, dd.radius, z, pole); };
      } else if (const auto* ann = std::get_if<Annulus>(&d)) {
        Annulus aa = *ann;
        field.method = "closed_form";
        field.err = 1e-12;  // truncated product tail
        field.f = [aa, pole](Point2 z) { return green_annulus_domain(aa, z, pole); };
      } else {
        throw std::invalid_argument(
            "make_green_field: no closed form for this domain; use mfs or wos");
      }
      break;
    }
    case Method::mfs: {
      auto sol = std::make_shared<GreenSolution>(solve_green(d, pole, opt.mfs));
      field.method = "mfs";
      field.err = sol->boundary_residual();
      field.f = [sol](Point2 z) { return sol->evaluate(z); };
      break;
    }
    case Method::wos: {
      DomainSpec spec = d;
      WosParams wp = opt.wos;
      field.method = "wos";
      field.err = 0.0;  // per-call standard errors are reported by the estimator
      field.f = [spec, pole, wp](Point2 z) {
        if (!contains(spec, z)) return 0.0;
        return estimate_green_2d(spec, z, pole, wp).estimate;
      };
      break;
    }
    default:
      throw std::logic_error("make_green_field: unreachable");
  }
  return field;
}

GreenField3 make_green_field3(const DomainSpec& d, Point3 pole, const FieldOptions& opt) {
  validate(d);
  if (is_planar(d)) throw std::invalid_argument("make_green_field3: 3-D domain required");
  if (!contains(d, pole)) throw std::invalid_argument("make_green_field3: pole outside domain");

  Method m = opt.method;
  if (m == Method::automatic)
    m = std::holds_alternative<Ball3>(d) ? Method::closed_form : Method::wos;

  GreenField3 field;
  if (m == Method::closed_form) {
    const auto* ball = std::get_if<Ball3>(&d);
    if (!ball)
      throw std::invalid_argument("make_green_field3: no closed form for this domain; use wos");
    Ball3 bb = *ball;
    field.method = "closed_form";
    field.err = 0.0;
    field.f = [bb, pole](Point3 x) { return green_ball3(bb.center, bb.radius, x, pole); };
  } else if (m == Method::wos) {
    DomainSpec spec = d;
    WosParams wp = opt.wos;
    field.method = "wos";
    field.err = 0.0;
    field.f = [spec, pole, wp](Point3 x) {
      if (!contains(spec, x)) return 0.0;
      return estimate_green_3d(spec, x, pole, wp).estimate;
    };
  } else {
    throw std::invalid_argument("make_green_field3: mfs is not available in 3-D; use wos");
  }
  return field;
}

// ---------------------------------------------------------------------------
// Grids and sup statistics
// ---------------------------------------------------------------------------

std::vector<Point2> evaluation_grid(const GridSpec& g, const DomainSpec& limit,
                                    const DomainSpec& approx, Point2 pole) {
  if (g.nx < 2 || g.ny < 2) throw std::invalid_argument("evaluation_grid: need nx, ny >= 2");
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(g.nx) * g.ny +
              2u * g.boundary_samples * (g.boundary_offsets.size() * 4 + 1));

  auto admit = [&](Point2 z) {
    if (std::abs(z - pole) <= g.pole_exclusion) return;
    pts.push_back(z);
  };

  for (int iy = 0; iy < g.ny; ++iy) {
    double y = g.ymin + (g.ymax - g.ymin) * iy / (g.ny - 1);
    for (int ix = 0; ix < g.nx; ++ix) {
      double x = g.xmin + (g.xmax - g.xmin) * ix / (g.nx - 1);
      admit({x, y});
    }
  }

  for (const DomainSpec* dom : {&limit, &approx}) {
    auto bs = boundary_sample(*dom, g.boundary_samples);
    for (const auto& b : bs) {
      admit(b.p);
      for (double off : g.boundary_offsets) {
        admit(b.p + Point2{off, 0.0});
        admit(b.p - Point2{off, 0.0});
        admit(b.p + Point2{0.0, off});
        admit(b.p - Point2{0.0, off});
      }
    }
  }
  return pts;
}

SupResult sup_discrepancy(const GreenField& a, const GreenField& b,
                          const std::vector<Point2>& points) {
  SupResult r;
  r.sup = -std::numeric_limits<double>::infinity();
  for (Point2 z : points) {
    double v = std::abs(a(z) - b(z));
    if (v > r.sup) {
      r.sup = v;
      r.argmax = z;
    }
  }
  if (points.empty()) r.sup = 0.0;
  return r;
}

SupResult one_sided_sup(const GreenField& a, const GreenField& b,
                        const std::vector<Point2>& points) {
  SupResult r;
  r.sup = -std::numeric_limits<double>::infinity();
  for (Point2 z : points) {
    double v = a(z) - b(z);
    if (v > r.sup) {
      r.sup = v;
      r.argmax = z;
    }
  }
  if (points.empty()) r.sup = 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Kernel convergence
// ---------------------------------------------------------------------------

namespace {

std::vector<Point2> interior_lattice2(const DomainSpec& limit, double resolution) {
  BBox2 b = bounding_box2(limit);
  double span = std::max(b.xmax - b.xmin, b.ymax - b.ymin);
  double h = std::max(resolution / 2.0, span / 256.0);
  std::vector<Point2> pts;
  DistanceOracle oracle(limit);
  for (double y = b.ymin; y <= b.ymax + 1e-12; y += h)
    for (double x = b.xmin; x <= b.xmax + 1e-12; x += h) {
      Point2 z{x, y};
      if (oracle.dist_signed(z) >= resolution) pts.push_back(z);
    }
  return pts;
}

std::vector<Point3> interior_lattice3(const DomainSpec& limit, double resolution) {
  BBox3 b = bounding_box3(limit);
  double span = std::max({b.xmax - b.xmin, b.ymax - b.ymin, b.zmax - b.zmin});
  double h = std::max(resolution / 2.0, span / 64.0);
  std::vector<Point3> pts;
  for (double z = b.zmin; z <= b.zmax + 1e-12; z += h)
    for (double y = b.ymin; y <= b.ymax + 1e-12; y += h)
      for (double x = b.xmin; x <= b.xmax + 1e-12; x += h) {
        Point3 p{x, y, z};
        auto q = distance_to_boundary(limit, p);
        if (q.inside && q.dist >= resolution) pts.push_back(p);
      }
  return pts;
}

}  // namespace

KernelCheckResult kernel_check(const DomainSequence& seq, double resolution) {
  if (resolution <= 0) throw std::invalid_argument("kernel_check: resolution must be positive");
  if (seq.n_values.empty()) throw std::invalid_argument("kernel_check: empty sequence");
  KernelCheckResult out;
  out.resolution = resolution;

  if (!seq.three_d) {
    auto interior = interior_lattice2(seq.limit, resolution);
    int m = std::clamp(
        static_cast<int>(std::ceil(4.0 * kPi * domain_diameter(seq.limit) / resolution)), 256,
        4096);
    auto boundary = boundary_sample(seq.limit, m);
    out.interior_points = static_cast<long>(interior.size());
    out.boundary_points = static_cast<long>(boundary.size());

    for (long n : seq.n_values) {
      DomainSpec dn = seq.domain_for(n);
      DistanceOracle oracle(dn);
      KernelRow row;
      row.n = n;
      for (Point2 z : interior)
        if (!oracle.inside(z)) ++row.interior_failures;
      double worst = 0.0;
      for (const auto& b : boundary) worst = std::max(worst, oracle.dist(b.p));
      row.max_boundary_dist = worst;
      out.rows.push_back(row);
    }
  } else {
    auto interior = interior_lattice3(seq.limit, resolution);
    auto boundary = boundary_sample3(seq.limit, 512);
    out.interior_points = static_cast<long>(interior.size());
    out.boundary_points = static_cast<long>(boundary.size());

    for (long n : seq.n_values) {
      DomainSpec dn = seq.domain_for(n);
      KernelRow row;
      row.n = n;
      for (const Point3& p : interior)
        if (!contains(dn, p)) ++row.interior_failures;
      double worst = 0.0;
      for (const auto& b : boundary) worst = std::max(worst, distance_to_boundary(dn, b.p).dist);
      row.max_boundary_dist = worst;
      out.rows.push_back(row);
    }
  }

  const KernelRow& last = out.rows.back();
  out.interior_pass = last.interior_failures == 0;
  out.boundary_pass = last.max_boundary_dist < resolution;
  out.pass = out.interior_pass && out.boundary_pass;
  return out;
}

// ---------------------------------------------------------------------------
// Bound checks
// ---------------------------------------------------------------------------

std::vector<BoundViolation> koebe_bound_check(const DomainSpec& d, Point2 w, int samples,
                                              std::uint64_t seed, const FieldOptions& opt) {
  validate(d);
  if (!is_planar(d) || component_count(d) != 1)
    throw std::invalid_argument("koebe_bound_check: simply connected planar domain required");
  GreenField g = make_green_field(d, w, opt);
  const double tol = 10.0 * g.err + 1e-9;
  const double shell = 1.0 / 128.0;

  BoundaryCurve outer = outer_curve(d);
  Point2 center = curve_center(outer);

  std::vector<BoundViolation> violations;
  WalkRng rng = WalkRng::for_walk(seed, 0x6b6f6562u);  // stream tag
  int accepted = 0;
  long attempts = 0;
  const long max_attempts = 200L * std::max(samples, 1);
  while (accepted < samples && attempts++ < max_attempts) {
    double theta = rng.uniform(0.0, 2.0 * kPi);
    Point2 b = curve_point(outer, theta);
    Point2 dir = center - b;
    double len = std::abs(dir);
    if (len <= 0) continue;
    dir /= len;
    double t = shell * std::max(rng.uniform01(), 1e-6);
    Point2 z = b + t * dir;
    auto q = distance_to_boundary(d, z);
    if (!q.inside || q.dist > shell || q.dist <= 0) continue;
    ++accepted;
    double bound = std::sqrt(128.0 * q.dist);
    double v = g(z);
    if (v > bound + tol) violations.push_back({z, v, bound, q.dist});
  }
  if (accepted < samples)
    throw std::runtime_error("koebe_bound_check: could not place the requested samples");
  return violations;
}

std::vector<BoundViolation> symmetrization_check(const DomainSpec& d, Point2 w, int samples,
                                                 std::uint64_t seed, const FieldOptions& opt) {
  validate(d);
  if (!is_planar(d)) throw std::invalid_argument("symmetrization_check: planar domain required");
  GreenField g = make_green_field(d, w, opt);
  const double tol = 10.0 * g.err + 1e-9;
  double depth = distance_to_boundary(d, w).dist;
  if (depth <= 0) throw std::invalid_argument("symmetrization_check: pole on the boundary");

  BBox2 box = bounding_box2(d);
  std::vector<BoundViolation> violations;
  WalkRng rng = WalkRng::for_walk(seed, 0x73796d6du);
  int accepted = 0;
  long attempts = 0;
  const long max_attempts = 1000L * std::max(samples, 1);
  const double pole_excl = 1e-6 * std::max(1.0, domain_diameter(d));
  while (accepted < samples && attempts++ < max_attempts) {
    Point2 z{rng.uniform(box.xmin, box.xmax), rng.uniform(box.ymin, box.ymax)};
    if (!contains(d, z)) continue;
    if (std::abs(z - w) <= pole_excl) continue;
    ++accepted;
    double bound = green_slit_ray(depth, std::abs(z - w));
    double v = g(z);
    if (v > bound + tol) violations.push_back({z, v, bound, depth});
  }
  if (accepted < samples)
    throw std::runtime_error("symmetrization_check: could not place the requested samples");
  return violations;
}

std::vector<BoundViolation> monotonicity_check(const DomainSpec& d_inner,
                                               const DomainSpec& d_outer, Point2 w,
                                               const std::vector<Point2>& points,
                                               const FieldOptions& opt) {
  GreenField gi = make_green_field(d_inner, w, opt);
  GreenField go = make_green_field(d_outer, w, opt);
  const double tol = 10.0 * (gi.err + go.err) + 1e-9;
  std::vector<BoundViolation> violations;
  for (Point2 z : points) {
    double vi = gi(z);
    double vo = go(z);
    if (vi > vo + tol) violations.push_back({z, vi, vo, tol});
  }
  return violations;
}

// ---------------------------------------------------------------------------
// Slit decay
// ---------------------------------------------------------------------------

SlitDecayResult slit_decay_experiment(const std::vector<double>& deltas, Point2 w,
                                      const WosParams& params) {
  if (deltas.empty()) throw std::invalid_argument("slit_decay_experiment: no deltas");
  for (double d : deltas)
    if (!(d > 0.0 && d <= 0.5))
      throw std::invalid_argument("slit_decay_experiment: deltas must lie in (0, 1/2]");

  SlitDecayResult out;
  for (double delta : deltas) {
    SlitDomain dom;
    dom.ambient = Disk{{0.0, 0.0}, 4.0};
    dom.segments = {Segment2{{delta, 0.0}, {1.0, 0.0}}};
    WosResult r = estimate_green_2d(DomainSpec{dom}, Point2{0.0, 0.0}, w, params);
    SlitDecayRow row;
    row.delta = delta;
    row.estimate = r.estimate;
    row.std_error = r.std_error;
    row.used = r.estimate > 0.0;
    if (!row.used) ++out.excluded;
    out.rows.push_back(row);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long k = 0;
  for (const auto& row : out.rows) {
    if (!row.used) continue;
    double x = std::log(row.delta);
    double y = std::log(row.estimate);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  if (k >= 2) {
    double denom = k * sxx - sx * sx;
    out.alpha = (k * sxy - sx * sy) / denom;
    out.log_c = (sy - out.alpha * sx) / k;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

std::string ConvergenceReport::to_csv() const {
  std::string s = "n,sup_two_sided,one_sided_M_n,compact_sup,components,err\n";
  for (const auto& r : rows) {
    s += std::to_string(r.n);
    s += ',';
    s += format_double(r.sup_two_sided);
    s += ',';
    s += format_double(r.one_sided_M_n);
    s += ',';
    s += format_double(r.compact_sup);
    s += ',';
    s += std::to_string(r.components);
    s += ',';
    s += format_double(r.err);
    s += '\n';
  }
  return s;
}

std::string ConvergenceReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["grid"] = grid_note;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["n"] = r.n;
    row["sup_two_sided"] = r.sup_two_sided;
    row["one_sided_M_n"] = r.one_sided_M_n;
    row["compact_sup"] = r.compact_sup;
    row["components"] = r.components;
    row["err"] = r.err;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

ConvergenceReport convergence_report(
    const std::string& name, const DomainSequence& seq, const GreenField& limit_field,
    const std::function<GreenField(long, const DomainSpec&)>& field_for, const GridSpec& grid,
    const std::function<bool(Point2)>& compact_filter) {
  if (seq.three_d)
    throw std::invalid_argument("convergence_report: grid reports are planar-only");
  ConvergenceReport rep;
  rep.name = name;
  rep.grid_note = "uniform " + std::to_string(grid.nx) + "x" + std::to_string(grid.ny) +
                  " cover of [" + format_double(grid.xmin) + "," + format_double(grid.xmax) +
                  "]x[" + format_double(grid.ymin) + "," + format_double(grid.ymax) +
                  "] plus boundary-adaptive offsets; pole exclusion " +
                  format_double(grid.pole_exclusion);

  DistanceOracle limit_oracle(seq.limit);
  auto in_compact = [&](Point2 z) {
    if (compact_filter) return compact_filter(z);
    return limit_oracle.dist_signed(z) >= 0.3;
  };

  for (long n : seq.n_values) {
    DomainSpec dn = seq.domain_for(n);
    GreenField gn = field_for(n, dn);
    auto pts = evaluation_grid(grid, seq.limit, dn, seq.pole);

    ConvergenceRow row;
    row.n = n;
    row.components = component_count(dn);
    row.err = limit_field.err + gn.err;

    double sup2 = 0.0, sup1 = -std::numeric_limits<double>::infinity(), supc = 0.0;
    for (Point2 z : pts) {
      double a = limit_field(z);
      double b = gn(z);
      double diff = a - b;
      sup2 = std::max(sup2, std::abs(diff));
      sup1 = std::max(sup1, diff);
      if (in_compact(z)) supc = std::max(supc, std::abs(diff));
    }
    row.sup_two_sided = sup2;
    row.one_sided_M_n = sup1;
    row.compact_sup = supc;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace greenfn
