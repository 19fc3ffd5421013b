#include "greenfn/wos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <type_traits>
#include <vector>

namespace greenfn {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix_next(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

WalkRng WalkRng::for_walk(std::uint64_t seed, std::uint64_t walk_index) {
  WalkRng r;
  std::uint64_t x = seed;
  (void)splitmix_next(x);
  x ^= walk_index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL;
  bool all_zero = true;
  for (auto& s : r.s_) {
    s = splitmix_next(x);
    all_zero = all_zero && s == 0;
  }
  if (all_zero) r.s_[0] = 1;
  return r;
}

std::uint64_t WalkRng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double WalkRng::uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

double WalkRng::uniform(double a, double b) { return a + (b - a) * uniform01(); }

Point2 WalkRng::on_circle(Point2 center, double radius) {
  const double t = 2.0 * kPi * uniform01();
  return center + Point2(radius * std::cos(t), radius * std::sin(t));
}

Point3 WalkRng::on_sphere(Point3 center, double radius) {
  const double z = 2.0 * uniform01() - 1.0;
  const double phi = 2.0 * kPi * uniform01();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return center + radius * Point3{r * std::cos(phi), r * std::sin(phi), z};
}

namespace {

double shell_width(const DomainSpec& d, const WosParams& p) {
  return p.eps_shell > 0.0 ? p.eps_shell : 1e-4 * domain_diameter(d);
}

// ---------------------------------------------------------------------------
// Analytic stepping for extremely small circular holes
// ---------------------------------------------------------------------------
//
// A sphere walk cannot resolve a hole whose radius lies far below the
// floating-point spacing at its center: the steps shrink toward the rim and
// the walk stalls without ever being absorbed.  For such holes the exit
// problem has an exact one-step solution on the hole's "clean disk"
// D(c, D) — the largest hole-centered disk that meets no other boundary
// piece.  Started at distance d from c, Brownian motion hits the hole before
// the rim |q - c| = D with probability log(D/d) / log(D/r), and the angular
// law on the rim equals the plain disk Poisson kernel minus a uniform defect
// of exactly that mass.  Drawing the rim angle from the Poisson kernel and
// then thinning it by the defect therefore realizes the joint law (hit hole,
// or rim exit angle) exactly; all neglected terms are O(r/D), which the
// micro threshold below keeps at or under 1e-8 — far beneath the statistical
// resolution of any walk count.
struct MicroHole {
  Point2 c{};
  double r = 0.0;       // hole radius
  double D = 0.0;       // clean-disk radius, slightly shrunk for safety
  double log_D_r = 0.0; // log(D / r)
};

class MicroNet {
 public:
  explicit MicroNet(const DomainSpec& spec) {
    const auto* cd = std::get_if<CircleDomain>(&spec);
    if (cd == nullptr || cd->holes.empty()) return;

    // Conservative enclosing radius of every hole about its own center, and a
    // lower bound on the clearance from a point inside the outer curve to it.
    const auto reach = [](const BoundaryCurve& b) {
      if (const auto* ci = std::get_if<Circle>(&b)) return std::pair(ci->center, ci->radius);
      const auto& t = std::get<TrigCurve>(b);
      double r = 0.0;
      for (double v : t.cos_coef) r += std::abs(v);
      for (double v : t.sin_coef) r += std::abs(v);
      return std::pair(t.center, r);
    };
    const auto outer_clearance = [&](Point2 p) {
      if (const auto* ci = std::get_if<Circle>(&cd->outer))
        return ci->radius - std::abs(p - ci->center);
      const auto& t = std::get<TrigCurve>(cd->outer);
      double rmin = t.cos_coef.empty() ? 0.0 : t.cos_coef[0];
      for (std::size_t k = 1; k < t.cos_coef.size(); ++k) rmin -= std::abs(t.cos_coef[k]);
      for (double v : t.sin_coef) rmin -= std::abs(v);
      return rmin - std::abs(p - t.center);
    };

    double max_d = 0.0;
    for (std::size_t i = 0; i < cd->holes.size(); ++i) {
      const auto* ci = std::get_if<Circle>(&cd->holes[i]);
      if (ci == nullptr) continue;
      double clean = outer_clearance(ci->center);
      for (std::size_t j = 0; j < cd->holes.size(); ++j) {
        if (j == i) continue;
        const auto [cj, rj] = reach(cd->holes[j]);
        clean = std::min(clean, std::abs(ci->center - cj) - rj);
      }
      if (!(clean > 0.0) || ci->radius > 1e-8 * clean) continue;
      MicroHole h;
      h.c = ci->center;
      h.r = ci->radius;
      h.D = clean * (1.0 - 1e-12);
      h.log_D_r = std::log(h.D / h.r);
      holes_.push_back(h);
      max_d = std::max(max_d, h.D);
    }
    if (holes_.empty()) return;

    double xmin = holes_[0].c.real(), xmax = xmin, ymin = holes_[0].c.imag(), ymax = ymin;
    for (const auto& h : holes_) {
      xmin = std::min(xmin, h.c.real());
      xmax = std::max(xmax, h.c.real());
      ymin = std::min(ymin, h.c.imag());
      ymax = std::max(ymax, h.c.imag());
    }
    cell_ = std::max(max_d, std::max(xmax - xmin, ymax - ymin) / 256.0);
    x0_ = xmin;
    y0_ = ymin;
    nx_ = std::max(1, int(std::floor((xmax - xmin) / cell_)) + 1);
    ny_ = std::max(1, int(std::floor((ymax - ymin) / cell_)) + 1);
    std::vector<int> count(std::size_t(nx_) * ny_, 0);
    const auto cell_of = [&](Point2 p) {
      const int cx = std::clamp(int(std::floor((p.real() - x0_) / cell_)), 0, nx_ - 1);
      const int cy = std::clamp(int(std::floor((p.imag() - y0_) / cell_)), 0, ny_ - 1);
      return cy * nx_ + cx;
    };
    for (const auto& h : holes_) ++count[std::size_t(cell_of(h.c))];
    start_.assign(count.size() + 1, 0);
    for (std::size_t i = 0; i < count.size(); ++i) start_[i + 1] = start_[i] + count[i];
    items_.resize(holes_.size());
    std::vector<int> cursor(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < holes_.size(); ++i)
      items_[std::size_t(cursor[std::size_t(cell_of(holes_[i].c))]++)] = int(i);
  }

  bool active() const { return !holes_.empty(); }

  // If p lies in some hole's clean disk, advances the walk by one exact step
  // and returns true; `absorbed` reports whether the hole was hit, in which
  // case p is the exit point on the hole rim.
  bool step(Point2& p, WalkRng& rng, bool& absorbed) const {
    const MicroHole* h = nearest_clean(p);
    if (h == nullptr) return false;
    const double d = std::abs(p - h->c);
    if (d <= h->r * (1.0 + 1e-12)) {  // grazed the rim: counts as a hit
      absorbed = true;
      p = d > 0.0 ? h->c + (h->r / d) * (p - h->c) : h->c + Point2{h->r, 0.0};
      return true;
    }
    const double p_hit = std::log(h->D / d) / h->log_D_r;
    const double rho = d / h->D;
    const double u = rng.uniform01();
    const double dtheta =
        2.0 * std::atan((1.0 - rho) / (1.0 + rho) * std::tan(kPi * (u - 0.5)));
    // Poisson-kernel density of the drawn angle relative to uniform; the
    // thinning below removes the uniform defect p_hit and redirects it to
    // the hole.  dens >= (1-rho)/(1+rho) > p_hit whenever log(D/r) >= 19,
    // which the micro threshold guarantees.
    const double dens =
        (1.0 - rho * rho) / (1.0 - 2.0 * rho * std::cos(dtheta) + rho * rho);
    if (rng.uniform01() * dens < p_hit) {
      absorbed = true;
      p = h->c + (h->r / d) * (p - h->c);
      return true;
    }
    absorbed = false;
    const double phi = std::arg(p - h->c);
    p = h->c + std::polar(h->D, phi + dtheta);
    return true;
  }

 private:
  const MicroHole* nearest_clean(Point2 p) const {
    const int cx = int(std::floor((p.real() - x0_) / cell_));
    const int cy = int(std::floor((p.imag() - y0_) / cell_));
    if (cx < -1 || cx > nx_ || cy < -1 || cy > ny_) return nullptr;
    const MicroHole* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (int y = std::max(0, cy - 1); y <= std::min(ny_ - 1, cy + 1); ++y) {
      for (int x = std::max(0, cx - 1); x <= std::min(nx_ - 1, cx + 1); ++x) {
        for (int k = start_[std::size_t(y) * nx_ + x];
             k < start_[std::size_t(y) * nx_ + x + 1]; ++k) {
          const MicroHole& h = holes_[std::size_t(items_[std::size_t(k)])];
          const double d = std::abs(p - h.c);
          if (d < h.D && d < best_d) {
            best_d = d;
            best = &h;
          }
        }
      }
    }
    return best;
  }

  std::vector<MicroHole> holes_;
  double cell_ = 1.0, x0_ = 0.0, y0_ = 0.0;
  int nx_ = 0, ny_ = 0;
  std::vector<int> start_, items_;  // CSR buckets over hole centers
};

// One walk; returns exit point, or sets truncated when max_steps is hit.
template <typename P>
P run_walk(const DistanceOracle& o, const MicroNet& micro, P start, double eps, long max_steps,
           WalkRng rng, bool& truncated) {
  P p = start;
  for (long step = 0; step < max_steps; ++step) {
    if constexpr (std::is_same_v<P, Point2>) {
      if (micro.active()) {
        bool absorbed = false;
        if (micro.step(p, rng, absorbed)) {
          if (absorbed) {
            truncated = false;
            return p;
          }
          continue;
        }
      }
    }
    const double d = o.dist(p);
    if (d < eps) {
      truncated = false;
      return distance_to_boundary(o.spec(), p).nearest;
    }
    if constexpr (std::is_same_v<P, Point2>)
      p = rng.on_circle(p, d);
    else
      p = rng.on_sphere(p, d);
  }
  truncated = true;
  return p;
}

// Fixed-tree pairwise sum: the reduction order depends only on the index
// range, never on thread scheduling.
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

struct WalkStats {
  double mean = 0.0, se = 0.0;
  long used = 0, truncated = 0;
};

// values[i] = f(exit of walk i), NaN for truncated walks.
template <typename P, typename F>
WalkStats run_walks(const DomainSpec& d, P start, const WosParams& params, F exit_value) {
  const DistanceOracle oracle(d);
  const MicroNet micro(d);
  const double eps = shell_width(d, params);
  const long n = params.walks;
  std::vector<double> vals(std::size_t(n), std::numeric_limits<double>::quiet_NaN());

  auto worker = [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      bool trunc = false;
      const P exit =
          run_walk<P>(oracle, micro, start, eps, params.max_steps,
                      WalkRng::for_walk(params.seed, std::uint64_t(i)), trunc);
      if (!trunc) vals[std::size_t(i)] = exit_value(exit);
    }
  };

  int threads = params.threads > 0 ? params.threads : int(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = int(std::min<long>(threads, std::max<long>(1, n)));
  if (threads == 1) {
    worker(0, n);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const long lo = t * chunk, hi = std::min<long>(n, lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // Deterministic aggregation: replace NaNs by 0 in a copy, count separately.
  std::vector<double> clean(vals.size(), 0.0);
  long used = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!std::isnan(vals[i])) {
      clean[i] = vals[i];
      ++used;
    }
  }
  WalkStats st;
  st.used = used;
  st.truncated = n - used;
  if (used == 0) return st;
  st.mean = pairwise_sum(clean.data(), clean.size()) / double(used);
  for (std::size_t i = 0; i < vals.size(); ++i)
    clean[i] = std::isnan(vals[i]) ? 0.0 : (vals[i] - st.mean) * (vals[i] - st.mean);
  const double var = pairwise_sum(clean.data(), clean.size()) / double(std::max<long>(1, used - 1));
  st.se = std::sqrt(var / double(used));
  return st;
}

}  // namespace

Point2 wos_exit_sample(const DomainSpec& d, Point2 start, const WosParams& params,
                       std::uint64_t walk_index) {
  if (!is_planar(d)) throw std::invalid_argument("wos_exit_sample: planar start in a 3-D domain");
  if (!contains(d, start)) throw std::invalid_argument("wos_exit_sample: start must be interior");
  const DistanceOracle oracle(d);
  const MicroNet micro(d);
  bool trunc = false;
  const Point2 exit = run_walk<Point2>(oracle, micro, start, shell_width(d, params),
                                       params.max_steps,
                                       WalkRng::for_walk(params.seed, walk_index), trunc);
  if (trunc) throw std::runtime_error("wos_exit_sample: walk exceeded max_steps");
  return exit;
}

Point3 wos_exit_sample(const DomainSpec& d, Point3 start, const WosParams& params,
                       std::uint64_t walk_index) {
  if (is_planar(d)) throw std::invalid_argument("wos_exit_sample: 3-D start in a planar domain");
  if (!contains(d, start)) throw std::invalid_argument("wos_exit_sample: start must be interior");
  const DistanceOracle oracle(d);
  const MicroNet micro(d);
  bool trunc = false;
  const Point3 exit = run_walk<Point3>(oracle, micro, start, shell_width(d, params),
                                       params.max_steps,
                                       WalkRng::for_walk(params.seed, walk_index), trunc);
  if (trunc) throw std::runtime_error("wos_exit_sample: walk exceeded max_steps");
  return exit;
}

WosResult estimate_green_2d(const DomainSpec& d, Point2 z, Point2 w, const WosParams& params) {
  if (!is_planar(d)) throw std::invalid_argument("estimate_green_2d: domain is 3-D");
  if (params.walks <= 0) throw std::invalid_argument("estimate_green_2d: walks must be > 0");
  if (!contains(d, z) || !contains(d, w))
    throw std::invalid_argument("estimate_green_2d: z and w must be interior points");
  if (std::abs(z - w) < 1e-14 * std::max(1.0, domain_diameter(d)))
    throw std::domain_error("estimate_green_2d: z coincides with the pole");

  const WalkStats st =
      run_walks<Point2>(d, z, params, [w](Point2 exit) { return std::log(std::abs(exit - w)); });
  WosResult r;
  r.estimate = -std::log(std::abs(z - w)) + st.mean;
  r.std_error = st.se;
  r.walks_used = st.used;
  r.truncated = st.truncated;
  r.truncation_warning = st.used == 0 || double(st.truncated) / double(st.used) >= 1e-3;
  return r;
}

WosResult estimate_green_3d(const DomainSpec& d, Point3 x, Point3 w, const WosParams& params) {
  if (is_planar(d)) throw std::invalid_argument("estimate_green_3d: domain is planar");
  if (params.walks <= 0) throw std::invalid_argument("estimate_green_3d: walks must be > 0");
  if (!contains(d, x) || !contains(d, w))
    throw std::invalid_argument("estimate_green_3d: x and w must be interior points");
  if (norm3(x - w) < 1e-14 * std::max(1.0, domain_diameter(d)))
    throw std::domain_error("estimate_green_3d: x coincides with the pole");

  const WalkStats st =
      run_walks<Point3>(d, x, params, [w](Point3 exit) { return 1.0 / norm3(exit - w); });
  WosResult r;
  r.estimate = 1.0 / norm3(x - w) - st.mean;
  r.std_error = st.se;
  r.walks_used = st.used;
  r.truncated = st.truncated;
  r.truncation_warning = st.used == 0 || double(st.truncated) / double(st.used) >= 1e-3;
  return r;
}

}  // namespace greenfn
