#pragma once

#include <cstdint>

#include "greenfn/geometry.hpp"

namespace greenfn {

/// Counter-based per-walk random stream: the state is derived purely from
/// (seed, walk_index), so results are independent of scheduling and thread
/// count.  xoshiro256++ core seeded through splitmix64.
class WalkRng {
 public:
  static WalkRng for_walk(std::uint64_t seed, std::uint64_t walk_index);

  std::uint64_t next_u64();
  double uniform01();                       // [0, 1), 53-bit
  double uniform(double a, double b);
  Point2 on_circle(Point2 center, double radius);
  Point3 on_sphere(Point3 center, double radius);

 private:
  std::uint64_t s_[4] = {1, 2, 3, 4};
};

struct WosParams {
  long walks = 100000;
  double eps_shell = 0.0;      // absorbing shell width; 0 = 1e-4 * diameter
  long max_steps = 1000000;    // per walk; beyond this the walk is truncated
  std::uint64_t seed = 1;
  int threads = 0;             // execution hint only; 0 = hardware default
};

struct WosResult {
  double estimate = 0.0;    // raw (not clamped; may be slightly negative)
  double std_error = 0.0;
  long walks_used = 0;      // completed walks entering the average
  long truncated = 0;       // walks dropped for exceeding max_steps
  bool truncation_warning = false;  // truncated / walks_used >= 1e-3
};

/// Exit point of a single walk started at `start`, using the stream keyed by
/// (params.seed, walk_index).  The walk jumps to a uniform point of the
/// largest centered boundary-distance circle until it enters the eps shell,
/// then projects to the nearest boundary point.
Point2 wos_exit_sample(const DomainSpec& d, Point2 start, const WosParams& params,
                       std::uint64_t walk_index);
Point3 wos_exit_sample(const DomainSpec& d, Point3 start, const WosParams& params,
                       std::uint64_t walk_index);

/// Monte Carlo Green's function estimates.  2-D: -log|z-w| + E log|X-w|;
/// 3-D: |x-w|^(-1) - E |X-w|^(-1), X the walk's boundary exit point.
/// Aggregation uses a fixed pairwise tree over walk indices, so fixed seeds
/// give byte-identical results for any thread count.
WosResult estimate_green_2d(const DomainSpec& d, Point2 z, Point2 w, const WosParams& params);
WosResult estimate_green_3d(const DomainSpec& d, Point3 x, Point3 w, const WosParams& params);

}  // namespace greenfn
