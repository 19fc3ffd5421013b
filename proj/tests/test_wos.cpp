#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "greenfn/closed_form.hpp"
#include "greenfn/geometry.hpp"
#include "greenfn/wos.hpp"

using namespace greenfn;

TEST_CASE("per-walk streams are pure functions of (seed, index)") {
  WalkRng a = WalkRng::for_walk(42, 7);
  WalkRng b = WalkRng::for_walk(42, 7);
  for (int k = 0; k < 32; ++k) CHECK(a.next_u64() == b.next_u64());

  WalkRng c = WalkRng::for_walk(42, 8);
  WalkRng d = WalkRng::for_walk(43, 7);
  bool differs_c = false, differs_d = false;
  WalkRng ref = WalkRng::for_walk(42, 7);
  for (int k = 0; k < 8; ++k) {
    std::uint64_t r = ref.next_u64();
    differs_c |= (c.next_u64() != r);
    differs_d |= (d.next_u64() != r);
  }
  CHECK(differs_c);
  CHECK(differs_d);

  WalkRng e = WalkRng::for_walk(1, 1);
  for (int k = 0; k < 1000; ++k) {
    double u = e.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  WalkRng f = WalkRng::for_walk(2, 2);
  Point2 p = f.on_circle(Point2{1.0, 2.0}, 3.0);
  CHECK(std::abs(p - Point2{1.0, 2.0}) == doctest::Approx(3.0));
  Point3 q = f.on_sphere(Point3{1, 2, 3}, 0.5);
  CHECK(norm3(q - Point3{1, 2, 3}) == doctest::Approx(0.5));
}

TEST_CASE("walk exit points land on the boundary") {
  DomainSpec disk = Disk{{0, 0}, 1.0};
  WosParams params;
  params.seed = 5;
  for (std::uint64_t k = 0; k < 64; ++k) {
    Point2 exit = wos_exit_sample(disk, Point2{0.3, 0.1}, params, k);
    CHECK(distance_to_boundary(disk, exit).dist <= 1e-9);
  }

  DomainSpec ann = Annulus{{0, 0}, 0.25, 1.0};
  for (std::uint64_t k = 0; k < 64; ++k) {
    Point2 exit = wos_exit_sample(ann, Point2{0.6, 0.0}, params, k);
    CHECK(distance_to_boundary(ann, exit).dist <= 1e-9);
  }

  DomainSpec ball = Ball3{{0, 0, 0}, 2.0};
  for (std::uint64_t k = 0; k < 64; ++k) {
    Point3 exit = wos_exit_sample(ball, Point3{0.5, 0, 0}, params, k);
    CHECK(distance_to_boundary(ball, exit).dist <= 1e-9);
  }
}

TEST_CASE("estimates are deterministic for a fixed seed, any thread count") {
  DomainSpec disk = Disk{{0, 0}, 1.0};
  WosParams p1;
  p1.walks = 20000;
  p1.seed = 11;
  p1.threads = 1;
  WosParams p4 = p1;
  p4.threads = 4;
  WosParams p3 = p1;
  p3.threads = 3;

  WosResult r1 = estimate_green_2d(disk, Point2{0.5, 0.0}, Point2{0, 0}, p1);
  WosResult r4 = estimate_green_2d(disk, Point2{0.5, 0.0}, Point2{0, 0}, p4);
  WosResult r3 = estimate_green_2d(disk, Point2{0.5, 0.0}, Point2{0, 0}, p3);
  CHECK(r1.estimate == r4.estimate);  // bitwise: fixed pairwise reduction tree
  CHECK(r1.estimate == r3.estimate);
  CHECK(r1.std_error == r4.std_error);
  CHECK(r1.walks_used == r4.walks_used);

  DomainSpec ball = Ball3{{0, 0, 0}, 2.0};
  WosResult s1 = estimate_green_3d(ball, Point3{0.5, 0, 0}, Point3{0, 0, 0}, p1);
  WosResult s4 = estimate_green_3d(ball, Point3{0.5, 0, 0}, Point3{0, 0, 0}, p4);
  CHECK(s1.estimate == s4.estimate);
  CHECK(s1.std_error == s4.std_error);

  // a different seed moves the estimate (off-center pole, nonzero variance)
  WosParams other = p1;
  other.seed = 12;
  Point2 w{0.3, 0.2};
  WosResult q1 = estimate_green_2d(disk, Point2{0.5, 0.0}, w, p1);
  WosResult q2 = estimate_green_2d(disk, Point2{0.5, 0.0}, w, other);
  CHECK(q1.std_error > 0.0);
  CHECK(q1.estimate != q2.estimate);
}

TEST_CASE("disk estimate agrees with the closed form") {
  DomainSpec disk = Disk{{0, 0}, 1.0};
  WosParams params;
  params.walks = 20000;
  params.seed = 1;
  WosResult r = estimate_green_2d(disk, Point2{0.5, 0.0}, Point2{0, 0}, params);
  double exact = std::log(2.0);
  REQUIRE(r.std_error > 0.0);
  CHECK(r.std_error < 0.02);
  CHECK(std::abs(r.estimate - exact) <= 4.0 * r.std_error);
  CHECK(r.walks_used == 20000);
  CHECK(r.truncated == 0);
}

TEST_CASE("annulus estimate agrees with the closed form") {
  Annulus a{{0, 0}, 0.25, 1.0};
  WosParams params;
  params.walks = 20000;
  params.seed = 2;
  Point2 z{0.6, 0.0}, w{-0.5, 0.2};
  WosResult r = estimate_green_2d(DomainSpec{a}, z, w, params);
  double exact = green_annulus_domain(a, z, w);
  CHECK(std::abs(r.estimate - exact) <= 4.0 * r.std_error);
}

TEST_CASE("ball estimate agrees with the closed form") {
  DomainSpec ball = Ball3{{0, 0, 0}, 1.0};
  WosParams params;
  params.walks = 20000;
  params.seed = 3;
  WosResult r = estimate_green_3d(ball, Point3{0.5, 0, 0}, Point3{0, 0, 0}, params);
  CHECK(std::abs(r.estimate - 1.0) <= 4.0 * r.std_error);
  CHECK(r.std_error < 0.05);
}

TEST_CASE("shell width trades bias for step count") {
  // a coarse shell is acceptable for smoke checks; the default is fine-grained
  DomainSpec disk = Disk{{0, 0}, 1.0};
  WosParams coarse;
  coarse.walks = 5000;
  coarse.eps_shell = 0.05;
  coarse.seed = 4;
  WosResult r = estimate_green_2d(disk, Point2{0.5, 0.0}, Point2{0, 0}, coarse);
  CHECK(std::abs(r.estimate - std::log(2.0)) < 0.1);
}
