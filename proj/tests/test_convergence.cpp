#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "greenfn/closed_form.hpp"
#include "greenfn/convergence.hpp"
#include "greenfn/geometry.hpp"

using namespace greenfn;

namespace {
DomainSequence shrinking_disks(std::vector<long> ns) {
  DomainSequence seq;
  seq.n_values = std::move(ns);
  seq.limit = Disk{{0, 0}, 1.0};
  seq.pole = Point2{0, 0};
  seq.domain_for = [](long n) { return DomainSpec{Disk{{0, 0}, 1.0 - 1.0 / n}}; };
  return seq;
}
}  // namespace

TEST_CASE("field factory picks methods and enforces domains") {
  GreenField f = make_green_field(Disk{{0, 0}, 1.0}, Point2{0, 0});
  CHECK(f.method == "closed_form");
  CHECK(f(Point2{0.5, 0.0}) == doctest::Approx(std::log(2.0)));
  CHECK(f(Point2{2.0, 0.0}) == 0.0);  // zero extension

  CircleDomain cd;
  cd.outer = Circle{{0, 0}, 1.0};
  GreenField g = make_green_field(cd, Point2{0.2, 0.0});
  CHECK(g.method == "mfs");
  CHECK(g.err < 1e-8);
  CHECK(g(Point2{-0.4, 0.1}) ==
        doctest::Approx(green_disk({0, 0}, 1.0, Point2{-0.4, 0.1}, Point2{0.2, 0.0}))
            .epsilon(1e-8));

  SlitDomain sd{Disk{{0, 0}, 1.0}, {Segment2{{0.3, 0.0}, {0.6, 0.0}}}};
  GreenField h = make_green_field(sd, Point2{-0.4, 0.0});
  CHECK(h.method == "wos");

  CHECK_THROWS_AS(make_green_field(Disk{{0, 0}, 1.0}, Point2{2.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_green_field(Ball3{}, Point2{0, 0}), std::invalid_argument);

  FieldOptions no_closed;
  no_closed.method = Method::closed_form;
  CHECK_THROWS_AS(make_green_field(cd, Point2{0.2, 0.0}, no_closed), std::invalid_argument);

  GreenField3 f3 = make_green_field3(Ball3{{0, 0, 0}, 2.0}, Point3{0, 0, 0});
  CHECK(f3.method == "closed_form");
  CHECK(f3(Point3{0.5, 0, 0}) == doctest::Approx(1.5));
  FieldOptions want_mfs;
  want_mfs.method = Method::mfs;
  CHECK_THROWS_AS(make_green_field3(Ball3{}, Point3{0, 0, 0}, want_mfs),
                  std::invalid_argument);
}

TEST_CASE("evaluation grids avoid the pole and hug both boundaries") {
  GridSpec g;
  DomainSpec limit = Disk{{0, 0}, 1.0};
  DomainSpec approx = Disk{{0, 0}, 0.9};
  Point2 pole{0.25, 0.0};
  auto pts = evaluation_grid(g, limit, approx, pole);
  REQUIRE(pts.size() > 1000u);
  bool near_limit_boundary = false, near_approx_boundary = false;
  for (Point2 z : pts) {
    CHECK(std::abs(z - pole) > g.pole_exclusion);
    double dl = distance_to_boundary(limit, z).dist;
    double da = distance_to_boundary(approx, z).dist;
    near_limit_boundary |= dl <= 1.5e-3;
    near_approx_boundary |= da <= 1.5e-3;
  }
  CHECK(near_limit_boundary);
  CHECK(near_approx_boundary);
  GridSpec bad;
  bad.nx = 1;
  CHECK_THROWS_AS(evaluation_grid(bad, limit, approx, pole), std::invalid_argument);
}

TEST_CASE("sup statistics over explicit fields") {
  GreenField a;
  a.method = "closed_form";
  a.f = [](Point2 z) { return std::abs(z); };
  GreenField b;
  b.method = "closed_form";
  b.f = [](Point2 z) { return std::abs(z) + (z.real() > 0 ? 0.25 : -0.1); };

  std::vector<Point2> pts = {{1.0, 0.0}, {-1.0, 0.0}, {0.5, 0.5}};
  SupResult two = sup_discrepancy(a, b, pts);
  CHECK(two.sup == doctest::Approx(0.25));
  SupResult one = one_sided_sup(a, b, pts);  // sup(a - b)
  CHECK(one.sup == doctest::Approx(0.1));
  CHECK(std::abs(one.argmax - Point2{-1.0, 0.0}) <= 1e-15);
}

TEST_CASE("kernel certificate for shrinking disks") {
  auto seq = shrinking_disks({2, 4, 8, 16, 32, 64});
  KernelCheckResult k = kernel_check(seq, 0.05);
  CHECK(k.interior_points > 0);
  CHECK(k.boundary_points > 0);
  REQUIRE(k.rows.size() == 6u);
  CHECK(k.rows.back().interior_failures == 0);
  CHECK(k.rows.back().max_boundary_dist == doctest::Approx(1.0 / 64).epsilon(0.05));
  CHECK(k.interior_pass);
  CHECK(k.boundary_pass);
  CHECK(k.pass);

  // a sequence pinned far from the limit fails the boundary-approach test
  DomainSequence stuck;
  stuck.n_values = {2, 4};
  stuck.limit = Disk{{0, 0}, 1.0};
  stuck.pole = Point2{0, 0};
  stuck.domain_for = [](long) { return DomainSpec{Disk{{0, 0}, 0.5}}; };
  KernelCheckResult bad = kernel_check(stuck, 0.05);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.boundary_pass);

  // resolution must be positive
  CHECK_THROWS_AS(kernel_check(seq, 0.0), std::invalid_argument);
}

TEST_CASE("convergence report on shrinking disks") {
  auto seq = shrinking_disks({2, 4, 8, 16});
  GreenField limit_field = make_green_field(seq.limit, seq.pole);
  auto field_for = [&](long, const DomainSpec& d) { return make_green_field(d, seq.pole); };
  ConvergenceReport rep = convergence_report("disks", seq, limit_field, field_for, GridSpec{});

  REQUIRE(rep.rows.size() == 4u);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    CHECK(r.components == 1);
    CHECK(r.one_sided_M_n >= -1e-12);
    CHECK(r.one_sided_M_n <= r.sup_two_sided);
    CHECK(r.compact_sup <= r.sup_two_sided + 1e-15);
    CHECK(r.err <= 1e-11);
    if (i > 0) CHECK(r.sup_two_sided < rep.rows[i - 1].sup_two_sided);
  }
  // g_limit - g_n >= 0 up to rounding for nested domains, so the one-sided gap
  // nearly equals the two-sided sup
  CHECK(rep.rows.back().one_sided_M_n ==
        doctest::Approx(rep.rows.back().sup_two_sided).epsilon(1e-9));

  // csv: fixed header and one line per row
  std::string csv = rep.to_csv();
  CHECK(csv.rfind("n,sup_two_sided,one_sided_M_n,compact_sup,components,err\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  // json: parses, keeps names and row count
  auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j["name"] == "disks");
  CHECK(j["rows"].size() == 4u);
  CHECK(j["rows"][3]["n"] == 16);

  // deterministic reruns byte-for-byte
  ConvergenceReport rep2 = convergence_report("disks", seq, limit_field, field_for, GridSpec{});
  CHECK(rep.to_csv() == rep2.to_csv());
  CHECK(rep.to_json() == rep2.to_json());

  // custom compact filter narrows the compact column
  auto tiny = [](Point2 z) { return std::abs(z) <= 0.1; };
  ConvergenceReport rep3 =
      convergence_report("disks", seq, limit_field, field_for, GridSpec{}, tiny);
  CHECK(rep3.rows.back().compact_sup <= rep.rows.back().compact_sup + 1e-15);
}

TEST_CASE("distance and symmetrization bounds hold on reference domains") {
  auto k = koebe_bound_check(Disk{{0, 0}, 1.0}, Point2{0.2, 0.1}, 300, 1);
  CHECK(k.empty());

  auto s = symmetrization_check(Disk{{0, 0}, 1.0}, Point2{0.3, 0.0}, 300, 1);
  CHECK(s.empty());

  auto sa = symmetrization_check(Annulus{{0, 0}, 0.25, 1.0}, Point2{0.7, 0.0}, 300, 1);
  CHECK(sa.empty());

  // the distance bound needs a simply connected domain
  CHECK_THROWS_AS(koebe_bound_check(Annulus{{0, 0}, 0.25, 1.0}, Point2{0.7, 0.0}, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("domain monotonicity of green fields") {
  std::vector<Point2> probe;
  for (int k = 0; k < 24; ++k) {
    double t = 2 * 3.14159265358979323846 * k / 24;
    probe.push_back(Point2{0.5 * std::cos(t), 0.5 * std::sin(t)});
  }
  auto m = monotonicity_check(Disk{{0, 0}, 0.7}, Disk{{0, 0}, 1.0}, Point2{0.1, 0.0}, probe);
  CHECK(m.empty());
}

TEST_CASE("puncture decay regression has the expected shape") {
  std::vector<double> deltas = {0.5, 0.25};
  WosParams params;
  params.walks = 4000;
  params.seed = 6;
  SlitDecayResult r = slit_decay_experiment(deltas, Point2{-3.0, 0.0}, params);
  REQUIRE(r.rows.size() == 2u);
  CHECK(r.rows[0].delta == 0.5);
  CHECK(r.rows[0].estimate > 0.0);
  CHECK(std::isfinite(r.alpha));

  CHECK_THROWS_AS(slit_decay_experiment({0.9}, Point2{-3.0, 0.0}, params),
                  std::invalid_argument);
  CHECK_THROWS_AS(slit_decay_experiment({}, Point2{-3.0, 0.0}, params),
                  std::invalid_argument);
}
