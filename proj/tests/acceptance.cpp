// Acceptance gate: one pass/fail criterion per invocation (c01..c11, or
// "all").  Each criterion prints one [PRIMARY] verdict line plus indented
// detail; the process exits 0 only if the selected criteria all pass.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "greenfn/closed_form.hpp"
#include "greenfn/convergence.hpp"
#include "greenfn/geometry.hpp"
#include "greenfn/mfs.hpp"
#include "greenfn/reproductions.hpp"
#include "greenfn/wos.hpp"

using namespace greenfn;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) { return format_double(x); }

double metric(const ReproductionResult& r, const std::string& key, double fallback = 0.0) {
  for (const auto& [k, v] : r.metrics)
    if (k == key) return v;
  return fallback;
}

Point2 random_in_disk(WalkRng& rng, Point2 c, double R) {
  double r = R * std::sqrt(rng.uniform01());
  double t = rng.uniform(0.0, 2 * kPi);
  return c + Point2{r * std::cos(t), r * std::sin(t)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<unreadable:" + p.string() + ">";
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --------------------------------------------------------------------------

bool c01(std::string& detail) {
  bool ok = true;

  auto t0 = std::chrono::steady_clock::now();
  DomainSpec disk = Disk{{0, 0}, 1.0};
  Point2 w{0.3, -0.2};
  GreenSolution sol = solve_green(disk, w);
  WalkRng rng = WalkRng::for_walk(101, 0);
  double worst_disk = 0.0;
  int tested = 0;
  while (tested < 200) {
    Point2 z = random_in_disk(rng, {0, 0}, 0.999);
    if (std::abs(z - w) < 1e-6) continue;
    ++tested;
    worst_disk = std::max(worst_disk, std::abs(sol.evaluate(z) - green_disk({0, 0}, 1.0, z, w)));
  }
  double dt_disk = seconds_since(t0);
  bool disk_ok = worst_disk <= 1e-8 && dt_disk < 1.0;
  ok = ok && disk_ok;
  detail += "  disk: max |charge expansion - closed form| = " + fmt(worst_disk) +
            " over 200 points in " + fmt(dt_disk) + " s (need <= 1e-8, < 1 s)\n";

  auto t1 = std::chrono::steady_clock::now();
  Annulus a{{0, 0}, 0.25, 1.0};
  Point2 wa{0.55, 0.1};
  GreenSolution sola = solve_green(DomainSpec{a}, wa);
  double worst_ann = 0.0;
  tested = 0;
  while (tested < 200) {
    Point2 z = random_in_disk(rng, {0, 0}, 0.999);
    if (std::abs(z) <= 0.26 || std::abs(z - wa) < 1e-6) continue;
    ++tested;
    worst_ann = std::max(worst_ann, std::abs(sola.evaluate(z) - green_annulus_domain(a, z, wa)));
  }
  double dt_ann = seconds_since(t1);
  bool ann_ok = worst_ann <= 1e-6 && dt_ann < 5.0;
  ok = ok && ann_ok;
  detail += "  annulus: max |charge expansion - product series| = " + fmt(worst_ann) +
            " over 200 points in " + fmt(dt_ann) + " s (need <= 1e-6, < 5 s)\n";
  return ok;
}

bool c02(std::string& detail) {
  bool ok = true;
  WosParams p;
  p.walks = 100000;
  p.seed = 1;

  auto t0 = std::chrono::steady_clock::now();
  WosResult r = estimate_green_2d(Disk{{0, 0}, 1.0}, Point2{0.5, 0.0}, Point2{0, 0}, p);
  double dt2 = seconds_since(t0);
  double gap2 = std::abs(r.estimate - std::log(2.0));
  bool disk_ok = gap2 <= 3.0 * r.std_error + 1e-12 && dt2 < 30.0;
  ok = ok && disk_ok;
  detail += "  disk: estimate " + fmt(r.estimate) + " vs log 2 = " + fmt(std::log(2.0)) +
            ", |gap| = " + fmt(gap2) + " <= 3 SE = " + fmt(3.0 * r.std_error) + ", " +
            fmt(dt2) + " s (need < 30 s)\n";

  auto t1 = std::chrono::steady_clock::now();
  WosResult s = estimate_green_3d(Ball3{{0, 0, 0}, 2.0}, Point3{0.5, 0, 0}, Point3{0, 0, 0}, p);
  double dt3 = seconds_since(t1);
  double gap3 = std::abs(s.estimate - 1.5);
  bool ball_ok = gap3 <= 3.0 * s.std_error + 1e-12 && dt3 < 30.0;
  ok = ok && ball_ok;
  detail += "  ball: estimate " + fmt(s.estimate) + " vs 1.5, |gap| = " + fmt(gap3) +
            " <= 3 SE = " + fmt(3.0 * s.std_error) + ", " + fmt(dt3) + " s (need < 30 s)\n";
  return ok;
}

bool c03(std::string& detail) {
  ReproductionSpec spec;
  spec.name = "lemma-oneside";
  ReproductionResult res = run_reproduction(spec);
  detail += "  min one-sided deficit " + fmt(metric(res, "min_one_sided_M_n")) +
            " (floor -1e-8); final deficits " + fmt(metric(res, "final_M_n_star_family")) +
            " and " + fmt(metric(res, "final_M_n_annulus_family")) + " (need < 0.05)\n";
  return res.pass;
}

bool c04(std::string& detail) {
  ReproductionSpec s1;
  s1.name = "thm-simply";
  ReproductionResult r1 = run_reproduction(s1);
  detail += "  star-curve family: final sup " + fmt(metric(r1, "final_sup_two_sided")) +
            " (need < 0.05), kernel interior failures " +
            fmt(metric(r1, "kernel_interior_failures")) + ", boundary approach " +
            fmt(metric(r1, "kernel_max_boundary_dist")) + " (resolution 0.01)\n";

  ReproductionSpec s2;
  s2.name = "thm-multiply";
  ReproductionResult r2 = run_reproduction(s2);
  detail += "  annulus family: final sup " + fmt(metric(r2, "final_sup_two_sided")) +
            " (need < 0.05), kernel interior failures " +
            fmt(metric(r2, "kernel_interior_failures")) + ", boundary approach " +
            fmt(metric(r2, "kernel_max_boundary_dist")) + " (resolution 0.01)\n";
  return r1.pass && r2.pass;
}

bool c05(std::string& detail) {
  ReproductionSpec spec;
  spec.name = "ex-annulus";
  ReproductionResult res = run_reproduction(spec);
  bool gap_ok = true;
  for (const auto& row : res.report.rows)
    if (row.n >= 8 && row.sup_two_sided < 0.6) gap_ok = false;
  const auto& last = res.report.rows.back();
  bool compact_ok = last.compact_sup <= 0.01;
  detail += "  full-domain gap stays >= 0.6 for n >= 8: " + std::string(gap_ok ? "yes" : "NO") +
            " (last " + fmt(last.sup_two_sided) + ")\n";
  detail += "  compact-subset gap at n = " + std::to_string(last.n) + ": " +
            fmt(last.compact_sup) + " (need <= 0.01): " + (compact_ok ? "yes" : "NO") + "\n";
  return res.pass;
}

bool c06(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  ReproductionSpec spec;
  spec.name = "ex-net";
  ReproductionResult res = run_reproduction(spec);
  double dt = seconds_since(t0);
  double est = metric(res, "estimate_n8");
  detail += "  g(1/2, 0) on the n = 8 net domain: " + fmt(est) + " (need >= " +
            fmt(std::log(4.0) - 0.2) + " and >= " + fmt(std::log(2.0) + 0.4) +
            "); kernel interior failures " + fmt(metric(res, "kernel_interior_failures")) +
            "; " + fmt(dt) + " s (need < 300 s)\n";
  return res.pass && dt < 300.0;
}

bool c07(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  ReproductionSpec spec;
  spec.name = "ex-tube3d";
  ReproductionResult res = run_reproduction(spec);
  double dt = seconds_since(t0);
  double est = metric(res, "estimate_n4");
  detail += "  g((0.5,0,0), 0) off the n = 4 tube: " + fmt(est) +
            " (need >= 1.3); kernel interior failures " +
            fmt(metric(res, "kernel_interior_failures")) + ", boundary approach " +
            fmt(metric(res, "kernel_max_boundary_dist")) + " (resolution 0.7); " + fmt(dt) +
            " s (need < 600 s)\n";
  return res.pass && dt < 600.0;
}

bool c08(std::string& detail) {
  ReproductionSpec spec;
  spec.name = "bound-koebe";
  ReproductionResult res = run_reproduction(spec);
  detail += "  violations of g <= sqrt(128 dist) over 3 families x 1000 near-boundary samples: " +
            fmt(metric(res, "total_violations")) + " (need 0)\n";
  return res.pass;
}

bool c09(std::string& detail) {
  ReproductionSpec spec;
  spec.name = "bound-symm";
  ReproductionResult res = run_reproduction(spec);
  detail += "  violations of the symmetrization majorant over 3 families x 1000 samples: " +
            fmt(metric(res, "total_violations")) + " (need 0)\n";
  return res.pass;
}

bool c10(std::string& detail) {
  auto t0 = std::chrono::steady_clock::now();
  ReproductionSpec spec;
  spec.name = "lemma-slit";
  ReproductionResult res = run_reproduction(spec);
  double dt = seconds_since(t0);
  detail += "  fitted decay exponent alpha = " + fmt(metric(res, "alpha")) +
            " (need 0.35 <= alpha <= 0.65), " + fmt(metric(res, "excluded")) +
            " rows excluded; " + fmt(dt) + " s (need < 900 s)\n";
  return res.pass && dt < 900.0;
}

bool c11(std::string& detail) {
  const fs::path root = "acceptance_c11";
  fs::remove_all(root);

  auto run = [&](const std::string& name, std::vector<long> ns, long walks, int threads,
                 const std::string& dir) {
    ReproductionSpec spec;
    spec.name = name;
    spec.n_values = std::move(ns);
    spec.walks = walks;
    spec.threads = threads;
    spec.out_dir = (root / dir).string();
    return run_reproduction(spec);
  };

  bool ok = true;
  // deterministic-evaluator family
  run("thm-simply", {2, 4}, 0, 1, "a1");
  run("thm-simply", {2, 4}, 0, 4, "a2");
  for (const char* f : {"thm-simply.csv", "thm-simply.json"}) {
    bool same = slurp(root / "a1" / f) == slurp(root / "a2" / f);
    ok = ok && same;
    detail += std::string("  ") + f + " with 1 vs 4 threads: " +
              (same ? "byte-identical" : "DIFFERS") + "\n";
  }
  // monte-carlo family (thread scheduling must not leak into the sums)
  run("ex-net", {2}, 2000, 1, "b1");
  run("ex-net", {2}, 2000, 4, "b2");
  run("ex-net", {2}, 2000, 3, "b3");
  for (const char* f : {"ex-net.csv", "ex-net.json"}) {
    bool same12 = slurp(root / "b1" / f) == slurp(root / "b2" / f);
    bool same13 = slurp(root / "b1" / f) == slurp(root / "b3" / f);
    ok = ok && same12 && same13;
    detail += std::string("  ") + f + " with 1 vs 4 vs 3 threads: " +
              (same12 && same13 ? "byte-identical" : "DIFFERS") + "\n";
  }
  return ok;
}

// --------------------------------------------------------------------------

struct Criterion {
  const char* id;
  const char* label;
  bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {"c01", "charge expansions match the disk and annulus closed forms", c01},
    {"c02", "monte carlo estimates match the disk and ball references", c02},
    {"c03", "one-sided deficits stay above -1e-8 and end below 0.05", c03},
    {"c04", "two-sided sups end below 0.05 with kernel certificates at 0.01", c04},
    {"c05", "slit-collapse keeps a 0.6 gap while the compact gap stays below 0.01", c05},
    {"c06", "hole-net domains keep g(1/2, 0) near the doubled disk's value", c06},
    {"c07", "tube-complement domains keep the ball's green value", c07},
    {"c08", "near-boundary growth bound holds on three families", c08},
    {"c09", "symmetrization majorant holds on three families", c09},
    {"c10", "puncture decay exponent lands in [0.35, 0.65]", c10},
    {"c11", "reports are byte-identical across thread counts", c11},
};

int run_one(const Criterion& c) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = c.fn(detail);
  } catch (const std::exception& e) {
    detail += std::string("  exception: ") + e.what() + "\n";
  }
  double dt = seconds_since(t0);
  std::printf("[PRIMARY] %s %s (%.1f s) %s\n", c.id, pass ? "PASS" : "FAIL", dt, c.label);
  std::fputs(detail.c_str(), stdout);
  std::fflush(stdout);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <c01..c11|all>\n");
    return 2;
  }
  std::string sel = argv[1];
  if (sel == "all") {
    int rc = 0;
    for (const auto& c : kCriteria) rc |= run_one(c);
    return rc;
  }
  for (const auto& c : kCriteria)
    if (sel == c.id) return run_one(c);
  std::fprintf(stderr, "unknown criterion \"%s\" (expected c01..c11 or all)\n", sel.c_str());
  return 2;
}
