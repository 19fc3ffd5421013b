#include "greenfn/reproductions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "greenfn/closed_form.hpp"
#include "greenfn/geometry.hpp"
#include "greenfn/mfs.hpp"
#include "greenfn/wos.hpp"

namespace greenfn {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2 = 0.693147180559945309;
constexpr double kLog4 = 1.386294361119890619;

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

void write_file(const std::string& dir, const std::string& filename, const std::string& text,
                ReproductionResult& res) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / filename;
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("reproduction: failed writing " + path.string());
  res.written.push_back(path.string());
}

void add_metric(ReproductionResult& res, const std::string& key, double value) {
  res.metrics.emplace_back(key, value);
}

ordered_json metrics_json(const ReproductionResult& res) {
  ordered_json m = ordered_json::object();
  for (const auto& [key, value] : res.metrics) m[key] = value;
  return m;
}

ordered_json rows_json(const ConvergenceReport& rep) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : rep.rows) {
    ordered_json row;
    row["n"] = r.n;
    row["sup_two_sided"] = r.sup_two_sided;
    row["one_sided_M_n"] = r.one_sided_M_n;
    row["compact_sup"] = r.compact_sup;
    row["components"] = r.components;
    row["err"] = r.err;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string result_json(const ReproductionResult& res) {
  ordered_json j;
  j["name"] = res.name;
  j["pass"] = res.pass;
  j["grid"] = res.report.grid_note;
  j["metrics"] = metrics_json(res);
  j["rows"] = rows_json(res.report);
  return j.dump(2) + "\n";
}

void emit_standard(const ReproductionSpec& spec, ReproductionResult& res) {
  write_file(spec.out_dir, res.name + ".csv", res.report.to_csv(), res);
  write_file(spec.out_dir, res.name + ".json", result_json(res), res);
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

std::vector<long> n_or_default(const ReproductionSpec& spec, std::vector<long> def) {
  std::vector<long> n = spec.n_values.empty() ? std::move(def) : spec.n_values;
  for (long v : n)
    if (v <= 0) throw std::invalid_argument("reproduction: n values must be positive");
  if (!std::is_sorted(n.begin(), n.end(), std::less_equal<long>()))
    throw std::invalid_argument("reproduction: n values must be strictly increasing");
  return n;
}

bool one_sided_floor_ok(const ConvergenceReport& rep) {
  for (const auto& r : rep.rows)
    if (r.one_sided_M_n < -1e-8) return false;
  return true;
}

std::string rows_block(const ConvergenceReport& rep) {
  std::string s;
  for (const auto& r : rep.rows)
    s += "  n=" + std::to_string(r.n) + ": sup=" + format_double(r.sup_two_sided) +
         " M_n=" + format_double(r.one_sided_M_n) + " compact=" + format_double(r.compact_sup) +
         " err=" + format_double(r.err) + "\n";
  return s;
}

std::string kernel_line(const KernelCheckResult& kc) {
  const KernelRow& last = kc.rows.back();
  return "  kernel certificate at resolution " + format_double(kc.resolution) + ": " +
         (kc.pass ? "pass" : "FAIL") + " (largest n: " +
         std::to_string(last.interior_failures) + " interior misses, boundary approach " +
         format_double(last.max_boundary_dist) + ")\n";
}

void add_kernel_metrics(ReproductionResult& res, const KernelCheckResult& kc) {
  const KernelRow& last = kc.rows.back();
  add_metric(res, "kernel_interior_failures", double(last.interior_failures));
  add_metric(res, "kernel_max_boundary_dist", last.max_boundary_dist);
}

std::string verdict_line(bool pass) { return pass ? "result: PASS\n" : "result: FAIL\n"; }

// ---------------------------------------------------------------------------
// Domain sequences for the two convergence-theorem families
// ---------------------------------------------------------------------------

DomainSpec wobbled_disk(long n) {
  TrigCurve c;
  c.center = {0.0, 0.0};
  c.cos_coef = {1.0, 0.0, 0.0, 1.0 / (2.0 * double(n))};
  return CircleDomain{c, {}};
}

DomainSequence simply_sequence(const std::vector<long>& n_values) {
  DomainSequence seq;
  seq.n_values = n_values;
  seq.domain_for = [](long n) { return wobbled_disk(n); };
  seq.limit = Disk{{0.0, 0.0}, 1.0};
  seq.pole = {0.0, 0.0};
  return seq;
}

DomainSequence annuli_sequence(const std::vector<long>& n_values) {
  DomainSequence seq;
  seq.n_values = n_values;
  seq.domain_for = [](long n) -> DomainSpec {
    const double k = double(n);
    return Annulus{{0.0, 0.0}, (1.0 + 1.0 / k) / 3.0, 1.0 - 1.0 / (2.0 * k)};
  };
  seq.limit = Annulus{{0.0, 0.0}, 1.0 / 3.0, 1.0};
  seq.pole = {0.7, 0.0};
  return seq;
}

ConvergenceReport sequence_report(const std::string& name, const DomainSequence& seq,
                                  const FieldOptions& member_opt = {}) {
  GreenField limit_field = make_green_field(seq.limit, seq.pole);
  auto field_for = [&seq, &member_opt](long, const DomainSpec& dn) {
    return make_green_field(dn, seq.pole, member_opt);
  };
  return convergence_report(name, seq, limit_field, field_for, GridSpec{});
}

FieldOptions star_mfs_options() {
  FieldOptions opt;
  // the strongest wobble in these families (amplitude 1/4 at frequency 3)
  // needs ~160 charges before the certified residual clears the 1e-4 gate
  opt.mfs.charges_per_component = 192;
  return opt;
}

// ---------------------------------------------------------------------------
// thm-simply / thm-multiply / lemma-oneside
// ---------------------------------------------------------------------------

ReproductionResult run_thm_simply(const ReproductionSpec& spec) {
  ReproductionResult res;
  res.name = spec.name;
  DomainSequence seq = simply_sequence(n_or_default(spec, {2, 4, 8, 16, 32, 64}));
  res.report = sequence_report(res.name, seq, star_mfs_options());
  KernelCheckResult kc = kernel_check(seq, 1e-2);

  const ConvergenceRow& last = res.report.rows.back();
  const bool floor_ok = one_sided_floor_ok(res.report);
  res.pass = kc.pass && floor_ok && last.sup_two_sided < 0.05 && last.one_sided_M_n < 0.05;

  add_metric(res, "final_sup_two_sided", last.sup_two_sided);
  add_metric(res, "final_one_sided_M_n", last.one_sided_M_n);
  add_kernel_metrics(res, kc);

  res.summary = "star curves r(t) = 1 + cos(3t)/(2n) shrinking onto the unit disk, pole 0\n" +
                kernel_line(kc) + rows_block(res.report) +
                "  one-sided floor -1e-8 respected: " + (floor_ok ? "yes" : "NO") + "\n" +
                verdict_line(res.pass);
  emit_standard(spec, res);
  return res;
}

ReproductionResult run_thm_multiply(const ReproductionSpec& spec) {
  ReproductionResult res;
  res.name = spec.name;
  DomainSequence seq = annuli_sequence(n_or_default(spec, {2, 4, 8, 16, 32, 64}));
  res.report = sequence_report(res.name, seq);
  KernelCheckResult kc = kernel_check(seq, 1e-2);

  const ConvergenceRow& last = res.report.rows.back();
  const bool floor_ok = one_sided_floor_ok(res.report);
  res.pass = kc.pass && floor_ok && last.sup_two_sided < 0.05 && last.one_sided_M_n < 0.05;

  add_metric(res, "final_sup_two_sided", last.sup_two_sided);
  add_metric(res, "final_one_sided_M_n", last.one_sided_M_n);
  add_kernel_metrics(res, kc);

  res.summary =
      "annuli (1+1/n)/3 < |z| < 1 - 1/(2n) growing onto 1/3 < |z| < 1, pole 0.7\n" +
      kernel_line(kc) + rows_block(res.report) + "  one-sided floor -1e-8 respected: " +
      (floor_ok ? "yes" : "NO") + "\n" + verdict_line(res.pass);
  emit_standard(spec, res);
  return res;
}

ReproductionResult run_lemma_oneside(const ReproductionSpec& spec) {
  ReproductionResult res;
  res.name = spec.name;
  const std::vector<long> n = n_or_default(spec, {2, 4, 8, 16, 32, 64});

  ConvergenceReport simply = sequence_report(res.name, simply_sequence(n), star_mfs_options());
  ConvergenceReport multiply = sequence_report(res.name, annuli_sequence(n));

  res.report.name = res.name;
  res.report.grid_note =
      simply.grid_note + "; star-curve rows first (components=1), annulus rows second (components=2)";
  res.report.rows = simply.rows;
  res.report.rows.insert(res.report.rows.end(), multiply.rows.begin(), multiply.rows.end());

  double min_mn = std::numeric_limits<double>::infinity();
  for (const auto& r : res.report.rows) min_mn = std::min(min_mn, r.one_sided_M_n);
  const bool floor_ok = min_mn >= -1e-8;
  const double final_simply = simply.rows.back().one_sided_M_n;
  const double final_multiply = multiply.rows.back().one_sided_M_n;
  res.pass = floor_ok && final_simply < 0.05 && final_multiply < 0.05;

  add_metric(res, "min_one_sided_M_n", min_mn);
  add_metric(res, "final_M_n_star_family", final_simply);
  add_metric(res, "final_M_n_annulus_family", final_multiply);

  res.summary = "one-sided deficit M_n = sup(g_limit - g_n) across both families\n" +
                rows_block(res.report) + "  minimum M_n over every row: " + format_double(min_mn) +
                " (floor -1e-8)\n" + verdict_line(res.pass);
  emit_standard(spec, res);
  return res;
}

// ---------------------------------------------------------------------------
// ex-annulus: shrinking inner circles, punctured-disk limit
// ---------------------------------------------------------------------------

ReproductionResult run_ex_annulus(const ReproductionSpec& spec) {
  ReproductionResult res;
  res.name = spec.name;
  const std::vector<long> n = n_or_default(spec, {4, 8, 16});
  for (long k : n)
    if (k < 3)
      throw std::invalid_argument(
          "ex-annulus: n must be >= 3 so the pole 1/2 stays inside the annulus 1/n < |z| < 1");

  DomainSequence seq;
  seq.n_values = n;
  seq.domain_for = [](long k) -> DomainSpec { return Annulus{{0.0, 0.0}, 1.0 / double(k), 1.0}; };
  seq.limit = SlitDomain{Disk{{0.0, 0.0}, 1.0}, {Segment2{{0.0, 0.0}, {0.0, 0.0}}}};
  seq.pole = {0.5, 0.0};

  // The puncture is a null boundary component: the limit's Green's function is
  // the full disk's, so the annuli cannot converge to it near the origin.
  GreenField limit_field{"closed_form", 0.0,
                         [](Point2 z) { return green_disk({0.0, 0.0}, 1.0, z, {0.5, 0.0}); }};
  auto field_for = [&seq](long, const DomainSpec& dn) { return make_green_field(dn, seq.pole); };
  res.report = convergence_report(res.name, seq, limit_field, field_for, GridSpec{});
  KernelCheckResult kc = kernel_check(seq, 0.1);

  bool any_large_n = false;
  bool sup_stays_large = true;
  for (const auto& r : res.report.rows)
    if (r.n >= 8) {
      any_large_n = true;
      sup_stays_large = sup_stays_large && r.sup_two_sided >= 0.6;
    }
  const ConvergenceRow& last = res.report.rows.back();
  const bool compact_small = last.compact_sup <= 0.01;
  const bool floor_ok = one_sided_floor_ok(res.report);
  res.pass = kc.pass && floor_ok && any_large_n && sup_stays_large && compact_small;

  add_metric(res, "final_sup_two_sided", last.sup_two_sided);
  add_metric(res, "final_compact_sup", last.compact_sup);
  add_kernel_metrics(res, kc);

  res.summary =
      "annuli 1/n < |z| < 1 against the punctured disk (pole 1/2); the puncture is invisible "
      "to the limit Green's function\n" +
      kernel_line(kc) + rows_block(res.report) +
      "  sup stays >= 0.6 at n >= 8: " + (any_large_n && sup_stays_large ? "yes" : "NO") + "\n" +
      "  compact_sup <= 0.01 at largest n: " + (compact_small ? "yes" : "NO") + " (" +
      format_double(last.compact_sup) + ")\n" + verdict_line(res.pass);
  emit_standard(spec, res);
  return res;
}

// ---------------------------------------------------------------------------
// Shrinking-radius searches shared by ex-net and ex-tube3d
// ---------------------------------------------------------------------------

struct ShrinkSearch {
  double radius = 0.0;
  WosResult confirm{};
  long halvings = 0;
};

ShrinkSearch shrink_to_target(double r0, double target, const WosParams& full,
                              const std::function<WosResult(double, const WosParams&)>& run,
                              const std::string& what) {
  WosParams screen = full;
  screen.walks = std::min<long>(2000, full.walks);
  ShrinkSearch out;
  for (double r = r0;; r *= 0.5, ++out.halvings) {
    if (!(r >= 1e-290))
      throw std::runtime_error("reproduction: " + what +
                               " radius search went below 1e-290 without reaching target " +
                               format_double(target) + "; the configuration looks unreachable");
    WosResult s = run(r, screen);
    if (s.estimate - 3.0 * s.std_error < target) continue;
    WosResult c = run(r, full);
    if (c.estimate - 3.0 * c.std_error < target) continue;
    out.radius = r;
    out.confirm = c;
    return out;
  }
}

// ---------------------------------------------------------------------------
// ex-net: micro-disk nets swallow the shell 1 < |z| < 2 without moving g
// ---------------------------------------------------------------------------

DomainSpec net_domain(const std::vector<Point2>& centers, double r) {
  CircleDomain cd;
  cd.outer = Circle{{0.0, 0.0}, 2.0};
  cd.holes.reserve(centers.size());
  for (Point2 c : centers) cd.holes.push_back(Circle{c, r});
  return cd;
}

ReproductionResult run_ex_net(const ReproductionSpec& spec) {
  ReproductionResult res;
  res.name = spec.name;
  const std::vector<long> ns = n_or_default(spec, {2, 4, 8});
  const long walks = spec.walks > 0 ? spec.walks : 100000;
  const Point2 z_head{0.5, 0.0};
  const Point2 pole{0.0, 0.0};

  GreenField limit_field = make_green_field(Disk{{0.0, 0.0}, 1.0}, pole);

  std::vector<std::vector<Point2>> all_centers;
  std::vector<double> all_radii;
  std::string radii_note;
  std::string search_lines;

  for (long n : ns) {
    const double spacing = std::max(1.0 / double(n), 0.25);
    const auto centers = net_points(spacing, AnnularRegion{{0.0, 0.0}, 1.0, 1.95});
    if (centers.empty()) throw std::runtime_error("ex-net: empty net");
    const double pitch = spacing / std::sqrt(2.0);
    double clearance = std::numeric_limits<double>::infinity();
    for (Point2 c : centers) clearance = std::min(clearance, 2.0 - std::abs(c));
    const double r0 = std::min(0.45 * pitch, 0.9 * clearance);
    const double target = kLog4 - 1.0 / double(n);

    WosParams full;
    full.walks = walks;
    full.seed = spec.seed;
    full.threads = spec.threads;

    // Holes at or below ~1e-9 are stepped analytically inside the sampler, so
    // the shell width then only governs absorption at the outer circle; larger
    // holes stay honestly resolved by keeping the shell under a quarter radius.
    const auto shell_for = [](double r) {
      return r <= 1e-9 ? 1e-4 * 4.0 : std::min(1e-4 * 4.0, r / 4.0);
    };
    auto runner = [&centers, &z_head, &pole, &shell_for](double r, const WosParams& base) {
      WosParams p = base;
      p.eps_shell = shell_for(r);
      return estimate_green_2d(net_domain(centers, r), z_head, pole, p);
    };
    ShrinkSearch found = shrink_to_target(r0, target, full, runner, "ex-net hole");

    all_centers.push_back(centers);
    all_radii.push_back(found.radius);

    // Witness evaluations: interior probes plus hole-rim and headline points.
    WosParams probe = full;
    probe.eps_shell = shell_for(found.radius);
    const DomainSpec dn = net_domain(centers, found.radius);
    std::vector<std::pair<Point2, double>> witness;  // (point, member value)
    witness.emplace_back(z_head, found.confirm.estimate);
    for (Point2 zw : {Point2{-0.5, 0.0}, Point2{0.0, 0.5}, Point2{0.8, 0.0}})
      witness.emplace_back(zw, estimate_green_2d(dn, zw, pole, probe).estimate);
    for (std::size_t i = 0; i < std::min<std::size_t>(3, centers.size()); ++i)
      witness.emplace_back(centers[i] + Point2{found.radius, 0.0}, 0.0);  // boundary: zero

    ConvergenceRow row;
    row.n = n;
    row.components = 1 + int(centers.size());
    row.err = found.confirm.std_error;
    double sup1 = -std::numeric_limits<double>::infinity();
    for (const auto& [zw, member] : witness) {
      const double diff = limit_field(zw) - member;
      row.sup_two_sided = std::max(row.sup_two_sided, std::abs(diff));
      sup1 = std::max(sup1, diff);
      if (std::abs(zw) <= 0.7) row.compact_sup = std::max(row.compact_sup, std::abs(diff));
    }
    row.one_sided_M_n = sup1;
    res.report.rows.push_back(row);

    const std::string tag = "_n" + std::to_string(n);
    add_metric(res, "radius" + tag, found.radius);
    add_metric(res, "estimate" + tag, found.confirm.estimate);
    add_metric(res, "std_error" + tag, found.confirm.std_error);
    radii_note += (radii_note.empty() ? "" : ", ") + ("n=" + std::to_string(n)) + ": " +
                  std::to_string(centers.size()) + " holes of radius " +
                  format_double(found.radius);
    search_lines += "  n=" + std::to_string(n) + ": spacing " + format_double(spacing) + ", " +
                    std::to_string(centers.size()) + " holes, radius " +
                    format_double(found.radius) + " after " + std::to_string(found.halvings) +
                    " halvings; g(1/2) = " + format_double(found.confirm.estimate) + " +- " +
                    format_double(found.confirm.std_error) + " (target " + format_double(target) +
                    ")\n";
  }

  res.report.name = res.name;
  res.report.grid_note =
      "witness points (0.5,0) (-0.5,0) (0,0.5) (0.8,0) plus hole-rim points; " + radii_note;

  DomainSequence seq;
  seq.n_values = ns;
  seq.limit = Disk{{0.0, 0.0}, 1.0};
  seq.pole = pole;
  seq.domain_for = [ns, all_centers, all_radii](long k) -> DomainSpec {
    for (std::size_t i = 0; i < ns.size(); ++i)
      if (ns[i] == k) return net_domain(all_centers[i], all_radii[i]);
    throw std::invalid_argument("ex-net: no domain stored for the requested index");
  };
  KernelCheckResult kc = kernel_check(seq, 0.3);

  double est_last = 0.0;
  for (const auto& [key, value] : res.metrics)
    if (key == "estimate_n" + std::to_string(ns.back())) est_last = value;
  const bool floor_ok = one_sided_floor_ok(res.report);
  res.pass = kc.pass && floor_ok && est_last >= kLog4 - 0.2 && est_last >= kLog2 + 0.4;

  add_kernel_metrics(res, kc);

  res.summary =
      "micro-disk nets over the shell 1 < |z| < 2: domains kernel-converge to the unit disk "
      "while g(1/2, 0) stays near log 4\n" +
      search_lines + kernel_line(kc) + rows_block(res.report) + "  final estimate " +
      format_double(est_last) + " vs unit-disk value " + format_double(kLog2) +
      " and full-disk value " + format_double(kLog4) + "\n" + verdict_line(res.pass);
  emit_standard(spec, res);
  return res;
}

// ---------------------------------------------------------------------------
// ex-tube3d: a thin space-filling tube in the shell 1 < |x| < 2
// ---------------------------------------------------------------------------

std::vector<Point3> shell_candidates() {
  std::vector<Point3> out;
  for (int i = -19; i <= 19; ++i)
    for (int j = -19; j <= 19; ++j)
      for (int k = -19; k <= 19; ++k) {
        const Point3 p{0.1 * i, 0.1 * j, 0.1 * k};
        const double r = norm3(p);
        if (r >= 1.05 && r <= 1.95) out.push_back(p);
      }
  return out;
}

std::vector<Point3> fps_net(const std::vector<Point3>& cand, double cover) {
  std::vector<Point3> net{cand.front()};
  std::vector<double> mind(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) mind[i] = norm3(cand[i] - net[0]);
  for (;;) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cand.size(); ++i)
      if (mind[i] > mind[best]) best = i;
    if (mind[best] <= cover) break;
    net.push_back(cand[best]);
    for (std::size_t i = 0; i < cand.size(); ++i)
      mind[i] = std::min(mind[i], norm3(cand[i] - net.back()));
  }
  return net;
}

std::vector<Point3> nn_chain(const std::vector<Point3>& net) {
  const double r0 = norm3(net.front());
  std::vector<Point3> chain{(2.0 / r0) * net.front()};  // anchor on the ambient sphere
  std::vector<char> used(net.size(), 0);
  Point3 cur = chain.front();
  for (std::size_t step = 0; step < net.size(); ++step) {
    std::size_t best = net.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.size(); ++i) {
      if (used[i]) continue;
      const double d = norm3(net[i] - cur);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    used[best] = 1;
    chain.push_back(net[best]);
    cur = net[best];
  }
  return chain;
}

double segment_origin_distance(Point3 a, Point3 b) {
  const Point3 d = b - a;
  const double dd = dot(d, d);
  const double t = dd > 0.0 ? std::clamp(-dot(a, d) / dd, 0.0, 1.0) : 0.0;
  return norm3(a + t * d);
}

// Replace hops that cut through the middle of the ball by great-circle detours
// so the tube stays inside the shell (needed for the interior certificate).
std::vector<Point3> keep_off_center(const std::vector<Point3>& chain) {
  std::vector<Point3> out{chain.front()};
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const Point3 p = chain[i - 1];
    const Point3 q = chain[i];
    if (segment_origin_distance(p, q) < 1.0) {
      const double rp = norm3(p), rq = norm3(q);
      const Point3 up = (1.0 / rp) * p;
      const Point3 uq = (1.0 / rq) * q;
      const double c = std::clamp(dot(up, uq), -1.0, 1.0);
      const double phi = std::acos(c);
      Point3 e2 = uq - c * up;
      double l2 = norm3(e2);
      if (l2 < 1e-12) {  // antipodal hop: deterministic perpendicular
        const Point3 axis = std::abs(up.x) <= std::abs(up.y) && std::abs(up.x) <= std::abs(up.z)
                                ? Point3{1.0, 0.0, 0.0}
                                : (std::abs(up.y) <= std::abs(up.z) ? Point3{0.0, 1.0, 0.0}
                                                                    : Point3{0.0, 0.0, 1.0});
        e2 = cross(up, axis);
        l2 = norm3(e2);
      }
      e2 = (1.0 / l2) * e2;
      const int m = int(std::ceil(phi / 0.5));
      for (int k = 1; k < m; ++k) {
        const double t = double(k) / m;
        const Point3 dir = std::cos(t * phi) * up + std::sin(t * phi) * e2;
        out.push_back(((1.0 - t) * rp + t * rq) * dir);
      }
    }
    out.push_back(q);
  }
  return out;
}

DomainSpec tube_domain(const std::vector<Point3>& polyline, double rho) {
  TubeDomain3 t;
  t.ambient = Ball3{{0.0, 0.0, 0.0}, 2.0};
  t.polyline = polyline;
  t.tube_radius = rho;
  return t;
}

ReproductionResult run_ex_tube3d(const ReproductionSpec& spec) {
  ReproductionResult res;
  res.name = spec.name;
  const std::vector<long> ns = n_or_default(spec, {1, 2, 4});
  const long walks = spec.walks > 0 ? spec.walks : 100000;
  const Point3 x_head{0.5, 0.0, 0.0};
  const Point3 pole{0.0, 0.0, 0.0};
  const Point3 x_out{0.0, 0.0, 2.5};
  const double target = 1.35;  // full ball gives 1.5; unit ball would give 1.0

  GreenField3 limit_field = make_green_field3(Ball3{{0.0, 0.0, 0.0}, 1.0}, pole);
  const auto candidates = shell_candidates();

  std::vector<std::vector<Point3>> all_polylines;
  std::vector<double> all_radii;
  std::string radii_note;
  std::string search_lines;

  for (long n : ns) {
    const auto net = fps_net(candidates, 2.0 / double(n));
    const auto polyline = keep_off_center(nn_chain(net));

    WosParams full;
    full.walks = walks;
    full.seed = spec.seed;
    full.threads = spec.threads;

    auto runner = [&polyline, &x_head, &pole](double rho, const WosParams& base) {
      WosParams p = base;
      p.eps_shell = std::min(1e-4 * 4.0, rho / 4.0);
      return estimate_green_3d(tube_domain(polyline, rho), x_head, pole, p);
    };
    ShrinkSearch found = shrink_to_target(0.04, target, full, runner, "ex-tube3d tube");

    all_polylines.push_back(polyline);
    all_radii.push_back(found.radius);

    ConvergenceRow row;
    row.n = n;
    row.components = 2;  // ambient sphere plus tube surface
    row.err = found.confirm.std_error;
    const double diff_head = limit_field(x_head) - found.confirm.estimate;
    const double diff_out = limit_field(x_out) - 0.0;  // both vanish outside
    row.sup_two_sided = std::max(std::abs(diff_head), std::abs(diff_out));
    row.one_sided_M_n = std::max(diff_head, diff_out);
    row.compact_sup = std::abs(diff_head);  // |x_head| <= 0.7
    res.report.rows.push_back(row);

    const std::string tag = "_n" + std::to_string(n);
    add_metric(res, "radius" + tag, found.radius);
    add_metric(res, "estimate" + tag, found.confirm.estimate);
    add_metric(res, "std_error" + tag, found.confirm.std_error);
    radii_note += (radii_note.empty() ? "" : ", ") + ("n=" + std::to_string(n)) + ": " +
                  std::to_string(polyline.size()) + " vertices, tube radius " +
                  format_double(found.radius);
    search_lines += "  n=" + std::to_string(n) + ": net " + std::to_string(net.size()) +
                    " points (cover " + format_double(2.0 / double(n)) + "), tube radius " +
                    format_double(found.radius) + " after " + std::to_string(found.halvings) +
                    " halvings; g(x0) = " + format_double(found.confirm.estimate) + " +- " +
                    format_double(found.confirm.std_error) + "\n";
  }

  res.report.name = res.name;
  res.report.grid_note = "witness points (0.5,0,0) and (0,0,2.5); " + radii_note;

  DomainSequence seq;
  seq.n_values = ns;
  seq.three_d = true;
  seq.limit = Ball3{{0.0, 0.0, 0.0}, 1.0};
  seq.pole3 = pole;
  seq.domain_for = [ns, all_polylines, all_radii](long k) -> DomainSpec {
    for (std::size_t i = 0; i < ns.size(); ++i)
      if (ns[i] == k) return tube_domain(all_polylines[i], all_radii[i]);
    throw std::invalid_argument("ex-tube3d: no domain stored for the requested index");
  };
  KernelCheckResult kc = kernel_check(seq, 0.7);

  double est_last = 0.0;
  for (const auto& [key, value] : res.metrics)
    if (key == "estimate_n" + std::to_string(ns.back())) est_last = value;
  const bool floor_ok = one_sided_floor_ok(res.report);
  res.pass = kc.pass && floor_ok && est_last >= 1.3;

  add_kernel_metrics(res, kc);

  res.summary =
      "a thin tube threading the shell 1 < |x| < 2 of the ball B(0,2): domains kernel-converge "
      "to the unit ball while g((0.5,0,0), 0) stays near the full-ball value 1.5\n" +
      search_lines + kernel_line(kc) + rows_block(res.report) + "  final estimate " +
      format_double(est_last) + " vs unit-ball value 1 and full-ball value 1.5\n" +
      verdict_line(res.pass);
  emit_standard(spec, res);
  return res;
}

// ---------------------------------------------------------------------------
// lemma-slit: decay rate of g at a boundary point approached by a slit
// ---------------------------------------------------------------------------

ReproductionResult run_lemma_slit(const ReproductionSpec& spec) {
  ReproductionResult res;
  res.name = spec.name;
  const std::vector<long> exponents = n_or_default(spec, {1, 2, 3, 4, 5, 6, 7});
  std::vector<double> deltas;
  for (long k : exponents) deltas.push_back(std::pow(2.0, -double(k)));

  WosParams params;
  params.walks = spec.walks > 0 ? spec.walks : 1000000;
  params.seed = spec.seed;
  params.threads = spec.threads;

  const Point2 w{-3.0, 0.0};
  SlitDecayResult fit = slit_decay_experiment(deltas, w, params);

  const long used = long(fit.rows.size()) - fit.excluded;
  res.pass = used >= 2 && fit.alpha >= 0.35 && fit.alpha <= 0.65;

  add_metric(res, "alpha", fit.alpha);
  add_metric(res, "log_c", fit.log_c);
  add_metric(res, "excluded", double(fit.excluded));

  res.report.name = res.name;
  res.report.grid_note =
      "ambient disk D(0,4) minus the slit [delta, 1]; g(0, -3) as the slit tip approaches 0";

  std::string csv = "delta,estimate,std_error,used\n";
  std::string lines;
  for (const auto& r : fit.rows) {
    csv += format_double(r.delta) + "," + format_double(r.estimate) + "," +
           format_double(r.std_error) + "," + (r.used ? "1" : "0") + "\n";
    lines += "  delta=" + format_double(r.delta) + ": g = " + format_double(r.estimate) + " +- " +
             format_double(r.std_error) + (r.used ? "" : " (excluded)") + "\n";
  }

  ordered_json j;
  j["name"] = res.name;
  j["pass"] = res.pass;
  j["grid"] = res.report.grid_note;
  j["metrics"] = metrics_json(res);
  j["rows"] = ordered_json::array();
  for (const auto& r : fit.rows) {
    ordered_json row;
    row["delta"] = r.delta;
    row["estimate"] = r.estimate;
    row["std_error"] = r.std_error;
    row["used"] = r.used;
    j["rows"].push_back(std::move(row));
  }

  res.summary = "vanishing rate of g(0) for D(0,4) minus the slit [delta, 1], pole -3\n" + lines +
                "  fitted log g = " + format_double(fit.log_c) + " + " + format_double(fit.alpha) +
                " log delta; exponent window [0.35, 0.65]\n" + verdict_line(res.pass);
  write_file(spec.out_dir, res.name + ".csv", csv, res);
  write_file(spec.out_dir, res.name + ".json", j.dump(2) + "\n", res);
  return res;
}

// ---------------------------------------------------------------------------
// bound-koebe / bound-symm
// ---------------------------------------------------------------------------

TrigCurve wiggly_curve(std::uint64_t seed) {
  WalkRng rng = WalkRng::for_walk(seed, 0x77696c64u);
  for (int attempt = 0; attempt < 64; ++attempt) {
    TrigCurve c;
    c.center = {0.0, 0.0};
    c.cos_coef = {1.0};
    for (int k = 0; k < 4; ++k) c.cos_coef.push_back(rng.uniform(-0.1, 0.1));
    for (int k = 0; k < 4; ++k) c.sin_coef.push_back(rng.uniform(-0.1, 0.1));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < 1024; ++i) {
      const double r = c.radius_at(2.0 * kPi * i / 1024.0);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (lo >= 0.7 && hi <= 1.4) return c;
  }
  throw std::runtime_error("reproduction: could not draw a usable star curve");
}

struct BoundFamily {
  std::string label;
  DomainSpec domain;
  Point2 pole;
  FieldOptions opt{};
};

ReproductionResult run_bound_family_check(
    const ReproductionSpec& spec, const std::vector<BoundFamily>& families,
    const std::function<std::vector<BoundViolation>(const BoundFamily&, int, std::uint64_t)>& check,
    const std::string& headline) {
  ReproductionResult res;
  res.name = spec.name;
  const int samples =
      spec.walks > 0 ? int(std::min<long>(spec.walks, 1000000)) : 1000;

  std::string csv = "family,samples,violations\n";
  std::string lines;
  ordered_json fam_json = ordered_json::array();
  long total = 0;
  for (std::size_t i = 0; i < families.size(); ++i) {
    const auto& fam = families[i];
    const auto violations = check(fam, samples, spec.seed + i);
    total += long(violations.size());
    add_metric(res, "violations_" + std::to_string(i + 1), double(violations.size()));
    csv += fam.label + "," + std::to_string(samples) + "," + std::to_string(violations.size()) +
           "\n";
    lines += "  " + fam.label + ": " + std::to_string(violations.size()) + " violations in " +
             std::to_string(samples) + " samples\n";
    ordered_json f;
    f["family"] = fam.label;
    f["samples"] = samples;
    f["violations"] = violations.size();
    if (!violations.empty()) {
      const auto& v = violations.front();
      f["first_violation"] = {{"z", {v.z.real(), v.z.imag()}},
                              {"value", v.value},
                              {"bound", v.bound},
                              {"dist", v.dist}};
    }
    fam_json.push_back(std::move(f));
  }
  res.pass = total == 0;
  add_metric(res, "total_violations", double(total));

  res.report.name = res.name;
  res.report.grid_note = headline;

  ordered_json j;
  j["name"] = res.name;
  j["pass"] = res.pass;
  j["grid"] = headline;
  j["metrics"] = metrics_json(res);
  j["families"] = std::move(fam_json);

  res.summary = headline + "\n" + lines + verdict_line(res.pass);
  write_file(spec.out_dir, res.name + ".csv", csv, res);
  write_file(spec.out_dir, res.name + ".json", j.dump(2) + "\n", res);
  return res;
}

ReproductionResult run_bound_koebe(const ReproductionSpec& spec) {
  std::vector<BoundFamily> families = {
      {"unit disk", Disk{{0.0, 0.0}, 1.0}, {0.2, 0.1}},
      {"star curve", CircleDomain{wiggly_curve(spec.seed), {}}, {0.1, -0.05}, star_mfs_options()},
      {"large disk", Disk{{0.0, 0.0}, 100.0}, {25.0, 10.0}},
  };
  return run_bound_family_check(
      spec, families,
      [](const BoundFamily& fam, int samples, std::uint64_t seed) {
        return koebe_bound_check(fam.domain, fam.pole, samples, seed, fam.opt);
      },
      "near-boundary growth bound g <= sqrt(128 dist) on simply connected domains");
}

ReproductionResult run_bound_symm(const ReproductionSpec& spec) {
  std::vector<BoundFamily> families = {
      {"unit disk", Disk{{0.0, 0.0}, 1.0}, {0.3, 0.0}},
      {"annulus", Annulus{{0.0, 0.0}, 0.25, 1.0}, {0.7, 0.0}},
      {"star curve", CircleDomain{wiggly_curve(spec.seed), {}}, {0.15, 0.0}, star_mfs_options()},
  };
  return run_bound_family_check(
      spec, families,
      [](const BoundFamily& fam, int samples, std::uint64_t seed) {
        return symmetrization_check(fam.domain, fam.pole, samples, seed, fam.opt);
      },
      "symmetrization majorant g(z,w) <= h_d(|z-w|), d = dist(w, boundary)");
}

}  // namespace

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

const std::vector<std::string>& reproduction_names() {
  static const std::vector<std::string> names = {
      "thm-simply", "thm-multiply", "lemma-oneside", "ex-annulus", "ex-net",
      "ex-tube3d",  "lemma-slit",   "bound-koebe",   "bound-symm"};
  return names;
}

ReproductionResult run_reproduction(const ReproductionSpec& spec) {
  if (spec.walks < 0) throw std::invalid_argument("reproduction: walks must be >= 0");
  if (spec.threads < 0) throw std::invalid_argument("reproduction: threads must be >= 0");
  const std::string& name = spec.name;
  if (name == "thm-simply") return run_thm_simply(spec);
  if (name == "thm-multiply") return run_thm_multiply(spec);
  if (name == "lemma-oneside") return run_lemma_oneside(spec);
  if (name == "ex-annulus") return run_ex_annulus(spec);
  if (name == "ex-net") return run_ex_net(spec);
  if (name == "ex-tube3d") return run_ex_tube3d(spec);
  if (name == "lemma-slit") return run_lemma_slit(spec);
  if (name == "bound-koebe") return run_bound_koebe(spec);
  if (name == "bound-symm") return run_bound_symm(spec);
  std::string msg = "unknown reproduction '" + name + "'; available:";
  for (const auto& s : reproduction_names()) msg += " " + s;
  throw std::invalid_argument(msg);
}

}  // namespace greenfn
