// green — Green's functions of planar and 3-D domains from the command line.
//
//   green eval      --domain d.json --z 0.5,0 --pole 0,0 [--method auto]
//   green converge  --sequence seq.json [--grid 0.0375] [--kernel 0.01]
//   green reproduce <name> [--n 2,4,8] [--walks N] [--seed S] [--out DIR]
//
// Exit codes: 0 success (for `reproduce`, success means the experiment's
// acceptance predicate holds), 1 a reproduction ran but its predicate failed,
// 2 any other error (bad arguments, infeasible method, unreadable files).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "greenfn/convergence.hpp"
#include "greenfn/domain_json.hpp"
#include "greenfn/geometry.hpp"
#include "greenfn/mfs.hpp"
#include "greenfn/reproductions.hpp"
#include "greenfn/wos.hpp"

namespace {

using namespace greenfn;
using nlohmann::ordered_json;

Method parse_method(const std::string& s) {
  if (s == "auto" || s == "automatic") return Method::automatic;
  if (s == "closed" || s == "closed_form") return Method::closed_form;
  if (s == "mfs") return Method::mfs;
  if (s == "wos") return Method::wos;
  throw std::runtime_error("unknown method '" + s + "' (expected auto, closed, mfs, or wos)");
}

// The automatic rule of make_green_field / make_green_field3, mirrored here so
// eval knows when the resolved method is wos (which reports per-point errors).
Method resolve_auto(const DomainSpec& d) {
  if (std::holds_alternative<Disk>(d) || std::holds_alternative<Annulus>(d) ||
      std::holds_alternative<Ball3>(d))
    return Method::closed_form;
  if (std::holds_alternative<CircleDomain>(d)) return Method::mfs;
  return Method::wos;
}

struct CommonOpts {
  std::string method = "auto";
  long walks = 100000;
  double eps_shell = 0.0;
  int charges = 64;
  std::uint64_t seed = 1;
  int threads = 0;

  FieldOptions field_options() const {
    FieldOptions opt;
    opt.method = parse_method(method);
    opt.mfs.charges_per_component = charges;
    opt.wos.walks = walks;
    opt.wos.eps_shell = eps_shell;
    opt.wos.seed = seed;
    opt.wos.threads = threads;
    return opt;
  }
};

void add_common_options(CLI::App* cmd, CommonOpts& c, bool with_method) {
  if (with_method)
    cmd->add_option("--method", c.method, "auto, closed, mfs, or wos")->capture_default_str();
  cmd->add_option("--walks", c.walks, "Monte Carlo walks per point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--eps-shell", c.eps_shell,
                  "absorbing shell width for wos (0 = 1e-4 x domain diameter)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--charges", c.charges, "mfs charges per boundary component")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads (0 = hardware default)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string domain_file;
  std::vector<double> z;
  std::vector<double> pole;
  CommonOpts common;
  bool json = false;
};

void print_eval(double value, const std::string& method, double error_bound, bool as_json) {
  if (as_json) {
    ordered_json out;
    out["value"] = value;
    out["method"] = method;
    out["error_bound"] = error_bound;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "value " << format_double(value) << "\n"
              << "method " << method << "\n"
              << "error_bound " << format_double(error_bound) << "\n";
  }
}

int run_eval(const EvalArgs& a) {
  DomainSpec d = load_domain_file(a.domain_file);
  const bool planar = is_planar(d);
  const std::size_t want = planar ? 2u : 3u;
  if (a.z.size() != want || a.pole.size() != want)
    throw std::runtime_error("--z and --pole need " + std::to_string(want) +
                             " coordinates for this domain");

  FieldOptions opt = a.common.field_options();
  Method m = opt.method == Method::automatic ? resolve_auto(d) : opt.method;

  if (planar) {
    Point2 z{a.z[0], a.z[1]};
    Point2 w{a.pole[0], a.pole[1]};
    // Green's functions are zero-extended: if either argument lies outside
    // the (open) domain the value is 0 and nothing needs to be solved.
    if (!contains(d, z) || !contains(d, w)) {
      print_eval(0.0, "zero_extension", 0.0, a.json);
      return 0;
    }
    if (m == Method::wos) {
      WosResult r = estimate_green_2d(d, z, w, opt.wos);
      if (r.truncation_warning)
        std::cerr << "warning: " << r.truncated << " of " << opt.wos.walks
                  << " walks exceeded the step limit and were dropped\n";
      print_eval(r.estimate, "wos", r.std_error, a.json);
      return 0;
    }
    opt.method = m;
    GreenField f = make_green_field(d, w, opt);
    print_eval(f(z), f.method, f.err, a.json);
    return 0;
  }

  Point3 x{a.z[0], a.z[1], a.z[2]};
  Point3 w{a.pole[0], a.pole[1], a.pole[2]};
  if (!contains(d, x) || !contains(d, w)) {
    print_eval(0.0, "zero_extension", 0.0, a.json);
    return 0;
  }
  if (m == Method::wos) {
    WosResult r = estimate_green_3d(d, x, w, opt.wos);
    if (r.truncation_warning)
      std::cerr << "warning: " << r.truncated << " of " << opt.wos.walks
                << " walks exceeded the step limit and were dropped\n";
    print_eval(r.estimate, "wos", r.std_error, a.json);
    return 0;
  }
  opt.method = m;
  GreenField3 f = make_green_field3(d, w, opt);
  print_eval(f(x), f.method, f.err, a.json);
  return 0;
}

// ---------------------------------------------------------------------------
// converge
// ---------------------------------------------------------------------------

struct ConvergeArgs {
  std::string sequence_file;
  double grid = 0.0375;
  double kernel = 0.0;  // 0 = skip the kernel-convergence certificate
  std::string name;
  std::string out_dir;
  CommonOpts common;
  bool json = false;
};

GridSpec grid_for(const DomainSpec& limit, double spacing) {
  auto samples = boundary_sample(limit, 512);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& b : samples) {
    xmin = std::min(xmin, b.p.real());
    xmax = std::max(xmax, b.p.real());
    ymin = std::min(ymin, b.p.imag());
    ymax = std::max(ymax, b.p.imag());
  }
  const double padx = 0.25 * (xmax - xmin), pady = 0.25 * (ymax - ymin);
  GridSpec g;
  g.xmin = xmin - padx;
  g.xmax = xmax + padx;
  g.ymin = ymin - pady;
  g.ymax = ymax + pady;
  auto count = [spacing](double lo, double hi) {
    long n = std::lround((hi - lo) / spacing) + 1;
    return static_cast<int>(std::clamp<long>(n, 11, 513));
  };
  g.nx = count(g.xmin, g.xmax);
  g.ny = count(g.ymin, g.ymax);
  return g;
}

std::string kernel_text(const KernelCheckResult& k) {
  std::string s = "kernel_check resolution " + format_double(k.resolution) + ": " +
                  (k.pass ? "pass" : "FAIL") + " (" + std::to_string(k.interior_points) +
                  " interior points, " + std::to_string(k.boundary_points) +
                  " boundary points)\n";
  for (const auto& r : k.rows)
    s += "  n " + std::to_string(r.n) + ": interior_failures " +
         std::to_string(r.interior_failures) + ", max_boundary_dist " +
         format_double(r.max_boundary_dist) + "\n";
  return s;
}

ordered_json kernel_json(const KernelCheckResult& k) {
  ordered_json out;
  out["resolution"] = k.resolution;
  out["interior_points"] = k.interior_points;
  out["boundary_points"] = k.boundary_points;
  out["interior_pass"] = k.interior_pass;
  out["boundary_pass"] = k.boundary_pass;
  out["pass"] = k.pass;
  ordered_json rows = ordered_json::array();
  for (const auto& r : k.rows) {
    ordered_json row;
    row["n"] = r.n;
    row["interior_failures"] = r.interior_failures;
    row["max_boundary_dist"] = r.max_boundary_dist;
    rows.push_back(row);
  }
  out["rows"] = rows;
  return out;
}

int run_converge(const ConvergeArgs& a) {
  DomainSequence seq = load_sequence_file(a.sequence_file);
  std::string name = a.name;
  if (name.empty()) name = std::filesystem::path(a.sequence_file).stem().string();

  if (seq.three_d) {
    if (a.kernel <= 0.0)
      throw std::runtime_error(
          "grid convergence reports are planar-only; for a 3-D sequence pass "
          "--kernel <resolution> to run the kernel-convergence certificate");
    KernelCheckResult k = kernel_check(seq, a.kernel);
    if (a.json)
      std::cout << kernel_json(k).dump(2) << "\n";
    else
      std::cout << kernel_text(k);
    return 0;
  }

  FieldOptions opt = a.common.field_options();
  GreenField limit_field = make_green_field(seq.limit, seq.pole, opt);
  auto field_for = [&opt, &seq](long, const DomainSpec& d) {
    return make_green_field(d, seq.pole, opt);
  };
  GridSpec grid = grid_for(seq.limit, a.grid);
  ConvergenceReport report = convergence_report(name, seq, limit_field, field_for, grid);

  bool kernel_ran = a.kernel > 0.0;
  KernelCheckResult k;
  if (kernel_ran) k = kernel_check(seq, a.kernel);

  if (!a.out_dir.empty()) {
    std::filesystem::create_directories(a.out_dir);
    auto base = std::filesystem::path(a.out_dir) / name;
    {
      std::ofstream f(base.string() + ".csv", std::ios::binary);
      f << report.to_csv();
      if (!f) throw std::runtime_error("failed to write " + base.string() + ".csv");
    }
    {
      std::ofstream f(base.string() + ".json", std::ios::binary);
      f << report.to_json() << "\n";
      if (!f) throw std::runtime_error("failed to write " + base.string() + ".json");
    }
    std::cerr << "wrote " << base.string() << ".csv and " << base.string() << ".json\n";
  }

  if (a.json) {
    ordered_json out = ordered_json::parse(report.to_json());
    if (kernel_ran) out["kernel_check"] = kernel_json(k);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << report.to_csv();
    if (kernel_ran) std::cout << kernel_text(k);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

struct ReproduceArgs {
  std::string name;
  std::vector<long> n_values;
  long walks = 0;  // 0 = experiment default
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = ".";
  bool list = false;
  bool json = false;
};

int run_reproduce(const ReproduceArgs& a) {
  if (a.list) {
    for (const auto& n : reproduction_names()) std::cout << n << "\n";
    return 0;
  }
  if (a.name.empty())
    throw std::runtime_error("missing experiment name (try `green reproduce --list`)");

  ReproductionSpec spec;
  spec.name = a.name;
  spec.n_values = a.n_values;
  spec.seed = a.seed;
  spec.walks = a.walks;
  spec.threads = a.threads;
  spec.out_dir = a.out_dir;

  ReproductionResult res = run_reproduction(spec);

  if (a.json) {
    ordered_json out;
    out["name"] = res.name;
    out["pass"] = res.pass;
    ordered_json metrics = ordered_json::object();
    for (const auto& [key, value] : res.metrics) metrics[key] = value;
    out["metrics"] = metrics;
    out["summary"] = res.summary;
    ordered_json written = ordered_json::array();
    for (const auto& path : res.written) written.push_back(path);
    out["written"] = written;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << res.summary;
    for (const auto& path : res.written) std::cout << "wrote " << path << "\n";
  }
  return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green's functions of planar and 3-D domains"};
  app.require_subcommand(1);

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate g(z, pole) for a domain JSON file");
  eval_cmd->add_option("--domain", ev.domain_file, "domain JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--z", ev.z, "evaluation point x,y (or x,y,z)")
      ->required()
      ->delimiter(',')
      ->expected(2, 3);
  eval_cmd->add_option("--pole", ev.pole, "pole x,y (or x,y,z)")
      ->required()
      ->delimiter(',')
      ->expected(2, 3);
  add_common_options(eval_cmd, ev.common, true);
  eval_cmd->add_flag("--json", ev.json, "print the result as JSON");

  ConvergeArgs cv;
  CLI::App* conv_cmd =
      app.add_subcommand("converge", "sup-norm convergence report over a domain sequence");
  conv_cmd->add_option("--sequence", cv.sequence_file, "sequence JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  conv_cmd->add_option("--grid", cv.grid, "uniform grid spacing")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  conv_cmd->add_option("--kernel", cv.kernel,
                       "also run the kernel-convergence certificate at this resolution");
  conv_cmd->add_option("--name", cv.name, "report name (default: sequence file stem)");
  conv_cmd->add_option("--out", cv.out_dir, "directory for <name>.csv and <name>.json");
  add_common_options(conv_cmd, cv.common, true);
  conv_cmd->add_flag("--json", cv.json, "print the report as JSON");

  ReproduceArgs rp;
  CLI::App* rep_cmd = app.add_subcommand("reproduce", "run a named experiment");
  rep_cmd->add_option("name", rp.name, "experiment name (see --list)");
  rep_cmd->add_flag("--list", rp.list, "list the available experiment names");
  rep_cmd->add_option("--n", rp.n_values, "sequence indices (default: experiment preset)")
      ->delimiter(',');
  rep_cmd->add_option("--walks", rp.walks, "Monte Carlo walks (0 = experiment preset)")
      ->check(CLI::NonNegativeNumber);
  rep_cmd->add_option("--seed", rp.seed, "random seed")->capture_default_str();
  rep_cmd->add_option("--threads", rp.threads, "worker threads (0 = hardware default)")
      ->check(CLI::NonNegativeNumber);
  rep_cmd->add_option("--out", rp.out_dir, "output directory for CSV/JSON reports")
      ->capture_default_str();
  rep_cmd->add_flag("--json", rp.json, "print the result as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*eval_cmd) return run_eval(ev);
    if (*conv_cmd) return run_converge(cv);
    return run_reproduce(rp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
