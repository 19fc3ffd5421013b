#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "greenfn/closed_form.hpp"
#include "greenfn/geometry.hpp"
#include "greenfn/mfs.hpp"
#include "greenfn/wos.hpp"

namespace greenfn {

// ---------------------------------------------------------------------------
// Evaluators
// ---------------------------------------------------------------------------

/// A zero-extended pointwise Green's function evaluator with provenance.
/// Closed forms clamp at 0; the Monte Carlo method reports raw values.
struct GreenField {
  std::string method;     // "closed_form" | "mfs" | "wos"
  double err = 0.0;       // residual / truncation bound (0 = exact-to-rounding)
  std::function<double(Point2)> f;
  double operator()(Point2 z) const { return f(z); }
};

struct GreenField3 {
  std::string method;
  double err = 0.0;
  std::function<double(Point3)> f;
  double operator()(Point3 p) const { return f(p); }
};

enum class Method { automatic, closed_form, mfs, wos };

struct FieldOptions {
  Method method = Method::automatic;  // automatic: closed form > mfs > wos
  MfsParams mfs{};
  WosParams wos{};
};

/// Build the best available evaluator for a planar domain and pole.
GreenField make_green_field(const DomainSpec& d, Point2 pole, const FieldOptions& opt = {});

/// 3-D counterpart (closed ball form, otherwise walk-on-spheres).
GreenField3 make_green_field3(const DomainSpec& d, Point3 pole, const FieldOptions& opt = {});

// ---------------------------------------------------------------------------
// Evaluation grids and sup statistics
// ---------------------------------------------------------------------------

struct GridSpec {
  double xmin = -1.5, xmax = 1.5, ymin = -1.5, ymax = 1.5;
  int nx = 81, ny = 81;
  std::vector<double> boundary_offsets{1e-2, 1e-3};  // adaptive shell widths
  int boundary_samples = 256;                        // per boundary component
  double pole_exclusion = 1e-3;                      // radius dropped around the pole
};

/// Uniform rectangle cover plus boundary-adaptive points near both domains'
/// boundaries, minus a small disk around the pole.  Deterministic ordering.
std::vector<Point2> evaluation_grid(const GridSpec& g, const DomainSpec& limit,
                                    const DomainSpec& approx, Point2 pole);

struct SupResult {
  double sup = 0.0;
  Point2 argmax{};
};

/// max |a - b| over the points (both fields zero-extended by construction).
SupResult sup_discrepancy(const GreenField& a, const GreenField& b,
                          const std::vector<Point2>& points);

/// max (a - b) over the points (signed, no absolute value).
SupResult one_sided_sup(const GreenField& a, const GreenField& b,
                        const std::vector<Point2>& points);

// ---------------------------------------------------------------------------
// Domain sequences and kernel convergence
// ---------------------------------------------------------------------------

struct DomainSequence {
  std::vector<long> n_values;
  std::function<DomainSpec(long)> domain_for;
  DomainSpec limit{Disk{}};
  bool three_d = false;
  Point2 pole{0.0, 0.0};
  Point3 pole3{};
};

struct KernelRow {
  long n = 0;
  long interior_failures = 0;     // limit-interior grid points not inside domain n
  double max_boundary_dist = 0.0; // worst approach of the limit boundary
};

struct KernelCheckResult {
  double resolution = 0.0;
  long interior_points = 0;
  long boundary_points = 0;
  std::vector<KernelRow> rows;
  bool interior_pass = false;  // every interior point inside the largest-n domain
  bool boundary_pass = false;  // max boundary distance < resolution at largest n
  bool pass = false;
};

/// Finite-resolution kernel-convergence certificate: (a) interior points of
/// the limit (at distance >= resolution from its boundary) are eventually
/// inside the approximating domains; (b) every sampled limit-boundary point
/// is approached by the approximating boundaries to within resolution.
KernelCheckResult kernel_check(const DomainSequence& seq, double resolution);

// ---------------------------------------------------------------------------
// Bound checks
// ---------------------------------------------------------------------------

struct BoundViolation {
  Point2 z{};
  double value = 0.0;  // evaluator value at z
  double bound = 0.0;  // bound it should respect
  double dist = 0.0;   // auxiliary distance entering the bound
};

/// Near-boundary growth bound for simply connected domains: at sampled points
/// with dist(z, boundary) <= 1/128, requires g(z) <= sqrt(128 dist) + tol.
std::vector<BoundViolation> koebe_bound_check(const DomainSpec& d, Point2 w, int samples,
                                              std::uint64_t seed = 1,
                                              const FieldOptions& opt = {});

/// Symmetrization majorant: g(z,w) <= h(|z-w|) + tol where h is the
/// slit-ray Green's function with depth d = dist(w, boundary).
std::vector<BoundViolation> symmetrization_check(const DomainSpec& d, Point2 w, int samples,
                                                 std::uint64_t seed = 1,
                                                 const FieldOptions& opt = {});

/// Domain monotonicity: for d_inner contained in d_outer (same pole),
/// g_inner <= g_outer + tol at the given points.
std::vector<BoundViolation> monotonicity_check(const DomainSpec& d_inner,
                                               const DomainSpec& d_outer, Point2 w,
                                               const std::vector<Point2>& points,
                                               const FieldOptions& opt = {});

// ---------------------------------------------------------------------------
// Slit decay experiment
// ---------------------------------------------------------------------------

struct SlitDecayRow {
  double delta = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  bool used = true;  // excluded from the fit when the estimate is <= 0
};

struct SlitDecayResult {
  std::vector<SlitDecayRow> rows;
  double log_c = 0.0;  // least-squares fit log g = log_c + alpha log delta
  double alpha = 0.0;
  long excluded = 0;
};

/// Decay of g(0, w) for D(0,4) minus the slit [delta, 1] as delta -> 0;
/// fits the decay exponent over the positive estimates.
SlitDecayResult slit_decay_experiment(const std::vector<double>& deltas, Point2 w,
                                      const WosParams& params);

// ---------------------------------------------------------------------------
// Convergence reports
// ---------------------------------------------------------------------------

struct ConvergenceRow {
  long n = 0;
  double sup_two_sided = 0.0;
  double one_sided_M_n = 0.0;
  double compact_sup = 0.0;
  int components = 0;
  double err = 0.0;  // combined evaluator error bound / standard error
};

struct ConvergenceReport {
  std::string name;
  std::string grid_note;  // human-readable description of the evaluation set
  std::vector<ConvergenceRow> rows;

  /// Deterministic CSV with the fixed column set.
  std::string to_csv() const;

  /// Deterministic JSON document with the same rows plus grid metadata.
  std::string to_json() const;
};

/// Shortest-round-trip formatting used by every report writer (locale-free).
std::string format_double(double x);

/// Full grid-based report for sequences whose members admit deterministic
/// evaluators (closed form / mfs).  compact_filter selects the compact-subset
/// column's points (empty = points at distance >= 0.3 from the limit boundary).
ConvergenceReport convergence_report(const std::string& name, const DomainSequence& seq,
                                     const GreenField& limit_field,
                                     const std::function<GreenField(long, const DomainSpec&)>& field_for,
                                     const GridSpec& grid,
                                     const std::function<bool(Point2)>& compact_filter = {});

}  // namespace greenfn
