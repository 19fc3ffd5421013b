#include "greenfn/mfs.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>

namespace greenfn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kResidualLimit = 1e-4;

struct ComponentCurve {
  BoundaryCurve curve;
  bool is_outer;
};

Point2 scaled_curve_point(const ComponentCurve& c, double scale, double theta) {
  if (const auto* circ = std::get_if<Circle>(&c.curve))
    return circ->center + scale * circ->radius * std::polar(1.0, theta);
  const auto& t = std::get<TrigCurve>(c.curve);
  return t.center + scale * t.radius_at(theta) * std::polar(1.0, theta);
}

Point2 curve_point_at(const ComponentCurve& c, double theta) {
  return scaled_curve_point(c, 1.0, theta);
}

std::vector<ComponentCurve> boundary_components(const DomainSpec& d) {
  if (const auto* disk = std::get_if<Disk>(&d))
    return {{Circle{disk->center, disk->radius}, true}};
  if (const auto* ann = std::get_if<Annulus>(&d))
    return {{Circle{ann->center, ann->r_outer}, true}, {Circle{ann->center, ann->r_inner}, false}};
  if (const auto* cd = std::get_if<CircleDomain>(&d)) {
    std::vector<ComponentCurve> out{{cd->outer, true}};
    for (const auto& h : cd->holes) out.push_back({h, false});
    return out;
  }
  throw std::invalid_argument(
      "solve_green: supported domains are Disk, Annulus and CircleDomain; "
      "use wos for slit or 3-D domains");
}

}  // namespace

GreenSolution solve_green(const DomainSpec& d, Point2 w, const MfsParams& params) {
  validate(d);
  const auto comps = boundary_components(d);
  if (!contains(d, w)) throw std::invalid_argument("solve_green: pole must be interior");
  if (params.charges_per_component < 2 || params.collocation_factor < 1)
    throw std::invalid_argument("solve_green: degenerate discretization parameters");

  const int m = params.charges_per_component;
  const int nc = int(comps.size());
  const int n_charge = m * nc;
  const int n_colloc = m * params.collocation_factor * nc;

  // Charges live on scaled copies of each component: holes shrink toward
  // their centers, the outer curve dilates outward.
  std::vector<Point2> charges;
  charges.reserve(std::size_t(n_charge));
  for (const auto& c : comps) {
    const double scale = c.is_outer ? params.outer_dilate : params.hole_shrink;
    for (int j = 0; j < m; ++j)
      charges.push_back(scaled_curve_point(c, scale, 2.0 * kPi * j / m));
  }

  const int per_comp_colloc = m * params.collocation_factor;
  std::vector<Point2> colloc;
  colloc.reserve(std::size_t(n_colloc));
  for (const auto& c : comps)
    for (int j = 0; j < per_comp_colloc; ++j)
      colloc.push_back(curve_point_at(c, 2.0 * kPi * j / per_comp_colloc));

  // Boundary condition: corrector h matches log|.-w| on the boundary.
  Eigen::MatrixXd A(n_colloc, n_charge + 1);
  Eigen::VectorXd b(n_colloc);
  for (int i = 0; i < n_colloc; ++i) {
    A(i, 0) = 1.0;
    for (int j = 0; j < n_charge; ++j)
      A(i, j + 1) = std::log(std::abs(colloc[std::size_t(i)] - charges[std::size_t(j)]));
    b(i) = std::log(std::abs(colloc[std::size_t(i)] - w));
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(params.sv_cutoff);
  const Eigen::VectorXd x = svd.solve(b);

  GreenSolution sol;
  sol.domain_ = d;
  sol.pole_ = w;
  sol.charges_ = std::move(charges);
  sol.constant_ = x(0);
  sol.coef_.assign(std::size_t(n_charge), 0.0);
  for (int j = 0; j < n_charge; ++j) sol.coef_[std::size_t(j)] = x(j + 1);

  // Certify the fit on a staggered check grid 4x denser than collocation.
  sol.residual_.per_component.assign(comps.size(), 0.0);
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const int mc = per_comp_colloc * 4;
    double worst = 0.0;
    for (int j = 0; j < mc; ++j) {
      const Point2 zeta = curve_point_at(comps[ci], 2.0 * kPi * (j + 0.5) / mc);
      worst = std::max(worst, std::abs(sol.raw(zeta)));
    }
    sol.residual_.per_component[ci] = worst;
    sol.residual_.max_abs = std::max(sol.residual_.max_abs, worst);
  }

  if (sol.residual_.max_abs > kResidualLimit)
    throw std::runtime_error(
        "solve_green: certified boundary residual " + std::to_string(sol.residual_.max_abs) +
        " exceeds 1e-4; geometry too ill-conditioned for the charge expansion, use wos");
  return sol;
}

double GreenSolution::raw(Point2 z) const {
  const double sep = std::abs(z - pole_);
  if (sep < 1e-14 * std::max(1.0, domain_diameter(domain_)))
    throw std::domain_error("GreenSolution: evaluation at the pole");
  double h = constant_;
  for (std::size_t j = 0; j < charges_.size(); ++j)
    h += coef_[j] * std::log(std::abs(z - charges_[j]));
  return -std::log(sep) + h;
}

double GreenSolution::evaluate(Point2 z) const {
  if (!contains(domain_, z)) return 0.0;
  return std::max(0.0, raw(z));
}

}  // namespace greenfn
