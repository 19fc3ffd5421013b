#pragma once

#include <vector>

#include "greenfn/geometry.hpp"

namespace greenfn {

struct MfsParams {
  int charges_per_component = 64;
  int collocation_factor = 4;   // collocation points per charge
  double hole_shrink = 0.6;     // charge curve scale for holes (toward center)
  double outer_dilate = 1.6;    // charge curve scale outside the outer curve
  double sv_cutoff = 1e-12;     // relative singular-value threshold
};

struct ResidualReport {
  double max_abs = 0.0;                   // sup |g| over the dense check grid
  std::vector<double> per_component{};    // same, per boundary component
};

/// Charge-expansion solution g(z) = -log|z-w| + c0 + sum_j c_j log|z - s_j|
/// fitted by least squares so g vanishes on the boundary.  The boundary
/// residual is certified on a check grid 4x denser than the collocation grid;
/// by the maximum principle it bounds the interior error.
class GreenSolution {
 public:
  double evaluate(Point2 z) const;  // clamped at 0 inside, 0 outside/boundary
  double raw(Point2 z) const;       // unclamped interior expansion value

  const ResidualReport& residual_report() const { return residual_; }
  double boundary_residual() const { return residual_.max_abs; }
  Point2 pole() const { return pole_; }
  const DomainSpec& domain() const { return domain_; }

 private:
  friend GreenSolution solve_green(const DomainSpec&, Point2, const MfsParams&);

  DomainSpec domain_{Disk{}};
  Point2 pole_{};
  std::vector<Point2> charges_{};
  std::vector<double> coef_{};   // one per charge
  double constant_ = 0.0;
  ResidualReport residual_{};
};

/// Solve the Dirichlet problem for the Green's function of a Disk, Annulus,
/// or CircleDomain with pole w.  Throws std::invalid_argument for other
/// variants or an exterior pole, and std::runtime_error when the certified
/// boundary residual exceeds 1e-4 (ill-conditioned geometry; use wos).
GreenSolution solve_green(const DomainSpec& d, Point2 w, const MfsParams& params = {});

}  // namespace greenfn
