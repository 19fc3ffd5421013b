#include "greenfn/closed_form.hpp"

#include <cmath>

namespace greenfn {

namespace {

// Relative scale below which two points count as a coincident pole pair.
constexpr double kPoleEps = 1e-14;

void check_pole(double sep, double scale, const char* who) {
  if (sep <= kPoleEps * std::max(1.0, scale))
    throw std::domain_error(std::string(who) + ": evaluation point coincides with the pole");
}

// Truncated annulus prime factor P(zeta, q) = (1 - zeta) prod_{k=1..K}
// (1 - q^{2k} zeta)(1 - q^{2k}/zeta).  K is chosen so q^{2K} < 1e-16, which
// bounds the dropped factors by ~|zeta| * 1e-16.
std::complex<double> prime_factor(std::complex<double> zeta, double q, int K) {
  std::complex<double> out = 1.0 - zeta;
  double q2k = 1.0;
  const double q2 = q * q;
  for (int k = 1; k <= K; ++k) {
    q2k *= q2;
    out *= (1.0 - q2k * zeta) * (1.0 - q2k / zeta);
  }
  return out;
}

}  // namespace

double green_disk(Point2 center, double R, Point2 z, Point2 w) {
  if (!(R > 0.0)) throw std::invalid_argument("green_disk: radius must be positive");
  check_pole(std::abs(z - w), R, "green_disk");
  const Point2 zc = z - center, wc = w - center;
  if (std::abs(zc) >= R || std::abs(wc) >= R) return 0.0;
  const double val = std::log(std::abs((R * R - zc * std::conj(wc)) / (R * (z - w))));
  return std::max(0.0, val);
}

double green_halfplane(Point2 z, Point2 w) {
  check_pole(std::abs(z - w), 1.0 + std::abs(w), "green_halfplane");
  if (z.imag() <= 0.0 || w.imag() <= 0.0) return 0.0;
  return std::max(0.0, std::log(std::abs((z - std::conj(w)) / (z - w))));
}

double green_slit_ray(double d, Point2 z) {
  if (!(d > 0.0)) throw std::invalid_argument("green_slit_ray: d must be positive");
  check_pole(std::abs(z), d, "green_slit_ray");
  // On the ray (-inf, -d]: (z+d)/d is a non-positive real, s is purely
  // imaginary and |(s+1)/(s-1)| = 1, so the value vanishes there exactly.
  const std::complex<double> s = std::sqrt((z + d) / d);
  const double val = std::log(std::abs((s + 1.0) / (s - 1.0)));
  return std::max(0.0, val);
}

double green_annulus(double q, Point2 z, Point2 w) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("green_annulus: need 0 < q < 1");
  check_pole(std::abs(z - w), 1.0, "green_annulus");
  const double rz = std::abs(z), rw = std::abs(w);
  if (rz <= q || rz >= 1.0 || rw <= q || rw >= 1.0) return 0.0;

  const int K = std::max(1, int(std::ceil(-16.0 * std::log(10.0) / (2.0 * std::log(q)))));
  auto S = [&](Point2 zz) {
    return std::log(std::abs(prime_factor(zz * std::conj(w), q, K))) -
           std::log(std::abs(prime_factor(zz / w, q, K)));
  };
  // S is exactly constant on both boundary circles; one sample per circle
  // pins the correction coefficients.  Dodge the angles where a prime factor
  // vanishes on the evaluation ray (pole direction and its reflection).
  auto circle_value = [&](double r) {
    double theta = 0.0;
    for (int tries = 0; tries < 8; ++tries) {
      const Point2 pt = std::polar(r, theta);
      if (std::abs(pt - w) > 1e-6 && std::abs(pt * std::conj(w) - 1.0) > 1e-6) return S(pt);
      theta += 0.5;
    }
    return S(std::polar(r, 0.25));
  };
  const double s_out = circle_value(1.0);
  const double s_in = circle_value(q);
  const double alpha = s_out;
  const double beta = (s_in - alpha) / std::log(q);
  return std::max(0.0, S(z) - alpha - beta * std::log(rz));
}

double green_annulus_domain(const Annulus& a, Point2 z, Point2 w) {
  validate(DomainSpec{a});
  const double q = a.r_inner / a.r_outer;
  return green_annulus(q, (z - a.center) / a.r_outer, (w - a.center) / a.r_outer);
}

double green_ball3(Point3 center, double R, Point3 x, Point3 w) {
  if (!(R > 0.0)) throw std::invalid_argument("green_ball3: radius must be positive");
  check_pole(norm3(x - w), R, "green_ball3");
  const Point3 xc = x - center, wc = w - center;
  if (norm3(xc) >= R || norm3(wc) >= R) return 0.0;
  const double rw = norm3(wc);
  if (rw < kPoleEps * R)  // centered pole: radial closed form
    return std::max(0.0, 1.0 / norm3(xc) - 1.0 / R);
  const Point3 w_img = center + (R * R / (rw * rw)) * wc;  // Kelvin reflection
  const double val = 1.0 / norm3(x - w) - (R / rw) / norm3(x - w_img);
  return std::max(0.0, val);
}

SphereEvaluator transport_green(const MobiusMap& m, SphereEvaluator g) {
  const MobiusMap inv = m.inverse();
  return [inv, g = std::move(g)](const SpherePoint& z) { return g(inv(z)); };
}

}  // namespace greenfn
