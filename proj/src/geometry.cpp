#include "colprob/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace colprob {

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod can land exactly on 2*pi after the correction when a is a tiny
  // negative number; fold that back to zero.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double wrap_signed(double a) {
  double r = wrap_angle(a);
  return r > kPi ? r - kTwoPi : r;
}

RectangleFootprint::RectangleFootprint(double l, double w) : length(l), width(w) {
  if (!(w > 0.0) || !(l >= w)) {
    throw std::invalid_argument("footprint requires length >= width > 0");
  }
}

AngleInterval AngleInterval::empty() { return AngleInterval{}; }

AngleInterval AngleInterval::full() {
  AngleInterval iv;
  iv.width_ = kTwoPi;
  iv.full_ = true;
  return iv;
}

AngleInterval AngleInterval::from_bounds(double lo, double hi) {
  return from_lower_width(lo, hi - lo);
}

AngleInterval AngleInterval::from_lower_width(double lo, double width) {
  if (!(width >= 0.0) || width > kTwoPi) {
    throw std::invalid_argument("interval bounds must satisfy 0 <= hi - lo <= 2*pi");
  }
  if (width >= kTwoPi) return full();
  AngleInterval iv;
  iv.lo_ = wrap_angle(lo);
  iv.width_ = width;
  return iv;
}

bool AngleInterval::contains(double theta) const {
  if (full_) return true;
  if (is_empty()) return false;
  return wrap_angle(theta - lo_) <= width_;
}

CircleCover cover_rectangle(const RectangleFootprint& fp, int n) {
  if (n < 1) throw std::invalid_argument("cover needs at least one circle");
  CircleCover cover;
  cover.n_circles = n;
  const double half_w = fp.width / 2.0;
  const double seg = fp.length / (2.0 * n); // half of one lengthwise slice
  cover.radius = std::sqrt(seg * seg + half_w * half_w);
  // Neighbor spacing that makes adjacent circles meet exactly on the long
  // edges; algebraically equal to length / n.
  cover.spacing = 2.0 * std::sqrt(cover.radius * cover.radius - half_w * half_w);
  cover.offsets.resize(n);
  for (int i = 1; i <= n; ++i) {
    cover.offsets[i - 1] = (i - (n + 1) / 2.0) * cover.spacing;
  }
  return cover;
}

double max_collision_distance(const CircleCover& ego, const CircleCover& object) {
  const double joint = ego.radius + object.radius;
  return joint + (object.spacing / 2.0) * (object.n_circles - 1) +
         (ego.spacing / 2.0) * (ego.n_circles - 1);
}

PolarConfiguration to_polar(const Configuration& c) {
  PolarConfiguration p;
  p.rho = std::hypot(c.x, c.y);
  p.phi = (p.rho == 0.0) ? 0.0 : wrap_angle(std::atan2(c.y, c.x));
  p.theta = c.theta;
  return p;
}

Configuration from_polar(const PolarConfiguration& p) {
  Configuration c;
  c.x = p.rho * std::cos(p.phi);
  c.y = p.rho * std::sin(p.phi);
  c.theta = p.theta;
  return c;
}

ShiftedPolar shift_polar(double x_o, double y_o, double l_e) {
  ShiftedPolar s;
  const double dx = x_o - l_e;
  s.rho = std::hypot(dx, y_o);
  s.phi = (s.rho == 0.0) ? 0.0 : wrap_angle(std::atan2(y_o, dx));
  return s;
}

AngleInterval heading_bounds(double phi_prime, double rho_prime, double l_o,
                             double joint_radius) {
  const double r = joint_radius;
  if (l_o == 0.0) {
    // Circle sits on the object center: heading plays no role.
    return rho_prime <= r ? AngleInterval::full() : AngleInterval::empty();
  }
  if (l_o > r && rho_prime < l_o - r) return AngleInterval::empty();
  if (l_o <= r && rho_prime <= r - l_o) return AngleInterval::full();
  if (rho_prime > r + l_o) return AngleInterval::empty();
  // Law of cosines in the triangle (ego circle, object center, object circle).
  double c = (l_o * l_o + rho_prime * rho_prime - r * r) / (2.0 * l_o * rho_prime);
  c = std::clamp(c, -1.0, 1.0);
  const double half = std::acos(c);
  const double center = phi_prime + kPi;
  return AngleInterval::from_bounds(center - half, center + half);
}

} // namespace colprob
