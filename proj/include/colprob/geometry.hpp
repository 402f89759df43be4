#pragma once

#include <cstddef>
#include <vector>

namespace colprob {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Maps any angle into [0, 2*pi). Values already in range pass through unchanged.
double wrap_angle(double a);
// Maps any angle into (-pi, pi].
double wrap_signed(double a);

// Axis-aligned vehicle body, length along local x. Requires l >= w > 0.
struct RectangleFootprint {
  double length;
  double width;
  RectangleFootprint(double l, double w);
};

// Planar pose (position + heading).
struct Configuration {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

// Pose with the position expressed in polar form.
struct PolarConfiguration {
  double phi = 0.0;   // azimuth in [0, 2*pi)
  double rho = 0.0;   // radius >= 0
  double theta = 0.0; // heading, unchanged by the transform
};

// Closed heading interval on the circle. Stored as a lower endpoint in
// [0, 2*pi) plus a width in [0, 2*pi]; upper() may exceed 2*pi, in which
// case the interval wraps through zero. Zero-width intervals count as
// empty (they carry no probability mass).
class AngleInterval {
public:
  AngleInterval() = default;
  static AngleInterval empty();
  static AngleInterval full();
  // Bounds in radians with 0 <= hi - lo <= 2*pi; lo is renormalized into
  // [0, 2*pi), a width of 2*pi collapses to the full circle.
  static AngleInterval from_bounds(double lo, double hi);
  // Same, but the width is taken verbatim instead of recomputed from the
  // endpoints — keeps rotated/deserialized intervals bit-identical.
  static AngleInterval from_lower_width(double lo, double width);

  double lower() const { return lo_; }
  double upper() const { return lo_ + width_; }
  double width() const { return width_; }
  bool is_empty() const { return !full_ && width_ <= 0.0; }
  bool is_full() const { return full_; }
  bool wraps() const { return !full_ && lo_ + width_ > kTwoPi; }
  bool contains(double theta) const;

  friend bool operator==(const AngleInterval& a, const AngleInterval& b) {
    return a.full_ == b.full_ && a.lo_ == b.lo_ && a.width_ == b.width_;
  }

private:
  double lo_ = 0.0;
  double width_ = 0.0;
  bool full_ = false;
};

// Equal-radius circles laid out along the body x-axis so their union
// contains the rectangle. offsets are the circle centers relative to the
// body center, ascending and symmetric about zero.
struct CircleCover {
  int n_circles = 0;
  double radius = 0.0;
  double spacing = 0.0; // center-to-center distance between neighbors
  std::vector<double> offsets;
};

// Minimal equal-circle cover of the rectangle with n circles on its long axis.
CircleCover cover_rectangle(const RectangleFootprint& fp, int n);

// Largest center distance at which any ego/object circle pair can touch;
// beyond it the collision probability is exactly zero.
double max_collision_distance(const CircleCover& ego, const CircleCover& object);

PolarConfiguration to_polar(const Configuration& c);
Configuration from_polar(const PolarConfiguration& p);

// Polar coordinates of the object center as seen from the ego circle at
// (l_e, 0): phi' = atan2(y_o, x_o - l_e) in [0, 2*pi), rho' the distance.
struct ShiftedPolar {
  double phi = 0.0;
  double rho = 0.0;
};
ShiftedPolar shift_polar(double x_o, double y_o, double l_e);

// Headings for which the object circle offset by l_o >= 0 from the object
// center reaches within the joint radius of the ego circle at the shifted
// origin. Law-of-cosines bounds; degenerate cases collapse to full/empty.
AngleInterval heading_bounds(double phi_prime, double rho_prime, double l_o,
                             double joint_radius);

} // namespace colprob
