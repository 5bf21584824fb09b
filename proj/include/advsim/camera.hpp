#pragma once

#include <string>

namespace advsim {

enum class ObjectKind { stop_sign, pedestrian };

/// Pinhole camera, focal length already expressed in pixel units.
struct CameraModel {
  double focal_length_px = 1000.0;  // pinhole f in pixels
  double capture_rate_hz = 20.0;    // frames per second
  double oos_distance_m = 4.0;      // object leaves the image inside this distance

  void validate() const;
};

/// Physical object placed at the roadside (or in-lane for pedestrians).
struct ObjectSpec {
  ObjectKind kind = ObjectKind::stop_sign;
  double physical_size_m = 1.5;   // real object extent L
  double lateral_offset_m = 3.0;  // from lane center; scenario geometry only

  void validate() const;
};

/// Focal length in pixels from optics: f[mm] / pixel pitch[mm].
double focal_length_px_from_mm(double focal_length_mm, double pixel_pitch_mm);

/// On-image size s = L * f / D by similar triangles. Strictly decreasing in D.
double size_at_distance(const ObjectSpec& obj, const CameraModel& cam, double distance_m);

/// Inverse of size_at_distance: D = L * f / s.
double distance_at_size(const ObjectSpec& obj, const CameraModel& cam, double pixel_size);

/// Cumulative frame count F(s) = (D0 - L*f/s) * eta / v for a vehicle in
/// uniform motion from distance D0: the number of frames captured while the
/// object appears at pixel size <= s.
double frame_count_cdf(const ObjectSpec& obj, const CameraModel& cam, double road_length_m,
                       double speed_mps, double pixel_size);

/// Density of observed pixel sizes, dF/ds = eta * L * f / (v * s^2).
double size_pdf(const ObjectSpec& obj, const CameraModel& cam, double speed_mps,
                double pixel_size);

const char* to_string(ObjectKind kind);
ObjectKind object_kind_from_string(const std::string& name);

}  // namespace advsim
