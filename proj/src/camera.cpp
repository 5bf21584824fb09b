#include "advsim/camera.hpp"

#include <stdexcept>

#include "advsim/errors.hpp"

namespace advsim {

void CameraModel::validate() const {
  if (focal_length_px <= 0.0) throw ParseError("camera: focal_length_px must be > 0");
  if (capture_rate_hz <= 0.0) throw ParseError("camera: capture_rate_hz must be > 0");
  if (oos_distance_m < 0.0) throw ParseError("camera: oos_distance_m must be >= 0");
}

void ObjectSpec::validate() const {
  if (physical_size_m <= 0.0) throw ParseError("object: physical_size_m must be > 0");
}

double focal_length_px_from_mm(double focal_length_mm, double pixel_pitch_mm) {
  if (focal_length_mm <= 0.0 || pixel_pitch_mm <= 0.0)
    throw std::domain_error("focal length and pixel pitch must be > 0");
  return focal_length_mm / pixel_pitch_mm;
}

double size_at_distance(const ObjectSpec& obj, const CameraModel& cam, double distance_m) {
  if (distance_m <= 0.0) throw std::domain_error("size_at_distance: distance must be > 0");
  return obj.physical_size_m * cam.focal_length_px / distance_m;
}

double distance_at_size(const ObjectSpec& obj, const CameraModel& cam, double pixel_size) {
  if (pixel_size <= 0.0) throw std::domain_error("distance_at_size: pixel size must be > 0");
  return obj.physical_size_m * cam.focal_length_px / pixel_size;
}

double frame_count_cdf(const ObjectSpec& obj, const CameraModel& cam, double road_length_m,
                       double speed_mps, double pixel_size) {
  if (speed_mps <= 0.0) throw std::domain_error("frame_count_cdf: speed must be > 0");
  if (pixel_size <= 0.0) throw std::domain_error("frame_count_cdf: pixel size must be > 0");
  const double s0 = size_at_distance(obj, cam, road_length_m);
  // Below s0 the object has not yet been observed at all.
  if (pixel_size < s0 * (1.0 - 1e-12))
    throw std::domain_error("frame_count_cdf: pixel size below the size at initial distance");
  const double d = distance_at_size(obj, cam, pixel_size);
  const double frames = (road_length_m - d) * cam.capture_rate_hz / speed_mps;
  return frames < 0.0 ? 0.0 : frames;
}

double size_pdf(const ObjectSpec& obj, const CameraModel& cam, double speed_mps,
                double pixel_size) {
  if (speed_mps <= 0.0) throw std::domain_error("size_pdf: speed must be > 0");
  if (pixel_size <= 0.0) throw std::domain_error("size_pdf: pixel size must be > 0");
  return cam.capture_rate_hz * obj.physical_size_m * cam.focal_length_px /
         (speed_mps * pixel_size * pixel_size);
}

const char* to_string(ObjectKind kind) {
  return kind == ObjectKind::stop_sign ? "stop_sign" : "pedestrian";
}

ObjectKind object_kind_from_string(const std::string& name) {
  if (name == "stop_sign") return ObjectKind::stop_sign;
  if (name == "pedestrian") return ObjectKind::pedestrian;
  throw ParseError("unknown object kind: " + name);
}

}  // namespace advsim
