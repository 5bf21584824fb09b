#include "advsim/perception.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "advsim/errors.hpp"

namespace advsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& token, int line_no, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    std::ostringstream msg;
    msg << "profile line " << line_no << ": bad " << what << " '" << token << "'";
    throw ParseError(msg.str());
  }
}

}  // namespace

void DetectionProfile::validate() const {
  if (ranges.empty()) throw ParseError("profile '" + label + "': no ranges");
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const RateRange& r = ranges[i];
    if (!(r.lo_m < r.hi_m))
      throw ParseError("profile '" + label + "': range with lo >= hi");
    if (r.rate < 0.0 || r.rate > 1.0)
      throw ParseError("profile '" + label + "': rate outside [0,1]");
    if (i > 0) {
      const double prev_hi = ranges[i - 1].hi_m;
      if (r.lo_m < prev_hi - 1e-9)
        throw ParseError("profile '" + label + "': overlapping ranges");
      if (r.lo_m > prev_hi + 1e-9)
        throw ParseError("profile '" + label + "': gap between ranges");
    }
  }
}

DetectionProfile load_profile(std::istream& source, const std::string& label) {
  DetectionProfile profile;
  profile.label = label;
  std::string line;
  int line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content[0] == '#') continue;
    std::istringstream row(content);
    std::string lo_s, hi_s, rate_s, extra;
    if (!std::getline(row, lo_s, ',') || !std::getline(row, hi_s, ',') ||
        !std::getline(row, rate_s, ',')) {
      std::ostringstream msg;
      msg << "profile line " << line_no << ": expected lo_m,hi_m,rate";
      throw ParseError(msg.str());
    }
    if (std::getline(row, extra, ',') && !trim(extra).empty()) {
      std::ostringstream msg;
      msg << "profile line " << line_no << ": trailing fields";
      throw ParseError(msg.str());
    }
    RateRange r;
    r.lo_m = parse_number(trim(lo_s), line_no, "lo_m");
    r.hi_m = parse_number(trim(hi_s), line_no, "hi_m");
    r.rate = parse_number(trim(rate_s), line_no, "rate");
    profile.ranges.push_back(r);
  }
  profile.validate();
  return profile;
}

DetectionProfile load_profile_file(const std::string& path, const std::string& label) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile file: " + path);

  // Scan directives before parsing rows.
  bool as_asr = false;
  std::string file_label;
  {
    std::string line;
    while (std::getline(in, line)) {
      const std::string content = trim(line);
      if (content.rfind("# kind:", 0) == 0) {
        const std::string kind = trim(content.substr(7));
        if (kind == "asr")
          as_asr = true;
        else if (kind != "detection")
          throw ParseError(path + ": unknown profile kind '" + kind + "'");
      } else if (content.rfind("# label:", 0) == 0) {
        file_label = trim(content.substr(8));
      }
    }
  }
  in.clear();
  in.seekg(0);

  std::string effective_label = label;
  if (effective_label.empty()) effective_label = file_label;
  if (effective_label.empty()) {
    // Fall back to the file stem.
    std::string stem = path;
    const auto slash = stem.find_last_of("/\\");
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    const auto dot = stem.find_last_of('.');
    if (dot != std::string::npos) stem = stem.substr(0, dot);
    effective_label = stem;
  }

  DetectionProfile profile = load_profile(in, effective_label);
  if (as_asr) {
    return asr_to_profile(profile.ranges, effective_label);
  }
  return profile;
}

double rate_at(const DetectionProfile& profile, double distance_m) {
  for (const RateRange& r : profile.ranges) {
    if (distance_m >= r.lo_m && distance_m < r.hi_m) return r.rate;
  }
  return 0.0;
}

DetectionProfile asr_to_profile(const std::vector<RateRange>& asr_rows, const std::string& label) {
  DetectionProfile profile;
  profile.label = label;
  profile.ranges = asr_rows;
  for (RateRange& r : profile.ranges) r.rate = 1.0 - r.rate;
  profile.validate();
  return profile;
}

Detection sample_detection(const DetectionProfile& profile, double true_distance_m,
                           const CameraModel& cam, const TrialStreams& streams,
                           std::uint64_t frame_index, double noise_std_m) {
  Detection det;
  det.frame_index = frame_index;
  // One uniform per frame regardless of outcome: a profile with pointwise
  // lower rates detects on a subset of the frames of a higher one under the
  // same stream.
  const double u = streams.detection.uniform_at(frame_index);
  const bool in_view = true_distance_m >= cam.oos_distance_m;
  det.detected = in_view && u < rate_at(profile, true_distance_m);
  if (det.detected) {
    double measured = true_distance_m;
    if (noise_std_m > 0.0)
      measured += noise_std_m * streams.noise.normal_at(frame_index);
    det.measured_distance_m = std::max(measured, 1e-2);
  }
  return det;
}

}  // namespace advsim
