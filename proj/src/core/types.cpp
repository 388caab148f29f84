#include "ipr/core/types.hpp"

#include <cmath>
#include <stdexcept>

namespace ipr {

std::string to_string(RegionClass c) {
  switch (c) {
    case RegionClass::kClean: return "clean";
    case RegionClass::kShadow: return "shadow";
    case RegionClass::kReflection: return "reflection";
    case RegionClass::kTextureHigh: return "texture_high";
  }
  throw std::invalid_argument("unknown region class");
}

RegionClass region_class_from_string(const std::string& s) {
  if (s == "clean") return RegionClass::kClean;
  if (s == "shadow") return RegionClass::kShadow;
  if (s == "reflection") return RegionClass::kReflection;
  if (s == "texture_high") return RegionClass::kTextureHigh;
  throw std::invalid_argument("unknown region class: " + s);
}

std::string to_string(FailureLabel l) {
  switch (l) {
    case FailureLabel::kFP: return "FP";
    case FailureLabel::kFN: return "FN";
    case FailureLabel::kTP: return "TP";
    case FailureLabel::kTN: return "TN";
  }
  throw std::invalid_argument("unknown failure label");
}

FailureLabel failure_label_from_string(const std::string& s) {
  if (s == "FP") return FailureLabel::kFP;
  if (s == "FN") return FailureLabel::kFN;
  if (s == "TP") return FailureLabel::kTP;
  if (s == "TN") return FailureLabel::kTN;
  throw std::invalid_argument("unknown failure label: " + s);
}

std::string to_string(SampleSource s) {
  return s == SampleSource::kCrossSensor ? "CrossSensor" : "SpatioTemporal";
}

SampleSource sample_source_from_string(const std::string& s) {
  if (s == "CrossSensor") return SampleSource::kCrossSensor;
  if (s == "SpatioTemporal") return SampleSource::kSpatioTemporal;
  throw std::invalid_argument("unknown sample source: " + s);
}

ContextFeatures::ContextFeatures(Eigen::VectorXd v) : v_(std::move(v)) {
  if (v_.size() == 0) throw std::invalid_argument("ContextFeatures: empty vector");
  if (!v_.allFinite()) throw std::invalid_argument("ContextFeatures: non-finite entry");
}

ContextFeatures ContextFeatures::make(RegionClass region, double texture_freq,
                                      double brightness, double u_norm, double v_norm,
                                      double inv_depth) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(kDim);
  switch (region) {
    case RegionClass::kClean: break;
    case RegionClass::kShadow: v(0) = 1.0; break;
    case RegionClass::kReflection: v(1) = 1.0; break;
    case RegionClass::kTextureHigh: v(2) = 1.0; break;
  }
  v(3) = texture_freq;
  v(4) = brightness;
  v(5) = u_norm;
  v(6) = v_norm;
  v(7) = inv_depth;
  return ContextFeatures(std::move(v));
}

RegionClass ContextFeatures::region() const {
  if (v_.size() < 3) return RegionClass::kClean;
  if (v_(0) > 0.5) return RegionClass::kShadow;
  if (v_(1) > 0.5) return RegionClass::kReflection;
  if (v_(2) > 0.5) return RegionClass::kTextureHigh;
  return RegionClass::kClean;
}

ErrorSample ErrorSample::make(ContextFeatures ctx, Eigen::VectorXd error, SampleSource source,
                              int frame_id) {
  if (frame_id < 0) throw std::invalid_argument("ErrorSample: frame_id >= 0 required");
  if (!error.allFinite()) throw std::invalid_argument("ErrorSample: non-finite error");
  ErrorSample s;
  s.context = std::move(ctx);
  s.magnitude = error.norm();
  s.error = std::move(error);
  s.source = source;
  s.frame_id = frame_id;
  return s;
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !(baseline > 0.0))
    throw std::invalid_argument("CameraIntrinsics: fx, fy, baseline must be > 0");
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
    throw std::invalid_argument("CameraIntrinsics: principal point outside image");
}

double compose_error(double estimate, double reference) { return estimate - reference; }

Eigen::VectorXd compose_error(const Eigen::VectorXd& estimate, const Eigen::VectorXd& reference) {
  if (estimate.size() != reference.size())
    throw std::invalid_argument("compose_error: dimensionality mismatch");
  return estimate - reference;
}

}  // namespace ipr
