#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>

namespace ipr {

// Local-context classes a landmark can belong to; mirrors the error sources
// the simulator plants (clean surface, cast shadow, specular reflection,
// high-frequency texture).
enum class RegionClass { kClean = 0, kShadow = 1, kReflection = 2, kTextureHigh = 3 };
constexpr int kNumRegionClasses = 4;

std::string to_string(RegionClass c);
RegionClass region_class_from_string(const std::string& s);

// Outcome classes for depth-estimate errors: estimated depth too small (FP,
// phantom obstacle), too large (FN, missed obstacle), accurate with an
// obstacle in range (TP), accurate with nothing in range (TN).
enum class FailureLabel { kFP = 0, kFN = 1, kTP = 2, kTN = 3 };

std::string to_string(FailureLabel l);
FailureLabel failure_label_from_string(const std::string& s);

// Fixed-length description of the local observation context, the input of
// every introspection model. Layout (kDim = 8):
//   [0..2] region one-hot for shadow / reflection / texture-high
//          (clean = all zeros)
//   [3]    texture frequency in [0,1]
//   [4]    brightness in [0,1]
//   [5,6]  image coordinates normalized by width/height
//   [7]    inverse depth (1/m)
class ContextFeatures {
 public:
  static constexpr int kDim = 8;

  ContextFeatures() : v_(Eigen::VectorXd::Zero(kDim)) {}
  explicit ContextFeatures(Eigen::VectorXd v);  // throws on non-finite entries

  static ContextFeatures make(RegionClass region, double texture_freq, double brightness,
                              double u_norm, double v_norm, double inv_depth);

  const Eigen::VectorXd& vec() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }

  RegionClass region() const;

 private:
  Eigen::VectorXd v_;
};

enum class SampleSource { kCrossSensor = 0, kSpatioTemporal = 1 };

std::string to_string(SampleSource s);
SampleSource sample_source_from_string(const std::string& s);

// One autonomously labeled perception error: the observation context, the
// raw error value (2-vector in pixels or scalar in meters), its magnitude,
// and where the label came from.
struct ErrorSample {
  ContextFeatures context;
  Eigen::VectorXd error;
  double magnitude = 0.0;
  SampleSource source = SampleSource::kCrossSensor;
  int frame_id = 0;

  static ErrorSample make(ContextFeatures ctx, Eigen::VectorXd error, SampleSource source,
                          int frame_id);
};

// Pinhole stereo camera parameters (pixels / meters).
struct CameraIntrinsics {
  double fx = 500.0;
  double fy = 500.0;
  double cx = 320.0;
  double cy = 240.0;
  double baseline = 0.12;
  int width = 640;
  int height = 480;

  void validate() const;  // throws std::invalid_argument on violation
};

// estimate - reference, elementwise. Dimensions must match.
double compose_error(double estimate, double reference);
Eigen::VectorXd compose_error(const Eigen::VectorXd& estimate, const Eigen::VectorXd& reference);

}  // namespace ipr
