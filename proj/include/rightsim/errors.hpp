#ifndef RIGHTSIM_ERRORS_HPP
#define RIGHTSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rightsim {

/// Invalid model, gait, grid, or trial parameters.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class JointLimitError : public ValidationError {
 public:
  JointLimitError(int joint, double angle, double limit)
      : ValidationError("joint " + std::to_string(joint) + " angle " + std::to_string(angle) +
                        " exceeds limit " + std::to_string(limit)),
        joint_(joint) {}

  /// 1-based index of the offending joint.
  int joint() const { return joint_; }

 private:
  int joint_;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure while writing results.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rightsim

#endif  // RIGHTSIM_ERRORS_HPP
