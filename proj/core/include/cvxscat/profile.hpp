#pragma once

#include <functional>
#include <string>
#include <vector>

namespace cvxscat {

/// Dielectric coefficient c(x) of the medium.
///
/// c equals 1 outside the declared support [0, b]; inside it is given by the
/// evaluator. The bounds c0 <= c <= 1 + d are recorded alongside so callers
/// can check physical admissibility without sampling.
class MediumProfile {
 public:
  using Evaluator = std::function<double(double)>;

  MediumProfile(std::string name, Evaluator inside, double support_end, double lower_bound,
                double upper_bound);

  double operator()(double x) const;

  /// Contrast c(x) - 1, exactly zero outside [0, b].
  double contrast(double x) const { return (*this)(x) - 1.0; }

  const std::string& name() const { return name_; }
  double support_end() const { return support_end_; }
  double lower_bound() const { return lower_bound_; }
  double upper_bound() const { return upper_bound_; }

  static MediumProfile homogeneous(double support_end = 0.5);

  /// 1 + amplitude on [left, right], 1 elsewhere.
  static MediumProfile step(double left, double right, double amplitude, double support_end = 0.5);

  /// 1 + amplitude * exp(-(x - center)^2 / width^2) on [0, support_end].
  static MediumProfile gaussian(double center, double width, double amplitude, double support_end = 0.5);

  /// Piecewise-linear interpolation of (x, c) samples; support ends at the last sample.
  static MediumProfile tabulated(std::vector<double> xs, std::vector<double> cs);

 private:
  std::string name_;
  Evaluator inside_;
  double support_end_;
  double lower_bound_;
  double upper_bound_;
};

}  // namespace cvxscat
