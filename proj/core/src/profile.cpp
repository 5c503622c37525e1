#include "cvxscat/profile.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cvxscat/error.hpp"

namespace cvxscat {

MediumProfile::MediumProfile(std::string name, Evaluator inside, double support_end, double lower_bound,
                             double upper_bound)
    : name_(std::move(name)),
      inside_(std::move(inside)),
      support_end_(support_end),
      lower_bound_(lower_bound),
      upper_bound_(upper_bound) {
  if (!(support_end > 0.0)) throw DomainError("MediumProfile: support end must be positive");
  if (!(lower_bound > 0.0) || !(lower_bound <= 1.0) || !(upper_bound >= 1.0)) {
    throw DomainError("MediumProfile: bounds must satisfy 0 < c0 <= 1 <= 1 + d");
  }
}

double MediumProfile::operator()(double x) const {
  if (x < 0.0 || x > support_end_) return 1.0;
  return inside_(x);
}

MediumProfile MediumProfile::homogeneous(double support_end) {
  return MediumProfile("homogeneous", [](double) { return 1.0; }, support_end, 1.0, 1.0);
}

MediumProfile MediumProfile::step(double left, double right, double amplitude, double support_end) {
  if (!(0.0 <= left && left < right && right <= support_end)) {
    throw DomainError("step profile: require 0 <= left < right <= support end");
  }
  if (!(1.0 + amplitude > 0.0)) throw DomainError("step profile: 1 + amplitude must be positive");
  auto eval = [=](double x) { return (x >= left && x <= right) ? 1.0 + amplitude : 1.0; };
  return MediumProfile("step", eval, support_end, std::min(1.0, 1.0 + amplitude), std::max(1.0, 1.0 + amplitude));
}

MediumProfile MediumProfile::gaussian(double center, double width, double amplitude, double support_end) {
  if (!(width > 0.0)) throw DomainError("gaussian profile: width must be positive");
  if (!(1.0 + amplitude > 0.0)) throw DomainError("gaussian profile: 1 + amplitude must be positive");
  auto eval = [=](double x) {
    const double s = (x - center) / width;
    return 1.0 + amplitude * std::exp(-s * s);
  };
  return MediumProfile("gaussian", eval, support_end, std::min(1.0, 1.0 + amplitude),
                       std::max(1.0, 1.0 + amplitude));
}

MediumProfile MediumProfile::tabulated(std::vector<double> xs, std::vector<double> cs) {
  if (xs.size() < 2 || xs.size() != cs.size()) {
    throw DomainError("tabulated profile: need at least two (x, c) samples of equal length");
  }
  if (xs.front() < 0.0) throw DomainError("tabulated profile: samples must start at x >= 0");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw DomainError("tabulated profile: x samples must be strictly increasing");
  }
  for (double c : cs) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("tabulated profile: c must be positive and finite");
  }
  const auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
  const double lower = std::min(1.0, *lo);
  const double upper = std::max(1.0, *hi);
  const double end = xs.back();
  auto eval = [xs = std::move(xs), cs = std::move(cs)](double x) {
    if (x <= xs.front()) return x < xs.front() ? 1.0 : cs.front();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return cs.back();
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return (1.0 - t) * cs[i - 1] + t * cs[i];
  };
  return MediumProfile("tabulated", eval, end, lower, upper);
}

}  // namespace cvxscat
