#include "cvxscat/grid.hpp"

#include <cmath>
#include <string>

#include "cvxscat/error.hpp"

namespace cvxscat {

SpatialGrid::SpatialGrid(double x_min, double x_max, int n_cells)
    : x_min_(x_min), x_max_(x_max), n_cells_(n_cells), h_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw DomainError("SpatialGrid: require finite x_min < x_max");
  }
  if (n_cells < 1) {
    throw DomainError("SpatialGrid: n_cells must be positive, got " + std::to_string(n_cells));
  }
  h_ = (x_max - x_min) / n_cells;
}

double SpatialGrid::node(int i) const {
  if (i == n_cells_) return x_max_;
  return x_min_ + i * h_;
}

std::vector<double> SpatialGrid::nodes() const {
  std::vector<double> out(node_count());
  for (int i = 0; i < node_count(); ++i) out[i] = node(i);
  return out;
}

int SpatialGrid::find_node(double x) const {
  const double r = (x - x_min_) / h_;
  const long i = std::lround(r);
  if (i < 0 || i > n_cells_) return -1;
  if (std::abs(node(static_cast<int>(i)) - x) > 1e-9 * h_) return -1;
  return static_cast<int>(i);
}

WavenumberGrid::WavenumberGrid(double k_min, double k_max, int count) : k_min_(k_min), k_max_(k_max) {
  if (!(k_min > 0.0) || !std::isfinite(k_max) || !(k_max > k_min)) {
    throw DomainError("WavenumberGrid: require 0 < k_min < k_max");
  }
  if (count < 2) {
    throw DomainError("WavenumberGrid: need at least two wavenumbers, got " + std::to_string(count));
  }
  values_.resize(count);
  const double dk = (k_max - k_min) / (count - 1);
  for (int i = 0; i < count; ++i) values_[i] = k_min + i * dk;
  values_.back() = k_max;
}

std::vector<double> WavenumberGrid::trapezoid_weights() const {
  std::vector<double> w(values_.size(), spacing());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

}  // namespace cvxscat
