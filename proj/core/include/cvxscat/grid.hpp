#pragma once

#include <span>
#include <vector>

namespace cvxscat {

/// Uniform partition x_min = x_0 < x_1 < ... < x_M = x_max.
class SpatialGrid {
 public:
  SpatialGrid(double x_min, double x_max, int n_cells);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int n_cells() const { return n_cells_; }
  int node_count() const { return n_cells_ + 1; }
  double spacing() const { return h_; }

  /// Node i; the last node is returned as exactly x_max.
  double node(int i) const;
  std::vector<double> nodes() const;

  /// Index of the node equal to x within 1e-9*h, or -1.
  int find_node(double x) const;

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;

 private:
  double x_min_;
  double x_max_;
  int n_cells_;
  double h_;
};

/// K uniformly spaced wavenumbers k_1 = k_min < ... < k_K = k_max, all positive.
class WavenumberGrid {
 public:
  WavenumberGrid(double k_min, double k_max, int count);

  double k_min() const { return k_min_; }
  double k_max() const { return k_max_; }
  int size() const { return static_cast<int>(values_.size()); }
  double spacing() const { return (k_max_ - k_min_) / (size() - 1); }
  double operator[](int i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

  /// Composite trapezoidal weights on the grid nodes.
  std::vector<double> trapezoid_weights() const;

  friend bool operator==(const WavenumberGrid&, const WavenumberGrid&) = default;

 private:
  double k_min_;
  double k_max_;
  std::vector<double> values_;
};

}  // namespace cvxscat
