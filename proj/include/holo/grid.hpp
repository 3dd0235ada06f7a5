#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace holo {

using cdouble = std::complex<double>;

// Dense row-major 2D grid. T is double or std::complex<double> in practice.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int height, int width, T fill = T{})
      : height_(height),
        width_(width),
        data_(check_shape(height, width), fill) {}

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int y, int x) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  const T& operator()(int y, int x) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  T* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
  const T* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * width_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return height_ == other.height() && width_ == other.width();
  }

 private:
  static std::size_t check_shape(int height, int width) {
    if (height < 1 || width < 1) throw std::invalid_argument("Grid: non-positive shape");
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

inline double grid_sum(const Grid<double>& g) {
  double s = 0.0;
  for (double v : g) s += v;
  return s;
}

inline double grid_mean(const Grid<double>& g) { return grid_sum(g) / double(g.size()); }

inline double grid_min(const Grid<double>& g) { return *std::min_element(g.begin(), g.end()); }
inline double grid_max(const Grid<double>& g) { return *std::max_element(g.begin(), g.end()); }

inline bool all_finite(const Grid<double>& g) {
  for (double v : g)
    if (!std::isfinite(v)) return false;
  return true;
}

inline bool all_finite(const Grid<cdouble>& g) {
  for (const cdouble& v : g)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

inline Grid<double> real_part(const Grid<cdouble>& g) {
  Grid<double> out(g.height(), g.width());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].real();
  return out;
}

inline Grid<double> magnitude(const Grid<cdouble>& g) {
  Grid<double> out(g.height(), g.width());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::abs(g[i]);
  return out;
}

inline Grid<double> clamp01(const Grid<double>& g) {
  Grid<double> out(g.height(), g.width());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::clamp(g[i], 0.0, 1.0);
  return out;
}

// Mean magnitude of forward-difference gradients; the sharpness score used
// by snapshot reports and focus comparisons.
inline double mean_gradient_magnitude(const Grid<double>& g) {
  double acc = 0.0;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      double gx = (x + 1 < g.width()) ? g(y, x + 1) - g(y, x) : 0.0;
      double gy = (y + 1 < g.height()) ? g(y + 1, x) - g(y, x) : 0.0;
      acc += std::sqrt(gx * gx + gy * gy);
    }
  }
  return acc / double(g.size());
}

}  // namespace holo
