#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "holo/errors.hpp"
#include "holo/grid.hpp"

namespace holo {

struct MetricReport {
  double mse = 0.0;
  double psnr = 0.0;  // dB; +inf sentinel when mse == 0
  double ssim = 0.0;
  double edge_factor = 0.0;
};

// Binary Canny edge map, entries in {0, 1}.
struct EdgeMap {
  Grid<std::uint8_t> edges;
};

inline double mse(const Grid<double>& x, const Grid<double>& y) {
  if (!x.same_shape(y)) throw ConfigError("mse: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc / double(x.size());
}

inline double psnr(const Grid<double>& x, const Grid<double>& y, double peak = 1.0) {
  const double m = mse(x, y);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / m);
}

namespace detail {

inline std::vector<double> gaussian_taps(double sigma, int radius) {
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-0.5 * double(i) * double(i) / (sigma * sigma));
    sum += taps[i + radius];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

// Separable Gaussian blur with replicate borders.
inline Grid<double> gaussian_blur(const Grid<double>& img, double sigma) {
  const int radius = std::max(1, int(std::ceil(3.0 * sigma)));
  const auto taps = gaussian_taps(sigma, radius);
  const int h = img.height();
  const int w = img.width();
  Grid<double> tmp(h, w), out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) acc += taps[t + radius] * img(y, clamp_index(x + t, w));
      tmp(y, x) = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) acc += taps[t + radius] * tmp(clamp_index(y + t, h), x);
      out(y, x) = acc;
    }
  return out;
}

}  // namespace detail

// Mean SSIM with 11x11 Gaussian windows (sigma 1.5), C1=(0.01R)^2, C2=(0.03R)^2,
// evaluated on windows that fit entirely inside the image.
inline double ssim(const Grid<double>& x, const Grid<double>& y, double peak = 1.0) {
  if (!x.same_shape(y)) throw ConfigError("ssim: shape mismatch");
  constexpr int kRadius = 5;
  if (x.height() < 2 * kRadius + 1 || x.width() < 2 * kRadius + 1)
    throw ConfigError("ssim: image smaller than the 11x11 window");
  const auto taps = detail::gaussian_taps(1.5, kRadius);
  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  double acc = 0.0;
  std::size_t count = 0;
  for (int cy = kRadius; cy < x.height() - kRadius; ++cy) {
    for (int cx = kRadius; cx < x.width() - kRadius; ++cx) {
      double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (int dy = -kRadius; dy <= kRadius; ++dy)
        for (int dx = -kRadius; dx <= kRadius; ++dx) {
          const double wgt = taps[dy + kRadius] * taps[dx + kRadius];
          const double vx = x(cy + dy, cx + dx);
          const double vy = y(cy + dy, cx + dx);
          mx += wgt * vx;
          my += wgt * vy;
          sxx += wgt * vx * vx;
          syy += wgt * vy * vy;
          sxy += wgt * vx * vy;
        }
      const double vx = sxx - mx * mx;
      const double vy = syy - my * my;
      const double cxy = sxy - mx * my;
      acc += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
             ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return acc / double(count);
}

// Whole-image single-window variant (global statistics).
inline double ssim_global(const Grid<double>& x, const Grid<double>& y, double peak = 1.0) {
  if (!x.same_shape(y)) throw ConfigError("ssim: shape mismatch");
  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  const double n = double(x.size());
  double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx) / n;
    syy += (y[i] - my) * (y[i] - my) / n;
    sxy += (x[i] - mx) * (y[i] - my) / n;
  }
  return ((2.0 * mx * my + c1) * (2.0 * sxy + c2)) / ((mx * mx + my * my + c1) * (sxx + syy + c2));
}

// Canny edge extraction: Gaussian blur, Sobel gradients, non-maximum
// suppression, hysteresis with thresholds relative to the gradient maximum.
inline EdgeMap canny_edges(const Grid<double>& image, double sigma = 1.4, double low_frac = 0.08,
                           double high_frac = 0.2) {
  const int h = image.height();
  const int w = image.width();
  Grid<double> blurred = detail::gaussian_blur(image, sigma);

  Grid<double> mag(h, w, 0.0);
  Grid<std::uint8_t> dir(h, w, 0);  // quantized: 0 = E-W, 1 = NE-SW, 2 = N-S, 3 = NW-SE
  double max_mag = 0.0;
  auto px = [&](int y, int x) {
    return blurred(detail::clamp_index(y, h), detail::clamp_index(x, w));
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (px(y - 1, x + 1) + 2.0 * px(y, x + 1) + px(y + 1, x + 1)) -
                        (px(y - 1, x - 1) + 2.0 * px(y, x - 1) + px(y + 1, x - 1));
      const double gy = (px(y + 1, x - 1) + 2.0 * px(y + 1, x) + px(y + 1, x + 1)) -
                        (px(y - 1, x - 1) + 2.0 * px(y - 1, x) + px(y - 1, x + 1));
      const double m = std::sqrt(gx * gx + gy * gy);
      mag(y, x) = m;
      max_mag = std::max(max_mag, m);
      double angle = std::atan2(gy, gx) * 180.0 / M_PI;
      if (angle < 0.0) angle += 180.0;
      std::uint8_t q = 0;
      if (angle >= 22.5 && angle < 67.5)
        q = 1;
      else if (angle >= 67.5 && angle < 112.5)
        q = 2;
      else if (angle >= 112.5 && angle < 157.5)
        q = 3;
      dir(y, x) = q;
    }
  }

  EdgeMap result{Grid<std::uint8_t>(h, w, 0)};
  if (max_mag <= 0.0) return result;  // flat image: no edges
  const double low = low_frac * max_mag;
  const double high = high_frac * max_mag;

  Grid<std::uint8_t> state(h, w, 0);  // 0 none, 1 weak, 2 strong
  auto mag_at = [&](int y, int x) -> double {
    if (y < 0 || y >= h || x < 0 || x >= w) return 0.0;
    return mag(y, x);
  };
  std::deque<std::pair<int, int>> strong;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag(y, x);
      if (m < low) continue;
      double n1 = 0.0, n2 = 0.0;
      switch (dir(y, x)) {
        case 0: n1 = mag_at(y, x - 1); n2 = mag_at(y, x + 1); break;
        case 1: n1 = mag_at(y - 1, x + 1); n2 = mag_at(y + 1, x - 1); break;
        case 2: n1 = mag_at(y - 1, x); n2 = mag_at(y + 1, x); break;
        default: n1 = mag_at(y - 1, x - 1); n2 = mag_at(y + 1, x + 1); break;
      }
      if (m < n1 || m < n2) continue;  // suppressed
      if (m >= high) {
        state(y, x) = 2;
        strong.emplace_back(y, x);
      } else {
        state(y, x) = 1;
      }
    }
  }
  while (!strong.empty()) {
    auto [y, x] = strong.front();
    strong.pop_front();
    result.edges(y, x) = 1;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int ny = y + dy, nx = x + dx;
        if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
        if (state(ny, nx) == 1 && result.edges(ny, nx) == 0) {
          state(ny, nx) = 2;
          strong.emplace_back(ny, nx);
        }
      }
  }
  return result;
}

inline double mean_edge_factor(const EdgeMap& map) {
  double acc = 0.0;
  for (auto v : map.edges) acc += double(v);
  return acc / double(map.edges.size());
}

inline double pearson_correlation(const Grid<double>& x, const Grid<double>& y) {
  if (!x.same_shape(y)) throw ConfigError("pearson: shape mismatch");
  const double n = double(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

inline MetricReport evaluate_metrics(const Grid<double>& reconstruction,
                                     const Grid<double>& truth, double peak = 1.0) {
  MetricReport report;
  report.mse = mse(reconstruction, truth);
  report.psnr = psnr(reconstruction, truth, peak);
  report.ssim = ssim(reconstruction, truth, peak);
  report.edge_factor = mean_edge_factor(canny_edges(reconstruction));
  return report;
}

}  // namespace holo
