#pragma once

#include <cmath>

#include "holo/errors.hpp"
#include "holo/grid.hpp"

namespace holo {

// Isotropic total variation with forward differences; the last row/column
// gradients are zero (replicate boundary).
inline double tv_norm(const Grid<double>& image) {
  double acc = 0.0;
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x) {
      const double dx = (x + 1 < image.width()) ? image(y, x + 1) - image(y, x) : 0.0;
      const double dy = (y + 1 < image.height()) ? image(y + 1, x) - image(y, x) : 0.0;
      acc += std::sqrt(dx * dx + dy * dy);
    }
  return acc;
}

namespace detail {

// Forward-difference gradient and its negative adjoint (divergence), the
// discrete pair Chambolle's dual iteration is built on.
inline void tv_gradient(const Grid<double>& u, Grid<double>& gx, Grid<double>& gy) {
  const int h = u.height(), w = u.width();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      gx(y, x) = (x + 1 < w) ? u(y, x + 1) - u(y, x) : 0.0;
      gy(y, x) = (y + 1 < h) ? u(y + 1, x) - u(y, x) : 0.0;
    }
}

inline void tv_divergence(const Grid<double>& px, const Grid<double>& py, Grid<double>& div) {
  const int h = px.height(), w = px.width();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double dx;
      if (x == 0)
        dx = px(y, 0);
      else if (x == w - 1)
        dx = -px(y, w - 2);
      else
        dx = px(y, x) - px(y, x - 1);
      double dy;
      if (y == 0)
        dy = py(0, x);
      else if (y == h - 1)
        dy = -py(h - 2, x);
      else
        dy = py(y, x) - py(y - 1, x);
      div(y, x) = dx + dy;
    }
}

}  // namespace detail

// Approximate proximal operator of weight * tv_norm via Chambolle's dual
// fixed-point iteration: output = input - weight * div p with the dual field
// p updated inner_iters times. weight 0 returns the input unchanged.
inline Grid<double> tv_denoise(const Grid<double>& image, double weight, int inner_iters) {
  if (weight < 0.0) throw ConfigError("tv: weight must be >= 0");
  if (inner_iters < 1) throw ConfigError("tv: inner_iters must be >= 1");
  if (weight == 0.0) return image;
  const int h = image.height(), w = image.width();
  Grid<double> px(h, w, 0.0), py(h, w, 0.0);
  Grid<double> div(h, w, 0.0), gx(h, w), gy(h, w), work(h, w);
  const double tau = 0.248;  // fixed-point step, < 1/4 for stability
  for (int it = 0; it < inner_iters; ++it) {
    // work = div p - image/weight; p += tau * grad(work), then renormalize.
    for (std::size_t i = 0; i < work.size(); ++i) work[i] = div[i] - image[i] / weight;
    detail::tv_gradient(work, gx, gy);
    for (std::size_t i = 0; i < px.size(); ++i) {
      const double nx = px[i] + tau * gx[i];
      const double ny = py[i] + tau * gy[i];
      const double denom = 1.0 + tau * std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
      px[i] = nx / denom;
      py[i] = ny / denom;
    }
    detail::tv_divergence(px, py, div);
  }
  Grid<double> out(h, w);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = image[i] - weight * div[i];
  return out;
}

}  // namespace holo
