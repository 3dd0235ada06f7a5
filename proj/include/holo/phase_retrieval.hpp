#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "holo/errors.hpp"
#include "holo/grid.hpp"
#include "holo/optics.hpp"
#include "holo/result.hpp"

namespace holo {

// Object-plane constraint region. Convention: true marks a pixel OUTSIDE the
// allowed support, i.e. in the constrained region where GS zeroes the estimate
// and HIO applies the relaxed feedback update.
struct SupportMask {
  Grid<std::uint8_t> outside;

  void validate() const {
    bool any_inside = false;
    for (auto v : outside)
      if (!v) {
        any_inside = true;
        break;
      }
    if (!any_inside) throw ConfigError("support: mask excludes every pixel");
  }
};

struct PrConfig {
  int iterations = 200;
  double beta = 0.9;  // HIO relaxation
  SupportMask support;

  void validate(int height, int width) const {
    if (iterations < 1) throw ConfigError("pr: iterations must be >= 1");
    if (!(beta > 0.0) || beta > 1.0) throw ConfigError("pr: beta must be in (0, 1]");
    if (support.outside.height() != height || support.outside.width() != width)
      throw ConfigError("pr: support shape does not match hologram");
    support.validate();
  }
};

struct SupportEstimate {
  SupportMask mask;
  bool degenerate = false;  // input was flat; fell back to full-grid support
};

// Builds a support mask from a backpropagated amplitude map: pixels whose
// absolute deviation from the median lies below the given quantile are marked
// outside; the surviving support is dilated by 2 pixels.
inline SupportEstimate estimate_support(const Grid<double>& amplitude, double quantile) {
  if (!(quantile > 0.0) || !(quantile < 1.0))
    throw ConfigError("support: quantile must be in (0, 1)");
  const int h = amplitude.height();
  const int w = amplitude.width();

  std::vector<double> sorted(amplitude.begin(), amplitude.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];

  Grid<double> deviation(h, w);
  for (std::size_t i = 0; i < deviation.size(); ++i)
    deviation[i] = std::abs(amplitude[i] - median);

  std::vector<double> dev_sorted(deviation.begin(), deviation.end());
  std::sort(dev_sorted.begin(), dev_sorted.end());
  const std::size_t rank =
      std::min(dev_sorted.size() - 1, std::size_t(quantile * double(dev_sorted.size())));
  const double threshold = dev_sorted[rank];

  SupportEstimate result{SupportMask{Grid<std::uint8_t>(h, w, 0)}, false};
  if (dev_sorted.back() <= 0.0) {
    result.degenerate = true;  // flat input: keep the full grid as support
    return result;
  }

  Grid<std::uint8_t> inside(h, w, 0);
  for (std::size_t i = 0; i < inside.size(); ++i) inside[i] = deviation[i] >= threshold ? 1 : 0;
  // Dilate by 2 pixels (two 3x3 passes).
  for (int pass = 0; pass < 2; ++pass) {
    Grid<std::uint8_t> grown = inside;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (inside(y, x)) continue;
        for (int dy = -1; dy <= 1 && !grown(y, x); ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int ny = y + dy, nx = x + dx;
            if (ny >= 0 && ny < h && nx >= 0 && nx < w && inside(ny, nx)) {
              grown(y, x) = 1;
              break;
            }
          }
      }
    inside = std::move(grown);
  }
  for (std::size_t i = 0; i < inside.size(); ++i) result.mask.outside[i] = inside[i] ? 0 : 1;
  result.mask.validate();
  return result;
}

namespace detail {

enum class PrVariant { Gs, Hio };

inline ReconstructionResult pr_reconstruct(const Hologram& hologram, const PrConfig& cfg,
                                           PrVariant variant) {
  const auto t0 = std::chrono::steady_clock::now();
  hologram.validate();
  cfg.validate(hologram.config.height, hologram.config.width);
  const OpticalConfig& ocfg = hologram.config;
  const int h = ocfg.height;
  const int w = ocfg.width;
  const double z = ocfg.distance_z;

  Grid<double> measured_modulus(h, w);
  for (std::size_t i = 0; i < measured_modulus.size(); ++i)
    measured_modulus[i] = std::sqrt(std::max(hologram.intensity[i], 0.0));

  // Warm start from the naive reconstruction, constrained to the support.
  Grid<cdouble> estimate = backpropagate(hologram).values;
  for (std::size_t i = 0; i < estimate.size(); ++i)
    if (cfg.support.outside[i]) estimate[i] = 0.0;

  ReconstructionResult result;
  result.method_tag = variant == PrVariant::Gs ? "gs" : "hio";
  result.loss_history.reserve(cfg.iterations);

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    // Sensor plane: scattered wave plus unit reference.
    Grid<cdouble> sensor = detail::propagate_grid(estimate, ocfg, z, detail::KernelMode::Forward);
    for (auto& v : sensor) v += 1.0;

    double err = 0.0;
    for (std::size_t i = 0; i < sensor.size(); ++i) {
      const double d = std::abs(sensor[i]) - measured_modulus[i];
      err += d * d;
    }
    result.loss_history.push_back(std::sqrt(err / double(sensor.size())));

    // Replace modulus, keep phase.
    for (std::size_t i = 0; i < sensor.size(); ++i) {
      const double m = std::abs(sensor[i]);
      sensor[i] = m > 0.0 ? sensor[i] * (measured_modulus[i] / m)
                          : cdouble{measured_modulus[i], 0.0};
    }
    for (auto& v : sensor) v -= 1.0;
    Grid<cdouble> updated = detail::propagate_grid(sensor, ocfg, -z, detail::KernelMode::Forward);

    // Object-plane constraint.
    if (variant == PrVariant::Gs) {
      for (std::size_t i = 0; i < updated.size(); ++i)
        if (cfg.support.outside[i]) updated[i] = 0.0;
      estimate = std::move(updated);
    } else {
      for (std::size_t i = 0; i < updated.size(); ++i)
        if (cfg.support.outside[i]) updated[i] = estimate[i] - cfg.beta * updated[i];
      estimate = std::move(updated);
    }
  }

  result.amplitude = Grid<double>(h, w);
  result.phase = Grid<double>(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const cdouble t = 1.0 + estimate(y, x);
      result.amplitude(y, x) = std::clamp(std::abs(t), 0.0, 1.0);
      result.phase(y, x) = std::arg(t);  // already wrapped to [-pi, pi]
    }
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace detail

// Gerchberg-Saxton error reduction: modulus projection at the sensor plane,
// zero outside the support at the object plane.
inline ReconstructionResult gs_reconstruct(const Hologram& hologram, const PrConfig& cfg) {
  return detail::pr_reconstruct(hologram, cfg, detail::PrVariant::Gs);
}

// Hybrid input-output: same loop, relaxed feedback update outside the support.
inline ReconstructionResult hio_reconstruct(const Hologram& hologram, const PrConfig& cfg) {
  return detail::pr_reconstruct(hologram, cfg, detail::PrVariant::Hio);
}

// Object-plane complex estimate of a single GS/HIO iteration from a given
// start; exposed for the algebraic unit tests.
inline Grid<cdouble> pr_single_iteration(const Hologram& hologram, const SupportMask& support,
                                         const Grid<cdouble>& start, bool hio, double beta) {
  const OpticalConfig& ocfg = hologram.config;
  Grid<cdouble> sensor =
      detail::propagate_grid(start, ocfg, ocfg.distance_z, detail::KernelMode::Forward);
  for (auto& v : sensor) v += 1.0;
  for (std::size_t i = 0; i < sensor.size(); ++i) {
    const double m = std::abs(sensor[i]);
    const double target = std::sqrt(std::max(hologram.intensity[i], 0.0));
    sensor[i] = m > 0.0 ? sensor[i] * (target / m) : cdouble{target, 0.0};
  }
  for (auto& v : sensor) v -= 1.0;
  Grid<cdouble> updated =
      detail::propagate_grid(sensor, ocfg, -ocfg.distance_z, detail::KernelMode::Forward);
  for (std::size_t i = 0; i < updated.size(); ++i)
    if (support.outside[i]) updated[i] = hio ? start[i] - beta * updated[i] : cdouble{0.0, 0.0};
  return updated;
}

}  // namespace holo
