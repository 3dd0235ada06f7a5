#pragma once

#include <cmath>
#include <cstdint>

#include "holo/errors.hpp"
#include "holo/fft.hpp"
#include "holo/grid.hpp"
#include "holo/rng.hpp"

namespace holo {

// Acquisition geometry. All lengths are meters; wave number is derived.
struct OpticalConfig {
  double wavelength = 532e-9;
  double distance_z = 0.0;  // signed object-to-sensor distance
  double pixel_pitch = 4e-6;
  int height = 0;
  int width = 0;

  double wave_number() const { return 2.0 * M_PI / wavelength; }

  void validate() const {
    if (!(wavelength > 0.0)) throw ConfigError("optical: wavelength must be > 0");
    if (!(pixel_pitch > 0.0)) throw ConfigError("optical: pixel_pitch must be > 0");
    if (height < 2 || width < 2) throw ConfigError("optical: grid must be at least 2x2");
    if (height % 2 != 0 || width % 2 != 0)
      throw ConfigError("optical: grid dimensions must be even");
  }
};

// Complex wavefront samples bound to an acquisition geometry.
struct ComplexField {
  Grid<cdouble> values;
  OpticalConfig config;

  void validate() const {
    config.validate();
    if (values.height() != config.height || values.width() != config.width)
      throw ConfigError("field: grid shape does not match config");
    if (!all_finite(values)) throw NumericError("field: non-finite values");
  }
};

// Recorded intensity, unit-mean normalized after synthesis.
struct Hologram {
  Grid<double> intensity;
  OpticalConfig config;

  void validate() const {
    config.validate();
    if (intensity.height() != config.height || intensity.width() != config.width)
      throw ConfigError("hologram: grid shape does not match config");
    if (!all_finite(intensity)) throw NumericError("hologram: non-finite intensity");
    for (double v : intensity)
      if (v < 0.0) throw NumericError("hologram: negative intensity");
  }
};

struct SynthesisOptions {
  double noise_std = 0.0;  // std of additive Gaussian noise on intensity
  std::uint64_t seed = 0;
  bool zero_pad = false;  // 2x zero padding to suppress circular wrap-around

  void validate() const {
    if (!(noise_std >= 0.0)) throw ConfigError("synthesis: noise_std must be >= 0");
  }
};

// Angular-spectrum transfer kernel H(fx, fy) = exp(i k z sqrt(1 - (l fx)^2 - (l fy)^2))
// on the propagating disc, 0 on evanescent frequencies.
inline ComplexField transfer_kernel(const OpticalConfig& config, double z) {
  config.validate();
  ComplexField kernel{Grid<cdouble>(config.height, config.width), config};
  kernel.config.distance_z = z;
  const double k = config.wave_number();
  const double lambda = config.wavelength;
  for (int y = 0; y < config.height; ++y) {
    const double fy = fft_frequency(y, config.height, config.pixel_pitch);
    const double ly2 = (lambda * fy) * (lambda * fy);
    for (int x = 0; x < config.width; ++x) {
      const double fx = fft_frequency(x, config.width, config.pixel_pitch);
      const double s = 1.0 - (lambda * fx) * (lambda * fx) - ly2;
      if (s < 0.0) continue;  // evanescent: kernel entry stays 0
      const double phase = k * z * std::sqrt(s);
      kernel.values(y, x) = {std::cos(phase), std::sin(phase)};
    }
  }
  return kernel;
}

namespace detail {

enum class KernelMode { Forward, Adjoint };

inline Grid<cdouble> propagate_grid(const Grid<cdouble>& in, const OpticalConfig& config,
                                    double z, KernelMode mode) {
  Grid<cdouble> spectrum = in;
  fft_2d(spectrum, false);
  const double k = config.wave_number();
  const double lambda = config.wavelength;
  for (int y = 0; y < in.height(); ++y) {
    const double fy = fft_frequency(y, in.height(), config.pixel_pitch);
    const double ly2 = (lambda * fy) * (lambda * fy);
    for (int x = 0; x < in.width(); ++x) {
      const double fx = fft_frequency(x, in.width(), config.pixel_pitch);
      const double s = 1.0 - (lambda * fx) * (lambda * fx) - ly2;
      if (s < 0.0) {
        spectrum(y, x) = 0.0;
        continue;
      }
      double phase = k * z * std::sqrt(s);
      if (mode == KernelMode::Adjoint) phase = -phase;
      spectrum(y, x) *= cdouble{std::cos(phase), std::sin(phase)};
    }
  }
  fft_2d(spectrum, true);
  return spectrum;
}

}  // namespace detail

// Free-space propagation over distance z (signed).
inline ComplexField propagate(const ComplexField& field, double z) {
  field.validate();
  ComplexField out{detail::propagate_grid(field.values, field.config, z, detail::KernelMode::Forward),
                   field.config};
  return out;
}

// Adjoint of propagate(.., z) under the real inner product: multiplication by
// the conjugated kernel. Coincides with propagate(.., -z) since |H| = 1 on the
// propagating disc; kept separate so solver code states intent.
inline Grid<cdouble> propagate_adjoint(const Grid<cdouble>& values, const OpticalConfig& config,
                                       double z) {
  return detail::propagate_grid(values, config, z, detail::KernelMode::Adjoint);
}

// Hologram of a complex transmittance object t = a*exp(i*phi) against a unit
// plane reference: I = |T(t - 1) + 1|^2 (+ optional sensor noise), clamped at
// zero and normalized to unit mean.
inline Hologram synthesize_hologram(const ComplexField& object, const SynthesisOptions& options) {
  object.validate();
  options.validate();
  const OpticalConfig& cfg = object.config;
  const int h = cfg.height;
  const int w = cfg.width;

  Grid<cdouble> sensor;  // scattered wave U at the sensor plane
  if (options.zero_pad) {
    OpticalConfig padded_cfg = cfg;
    padded_cfg.height = 2 * h;
    padded_cfg.width = 2 * w;
    Grid<cdouble> padded(2 * h, 2 * w, cdouble{0.0, 0.0});
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) padded(y + h / 2, x + w / 2) = object.values(y, x) - 1.0;
    Grid<cdouble> big =
        detail::propagate_grid(padded, padded_cfg, cfg.distance_z, detail::KernelMode::Forward);
    sensor = Grid<cdouble>(h, w);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) sensor(y, x) = big(y + h / 2, x + w / 2);
  } else {
    Grid<cdouble> scattered(h, w);
    for (std::size_t i = 0; i < scattered.size(); ++i) scattered[i] = object.values[i] - 1.0;
    sensor = detail::propagate_grid(scattered, cfg, cfg.distance_z, detail::KernelMode::Forward);
  }

  Grid<double> intensity(h, w);
  for (std::size_t i = 0; i < intensity.size(); ++i) {
    const cdouble total = sensor[i] + 1.0;  // add the unscattered reference
    intensity[i] = std::norm(total);
  }
  if (options.noise_std > 0.0) {
    Rng rng(options.seed);
    for (double& v : intensity) v += options.noise_std * rng.gaussian();
  }
  for (double& v : intensity) v = std::max(v, 0.0);
  const double mean = grid_mean(intensity);
  if (!(mean > 0.0)) throw NumericError("synthesize: zero-mean intensity");
  for (double& v : intensity) v /= mean;
  return Hologram{std::move(intensity), cfg};
}

// Overload that double-checks the caller's intended propagation distance.
inline Hologram synthesize_hologram(const ComplexField& object, double z,
                                    const SynthesisOptions& options) {
  if (z != object.config.distance_z)
    throw ConfigError("synthesize: requested distance differs from the object's config");
  return synthesize_hologram(object, options);
}

// Naive single-pass reconstruction: propagate (I - 1) back by -z. The result
// carries both the in-focus object deviation and its out-of-focus twin.
inline ComplexField backpropagate(const Hologram& hologram, double z) {
  hologram.validate();
  Grid<cdouble> deviation(hologram.config.height, hologram.config.width);
  for (std::size_t i = 0; i < deviation.size(); ++i)
    deviation[i] = cdouble{hologram.intensity[i] - 1.0, 0.0};
  return ComplexField{
      detail::propagate_grid(deviation, hologram.config, -z, detail::KernelMode::Forward),
      hologram.config};
}

inline ComplexField backpropagate(const Hologram& hologram) {
  return backpropagate(hologram, hologram.config.distance_z);
}

}  // namespace holo
