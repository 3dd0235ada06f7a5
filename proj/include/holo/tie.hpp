#pragma once

#include <cmath>
#include <vector>

#include "holo/errors.hpp"
#include "holo/fft.hpp"
#include "holo/grid.hpp"
#include "holo/optics.hpp"

namespace holo {

// Through-focus intensity samples, plane i at axial offset i * step_dz.
struct IntensityStack {
  std::vector<Grid<double>> planes;
  double step_dz = 0.0;
  OpticalConfig config;

  void validate() const {
    if (planes.size() < 2) throw ConfigError("stack: need at least 2 planes");
    if (!(step_dz > 0.0)) throw ConfigError("stack: step_dz must be > 0");
    for (const auto& p : planes)
      if (!p.same_shape(planes.front())) throw ConfigError("stack: plane shapes differ");
  }
};

struct PhaseMap {
  Grid<double> phase;  // radians, zero-mean gauge
};

// dI/dz per pixel. Two planes use a forward difference; three or more use the
// per-pixel least-squares slope of intensity against z.
inline Grid<double> axial_derivative(const IntensityStack& stack) {
  stack.validate();
  const int h = stack.planes.front().height();
  const int w = stack.planes.front().width();
  const int n = int(stack.planes.size());
  Grid<double> didz(h, w);
  if (n == 2) {
    for (std::size_t i = 0; i < didz.size(); ++i)
      didz[i] = (stack.planes[1][i] - stack.planes[0][i]) / stack.step_dz;
    return didz;
  }
  // z_i = i * dz; slope = sum((z_i - zbar) * I_i) / sum((z_i - zbar)^2)
  const double zbar = 0.5 * double(n - 1);
  double denom = 0.0;
  for (int i = 0; i < n; ++i) denom += (double(i) - zbar) * (double(i) - zbar);
  denom *= stack.step_dz;
  for (std::size_t p = 0; p < didz.size(); ++p) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += (double(i) - zbar) * stack.planes[i][p];
    didz[p] = acc / denom;
  }
  return didz;
}

// Transport-of-intensity phase recovery in the uniform-intensity regime:
// solves the Poisson equation nabla^2 phi = -(2 pi / (lambda I)) dI/dz
// spectrally, with the DC term nulled and a zero-mean output gauge.
// (The minus sign follows the exp(+ikz...) propagation convention used by
// this library; see axial transport of I = |u|^2 for u with that kernel.)
inline PhaseMap tie_solve(const Grid<double>& intensity, const Grid<double>& didz,
                          const OpticalConfig& config, bool* uniformity_warning = nullptr) {
  if (!intensity.same_shape(didz)) throw ConfigError("tie: shape mismatch");
  if (!all_finite(didz) || !all_finite(intensity)) throw NumericError("tie: non-finite input");
  const double mean_i = grid_mean(intensity);
  if (!(mean_i > 0.0)) throw ConfigError("tie: non-positive mean intensity");

  if (uniformity_warning) {
    double var = 0.0;
    for (double v : intensity) var += (v - mean_i) * (v - mean_i);
    var /= double(intensity.size());
    *uniformity_warning = std::sqrt(var) / mean_i > 0.2;
  }

  const int h = intensity.height();
  const int w = intensity.width();
  Grid<cdouble> rhs(h, w);
  const double scale = -2.0 * M_PI / config.wavelength;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    const double denom = std::max(intensity[i], 1e-12 * mean_i);
    rhs[i] = cdouble{scale * didz[i] / denom, 0.0};
  }

  fft_2d(rhs, false);
  for (int y = 0; y < h; ++y) {
    const double fy = fft_frequency(y, h, config.pixel_pitch);
    for (int x = 0; x < w; ++x) {
      const double fx = fft_frequency(x, w, config.pixel_pitch);
      const double lap = -4.0 * M_PI * M_PI * (fx * fx + fy * fy);
      rhs(y, x) = (lap == 0.0) ? cdouble{0.0, 0.0} : rhs(y, x) / lap;
    }
  }
  fft_2d(rhs, true);

  PhaseMap result{Grid<double>(h, w)};
  for (std::size_t i = 0; i < result.phase.size(); ++i) result.phase[i] = rhs[i].real();
  const double mean_phi = grid_mean(result.phase);
  for (double& v : result.phase) v -= mean_phi;
  return result;
}

// Simulated through-focus stack of a transmittance object: plane i holds
// |propagate(t, z_start + i*dz)|^2. Used by tests and the CLI simulate verb.
inline IntensityStack simulate_stack(const ComplexField& object, double z_start, double dz,
                                     int plane_count) {
  object.validate();
  if (plane_count < 2) throw ConfigError("stack: need at least 2 planes");
  if (!(dz > 0.0)) throw ConfigError("stack: step must be > 0");
  IntensityStack stack;
  stack.step_dz = dz;
  stack.config = object.config;
  stack.planes.reserve(plane_count);
  for (int i = 0; i < plane_count; ++i) {
    const double z = z_start + double(i) * dz;
    Grid<cdouble> u =
        detail::propagate_grid(object.values, object.config, z, detail::KernelMode::Forward);
    Grid<double> plane(object.config.height, object.config.width);
    for (std::size_t p = 0; p < plane.size(); ++p) plane[p] = std::norm(u[p]);
    stack.planes.push_back(std::move(plane));
  }
  return stack;
}

}  // namespace holo
