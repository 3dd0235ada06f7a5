#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "holo/errors.hpp"
#include "holo/grid.hpp"
#include "holo/optics.hpp"
#include "holo/result.hpp"
#include "holo/tv.hpp"

namespace holo {

struct TwistConfig {
  double tau = 0.05;  // TV weight
  int iterations = 200;
  // Two-step weights from the spectral heuristic with condition estimate 1e-2.
  double alpha = 2.0 / (1.0 + std::sqrt(1.0 - 1e-2));
  double beta_twist = 2.0 * (2.0 / (1.0 + std::sqrt(1.0 - 1e-2))) / (1.0 + 1e-2);
  int tv_inner_iters = 10;

  void validate() const {
    if (!(tau > 0.0)) throw ConfigError("twist: tau must be > 0");
    if (iterations < 1) throw ConfigError("twist: iterations must be >= 1");
    if (tv_inner_iters < 1) throw ConfigError("twist: tv_inner_iters must be >= 1");
  }
};

namespace detail {

// Linearized hologram model B(rho) = 2 Re[T(rho)] for real object deviation
// rho, and its adjoint. ||B||^2 <= 4 since |H| = 1 on the propagating disc.
inline Grid<double> twist_forward(const Grid<double>& rho, const OpticalConfig& cfg) {
  Grid<cdouble> c(rho.height(), rho.width());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = cdouble{rho[i], 0.0};
  Grid<cdouble> u = propagate_grid(c, cfg, cfg.distance_z, KernelMode::Forward);
  Grid<double> out(rho.height(), rho.width());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * u[i].real();
  return out;
}

inline Grid<double> twist_adjoint(const Grid<double>& r, const OpticalConfig& cfg) {
  Grid<cdouble> c(r.height(), r.width());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = cdouble{r[i], 0.0};
  Grid<cdouble> u = propagate_grid(c, cfg, cfg.distance_z, KernelMode::Adjoint);
  Grid<double> out(r.height(), r.width());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * u[i].real();
  return out;
}

}  // namespace detail

// Objective of the compressive solver: 0.5 * ||y - B(rho)||^2 + tau * TV(rho)
// with y = 1 - I_H, so that nonnegative absorption rho (scattered component
// t - 1 = -rho) is the consistent minimizer.
inline double twist_objective(const Grid<double>& rho, const Grid<double>& y,
                              const OpticalConfig& cfg, double tau) {
  Grid<double> pred = detail::twist_forward(rho, cfg);
  double fid = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = y[i] - pred[i];
    fid += d * d;
  }
  return 0.5 * fid + tau * tv_norm(rho);
}

// Two-step iterative shrinkage/thresholding over the linearized model, with a
// TV proximal step (Chambolle) and nonnegative object deviation. Falls back to
// a plain IST step whenever the two-step candidate would raise the objective.
inline ReconstructionResult twist_reconstruct(const Hologram& hologram, const TwistConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  hologram.validate();
  cfg.validate();
  const OpticalConfig& ocfg = hologram.config;
  const int h = ocfg.height;
  const int w = ocfg.width;

  Grid<double> y(h, w);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 1.0 - hologram.intensity[i];

  const double step = 0.25;  // 1/L with L = ||B||^2 = 4

  auto ist_step = [&](const Grid<double>& x) {
    Grid<double> pred = detail::twist_forward(x, ocfg);
    for (std::size_t i = 0; i < pred.size(); ++i) pred[i] -= y[i];  // residual B(x) - y
    Grid<double> grad = detail::twist_adjoint(pred, ocfg);
    Grid<double> moved(h, w);
    for (std::size_t i = 0; i < moved.size(); ++i) moved[i] = x[i] - step * grad[i];
    Grid<double> denoised = tv_denoise(moved, step * cfg.tau, cfg.tv_inner_iters);
    for (double& v : denoised) v = std::max(v, 0.0);  // absorption-only deviation
    return denoised;
  };

  Grid<double> x_prev(h, w, 0.0);
  Grid<double> x_curr(h, w, 0.0);
  double obj_curr = twist_objective(x_curr, y, ocfg, cfg.tau);
  const double obj_initial = obj_curr;

  ReconstructionResult result;
  result.method_tag = "cs";
  result.loss_history.reserve(cfg.iterations);

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    Grid<double> gamma = ist_step(x_curr);
    Grid<double> candidate(h, w);
    if (iter == 0) {
      candidate = gamma;
    } else {
      for (std::size_t i = 0; i < candidate.size(); ++i)
        candidate[i] = (1.0 - cfg.alpha) * x_prev[i] + (cfg.alpha - cfg.beta_twist) * x_curr[i] +
                       cfg.beta_twist * gamma[i];
      for (double& v : candidate) v = std::max(v, 0.0);
    }
    double obj_candidate = twist_objective(candidate, y, ocfg, cfg.tau);
    if (obj_candidate > obj_curr) {
      candidate = gamma;  // monotone fallback: plain IST
      obj_candidate = twist_objective(candidate, y, ocfg, cfg.tau);
      if (obj_candidate > obj_curr) {
        candidate = x_curr;  // keep the iterate rather than increase the objective
        obj_candidate = obj_curr;
      }
    }
    x_prev = std::move(x_curr);
    x_curr = std::move(candidate);
    obj_curr = obj_candidate;
    result.loss_history.push_back(obj_curr);

    if (!(obj_curr <= 10.0 * obj_initial) || !std::isfinite(obj_curr))
      throw NumericError("twist: objective diverged at iteration " + std::to_string(iter + 1) +
                         " (value " + std::to_string(obj_curr) + ", initial " +
                         std::to_string(obj_initial) + ")");
  }

  result.amplitude = Grid<double>(h, w);
  result.phase = Grid<double>(h, w, 0.0);  // real absorption model carries no phase
  for (std::size_t i = 0; i < x_curr.size(); ++i)
    result.amplitude[i] = std::clamp(1.0 - x_curr[i], 0.0, 1.0);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace holo
