#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "holo/errors.hpp"
#include "holo/grid.hpp"

namespace holo {

namespace detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline int next_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Chirp exponent exp(-i*pi*k^2/n) evaluated with k^2 reduced mod 2n so the
// argument stays small for large grids (exp is 2n-periodic in k^2).
inline cdouble chirp_factor(std::int64_t k, std::int64_t n, double sign) {
  std::int64_t r = k % (2 * n);
  std::int64_t q = (r * r) % (2 * n);
  double arg = sign * M_PI * double(q) / double(n);
  return {std::cos(arg), std::sin(arg)};
}

struct FftPlan {
  int n = 0;
  // Power-of-two path.
  std::vector<int> bitrev;
  std::vector<cdouble> twiddle;  // exp(-2*pi*i*k/n), k < n/2
  // Bluestein path (arbitrary n): DFT becomes a circular convolution of
  // length m (power of two >= 2n-1) against a fixed chirp.
  int m = 0;
  std::vector<cdouble> chirp;      // exp(-i*pi*k^2/n)
  std::vector<cdouble> chirp_fft;  // forward FFT_m of the wrapped inverse chirp
  std::shared_ptr<const FftPlan> sub;
};

inline void fft_pow2_inplace(cdouble* x, const FftPlan& plan) {
  const int n = plan.n;
  for (int i = 0; i < n; ++i) {
    int j = plan.bitrev[i];
    if (j > i) std::swap(x[i], x[j]);
  }
  for (int half = 1; half < n; half <<= 1) {
    const int step = n / (2 * half);
    for (int base = 0; base < n; base += 2 * half) {
      for (int j = 0; j < half; ++j) {
        const cdouble w = plan.twiddle[j * step];
        const cdouble t = w * x[base + half + j];
        const cdouble u = x[base + j];
        x[base + j] = u + t;
        x[base + half + j] = u - t;
      }
    }
  }
}

inline std::shared_ptr<const FftPlan> make_plan(int n);

inline std::shared_ptr<const FftPlan> get_plan(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const FftPlan>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto plan = make_plan(n);
  cache.emplace(n, plan);
  return plan;
}

inline std::shared_ptr<const FftPlan> make_plan(int n) {
  if (n < 1) throw ConfigError("fft: transform length must be >= 1");
  auto plan = std::make_shared<FftPlan>();
  plan->n = n;
  if (is_pow2(n)) {
    plan->bitrev.resize(n);
    int bits = 0;
    while ((1 << bits) < n) ++bits;
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1) << (bits - 1 - b);
      plan->bitrev[i] = r;
    }
    plan->twiddle.resize(std::max(1, n / 2));
    for (int k = 0; k < n / 2; ++k) {
      double arg = -2.0 * M_PI * double(k) / double(n);
      plan->twiddle[k] = {std::cos(arg), std::sin(arg)};
    }
    return plan;
  }
  plan->m = next_pow2(2 * n - 1);
  plan->sub = get_plan(plan->m);
  plan->chirp.resize(n);
  std::vector<cdouble> b(plan->m, cdouble{0.0, 0.0});
  for (int k = 0; k < n; ++k) {
    plan->chirp[k] = chirp_factor(k, n, -1.0);
    cdouble bk = chirp_factor(k, n, +1.0);
    b[k] = bk;
    if (k > 0) b[plan->m - k] = bk;
  }
  fft_pow2_inplace(b.data(), *plan->sub);
  plan->chirp_fft = std::move(b);
  return plan;
}

inline void dft_forward_inplace(cdouble* x, const FftPlan& plan) {
  if (plan.m == 0) {
    fft_pow2_inplace(x, plan);
    return;
  }
  const int n = plan.n;
  const int m = plan.m;
  std::vector<cdouble> a(m, cdouble{0.0, 0.0});
  for (int k = 0; k < n; ++k) a[k] = x[k] * plan.chirp[k];
  fft_pow2_inplace(a.data(), *plan.sub);
  for (int k = 0; k < m; ++k) a[k] *= plan.chirp_fft[k];
  // Inverse FFT of length m via the conjugation identity.
  for (auto& v : a) v = std::conj(v);
  fft_pow2_inplace(a.data(), *plan.sub);
  const double inv_m = 1.0 / double(m);
  for (int k = 0; k < n; ++k) x[k] = std::conj(a[k]) * inv_m * plan.chirp[k];
}

}  // namespace detail

// In-place 1D DFT of length n. Forward uses exp(-2*pi*i*jk/n); inverse
// divides by n so that fft followed by inverse fft is the identity.
inline void fft_1d(cdouble* x, int n, bool inverse) {
  auto plan = detail::get_plan(n);
  if (!inverse) {
    detail::dft_forward_inplace(x, *plan);
    return;
  }
  for (int i = 0; i < n; ++i) x[i] = std::conj(x[i]);
  detail::dft_forward_inplace(x, *plan);
  const double inv_n = 1.0 / double(n);
  for (int i = 0; i < n; ++i) x[i] = std::conj(x[i]) * inv_n;
}

// In-place 2D DFT: rows, then columns.
inline void fft_2d(Grid<cdouble>& g, bool inverse) {
  const int h = g.height();
  const int w = g.width();
  for (int y = 0; y < h; ++y) fft_1d(g.row(y), w, inverse);
  std::vector<cdouble> col(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) col[y] = g(y, x);
    fft_1d(col.data(), h, inverse);
    for (int y = 0; y < h; ++y) g(y, x) = col[y];
  }
}

// DFT sample frequency for bin index k of an n-point transform with the
// given sample spacing (usual fftfreq layout: 0, 1, ..., n/2-1, -n/2, ...).
inline double fft_frequency(int k, int n, double spacing) {
  int kk = (k < (n + 1) / 2) ? k : k - n;
  return double(kk) / (double(n) * spacing);
}

}  // namespace holo
