// Encoder kernels, solver options and the numerical helpers shared by the
// CEO and Berger-Tung alternating minimizers.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rdregion/prob.hpp"

namespace rdregion {

/// Arguments of log() below this value are clamped to it.
inline constexpr double kLogFloor = 1e-300;
/// Converts nats to bits.
inline constexpr double kBitsPerNat = 1.0 / std::numbers::ln2;

/// The pair of encoder test channels p(u1|y1), p(u2|y2).
struct EncoderKernels {
  CondPmf u1_given_y1;
  CondPmf u2_given_y2;
};

enum class InitMode { random_dirichlet, perturbed_identity };

/// Which kernel is refreshed first inside one iteration. "Lead" is the
/// encoder whose rate is conditioned on the other's description (encoder 1 in
/// region 1, encoder 2 in region 2); "anchor" is the other one.
enum class UpdateOrder { lead_first, anchor_first };

struct SolverOptions {
  int max_iters = 5000;
  /// Relative objective change that counts as converged.
  double tol = 1e-9;
  int restarts = 10;
  std::uint64_t rng_seed = 0;
  InitMode init = InitMode::random_dirichlet;
  UpdateOrder order = UpdateOrder::lead_first;
  /// Description alphabet sizes; 0 means |U_i| = |Y_i|.
  std::size_t u1_size = 0;
  std::size_t u2_size = 0;

  void validate() const {
    if (max_iters < 1) throw std::invalid_argument("SolverOptions: max_iters must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("SolverOptions: tol must be positive");
    if (restarts < 1) throw std::invalid_argument("SolverOptions: restarts must be positive");
  }
};

inline EncoderKernels swap_encoders(const EncoderKernels& k) { return {k.u2_given_y2, k.u1_given_y1}; }

/// Kernels that map every observation to description 0.
inline EncoderKernels constant_kernels(std::size_t y1, std::size_t u1, std::size_t y2, std::size_t u2) {
  return {CondPmf::constant(y1, Pmf::point_mass(u1, 0)), CondPmf::constant(y2, Pmf::point_mass(u2, 0))};
}

inline EncoderKernels identity_kernels(std::size_t y1, std::size_t y2) {
  return {CondPmf::identity(y1), CondPmf::identity(y2)};
}

// -- seeding -----------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Mixes a base seed with task coordinates into an independent stream seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(base);
  for (auto t : tags) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

using Rng = std::mt19937_64;

/// Uniform in (0, 1), built from raw engine bits so streams are identical
/// across standard libraries.
inline double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// One draw from a symmetric Dirichlet(1) law on n points.
inline std::vector<double> dirichlet1(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  double z = 0.0;
  for (auto& x : v) {
    x = -std::log(uniform_open(rng));
    z += x;
  }
  for (auto& x : v) x /= z;
  return v;
}

inline CondPmf random_kernel(Rng& rng, std::size_t given, std::size_t out) {
  std::vector<double> t;
  t.reserve(given * out);
  for (std::size_t g = 0; g < given; ++g) {
    auto r = dirichlet1(rng, out);
    t.insert(t.end(), r.begin(), r.end());
  }
  return CondPmf(given, out, std::move(t));
}

/// Identity-like kernel (y -> y mod out) mixed with 10% Dirichlet noise.
inline CondPmf perturbed_identity_kernel(Rng& rng, std::size_t given, std::size_t out) {
  std::vector<double> t;
  t.reserve(given * out);
  for (std::size_t g = 0; g < given; ++g) {
    auto r = dirichlet1(rng, out);
    for (std::size_t o = 0; o < out; ++o) t.push_back(0.9 * (o == g % out ? 1.0 : 0.0) + 0.1 * r[o]);
  }
  return CondPmf(given, out, std::move(t));
}

inline EncoderKernels initial_kernels(Rng& rng, InitMode mode, std::size_t y1, std::size_t u1, std::size_t y2,
                                      std::size_t u2) {
  if (mode == InitMode::perturbed_identity)
    return {perturbed_identity_kernel(rng, y1, u1), perturbed_identity_kernel(rng, y2, u2)};
  return {random_kernel(rng, y1, u1), random_kernel(rng, y2, u2)};
}

// -- numerics ----------------------------------------------------------------

/// Natural log with arguments below kLogFloor clamped; bumps `clamped` when
/// the clamp fires.
inline double guarded_log(double x, std::size_t& clamped) {
  if (x < kLogFloor) {
    ++clamped;
    return std::log(kLogFloor);
  }
  return std::log(x);
}

/// Row-wise softmax of a (given x out) table of log-weights, stabilized by
/// subtracting each row's maximum.
inline CondPmf softmax_rows(std::size_t given, std::size_t out, std::span<const double> logits) {
  std::vector<double> t(given * out);
  for (std::size_t g = 0; g < given; ++g) {
    const auto row = logits.subspan(g * out, out);
    const double mx = *std::max_element(row.begin(), row.end());
    if (!std::isfinite(mx))
      throw std::domain_error("softmax: row " + std::to_string(g) + " has no finite log-weight");
    double z = 0.0;
    for (std::size_t o = 0; o < out; ++o) z += (t[g * out + o] = std::exp(row[o] - mx));
    for (std::size_t o = 0; o < out; ++o) t[g * out + o] /= z;
  }
  return CondPmf(given, out, std::move(t));
}

/// Marginal of a kernel's output under input law `p`.
inline std::vector<double> push_forward(std::span<const double> p, const CondPmf& k) {
  std::vector<double> out(k.out_size(), 0.0);
  for (std::size_t g = 0; g < k.given_size(); ++g)
    for (std::size_t o = 0; o < k.out_size(); ++o) out[o] += p[g] * k(g, o);
  return out;
}

/// Composition a(b|x) then k(u|b): returns p(u|x).
inline std::vector<double> compose(const CondPmf& a, const CondPmf& k) {
  std::vector<double> out(a.given_size() * k.out_size(), 0.0);
  for (std::size_t x = 0; x < a.given_size(); ++x)
    for (std::size_t b = 0; b < a.out_size(); ++b) {
      const double w = a(x, b);
      if (w == 0.0) continue;
      for (std::size_t u = 0; u < k.out_size(); ++u) out[x * k.out_size() + u] += w * k(b, u);
    }
  return out;
}

/// Transposes a row-major (rows x cols) table.
inline std::vector<double> transpose(std::span<const double> t, std::size_t rows, std::size_t cols) {
  std::vector<double> out(t.size());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[c * rows + r] = t[r * cols + c];
  return out;
}

/// Convergence test used by both solvers.
inline bool relative_change_below(double previous, double current, double tol) {
  return std::abs(previous - current) / std::max(std::abs(current), 1.0) < tol;
}

// -- concurrency -------------------------------------------------------------

/// Worker count: explicit value, else hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs body(i) for i in [0, n) on up to `threads` workers. Tasks must write
/// only to their own slot; the first exception is rethrown after joining.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rdregion
