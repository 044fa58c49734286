// Exhaustive grid search over binary encoder kernels.
//
// Independent of the alternating minimizers: the objective is evaluated
// in closed form from entropies of the induced laws, never through the
// auxiliary-Q machinery. Used to validate solver outputs.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdregion/bt.hpp"
#include "rdregion/ceo.hpp"
#include "rdregion/kernels.hpp"

namespace rdregion::oracle {

struct GridSpec {
  /// Spacing of the grid on each kernel parameter; 1/step must be an integer.
  double step = 0.02;
  /// Maximum number of kernel pairs evaluated.
  std::uint64_t max_cells = 20'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : std::runtime_error("oracle grid needs " + std::to_string(required) + " cells, budget is " +
                           std::to_string(budget)),
        required_(required) {}
  std::uint64_t required() const { return required_; }

 private:
  std::uint64_t required_;
};

struct OracleResult {
  /// Minimum objective over the grid, bits.
  double f_min = 0.0;
  EncoderKernels kernels;
  /// (p(u1=0|y1=0), p(u1=0|y1=1), p(u2=0|y2=0), p(u2=0|y2=1)).
  std::array<double, 4> params{};
  std::uint64_t cells = 0;
};

namespace detail {

inline double h(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

inline std::size_t grid_points(const GridSpec& g) {
  if (!(g.step > 0.0 && g.step <= 1.0)) throw std::invalid_argument("GridSpec: step must lie in (0, 1]");
  const double n = std::round(1.0 / g.step);
  if (std::abs(n * g.step - 1.0) > 1e-9) throw std::invalid_argument("GridSpec: step must divide 1");
  return static_cast<std::size_t>(n) + 1;
}

inline void check_budget(std::size_t pts, const GridSpec& g) {
  const std::uint64_t cells = static_cast<std::uint64_t>(pts) * pts * pts * pts;
  if (cells > g.max_cells) throw BudgetExceeded(cells, g.max_cells);
}

inline CondPmf binary_kernel(double a, double b) { return CondPmf(2, 2, {a, 1.0 - a, b, 1.0 - b}); }

/// One binary kernel on the grid with its y-averaged output entropy.
struct GridKernel {
  double a, b;          // p(u=0|y=0), p(u=0|y=1)
  double cond_entropy;  // H(U|Y) in bits
};

inline std::vector<GridKernel> grid_kernels(std::size_t pts, double p0, double p1) {
  std::vector<GridKernel> out;
  out.reserve(pts * pts);
  const double n = static_cast<double>(pts - 1);
  for (std::size_t i = 0; i < pts; ++i)
    for (std::size_t j = 0; j < pts; ++j) {
      const double a = static_cast<double>(i) / n, b = static_cast<double>(j) / n;
      out.push_back({a, b, p0 * (h(a) + h(1.0 - a)) + p1 * (h(b) + h(1.0 - b))});
    }
  return out;
}

/// Best cell of one contiguous slab of first-kernel indices. Cells are
/// visited in lexicographic order and only strict improvements are kept.
struct SlabBest {
  double f = std::numeric_limits<double>::infinity();
  std::size_t i1 = 0, i2 = 0;
};

template <class Eval>
std::pair<std::size_t, std::size_t> reduce(std::size_t n1, std::size_t n2, unsigned threads, Eval eval,
                                           double& f_min) {
  std::vector<SlabBest> slab(n1);
  parallel_for(n1, threads, [&](std::size_t i1) {
    SlabBest best;
    for (std::size_t i2 = 0; i2 < n2; ++i2) {
      const double f = eval(i1, i2);
      if (f < best.f) best = {f, i1, i2};
    }
    slab[i1] = best;
  });
  SlabBest best;
  for (const auto& s : slab)
    if (s.f < best.f) best = s;
  f_min = best.f;
  return {best.i1, best.i2};
}

}  // namespace detail

/// Minimum of F_s(P) over the grid {0, step, ..., 1}^4 of binary kernels.
/// Ties resolve to the lexicographically smallest parameter vector.
inline OracleResult grid_min_ceo(const ceo::CeoSourceModel& m, const ceo::CeoTradeoff& s, const GridSpec& spec = {},
                                 unsigned threads = 0) {
  if (m.y1_size() != 2 || m.y2_size() != 2) throw std::invalid_argument("grid_min_ceo: binary observations only");
  const std::size_t pts = detail::grid_points(spec);
  detail::check_budget(pts, spec);
  const auto k1 = detail::grid_kernels(pts, m.py1()[0], m.py1()[1]);
  const auto k2 = detail::grid_kernels(pts, m.py2()[0], m.py2()[1]);
  const std::size_t nx = m.x_size();

  // p(u=0|x) for every grid kernel.
  auto u0_given_x = [&](const std::vector<detail::GridKernel>& ks, const CondPmf& ch) {
    std::vector<double> t(ks.size() * nx);
    for (std::size_t i = 0; i < ks.size(); ++i)
      for (std::size_t x = 0; x < nx; ++x) t[i * nx + x] = ch(x, 0) * ks[i].a + ch(x, 1) * ks[i].b;
    return t;
  };
  const auto t1 = u0_given_x(k1, m.y1_given_x());
  const auto t2 = u0_given_x(k2, m.y2_given_x());
  const auto px = m.px().mass();

  auto eval = [&](std::size_t i1, std::size_t i2) {
    // H(U1,U2,X), H(U1,U2), H(U1), H(U2)
    double h_ux = 0.0;
    double p_uu[4] = {0, 0, 0, 0};
    for (std::size_t x = 0; x < nx; ++x) {
      const double a = t1[i1 * nx + x], b = t2[i2 * nx + x];
      const double c[4] = {a * b, a * (1 - b), (1 - a) * b, (1 - a) * (1 - b)};
      for (int u = 0; u < 4; ++u) {
        const double p = px[x] * c[u];
        p_uu[u] += p;
        h_ux += detail::h(p);
      }
    }
    double h_uu = 0.0;
    for (double p : p_uu) h_uu += detail::h(p);
    const double pu1 = p_uu[0] + p_uu[1], pu2 = p_uu[0] + p_uu[2];
    const double h_u1 = detail::h(pu1) + detail::h(1 - pu1);
    const double h_u2 = detail::h(pu2) + detail::h(1 - pu2);
    const double d = h_ux - h_uu;
    if (s.region == 1)  // I(Y1;U1|U2) = H(U1,U2) - H(U2) - H(U1|Y1)
      return d + s.s1 * (h_uu - h_u2 - k1[i1].cond_entropy) + s.s2 * (h_u2 - k2[i2].cond_entropy);
    return d + s.s1 * (h_u1 - k1[i1].cond_entropy) + s.s2 * (h_uu - h_u1 - k2[i2].cond_entropy);
  };

  OracleResult res;
  const auto [i1, i2] = detail::reduce(k1.size(), k2.size(), threads, eval, res.f_min);
  res.params = {k1[i1].a, k1[i1].b, k2[i2].a, k2[i2].b};
  res.kernels = {detail::binary_kernel(k1[i1].a, k1[i1].b), detail::binary_kernel(k2[i2].a, k2[i2].b)};
  res.cells = static_cast<std::uint64_t>(k1.size()) * k2.size();
  return res;
}

/// Minimum of F_beta(P) over the binary kernel grid.
inline OracleResult grid_min_bt(const bt::BtSourceModel& m, const bt::BtTradeoff& b, const GridSpec& spec = {},
                                unsigned threads = 0) {
  if (m.y1_size() != 2 || m.y2_size() != 2) throw std::invalid_argument("grid_min_bt: binary sources only");
  const std::size_t pts = detail::grid_points(spec);
  detail::check_budget(pts, spec);
  const auto k1 = detail::grid_kernels(pts, m.py1()[0], m.py1()[1]);
  const auto k2 = detail::grid_kernels(pts, m.py2()[0], m.py2()[1]);
  const double pyy[2][2] = {{m.p(0, 0), m.p(0, 1)}, {m.p(1, 0), m.p(1, 1)}};

  auto eval = [&](std::size_t i1, std::size_t i2) {
    const double e1[2][2] = {{k1[i1].a, 1 - k1[i1].a}, {k1[i1].b, 1 - k1[i1].b}};  // [y1][u1]
    const double e2[2][2] = {{k2[i2].a, 1 - k2[i2].a}, {k2[i2].b, 1 - k2[i2].b}};
    double p_u[2][2] = {{0, 0}, {0, 0}};
    double p_uy1[2][2][2] = {}, p_uy2[2][2][2] = {};
    for (int y1 = 0; y1 < 2; ++y1)
      for (int y2 = 0; y2 < 2; ++y2)
        for (int u1 = 0; u1 < 2; ++u1)
          for (int u2 = 0; u2 < 2; ++u2) {
            const double p = pyy[y1][y2] * e1[y1][u1] * e2[y2][u2];
            p_u[u1][u2] += p;
            p_uy1[u1][u2][y1] += p;
            p_uy2[u1][u2][y2] += p;
          }
    double h_uu = 0.0, h_uy1 = 0.0, h_uy2 = 0.0;
    for (int u1 = 0; u1 < 2; ++u1)
      for (int u2 = 0; u2 < 2; ++u2) {
        h_uu += detail::h(p_u[u1][u2]);
        for (int y = 0; y < 2; ++y) {
          h_uy1 += detail::h(p_uy1[u1][u2][y]);
          h_uy2 += detail::h(p_uy2[u1][u2][y]);
        }
      }
    const double pu1 = p_u[0][0] + p_u[0][1], pu2 = p_u[0][0] + p_u[1][0];
    const double h_u1 = detail::h(pu1) + detail::h(1 - pu1);
    const double h_u2 = detail::h(pu2) + detail::h(1 - pu2);
    const double d = b.alpha * (h_uy1 - h_uu) + b.abar() * (h_uy2 - h_uu);
    if (b.region == 1)
      return d + b.s1 * (h_uu - h_u2 - k1[i1].cond_entropy) + b.s2 * (h_u2 - k2[i2].cond_entropy);
    return d + b.s1 * (h_u1 - k1[i1].cond_entropy) + b.s2 * (h_uu - h_u1 - k2[i2].cond_entropy);
  };

  OracleResult res;
  const auto [i1, i2] = detail::reduce(k1.size(), k2.size(), threads, eval, res.f_min);
  res.params = {k1[i1].a, k1[i1].b, k2[i2].a, k2[i2].b};
  res.kernels = {detail::binary_kernel(k1[i1].a, k1[i1].b), detail::binary_kernel(k2[i2].a, k2[i2].b)};
  res.cells = static_cast<std::uint64_t>(k1.size()) * k2.size();
  return res;
}

}  // namespace rdregion::oracle
