// Shared fixtures for the test suites: random instances and reference
// evaluations written independently of the library's solver paths.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rdregion/bt.hpp"
#include "rdregion/ceo.hpp"
#include "rdregion/sources.hpp"

namespace testing_support {

using namespace rdregion;

inline double h2(double p) { return p <= 0.0 || p >= 1.0 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

inline std::vector<double> random_simplex(std::mt19937_64& g, std::size_t n, double floor = 0.0) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (auto& x : v) s += (x = e(g) + floor);
  for (auto& x : v) x /= s;
  return v;
}

inline CondPmf random_cond(std::mt19937_64& g, std::size_t given, std::size_t out, double floor = 0.0) {
  std::vector<double> t;
  for (std::size_t r = 0; r < given; ++r) {
    const auto row = random_simplex(g, out, floor);
    t.insert(t.end(), row.begin(), row.end());
  }
  return CondPmf(given, out, std::move(t));
}

inline ceo::CeoSourceModel random_ceo(std::mt19937_64& g, std::size_t nx = 2, std::size_t n1 = 2, std::size_t n2 = 2) {
  return {Pmf(random_simplex(g, nx, 0.05)), random_cond(g, nx, n1, 0.05), random_cond(g, nx, n2, 0.05)};
}

inline bt::BtSourceModel random_bt(std::mt19937_64& g, std::size_t n1 = 2, std::size_t n2 = 2) {
  return bt::BtSourceModel::from_table(n1, n2, random_simplex(g, n1 * n2, 0.05));
}

inline EncoderKernels random_kernels(std::mt19937_64& g, std::size_t y1, std::size_t u1, std::size_t y2,
                                     std::size_t u2, double floor = 0.0) {
  return {random_cond(g, y1, u1, floor), random_cond(g, y2, u2, floor)};
}

inline ceo::CeoAuxiliaries random_ceo_aux(std::mt19937_64& g, std::size_t nx, std::size_t nu1, std::size_t nu2) {
  return {random_cond(g, nu1 * nu2, nx, 0.05), JointPmf({{"U1", nu1}, {"U2", nu2}}, random_simplex(g, nu1 * nu2, 0.05)),
          Pmf(random_simplex(g, nu1, 0.05)), Pmf(random_simplex(g, nu2, 0.05))};
}

inline bt::BtAuxiliaries random_bt_aux(std::mt19937_64& g, std::size_t n1, std::size_t n2, std::size_t nu1,
                                       std::size_t nu2) {
  return {random_cond(g, nu1 * nu2, n1, 0.05), random_cond(g, nu1 * nu2, n2, 0.05),
          JointPmf({{"U1", nu1}, {"U2", nu2}}, random_simplex(g, nu1 * nu2, 0.05)), Pmf(random_simplex(g, nu1, 0.05)),
          Pmf(random_simplex(g, nu2, 0.05))};
}

/// Brute-force p(x, y1, y2, u1, u2) as nested arrays [x][y1][y2][u1][u2].
struct CeoBrute {
  std::size_t nx, n1, n2, v1, v2;
  std::vector<double> t;
  double operator()(std::size_t x, std::size_t a, std::size_t b, std::size_t u, std::size_t w) const {
    return t[(((x * n1 + a) * n2 + b) * v1 + u) * v2 + w];
  }
};

inline CeoBrute ceo_brute(const ceo::CeoSourceModel& m, const EncoderKernels& k) {
  CeoBrute c{m.x_size(), m.y1_size(), m.y2_size(), k.u1_given_y1.out_size(), k.u2_given_y2.out_size(), {}};
  for (std::size_t x = 0; x < c.nx; ++x)
    for (std::size_t a = 0; a < c.n1; ++a)
      for (std::size_t b = 0; b < c.n2; ++b)
        for (std::size_t u = 0; u < c.v1; ++u)
          for (std::size_t w = 0; w < c.v2; ++w)
            c.t.push_back(m.px()[x] * m.y1_given_x()(x, a) * m.y2_given_x()(x, b) * k.u1_given_y1(a, u) *
                          k.u2_given_y2(b, w));
  return c;
}

/// Region-1 CEO objective F(P, Q) summed cell by cell over the full joint,
/// in bits. Independent of the library's induced-law bookkeeping.
inline double ceo_fpq_brute(const ceo::CeoSourceModel& m, const EncoderKernels& k, const ceo::CeoAuxiliaries& q,
                            double s1, double s2) {
  const auto c = ceo_brute(m, k);
  std::vector<double> pu1u2(c.v1 * c.v2, 0.0), pu2(c.v2, 0.0);
  double f = 0.0;
  for (std::size_t x = 0; x < c.nx; ++x)
    for (std::size_t a = 0; a < c.n1; ++a)
      for (std::size_t b = 0; b < c.n2; ++b)
        for (std::size_t u = 0; u < c.v1; ++u)
          for (std::size_t w = 0; w < c.v2; ++w) {
            const double p = c(x, a, b, u, w);
            if (p == 0.0) continue;
            pu1u2[u * c.v2 + w] += p;
            pu2[w] += p;
            f -= p * std::log2(q.x_given_u1u2(u * c.v2 + w, x));
            f -= s1 * p * std::log2(q.u1u2.mass()[u * c.v2 + w]);
            f -= s2 * p * std::log2(q.qu2[w]);
            f += s1 * p * std::log2(k.u1_given_y1(a, u));
            f += s2 * p * std::log2(k.u2_given_y2(b, w));
          }
  for (double p : pu2)
    if (p > 0) f += s1 * p * std::log2(p);
  return f;
}

}  // namespace testing_support
