// Two-encoder CEO problem under logarithmic loss: alternating minimization
// of the Lagrangian F_s(P, Q) that traces the boundary of RD_CEO^1 / RD_CEO^2.
//
// Conventions:
//  * Region 1 prices R1 = I(Y1;U1|U2) and R2 = I(Y2;U2); region 2 exchanges
//    the encoders' roles, R1 = I(Y1;U1) and R2 = I(Y2;U2|U1). The encoder
//    whose rate is conditioned is the "lead", the other the "anchor".
//  * (u1, u2) pairs are flattened as u1 * |U2| + u2.
//  * Every reported objective, rate and distortion is in bits. The kernel
//    updates work in nats internally; the argmin does not depend on the base.
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdregion/kernels.hpp"
#include "rdregion/prob.hpp"

namespace rdregion::ceo {

/// p(x) p(y1|x) p(y2|x): the observations are conditionally independent
/// given the remote source.
class CeoSourceModel {
 public:
  CeoSourceModel() = default;
  CeoSourceModel(Pmf px, CondPmf y1_given_x, CondPmf y2_given_x)
      : px_(std::move(px)), y1_x_(std::move(y1_given_x)), y2_x_(std::move(y2_given_x)) {
    if (y1_x_.given_size() != px_.size() || y2_x_.given_size() != px_.size())
      throw std::invalid_argument("CeoSourceModel: channel input size differs from |X|");
    py1_ = Pmf(push_forward(px_.mass(), y1_x_));
    py2_ = Pmf(push_forward(px_.mass(), y2_x_));
    x_y1_ = posterior(y1_x_);
    x_y2_ = posterior(y2_x_);
  }

  const Pmf& px() const { return px_; }
  const CondPmf& y1_given_x() const { return y1_x_; }
  const CondPmf& y2_given_x() const { return y2_x_; }
  const Pmf& py1() const { return py1_; }
  const Pmf& py2() const { return py2_; }
  const CondPmf& x_given_y1() const { return x_y1_; }
  const CondPmf& x_given_y2() const { return x_y2_; }
  std::size_t x_size() const { return px_.size(); }
  std::size_t y1_size() const { return y1_x_.out_size(); }
  std::size_t y2_size() const { return y2_x_.out_size(); }

  /// Same source with the two observation channels exchanged.
  CeoSourceModel swapped() const { return {px_, y2_x_, y1_x_}; }

  /// p(x, y1, y2) over axes X, Y1, Y2.
  JointPmf joint() const {
    std::vector<double> t;
    t.reserve(x_size() * y1_size() * y2_size());
    for (std::size_t x = 0; x < x_size(); ++x)
      for (std::size_t a = 0; a < y1_size(); ++a)
        for (std::size_t b = 0; b < y2_size(); ++b) t.push_back(px_[x] * y1_x_(x, a) * y2_x_(x, b));
    return JointPmf({{"X", x_size()}, {"Y1", y1_size()}, {"Y2", y2_size()}}, std::move(t));
  }

 private:
  CondPmf posterior(const CondPmf& channel) const {
    const std::size_t nx = px_.size(), ny = channel.out_size();
    std::vector<double> joint(ny * nx);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) joint[y * nx + x] = px_[x] * channel(x, y);
    return CondPmf::from_joint(ny, nx, joint);
  }

  Pmf px_;
  CondPmf y1_x_, y2_x_;
  Pmf py1_, py2_;
  CondPmf x_y1_, x_y2_;
};

struct CeoTradeoff {
  double s1 = 1.0;
  double s2 = 1.0;
  int region = 1;

  CeoTradeoff() = default;
  CeoTradeoff(double s1_, double s2_, int region_ = 1) : s1(s1_), s2(s2_), region(region_) {
    if (!(s1 > 0.0) || !(s2 > 0.0) || !std::isfinite(s1) || !std::isfinite(s2))
      throw std::invalid_argument("CeoTradeoff: s1 and s2 must be finite and strictly positive");
    if (region != 1 && region != 2) throw std::invalid_argument("CeoTradeoff: region must be 1 or 2");
  }
};

/// Auxiliary laws Q. Both single-encoder marginals are carried; region 1
/// reads qu2, region 2 reads qu1.
struct CeoAuxiliaries {
  CondPmf x_given_u1u2;
  JointPmf u1u2;
  Pmf qu1;
  Pmf qu2;
};

struct CeoTuple {
  double R1 = 0.0;
  double R2 = 0.0;
  double D = 0.0;
};

struct CeoSolveReport {
  EncoderKernels kernels;
  CeoTuple tuple;
  /// F_s at the returned kernels, bits.
  double objective = 0.0;
  /// F_s(P^(n), Q^(n)) for n = 0, 1, ... of the kept restart.
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  int restarts_used = 0;
  /// |D - (-s1 R1 - s2 R2 + F)|.
  double identity_residual = 0.0;
  /// Log arguments clamped at kLogFloor during the kept run.
  std::size_t clamped_logs = 0;
};

/// Table over (u_i, y_i) stored row-major by y: values[y * u_size + u].
struct LogWeightTable {
  std::size_t y_size = 0;
  std::size_t u_size = 0;
  std::vector<double> values;
  std::size_t clamped = 0;
  double operator()(std::size_t u, std::size_t y) const { return values[y * u_size + u]; }
};

enum class LogPolicy { clamp, strict };

namespace detail {

/// Laws induced by the kernels on the source, in the caller's orientation.
struct Laws {
  std::size_t nx = 0, nu1 = 0, nu2 = 0;
  std::vector<double> u1_x;    // [x][u1]
  std::vector<double> u2_x;    // [x][u2]
  std::vector<double> joint;   // [u1][u2][x]
  std::vector<double> u1u2;    // [u1][u2]
  std::vector<double> u1, u2;
};

inline void check_shapes(const CeoSourceModel& m, const EncoderKernels& k) {
  if (k.u1_given_y1.given_size() != m.y1_size() || k.u2_given_y2.given_size() != m.y2_size())
    throw std::invalid_argument("CEO: kernel input alphabet differs from the observation alphabet");
}

inline Laws induced_laws(const CeoSourceModel& m, const EncoderKernels& k) {
  check_shapes(m, k);
  Laws L;
  L.nx = m.x_size();
  L.nu1 = k.u1_given_y1.out_size();
  L.nu2 = k.u2_given_y2.out_size();
  L.u1_x = compose(m.y1_given_x(), k.u1_given_y1);
  L.u2_x = compose(m.y2_given_x(), k.u2_given_y2);
  L.joint.assign(L.nu1 * L.nu2 * L.nx, 0.0);
  L.u1u2.assign(L.nu1 * L.nu2, 0.0);
  L.u1.assign(L.nu1, 0.0);
  L.u2.assign(L.nu2, 0.0);
  for (std::size_t a = 0; a < L.nu1; ++a)
    for (std::size_t b = 0; b < L.nu2; ++b)
      for (std::size_t x = 0; x < L.nx; ++x) {
        const double p = m.px()[x] * L.u1_x[x * L.nu1 + a] * L.u2_x[x * L.nu2 + b];
        L.joint[(a * L.nu2 + b) * L.nx + x] = p;
        L.u1u2[a * L.nu2 + b] += p;
        L.u1[a] += p;
        L.u2[b] += p;
      }
  return L;
}

inline CeoAuxiliaries aux_from_laws(const Laws& L) {
  return {CondPmf::from_joint(L.nu1 * L.nu2, L.nx, L.joint),
          JointPmf({{"U1", L.nu1}, {"U2", L.nu2}}, L.u1u2), Pmf(L.u1), Pmf(L.u2)};
}

/// sum p log q with +inf when p > 0 = q; natural log.
inline double cross_term(double p, double q) {
  if (p <= 0.0) return 0.0;
  if (q <= 0.0) return -std::numeric_limits<double>::infinity();
  return p * std::log(q);
}

inline double neg_cond_entropy_nats(std::span<const double> py, const CondPmf& k) {
  double acc = 0.0;
  for (std::size_t y = 0; y < k.given_size(); ++y)
    for (std::size_t u = 0; u < k.out_size(); ++u) acc += cross_term(py[y] * k(y, u), k(y, u));
  return acc;
}

/// F_s(P, Q) in nats, region-1 orientation (s1 prices the lead encoder 1).
inline double objective_nats(const CeoSourceModel& m, const EncoderKernels& k, const Laws& L,
                             const CeoAuxiliaries& q, double s1, double s2) {
  double f = 0.0;
  for (std::size_t c = 0; c < L.nu1 * L.nu2; ++c)
    for (std::size_t x = 0; x < L.nx; ++x) f -= cross_term(L.joint[c * L.nx + x], q.x_given_u1u2(c, x));
  for (std::size_t c = 0; c < L.nu1 * L.nu2; ++c) f -= s1 * cross_term(L.u1u2[c], q.u1u2.mass()[c]);
  for (std::size_t b = 0; b < L.nu2; ++b) f -= s2 * cross_term(L.u2[b], q.qu2[b]);
  f += s1 * neg_cond_entropy_nats(m.py1().mass(), k.u1_given_y1);
  f += s2 * neg_cond_entropy_nats(m.py2().mass(), k.u2_given_y2);
  for (std::size_t b = 0; b < L.nu2; ++b) f += s1 * cross_term(L.u2[b], L.u2[b]);
  return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
}

/// F_s with the anchor marginal entering through q(u1|u2) = q(u1,u2)/q(u2)
/// in place of the pair -s1 log q(u1,u2) + s1 log p(u2).
inline double surrogate_nats(const CeoSourceModel& m, const EncoderKernels& k, const Laws& L,
                             const CeoAuxiliaries& q, double s1, double s2) {
  double f = 0.0;
  for (std::size_t c = 0; c < L.nu1 * L.nu2; ++c)
    for (std::size_t x = 0; x < L.nx; ++x) f -= cross_term(L.joint[c * L.nx + x], q.x_given_u1u2(c, x));
  for (std::size_t a = 0; a < L.nu1; ++a)
    for (std::size_t b = 0; b < L.nu2; ++b) {
      const double qb = q.qu2[b];
      const double qab = q.u1u2.mass()[a * L.nu2 + b];
      f -= s1 * cross_term(L.u1u2[a * L.nu2 + b], qb > 0.0 ? qab / qb : 0.0);
    }
  for (std::size_t b = 0; b < L.nu2; ++b) f -= s2 * cross_term(L.u2[b], q.qu2[b]);
  f += s1 * neg_cond_entropy_nats(m.py1().mass(), k.u1_given_y1);
  f += s2 * neg_cond_entropy_nats(m.py2().mass(), k.u2_given_y2);
  return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
}

struct LogTables {
  std::vector<double> x_u;   // [u1][u2][x]
  std::vector<double> u1u2;  // [u1][u2]
  std::vector<double> u2;
  std::size_t clamped = 0;
};

inline double checked_log(double v, LogPolicy policy, std::size_t& clamped, const char* what, std::size_t cell) {
  if (policy == LogPolicy::strict && v <= 0.0)
    throw std::domain_error(std::string("log of zero in ") + what + " at cell " + std::to_string(cell));
  return guarded_log(v, clamped);
}

inline LogTables log_tables(const CeoAuxiliaries& q, LogPolicy policy) {
  LogTables t;
  const auto xt = q.x_given_u1u2.table();
  t.x_u.resize(xt.size());
  for (std::size_t i = 0; i < xt.size(); ++i) t.x_u[i] = checked_log(xt[i], policy, t.clamped, "q(x|u1,u2)", i);
  const auto j = q.u1u2.mass();
  t.u1u2.resize(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) t.u1u2[i] = checked_log(j[i], policy, t.clamped, "q(u1,u2)", i);
  t.u2.resize(q.qu2.size());
  for (std::size_t i = 0; i < q.qu2.size(); ++i) t.u2[i] = checked_log(q.qu2[i], policy, t.clamped, "q(u2)", i);
  return t;
}

/// rho_1(u1, y1), region-1 orientation. Uses p(u2|x) of the current kernels.
inline LogWeightTable rho_lead(const CeoSourceModel& m, const EncoderKernels& k, const LogTables& lq, double s1) {
  const std::size_t nx = m.x_size(), ny = m.y1_size();
  const std::size_t nu1 = k.u1_given_y1.out_size(), nu2 = k.u2_given_y2.out_size();
  const auto u2_x = compose(m.y2_given_x(), k.u2_given_y2);
  // g[u1][x] = sum_u2 p(u2|x) [ (1/s1) log q(x|u1,u2) + log q(u1,u2) ]
  std::vector<double> g(nu1 * nx, 0.0);
  for (std::size_t a = 0; a < nu1; ++a)
    for (std::size_t x = 0; x < nx; ++x) {
      double acc = 0.0;
      for (std::size_t b = 0; b < nu2; ++b) {
        const double w = u2_x[x * nu2 + b];
        if (w == 0.0) continue;
        acc += w * (lq.x_u[(a * nu2 + b) * nx + x] / s1 + lq.u1u2[a * nu2 + b]);
      }
      g[a * nx + x] = acc;
    }
  LogWeightTable r{ny, nu1, std::vector<double>(ny * nu1, 0.0), lq.clamped};
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t a = 0; a < nu1; ++a) {
      double acc = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        const double w = m.x_given_y1()(y, x);
        if (w != 0.0) acc += w * g[a * nx + x];
      }
      r.values[y * nu1 + a] = acc;
    }
  return r;
}

/// rho_2(u2, y2), region-1 orientation. `pu2_prev` is the anchor marginal
/// of the previous iterate; p(u1|x) comes from the current kernels.
inline LogWeightTable rho_anchor(const CeoSourceModel& m, const EncoderKernels& k, const LogTables& lq,
                                 std::span<const double> pu2_prev, double s1, double s2, LogPolicy policy) {
  const std::size_t nx = m.x_size(), ny = m.y2_size();
  const std::size_t nu1 = k.u1_given_y1.out_size(), nu2 = k.u2_given_y2.out_size();
  const auto u1_x = compose(m.y1_given_x(), k.u1_given_y1);
  std::vector<double> g(nu2 * nx, 0.0);
  for (std::size_t b = 0; b < nu2; ++b)
    for (std::size_t x = 0; x < nx; ++x) {
      double acc = 0.0;
      for (std::size_t a = 0; a < nu1; ++a) {
        const double w = u1_x[x * nu1 + a];
        if (w == 0.0) continue;
        acc += w * (lq.x_u[(a * nu2 + b) * nx + x] / s2 + (s1 / s2) * lq.u1u2[a * nu2 + b]);
      }
      g[b * nx + x] = acc;
    }
  LogWeightTable r{ny, nu2, std::vector<double>(ny * nu2, 0.0), lq.clamped};
  for (std::size_t b = 0; b < nu2; ++b) {
    const double tail =
        lq.u2[b] - (s1 / s2) * checked_log(pu2_prev[b], policy, r.clamped, "p(u2)", b);
    for (std::size_t y = 0; y < ny; ++y) {
      double acc = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        const double w = m.x_given_y2()(y, x);
        if (w != 0.0) acc += w * g[b * nx + x];
      }
      r.values[y * nu2 + b] = acc + tail;
    }
  }
  return r;
}

inline EncoderKernels update_p(const CeoSourceModel& m, const EncoderKernels& k_prev, const CeoAuxiliaries& q,
                               double s1, double s2, UpdateOrder order, LogPolicy policy,
                               std::size_t* clamped = nullptr) {
  const LogTables lq = log_tables(q, policy);
  const auto pu2_prev = push_forward(m.py2().mass(), k_prev.u2_given_y2);
  EncoderKernels k = k_prev;
  std::size_t c = 0;
  auto lead = [&] {
    auto r = rho_lead(m, k, lq, s1);
    c += r.clamped;
    k.u1_given_y1 = softmax_rows(r.y_size, r.u_size, r.values);
  };
  auto anchor = [&] {
    auto r = rho_anchor(m, k, lq, pu2_prev, s1, s2, policy);
    c += r.clamped;
    k.u2_given_y2 = softmax_rows(r.y_size, r.u_size, r.values);
  };
  if (order == UpdateOrder::lead_first) {
    lead();
    anchor();
  } else {
    anchor();
    lead();
  }
  if (clamped) *clamped += c;
  return k;
}

/// Orients a problem so that the lead encoder sits in slot 1.
inline CeoAuxiliaries swap_aux(const CeoAuxiliaries& q) {
  const std::size_t n1 = q.qu1.size(), n2 = q.qu2.size();
  const std::size_t nx = q.x_given_u1u2.out_size();
  std::vector<double> xt(q.x_given_u1u2.table().size());
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n2; ++b)
      for (std::size_t x = 0; x < nx; ++x) xt[(b * n1 + a) * nx + x] = q.x_given_u1u2((a * n2 + b), x);
  return {CondPmf(n1 * n2, nx, std::move(xt)),
          JointPmf({{"U1", n2}, {"U2", n1}}, transpose(q.u1u2.mass(), n1, n2)), q.qu2, q.qu1};
}

struct Oriented {
  CeoSourceModel m;
  EncoderKernels k;
  double s_lead, s_anchor;
};

inline Oriented orient(const CeoSourceModel& m, const EncoderKernels& k, const CeoTradeoff& s) {
  if (s.region == 1) return {m, k, s.s1, s.s2};
  return {m.swapped(), swap_encoders(k), s.s2, s.s1};
}

}  // namespace detail

/// p(u1, u2, x) = p(x) p(u1|x) p(u2|x), axes U1, U2, X.
inline JointPmf induced_joint(const CeoSourceModel& m, const EncoderKernels& k) {
  const auto L = detail::induced_laws(m, k);
  return JointPmf({{"U1", L.nu1}, {"U2", L.nu2}, {"X", L.nx}}, L.joint);
}

/// p(x, y1, y2, u1, u2) over axes X, Y1, Y2, U1, U2.
inline JointPmf full_joint(const CeoSourceModel& m, const EncoderKernels& k) {
  detail::check_shapes(m, k);
  const std::size_t nx = m.x_size(), n1 = m.y1_size(), n2 = m.y2_size();
  const std::size_t v1 = k.u1_given_y1.out_size(), v2 = k.u2_given_y2.out_size();
  std::vector<double> t;
  t.reserve(nx * n1 * n2 * v1 * v2);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t b = 0; b < n2; ++b) {
        const double pxy = m.px()[x] * m.y1_given_x()(x, a) * m.y2_given_x()(x, b);
        for (std::size_t u = 0; u < v1; ++u)
          for (std::size_t w = 0; w < v2; ++w) t.push_back(pxy * k.u1_given_y1(a, u) * k.u2_given_y2(b, w));
      }
  return JointPmf({{"X", nx}, {"Y1", n1}, {"Y2", n2}, {"U1", v1}, {"U2", v2}}, std::move(t));
}

/// Rate-distortion tuple achieved by the kernels in the given region.
inline CeoTuple tuple_of(const CeoSourceModel& m, const EncoderKernels& k, int region) {
  const JointPmf j = full_joint(m, k);
  CeoTuple t;
  t.D = conditional_entropy(j, {"X"}, {"U1", "U2"});
  if (region == 1) {
    t.R1 = mutual_information(j, {"Y1"}, {"U1"}, {"U2"});
    t.R2 = mutual_information(j, {"Y2"}, {"U2"});
  } else {
    t.R1 = mutual_information(j, {"Y1"}, {"U1"});
    t.R2 = mutual_information(j, {"Y2"}, {"U2"}, {"U1"});
  }
  return t;
}

/// F_s(P) = H(X|U1,U2) + s1 R1 + s2 R2 with the region's rate expressions,
/// evaluated through prob_core information measures.
inline double f_s_p(const CeoSourceModel& m, const EncoderKernels& k, const CeoTradeoff& s) {
  const CeoTuple t = tuple_of(m, k, s.region);
  return t.D + s.s1 * t.R1 + s.s2 * t.R2;
}

/// F_s(P, Q) in bits; +inf when q vanishes where the induced law does not.
inline double f_s_pq(const CeoSourceModel& m, const EncoderKernels& k, const CeoAuxiliaries& q,
                     const CeoTradeoff& s) {
  const auto o = detail::orient(m, k, s);
  const auto qo = s.region == 1 ? q : detail::swap_aux(q);
  const auto L = detail::induced_laws(o.m, o.k);
  return kBitsPerNat * detail::objective_nats(o.m, o.k, L, qo, o.s_lead, o.s_anchor);
}

/// The function minimized exactly by update_p: F_s(P, Q) with the anchor
/// marginal entering through q(u_lead | u_anchor). It coincides with f_s_pq
/// whenever q's anchor marginal equals the one induced by P.
inline double surrogate_objective(const CeoSourceModel& m, const EncoderKernels& k, const CeoAuxiliaries& q,
                                  const CeoTradeoff& s) {
  const auto o = detail::orient(m, k, s);
  const auto qo = s.region == 1 ? q : detail::swap_aux(q);
  const auto L = detail::induced_laws(o.m, o.k);
  return kBitsPerNat * detail::surrogate_nats(o.m, o.k, L, qo, o.s_lead, o.s_anchor);
}

/// Q*(P): the exact conditionals and marginals of the induced joint.
inline CeoAuxiliaries update_q(const CeoSourceModel& m, const EncoderKernels& k) {
  return detail::aux_from_laws(detail::induced_laws(m, k));
}

/// Log-weight table whose row-wise softmax is the kernel update of encoder
/// `encoder` (1 or 2). The anchor encoder's table uses the marginal induced
/// by `k` as the previous-iterate p(u_anchor).
inline LogWeightTable rho(const CeoSourceModel& m, const EncoderKernels& k, const CeoAuxiliaries& q,
                          const CeoTradeoff& s, int encoder, LogPolicy policy = LogPolicy::clamp) {
  if (encoder != 1 && encoder != 2) throw std::invalid_argument("rho: encoder index must be 1 or 2");
  const auto o = detail::orient(m, k, s);
  const auto qo = s.region == 1 ? q : detail::swap_aux(q);
  const auto lq = detail::log_tables(qo, policy);
  const bool lead = (encoder == 1) == (s.region == 1);
  if (lead) return detail::rho_lead(o.m, o.k, lq, o.s_lead);
  const auto prev = push_forward(o.m.py2().mass(), o.k.u2_given_y2);
  return detail::rho_anchor(o.m, o.k, lq, prev, o.s_lead, o.s_anchor, policy);
}

/// One Gauss-Seidel sweep of the kernel updates for fixed Q.
inline EncoderKernels update_p(const CeoSourceModel& m, const EncoderKernels& k_prev, const CeoAuxiliaries& q,
                               const CeoTradeoff& s, UpdateOrder order = UpdateOrder::lead_first,
                               LogPolicy policy = LogPolicy::clamp) {
  const auto o = detail::orient(m, k_prev, s);
  const auto qo = s.region == 1 ? q : detail::swap_aux(q);
  auto k = detail::update_p(o.m, o.k, qo, o.s_lead, o.s_anchor, order, policy);
  return s.region == 1 ? k : swap_encoders(k);
}

namespace detail {

struct RunResult {
  EncoderKernels k;
  std::vector<double> trace;  // nats
  int iterations = 0;
  bool converged = false;
  std::size_t clamped = 0;
};

/// Alternating minimization in region-1 orientation from `k0`.
inline RunResult run(const CeoSourceModel& m, EncoderKernels k0, double s1, double s2, const SolverOptions& opts) {
  RunResult r;
  r.k = std::move(k0);
  auto L = induced_laws(m, r.k);
  auto q = aux_from_laws(L);
  double f = objective_nats(m, r.k, L, q, s1, s2);
  r.trace.push_back(f);
  for (int n = 1; n <= opts.max_iters; ++n) {
    r.k = update_p(m, r.k, q, s1, s2, opts.order, LogPolicy::clamp, &r.clamped);
    L = induced_laws(m, r.k);
    q = aux_from_laws(L);
    const double fn = objective_nats(m, r.k, L, q, s1, s2);
    r.trace.push_back(fn);
    r.iterations = n;
    const bool done = relative_change_below(kBitsPerNat * f, kBitsPerNat * fn, opts.tol);
    f = fn;
    if (done) {
      r.converged = true;
      break;
    }
  }
  return r;
}

inline CeoSolveReport finish(const CeoSourceModel& m, const CeoTradeoff& s, RunResult best, int restarts) {
  CeoSolveReport rep;
  rep.kernels = s.region == 1 ? std::move(best.k) : swap_encoders(best.k);
  rep.objective_trace.reserve(best.trace.size());
  for (double v : best.trace) rep.objective_trace.push_back(kBitsPerNat * v);
  rep.objective = rep.objective_trace.back();
  rep.iterations = best.iterations;
  rep.converged = best.converged;
  rep.restarts_used = restarts;
  rep.clamped_logs = best.clamped;
  rep.tuple = tuple_of(m, rep.kernels, s.region);
  rep.identity_residual =
      std::abs(rep.tuple.D - (-s.s1 * rep.tuple.R1 - s.s2 * rep.tuple.R2 + rep.objective));
  return rep;
}

inline std::pair<std::size_t, std::size_t> description_sizes(const CeoSourceModel& m, const SolverOptions& o) {
  const std::size_t u1 = o.u1_size ? o.u1_size : m.y1_size();
  const std::size_t u2 = o.u2_size ? o.u2_size : m.y2_size();
  if (u1 > m.y1_size() || u2 > m.y2_size())
    throw std::invalid_argument("SolverOptions: description alphabet larger than the observation alphabet");
  return {u1, u2};
}

}  // namespace detail

/// Best of `opts.restarts` runs of the alternating minimization from random
/// starting kernels. Restart r draws from derive_seed(opts.rng_seed, {r}).
inline CeoSolveReport solve(const CeoSourceModel& m, const CeoTradeoff& s, const SolverOptions& opts = {}) {
  opts.validate();
  const auto [u1, u2] = detail::description_sizes(m, opts);
  const auto o = detail::orient(m, constant_kernels(m.y1_size(), u1, m.y2_size(), u2), s);
  detail::RunResult best;
  bool have = false;
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(derive_seed(opts.rng_seed, {static_cast<std::uint64_t>(r)}));
    auto k0 = initial_kernels(rng, opts.init, o.m.y1_size(), o.k.u1_given_y1.out_size(), o.m.y2_size(),
                              o.k.u2_given_y2.out_size());
    auto run = detail::run(o.m, std::move(k0), o.s_lead, o.s_anchor, opts);
    if (!have || run.trace.back() < best.trace.back()) {
      best = std::move(run);
      have = true;
    }
  }
  return detail::finish(m, s, std::move(best), opts.restarts);
}

/// Single run started from the given kernels (warm start).
inline CeoSolveReport solve_from(const CeoSourceModel& m, const CeoTradeoff& s, const EncoderKernels& start,
                                 const SolverOptions& opts = {}) {
  opts.validate();
  detail::check_shapes(m, start);
  const auto o = detail::orient(m, start, s);
  return detail::finish(m, s, detail::run(o.m, o.k, o.s_lead, o.s_anchor, opts), 1);
}

/// F_s(P) through the fast induced-law path, bits.
inline double objective_at(const CeoSourceModel& m, const EncoderKernels& k, const CeoTradeoff& s) {
  const auto o = detail::orient(m, k, s);
  const auto L = detail::induced_laws(o.m, o.k);
  return kBitsPerNat * detail::objective_nats(o.m, o.k, L, detail::aux_from_laws(L), o.s_lead, o.s_anchor);
}

}  // namespace rdregion::ceo
