// Two-encoder multiterminal (Berger-Tung) source coding under logarithmic
// loss: alternating minimization of F_beta(P, Q), beta = (s1, s2, alpha).
//
// Follows the conventions of ceo.hpp: region 1 prices R1 = I(Y1;U1|U2),
// R2 = I(Y2;U2); region 2 exchanges the roles. Results are in bits.
#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdregion/ceo.hpp"
#include "rdregion/kernels.hpp"
#include "rdregion/prob.hpp"

namespace rdregion::bt {

using ceo::LogPolicy;
using ceo::LogWeightTable;

/// Joint law of the two observed sources, axes Y1, Y2.
class BtSourceModel {
 public:
  BtSourceModel() = default;
  explicit BtSourceModel(JointPmf y1y2) : joint_(std::move(y1y2)) {
    if (joint_.rank() != 2) throw std::invalid_argument("BtSourceModel: expected a joint over (Y1, Y2)");
    n1_ = joint_.axes()[0].size;
    n2_ = joint_.axes()[1].size;
    const auto t = joint_.mass();
    std::vector<double> p1(n1_, 0.0), p2(n2_, 0.0);
    for (std::size_t a = 0; a < n1_; ++a)
      for (std::size_t b = 0; b < n2_; ++b) {
        p1[a] += t[a * n2_ + b];
        p2[b] += t[a * n2_ + b];
      }
    py1_ = Pmf(std::move(p1));
    py2_ = Pmf(std::move(p2));
    y2_y1_ = CondPmf::from_joint(n1_, n2_, t);
    y1_y2_ = CondPmf::from_joint(n2_, n1_, transpose(t, n1_, n2_));
  }

  /// From a row-major table p(y1, y2).
  static BtSourceModel from_table(std::size_t n1, std::size_t n2, std::vector<double> t) {
    return BtSourceModel(JointPmf({{"Y1", n1}, {"Y2", n2}}, std::move(t)));
  }

  const JointPmf& joint() const { return joint_; }
  double p(std::size_t y1, std::size_t y2) const { return joint_.mass()[y1 * n2_ + y2]; }
  const Pmf& py1() const { return py1_; }
  const Pmf& py2() const { return py2_; }
  const CondPmf& y2_given_y1() const { return y2_y1_; }
  const CondPmf& y1_given_y2() const { return y1_y2_; }
  std::size_t y1_size() const { return n1_; }
  std::size_t y2_size() const { return n2_; }

  BtSourceModel swapped() const { return from_table(n2_, n1_, transpose(joint_.mass(), n1_, n2_)); }

 private:
  JointPmf joint_;
  std::size_t n1_ = 0, n2_ = 0;
  Pmf py1_, py2_;
  CondPmf y2_y1_, y1_y2_;
};

struct BtTradeoff {
  double s1 = 1.0;
  double s2 = 1.0;
  double alpha = 0.5;
  int region = 1;

  BtTradeoff() = default;
  BtTradeoff(double s1_, double s2_, double alpha_, int region_ = 1)
      : s1(s1_), s2(s2_), alpha(alpha_), region(region_) {
    if (!(s1 > 0.0) || !(s2 > 0.0) || !std::isfinite(s1) || !std::isfinite(s2))
      throw std::invalid_argument("BtTradeoff: s1 and s2 must be finite and strictly positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("BtTradeoff: alpha must lie in [0, 1]");
    if (region != 1 && region != 2) throw std::invalid_argument("BtTradeoff: region must be 1 or 2");
  }
  double abar() const { return 1.0 - alpha; }
};

struct BtAuxiliaries {
  CondPmf y1_given_u1u2;
  CondPmf y2_given_u1u2;
  JointPmf u1u2;
  Pmf qu1;
  Pmf qu2;
};

struct BtTuple {
  double R1 = 0.0;
  double R2 = 0.0;
  double D1 = 0.0;
  double D2 = 0.0;
};

struct BtSolveReport {
  EncoderKernels kernels;
  BtTuple tuple;
  /// alpha D1 + (1 - alpha) D2.
  double weighted_distortion = 0.0;
  double objective = 0.0;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  int restarts_used = 0;
  /// |alpha D1 + abar D2 - (-s1 R1 - s2 R2 + F)|.
  double identity_residual = 0.0;
  std::size_t clamped_logs = 0;
};

namespace detail {

using ceo::detail::checked_log;
using ceo::detail::cross_term;
using ceo::detail::neg_cond_entropy_nats;

struct Laws {
  std::size_t n1 = 0, n2 = 0, nu1 = 0, nu2 = 0;
  std::vector<double> u2_y1;     // p(u2|y1), [y1][u2]
  std::vector<double> u1_y2;     // p(u1|y2), [y2][u1]
  std::vector<double> joint_y1;  // p(u1,u2,y1), [u1][u2][y1]
  std::vector<double> joint_y2;  // p(u1,u2,y2), [u1][u2][y2]
  std::vector<double> u1u2;
  std::vector<double> u1, u2;
};

inline void check_shapes(const BtSourceModel& m, const EncoderKernels& k) {
  if (k.u1_given_y1.given_size() != m.y1_size() || k.u2_given_y2.given_size() != m.y2_size())
    throw std::invalid_argument("BT: kernel input alphabet differs from the source alphabet");
}

inline Laws induced_laws(const BtSourceModel& m, const EncoderKernels& k) {
  check_shapes(m, k);
  Laws L;
  L.n1 = m.y1_size();
  L.n2 = m.y2_size();
  L.nu1 = k.u1_given_y1.out_size();
  L.nu2 = k.u2_given_y2.out_size();
  L.u2_y1 = compose(m.y2_given_y1(), k.u2_given_y2);
  L.u1_y2 = compose(m.y1_given_y2(), k.u1_given_y1);
  const std::size_t nc = L.nu1 * L.nu2;
  L.joint_y1.assign(nc * L.n1, 0.0);
  L.joint_y2.assign(nc * L.n2, 0.0);
  L.u1u2.assign(nc, 0.0);
  L.u1.assign(L.nu1, 0.0);
  L.u2.assign(L.nu2, 0.0);
  for (std::size_t y1 = 0; y1 < L.n1; ++y1)
    for (std::size_t y2 = 0; y2 < L.n2; ++y2) {
      const double pyy = m.p(y1, y2);
      if (pyy == 0.0) continue;
      for (std::size_t a = 0; a < L.nu1; ++a) {
        const double pa = pyy * k.u1_given_y1(y1, a);
        for (std::size_t b = 0; b < L.nu2; ++b) {
          const double p = pa * k.u2_given_y2(y2, b);
          L.joint_y1[(a * L.nu2 + b) * L.n1 + y1] += p;
          L.joint_y2[(a * L.nu2 + b) * L.n2 + y2] += p;
          L.u1u2[a * L.nu2 + b] += p;
          L.u1[a] += p;
          L.u2[b] += p;
        }
      }
    }
  return L;
}

inline BtAuxiliaries aux_from_laws(const Laws& L) {
  const std::size_t nc = L.nu1 * L.nu2;
  return {CondPmf::from_joint(nc, L.n1, L.joint_y1), CondPmf::from_joint(nc, L.n2, L.joint_y2),
          JointPmf({{"U1", L.nu1}, {"U2", L.nu2}}, L.u1u2), Pmf(L.u1), Pmf(L.u2)};
}

/// F_beta(P, Q) in nats, region-1 orientation.
inline double objective_nats(const BtSourceModel& m, const EncoderKernels& k, const Laws& L,
                             const BtAuxiliaries& q, double s1, double s2, double alpha) {
  const double abar = 1.0 - alpha;
  const std::size_t nc = L.nu1 * L.nu2;
  double f = s1 * neg_cond_entropy_nats(m.py1().mass(), k.u1_given_y1) +
             s2 * neg_cond_entropy_nats(m.py2().mass(), k.u2_given_y2);
  for (std::size_t b = 0; b < L.nu2; ++b) f += s1 * cross_term(L.u2[b], L.u2[b]);
  for (std::size_t b = 0; b < L.nu2; ++b) f -= s2 * cross_term(L.u2[b], q.qu2[b]);
  if (alpha > 0.0)
    for (std::size_t c = 0; c < nc; ++c)
      for (std::size_t y = 0; y < L.n1; ++y) f -= alpha * cross_term(L.joint_y1[c * L.n1 + y], q.y1_given_u1u2(c, y));
  if (abar > 0.0)
    for (std::size_t c = 0; c < nc; ++c)
      for (std::size_t y = 0; y < L.n2; ++y) f -= abar * cross_term(L.joint_y2[c * L.n2 + y], q.y2_given_u1u2(c, y));
  for (std::size_t c = 0; c < nc; ++c) f -= s1 * cross_term(L.u1u2[c], q.u1u2.mass()[c]);
  return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
}

inline double surrogate_nats(const BtSourceModel& m, const EncoderKernels& k, const Laws& L,
                             const BtAuxiliaries& q, double s1, double s2, double alpha) {
  // Replace -s1 log q(u1,u2) + s1 log p(u2) by -s1 log q(u1|u2).
  double f = objective_nats(m, k, L, q, s1, s2, alpha);
  if (!std::isfinite(f)) return f;
  for (std::size_t b = 0; b < L.nu2; ++b) {
    f -= s1 * cross_term(L.u2[b], L.u2[b]);
    f += s1 * cross_term(L.u2[b], q.qu2[b]);
  }
  return f;
}

struct LogTables {
  std::vector<double> y1_u;  // [u1][u2][y1]
  std::vector<double> y2_u;  // [u1][u2][y2]
  std::vector<double> u1u2;
  std::vector<double> u2;
  std::size_t clamped = 0;
};

inline LogTables log_tables(const BtAuxiliaries& q, LogPolicy policy) {
  LogTables t;
  auto fill = [&](std::span<const double> src, std::vector<double>& dst, const char* what) {
    dst.resize(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = checked_log(src[i], policy, t.clamped, what, i);
  };
  fill(q.y1_given_u1u2.table(), t.y1_u, "q(y1|u1,u2)");
  fill(q.y2_given_u1u2.table(), t.y2_u, "q(y2|u1,u2)");
  fill(q.u1u2.mass(), t.u1u2, "q(u1,u2)");
  fill(q.qu2.mass(), t.u2, "q(u2)");
  return t;
}

/// mu_1(u1, y1), region-1 orientation.
inline LogWeightTable mu_lead(const BtSourceModel& m, const EncoderKernels& k, const LogTables& lq, double s1,
                              double alpha) {
  const double abar = 1.0 - alpha;
  const std::size_t n1 = m.y1_size(), n2 = m.y2_size();
  const std::size_t nu1 = k.u1_given_y1.out_size(), nu2 = k.u2_given_y2.out_size();
  const auto u2_y1 = compose(m.y2_given_y1(), k.u2_given_y2);
  LogWeightTable r{n1, nu1, std::vector<double>(n1 * nu1, 0.0), lq.clamped};
  for (std::size_t y1 = 0; y1 < n1; ++y1)
    for (std::size_t a = 0; a < nu1; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < nu2; ++b) {
        const std::size_t c = a * nu2 + b;
        const double w = u2_y1[y1 * nu2 + b];
        if (w != 0.0) acc += w * ((alpha / s1) * lq.y1_u[c * n1 + y1] + lq.u1u2[c]);
        if (abar > 0.0)
          for (std::size_t y2 = 0; y2 < n2; ++y2) {
            const double v = m.y2_given_y1()(y1, y2) * k.u2_given_y2(y2, b);
            if (v != 0.0) acc += (abar / s1) * v * lq.y2_u[c * n2 + y2];
          }
      }
      r.values[y1 * nu1 + a] = acc;
    }
  return r;
}

/// mu_2(u2, y2), region-1 orientation, with the previous-iterate anchor
/// marginal `pu2_prev`.
inline LogWeightTable mu_anchor(const BtSourceModel& m, const EncoderKernels& k, const LogTables& lq,
                                std::span<const double> pu2_prev, double s1, double s2, double alpha,
                                LogPolicy policy) {
  const double abar = 1.0 - alpha;
  const std::size_t n1 = m.y1_size(), n2 = m.y2_size();
  const std::size_t nu1 = k.u1_given_y1.out_size(), nu2 = k.u2_given_y2.out_size();
  const auto u1_y2 = compose(m.y1_given_y2(), k.u1_given_y1);
  LogWeightTable r{n2, nu2, std::vector<double>(n2 * nu2, 0.0), lq.clamped};
  for (std::size_t b = 0; b < nu2; ++b) {
    const double tail = lq.u2[b] - (s1 / s2) * checked_log(pu2_prev[b], policy, r.clamped, "p(u2)", b);
    for (std::size_t y2 = 0; y2 < n2; ++y2) {
      double acc = 0.0;
      for (std::size_t a = 0; a < nu1; ++a) {
        const std::size_t c = a * nu2 + b;
        const double w = u1_y2[y2 * nu1 + a];
        if (w != 0.0) acc += w * ((abar / s2) * lq.y2_u[c * n2 + y2] + (s1 / s2) * lq.u1u2[c]);
        if (alpha > 0.0)
          for (std::size_t y1 = 0; y1 < n1; ++y1) {
            const double v = m.y1_given_y2()(y2, y1) * k.u1_given_y1(y1, a);
            if (v != 0.0) acc += (alpha / s2) * v * lq.y1_u[c * n1 + y1];
          }
      }
      r.values[y2 * nu2 + b] = acc + tail;
    }
  }
  return r;
}

inline EncoderKernels update_p(const BtSourceModel& m, const EncoderKernels& k_prev, const BtAuxiliaries& q,
                               double s1, double s2, double alpha, UpdateOrder order, LogPolicy policy,
                               std::size_t* clamped = nullptr) {
  const LogTables lq = log_tables(q, policy);
  const auto pu2_prev = push_forward(m.py2().mass(), k_prev.u2_given_y2);
  EncoderKernels k = k_prev;
  std::size_t c = 0;
  auto lead = [&] {
    auto r = mu_lead(m, k, lq, s1, alpha);
    c += r.clamped;
    k.u1_given_y1 = softmax_rows(r.y_size, r.u_size, r.values);
  };
  auto anchor = [&] {
    auto r = mu_anchor(m, k, lq, pu2_prev, s1, s2, alpha, policy);
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

inline std::vector<double> swap_pairs(const CondPmf& t, std::size_t n1, std::size_t n2) {
  const std::size_t ny = t.out_size();
  std::vector<double> out(t.table().size());
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n2; ++b)
      for (std::size_t y = 0; y < ny; ++y) out[(b * n1 + a) * ny + y] = t(a * n2 + b, y);
  return out;
}

inline BtAuxiliaries swap_aux(const BtAuxiliaries& q) {
  const std::size_t n1 = q.qu1.size(), n2 = q.qu2.size();
  return {CondPmf(n1 * n2, q.y2_given_u1u2.out_size(), swap_pairs(q.y2_given_u1u2, n1, n2)),
          CondPmf(n1 * n2, q.y1_given_u1u2.out_size(), swap_pairs(q.y1_given_u1u2, n1, n2)),
          JointPmf({{"U1", n2}, {"U2", n1}}, transpose(q.u1u2.mass(), n1, n2)), q.qu2, q.qu1};
}

struct Oriented {
  BtSourceModel m;
  EncoderKernels k;
  double s_lead, s_anchor, alpha;
};

inline Oriented orient(const BtSourceModel& m, const EncoderKernels& k, const BtTradeoff& b) {
  if (b.region == 1) return {m, k, b.s1, b.s2, b.alpha};
  return {m.swapped(), swap_encoders(k), b.s2, b.s1, 1.0 - b.alpha};
}

}  // namespace detail

/// p(y1, y2, u1, u2) over axes Y1, Y2, U1, U2.
inline JointPmf full_joint(const BtSourceModel& m, const EncoderKernels& k) {
  detail::check_shapes(m, k);
  const std::size_t v1 = k.u1_given_y1.out_size(), v2 = k.u2_given_y2.out_size();
  std::vector<double> t;
  t.reserve(m.y1_size() * m.y2_size() * v1 * v2);
  for (std::size_t a = 0; a < m.y1_size(); ++a)
    for (std::size_t b = 0; b < m.y2_size(); ++b)
      for (std::size_t u = 0; u < v1; ++u)
        for (std::size_t w = 0; w < v2; ++w) t.push_back(m.p(a, b) * k.u1_given_y1(a, u) * k.u2_given_y2(b, w));
  return JointPmf({{"Y1", m.y1_size()}, {"Y2", m.y2_size()}, {"U1", v1}, {"U2", v2}}, std::move(t));
}

inline BtTuple tuple_of(const BtSourceModel& m, const EncoderKernels& k, int region) {
  const JointPmf j = full_joint(m, k);
  BtTuple t;
  t.D1 = conditional_entropy(j, {"Y1"}, {"U1", "U2"});
  t.D2 = conditional_entropy(j, {"Y2"}, {"U1", "U2"});
  if (region == 1) {
    t.R1 = mutual_information(j, {"Y1"}, {"U1"}, {"U2"});
    t.R2 = mutual_information(j, {"Y2"}, {"U2"});
  } else {
    t.R1 = mutual_information(j, {"Y1"}, {"U1"});
    t.R2 = mutual_information(j, {"Y2"}, {"U2"}, {"U1"});
  }
  return t;
}

/// alpha H(Y1|U1,U2) + abar H(Y2|U1,U2) + s1 R1 + s2 R2, via prob_core.
inline double f_beta_p(const BtSourceModel& m, const EncoderKernels& k, const BtTradeoff& b) {
  const BtTuple t = tuple_of(m, k, b.region);
  return b.alpha * t.D1 + b.abar() * t.D2 + b.s1 * t.R1 + b.s2 * t.R2;
}

inline double f_beta_pq(const BtSourceModel& m, const EncoderKernels& k, const BtAuxiliaries& q,
                        const BtTradeoff& b) {
  const auto o = detail::orient(m, k, b);
  const auto qo = b.region == 1 ? q : detail::swap_aux(q);
  const auto L = detail::induced_laws(o.m, o.k);
  return kBitsPerNat * detail::objective_nats(o.m, o.k, L, qo, o.s_lead, o.s_anchor, o.alpha);
}

/// Counterpart of ceo::surrogate_objective.
inline double surrogate_objective(const BtSourceModel& m, const EncoderKernels& k, const BtAuxiliaries& q,
                                  const BtTradeoff& b) {
  const auto o = detail::orient(m, k, b);
  const auto qo = b.region == 1 ? q : detail::swap_aux(q);
  const auto L = detail::induced_laws(o.m, o.k);
  return kBitsPerNat * detail::surrogate_nats(o.m, o.k, L, qo, o.s_lead, o.s_anchor, o.alpha);
}

inline BtAuxiliaries update_q_bt(const BtSourceModel& m, const EncoderKernels& k) {
  return detail::aux_from_laws(detail::induced_laws(m, k));
}

inline LogWeightTable mu(const BtSourceModel& m, const EncoderKernels& k, const BtAuxiliaries& q,
                         const BtTradeoff& b, int encoder, LogPolicy policy = LogPolicy::clamp) {
  if (encoder != 1 && encoder != 2) throw std::invalid_argument("mu: encoder index must be 1 or 2");
  const auto o = detail::orient(m, k, b);
  const auto qo = b.region == 1 ? q : detail::swap_aux(q);
  const auto lq = detail::log_tables(qo, policy);
  if ((encoder == 1) == (b.region == 1)) return detail::mu_lead(o.m, o.k, lq, o.s_lead, o.alpha);
  const auto prev = push_forward(o.m.py2().mass(), o.k.u2_given_y2);
  return detail::mu_anchor(o.m, o.k, lq, prev, o.s_lead, o.s_anchor, o.alpha, policy);
}

inline EncoderKernels update_p_bt(const BtSourceModel& m, const EncoderKernels& k_prev, const BtAuxiliaries& q,
                                  const BtTradeoff& b, UpdateOrder order = UpdateOrder::lead_first,
                                  LogPolicy policy = LogPolicy::clamp) {
  const auto o = detail::orient(m, k_prev, b);
  const auto qo = b.region == 1 ? q : detail::swap_aux(q);
  auto k = detail::update_p(o.m, o.k, qo, o.s_lead, o.s_anchor, o.alpha, order, policy);
  return b.region == 1 ? k : swap_encoders(k);
}

namespace detail {

struct RunResult {
  EncoderKernels k;
  std::vector<double> trace;  // nats
  int iterations = 0;
  bool converged = false;
  std::size_t clamped = 0;
};

inline RunResult run(const BtSourceModel& m, EncoderKernels k0, double s1, double s2, double alpha,
                     const SolverOptions& opts) {
  RunResult r;
  r.k = std::move(k0);
  auto L = induced_laws(m, r.k);
  auto q = aux_from_laws(L);
  double f = objective_nats(m, r.k, L, q, s1, s2, alpha);
  r.trace.push_back(f);
  for (int n = 1; n <= opts.max_iters; ++n) {
    r.k = update_p(m, r.k, q, s1, s2, alpha, opts.order, LogPolicy::clamp, &r.clamped);
    L = induced_laws(m, r.k);
    q = aux_from_laws(L);
    const double fn = objective_nats(m, r.k, L, q, s1, s2, alpha);
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

inline BtSolveReport finish(const BtSourceModel& m, const BtTradeoff& b, RunResult best, int restarts) {
  BtSolveReport rep;
  rep.kernels = b.region == 1 ? std::move(best.k) : swap_encoders(best.k);
  for (double v : best.trace) rep.objective_trace.push_back(kBitsPerNat * v);
  rep.objective = rep.objective_trace.back();
  rep.iterations = best.iterations;
  rep.converged = best.converged;
  rep.restarts_used = restarts;
  rep.clamped_logs = best.clamped;
  rep.tuple = tuple_of(m, rep.kernels, b.region);
  rep.weighted_distortion = b.alpha * rep.tuple.D1 + b.abar() * rep.tuple.D2;
  rep.identity_residual =
      std::abs(rep.weighted_distortion - (-b.s1 * rep.tuple.R1 - b.s2 * rep.tuple.R2 + rep.objective));
  return rep;
}

}  // namespace detail

inline BtSolveReport solve_bt(const BtSourceModel& m, const BtTradeoff& b, const SolverOptions& opts = {}) {
  opts.validate();
  const std::size_t u1 = opts.u1_size ? opts.u1_size : m.y1_size();
  const std::size_t u2 = opts.u2_size ? opts.u2_size : m.y2_size();
  if (u1 > m.y1_size() || u2 > m.y2_size())
    throw std::invalid_argument("SolverOptions: description alphabet larger than the observation alphabet");
  const auto o = detail::orient(m, constant_kernels(m.y1_size(), u1, m.y2_size(), u2), b);
  detail::RunResult best;
  bool have = false;
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(derive_seed(opts.rng_seed, {static_cast<std::uint64_t>(r)}));
    auto k0 = initial_kernels(rng, opts.init, o.m.y1_size(), o.k.u1_given_y1.out_size(), o.m.y2_size(),
                              o.k.u2_given_y2.out_size());
    auto run = detail::run(o.m, std::move(k0), o.s_lead, o.s_anchor, o.alpha, opts);
    if (!have || run.trace.back() < best.trace.back()) {
      best = std::move(run);
      have = true;
    }
  }
  return detail::finish(m, b, std::move(best), opts.restarts);
}

inline BtSolveReport solve_bt_from(const BtSourceModel& m, const BtTradeoff& b, const EncoderKernels& start,
                                   const SolverOptions& opts = {}) {
  opts.validate();
  detail::check_shapes(m, start);
  const auto o = detail::orient(m, start, b);
  return detail::finish(m, b, detail::run(o.m, o.k, o.s_lead, o.s_anchor, o.alpha, opts), 1);
}

/// F_beta(P) through the fast induced-law path, bits.
inline double objective_at(const BtSourceModel& m, const EncoderKernels& k, const BtTradeoff& b) {
  const auto o = detail::orient(m, k, b);
  const auto L = detail::induced_laws(o.m, o.k);
  return kBitsPerNat *
         detail::objective_nats(o.m, o.k, L, detail::aux_from_laws(L), o.s_lead, o.s_anchor, o.alpha);
}

}  // namespace rdregion::bt
