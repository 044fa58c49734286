// Finite-alphabet probability tables and information measures.
//
// All information quantities are reported in bits. Tables are dense and
// immutable once constructed; every constructor validates normalization.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rdregion {

/// Normalization slack accepted as-is.
inline constexpr double kNormTol = 1e-12;
/// Normalization slack that is silently repaired by renormalizing.
inline constexpr double kRenormTol = 1e-9;
/// Returned by kl_divergence when p is not absolutely continuous w.r.t. q.
inline constexpr double kInfiniteDivergence = std::numeric_limits<double>::infinity();

inline bool is_infinite_divergence(double v) { return std::isinf(v) && v > 0; }

namespace detail {

/// -p log2 p with the 0 log 0 = 0 convention.
inline double plog2p(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

inline double sum_of(std::span<const double> v) {
  // Neumaier summation; tables are small but the 1e-12 checks are tight.
  double s = 0.0, c = 0.0;
  for (double x : v) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

/// Validates non-negativity and normalization of `mass`, renormalizing when
/// the error is within kRenormTol. `what` names the table in error messages.
inline void normalize_checked(std::span<double> mass, std::string_view what) {
  if (mass.empty()) throw std::invalid_argument(std::string(what) + ": empty support");
  for (double x : mass) {
    if (!std::isfinite(x) || x < 0.0)
      throw std::invalid_argument(std::string(what) + ": entries must be finite and non-negative");
  }
  const double total = sum_of(mass);
  const double err = std::abs(total - 1.0);
  if (err > kRenormTol)
    throw std::invalid_argument(std::string(what) + ": mass sums to " + std::to_string(total) +
                                ", expected 1");
  if (err > kNormTol)
    for (double& x : mass) x /= total;
}

}  // namespace detail

/// Probability mass function over {0, ..., size-1}.
class Pmf {
 public:
  Pmf() = default;
  explicit Pmf(std::vector<double> mass) : mass_(std::move(mass)) {
    detail::normalize_checked(mass_, "Pmf");
  }

  static Pmf uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Pmf: empty support");
    return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }
  static Pmf point_mass(std::size_t n, std::size_t at) {
    if (at >= n) throw std::invalid_argument("Pmf: point mass outside support");
    std::vector<double> m(n, 0.0);
    m[at] = 1.0;
    return Pmf(std::move(m));
  }

  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }
  std::span<const double> mass() const { return mass_; }

 private:
  std::vector<double> mass_;
};

/// Conditional pmf p(out | given) stored as `given_size` rows of length
/// `out_size`. Rows whose conditioning event had zero probability are kept
/// uniform and flagged as degenerate.
class CondPmf {
 public:
  CondPmf() = default;
  CondPmf(std::size_t given_size, std::size_t out_size, std::vector<double> rows)
      : given_(given_size), out_(out_size), rows_(std::move(rows)), degenerate_(given_size, false) {
    if (given_ == 0 || out_ == 0) throw std::invalid_argument("CondPmf: empty alphabet");
    if (rows_.size() != given_ * out_) throw std::invalid_argument("CondPmf: table size mismatch");
    for (std::size_t g = 0; g < given_; ++g)
      detail::normalize_checked(std::span<double>(rows_).subspan(g * out_, out_),
                                "CondPmf row " + std::to_string(g));
  }

  static CondPmf from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("CondPmf: no rows");
    const std::size_t out = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * out);
    for (const auto& r : rows) {
      if (r.size() != out) throw std::invalid_argument("CondPmf: ragged rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return CondPmf(rows.size(), out, std::move(flat));
  }

  static CondPmf identity(std::size_t n) {
    std::vector<double> t(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) t[i * n + i] = 1.0;
    return CondPmf(n, n, std::move(t));
  }

  /// Every row equal to `row`.
  static CondPmf constant(std::size_t given_size, const Pmf& row) {
    std::vector<double> t;
    t.reserve(given_size * row.size());
    for (std::size_t g = 0; g < given_size; ++g) t.insert(t.end(), row.mass().begin(), row.mass().end());
    return CondPmf(given_size, row.size(), std::move(t));
  }

  /// Builds from a joint table p(g, o) (row-major), normalizing each row and
  /// flagging rows with zero mass.
  static CondPmf from_joint(std::size_t given_size, std::size_t out_size,
                            std::span<const double> joint) {
    std::vector<double> t(joint.begin(), joint.end());
    std::vector<bool> flags(given_size, false);
    for (std::size_t g = 0; g < given_size; ++g) {
      auto row = std::span<double>(t).subspan(g * out_size, out_size);
      const double z = detail::sum_of(row);
      if (z > 0.0) {
        for (double& x : row) x /= z;
      } else {
        std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(out_size));
        flags[g] = true;
      }
    }
    CondPmf c(given_size, out_size, std::move(t));
    c.degenerate_ = std::move(flags);
    return c;
  }

  std::size_t given_size() const { return given_; }
  std::size_t out_size() const { return out_; }
  double operator()(std::size_t g, std::size_t o) const { return rows_[g * out_ + o]; }
  std::span<const double> row(std::size_t g) const {
    return std::span<const double>(rows_).subspan(g * out_, out_);
  }
  std::span<const double> table() const { return rows_; }
  bool degenerate(std::size_t g) const { return degenerate_[g]; }
  bool any_degenerate() const {
    return std::find(degenerate_.begin(), degenerate_.end(), true) != degenerate_.end();
  }

 private:
  std::size_t given_ = 0;
  std::size_t out_ = 0;
  std::vector<double> rows_;
  std::vector<bool> degenerate_;
};

struct Axis {
  std::string label;
  std::size_t size = 0;
};

using AxisSet = std::vector<std::string>;

/// Dense joint pmf over labelled axes, row-major (last axis fastest).
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(std::vector<Axis> axes, std::vector<double> mass) : axes_(std::move(axes)), mass_(std::move(mass)) {
    if (axes_.empty()) throw std::invalid_argument("JointPmf: no axes");
    std::size_t n = 1;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      if (axes_[a].size == 0) throw std::invalid_argument("JointPmf: axis '" + axes_[a].label + "' is empty");
      for (std::size_t b = 0; b < a; ++b)
        if (axes_[b].label == axes_[a].label)
          throw std::invalid_argument("JointPmf: duplicate axis '" + axes_[a].label + "'");
      n *= axes_[a].size;
    }
    if (mass_.size() != n) throw std::invalid_argument("JointPmf: table size mismatch");
    detail::normalize_checked(mass_, "JointPmf");
  }

  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t rank() const { return axes_.size(); }
  std::span<const double> mass() const { return mass_; }

  std::size_t axis_index(std::string_view label) const {
    for (std::size_t a = 0; a < axes_.size(); ++a)
      if (axes_[a].label == label) return a;
    throw std::invalid_argument("unknown axis label '" + std::string(label) + "'");
  }
  bool has_axis(std::string_view label) const {
    return std::any_of(axes_.begin(), axes_.end(), [&](const Axis& a) { return a.label == label; });
  }

  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(axes_.size(), 1);
    for (std::size_t a = axes_.size(); a-- > 1;) s[a - 1] = s[a] * axes_[a].size;
    return s;
  }

  double at(std::span<const std::size_t> idx) const {
    const auto s = strides();
    std::size_t off = 0;
    for (std::size_t a = 0; a < axes_.size(); ++a) off += idx[a] * s[a];
    return mass_[off];
  }
  double at(std::initializer_list<std::size_t> idx) const {
    return at(std::span<const std::size_t>(idx.begin(), idx.size()));
  }

  Pmf flatten() const { return Pmf(mass_); }

 private:
  std::vector<Axis> axes_;
  std::vector<double> mass_;
};

/// Sums out every axis not listed in `keep_axes`. The result's axes follow
/// the order given in `keep_axes`.
inline JointPmf marginalize(const JointPmf& j, const AxisSet& keep_axes) {
  if (keep_axes.empty()) throw std::invalid_argument("marginalize: empty axis set");
  std::vector<std::size_t> keep;
  for (const auto& l : keep_axes) {
    const std::size_t a = j.axis_index(l);
    if (std::find(keep.begin(), keep.end(), a) != keep.end())
      throw std::invalid_argument("marginalize: axis '" + l + "' listed twice");
    keep.push_back(a);
  }
  std::vector<Axis> out_axes;
  for (std::size_t a : keep) out_axes.push_back(j.axes()[a]);
  std::vector<std::size_t> out_strides(keep.size(), 1);
  for (std::size_t k = keep.size(); k-- > 1;) out_strides[k - 1] = out_strides[k] * out_axes[k].size;
  std::size_t out_n = out_strides.empty() ? 1 : out_strides[0] * out_axes[0].size;

  std::vector<double> out(out_n, 0.0);
  const auto& axes = j.axes();
  std::vector<std::size_t> idx(axes.size(), 0);
  const auto mass = j.mass();
  for (std::size_t flat = 0; flat < mass.size(); ++flat) {
    std::size_t o = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) o += idx[keep[k]] * out_strides[k];
    out[o] += mass[flat];
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < axes[a].size) break;
      idx[a] = 0;
    }
  }
  return JointPmf(std::move(out_axes), std::move(out));
}

/// p(target | given). Rows are indexed by the row-major flattening of
/// `given_axes`, columns by that of `target_axes`.
inline CondPmf condition(const JointPmf& j, const AxisSet& target_axes, const AxisSet& given_axes) {
  if (target_axes.empty()) throw std::invalid_argument("condition: empty target axis set");
  for (const auto& t : target_axes)
    if (std::find(given_axes.begin(), given_axes.end(), t) != given_axes.end())
      throw std::invalid_argument("condition: axis '" + t + "' is both target and given");
  if (given_axes.empty()) {
    const JointPmf m = marginalize(j, target_axes);
    return CondPmf(1, m.mass().size(), std::vector<double>(m.mass().begin(), m.mass().end()));
  }
  AxisSet all = given_axes;
  all.insert(all.end(), target_axes.begin(), target_axes.end());
  const JointPmf m = marginalize(j, all);
  std::size_t g = 1;
  for (std::size_t k = 0; k < given_axes.size(); ++k) g *= m.axes()[k].size;
  return CondPmf::from_joint(g, m.mass().size() / g, m.mass());
}

inline double entropy(const Pmf& p) {
  double h = 0.0;
  for (double x : p.mass()) h += detail::plog2p(x);
  return std::max(h, 0.0);
}

inline double entropy(const JointPmf& j) {
  double h = 0.0;
  for (double x : j.mass()) h += detail::plog2p(x);
  return std::max(h, 0.0);
}

namespace detail {

inline AxisSet axis_union(const AxisSet& a, const AxisSet& b) {
  AxisSet u = a;
  for (const auto& l : b)
    if (std::find(u.begin(), u.end(), l) == u.end()) u.push_back(l);
  return u;
}

inline AxisSet dedup(const AxisSet& a) { return axis_union({}, a); }

inline double joint_entropy(const JointPmf& j, const AxisSet& axes) {
  if (axes.empty()) return 0.0;
  return entropy(marginalize(j, dedup(axes)));
}

}  // namespace detail

/// H(target | given) = H(target, given) - H(given). Overlapping sets are
/// allowed (H(A | A) = 0).
inline double conditional_entropy(const JointPmf& j, const AxisSet& target_axes, const AxisSet& given_axes) {
  if (target_axes.empty()) throw std::invalid_argument("conditional_entropy: empty target axis set");
  for (const auto& l : detail::axis_union(target_axes, given_axes)) (void)j.axis_index(l);
  const double h = detail::joint_entropy(j, detail::axis_union(target_axes, given_axes)) -
                   detail::joint_entropy(j, given_axes);
  return std::max(h, 0.0);
}

/// I(a; b | cond).
inline double mutual_information(const JointPmf& j, const AxisSet& a_axes, const AxisSet& b_axes,
                                 const AxisSet& cond_axes = {}) {
  if (a_axes.empty() || b_axes.empty())
    throw std::invalid_argument("mutual_information: empty axis set");
  for (const auto& l : detail::axis_union(detail::axis_union(a_axes, b_axes), cond_axes)) (void)j.axis_index(l);
  const AxisSet ac = detail::axis_union(a_axes, cond_axes);
  const AxisSet bc = detail::axis_union(b_axes, cond_axes);
  const AxisSet abc = detail::axis_union(ac, b_axes);
  return detail::joint_entropy(j, ac) + detail::joint_entropy(j, bc) - detail::joint_entropy(j, abc) -
         detail::joint_entropy(j, cond_axes);
}

/// D(p || q) in bits; kInfiniteDivergence when p(i) > 0 and q(i) = 0.
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: support size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInfiniteDivergence;
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

inline double kl_divergence(const Pmf& p, const Pmf& q) { return kl_divergence(p.mass(), q.mass()); }

}  // namespace rdregion
