#pragma once

// Compactly supported bump weights and the radial transform W~_i(t).

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hecke/error.hpp"
#include "hecke/parallel.hpp"

namespace hecke {

enum class WeightKind { kStandardBump };

inline std::string to_string(WeightKind) { return "standard_bump"; }

inline WeightKind weight_kind_from_string(const std::string& s) {
  if (s == "standard_bump") return WeightKind::kStandardBump;
  throw DomainError("unknown weight kind: " + s);
}

// amplitude * exp(-(b-a)^2 / ((t-a)(b-t))) on (a, b), zero elsewhere. The
// exponent is normalized so the midpoint value is amplitude * e^-4.
struct SmoothWeight {
  WeightKind kind = WeightKind::kStandardBump;
  double support_lo = 0.0;
  double support_hi = 1.0;
  double amplitude = 1.0;

  friend bool operator==(const SmoothWeight&, const SmoothWeight&) = default;
};

inline void validate(const SmoothWeight& w) {
  if (!(w.support_lo >= 0.0) || !(w.support_hi > w.support_lo))
    throw DomainError("weight support must satisfy 0 <= lo < hi");
  if (!(w.amplitude >= 0.0)) throw DomainError("weight amplitude must be non-negative");
}

inline double eval(const SmoothWeight& w, double t) {
  if (!(t > w.support_lo) || !(t < w.support_hi)) return 0.0;
  const double width = w.support_hi - w.support_lo;
  const double denom = (t - w.support_lo) * (w.support_hi - t);
  return w.amplitude * std::exp(-width * width / denom);
}

namespace detail {

inline constexpr double kQuadratureTol = 1e-12;

// Bisection driven by the Gauss-Kronrod(15/31) error estimate; each panel must
// meet its length-proportional share of the absolute tolerance.
template <typename F>
double adaptive_panel(F& f, double a, double b, double tol, int depth, double& err) {
  double e = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &e);
  if (e <= tol || depth == 0) {
    err += e;
    return v;
  }
  const double m = 0.5 * (a + b);
  return adaptive_panel(f, a, m, 0.5 * tol, depth - 1, err) + adaptive_panel(f, m, b, 0.5 * tol, depth - 1, err);
}

template <typename F>
double adaptive_integrate(F&& f, double a, double b, double abs_tol = kQuadratureTol) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  const double v = adaptive_panel(f, a, b, 0.5 * abs_tol, 18, err);
  if (!(err <= abs_tol)) throw ConvergenceError("adaptive quadrature did not reach tolerance");
  return v;
}

// Fixed 20-point Gauss-Legendre on `panels` equal panels of [a, b].
template <typename F>
double composite_gauss(F&& f, double a, double b, std::size_t panels) {
  if (!(b > a)) return 0.0;
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    total += Rule::integrate(f, lo, lo + h);
  }
  return total;
}

}  // namespace detail

// Integral of the weight over [0, inf).
inline double integral(const SmoothWeight& w) {
  validate(w);
  return detail::adaptive_integrate([&](double t) { return eval(w, t); }, w.support_lo, w.support_hi);
}

// Mellin transform: integral of w(t) t^(s-1) dt.
inline std::complex<double> mellin(const SmoothWeight& w, std::complex<double> s) {
  validate(w);
  if (!(s.real() > 0.0)) throw DomainError("mellin: Re s must be positive");
  auto kernel = [&](double t) { return eval(w, t) * std::pow(std::complex<double>(t, 0.0), s - 1.0); };
  const double re = detail::adaptive_integrate([&](double t) { return kernel(t).real(); }, w.support_lo, w.support_hi);
  const double im = detail::adaptive_integrate([&](double t) { return kernel(t).imag(); }, w.support_lo, w.support_hi);
  return {re, im};
}

namespace detail {

// Panels in u = sqrt(r) no wider than `max_width`, at least `min_panels`.
inline std::size_t panel_count(double length, double max_width, std::size_t min_panels) {
  const double n = std::ceil(length / max_width);
  return std::max(min_panels, static_cast<std::size_t>(n));
}

}  // namespace detail

// W~_i(t) = 2 int_0^{pi/2} int_0^inf cos(2 pi t sqrt(r) sin(theta)) W(r) dr dtheta,
// by nested quadrature: adaptive over theta, and over r (as u = sqrt r) with
// panels at most a quarter wavelength wide.
inline double w_tilde(const SmoothWeight& w, double t) {
  validate(w);
  if (!(t >= 0.0)) throw DomainError("w_tilde: t must be non-negative");
  const double ulo = std::sqrt(w.support_lo), uhi = std::sqrt(w.support_hi);
  auto inner = [&](double theta) {
    const double freq = t * std::sin(theta);  // oscillations per unit u
    const std::size_t panels =
        freq > 0.0 ? detail::panel_count(uhi - ulo, 0.25 / freq, 32) : std::size_t{32};
    return detail::composite_gauss(
        [&](double u) { return std::cos(2.0 * std::numbers::pi * freq * u) * eval(w, u * u) * 2.0 * u; }, ulo, uhi,
        panels);
  };
  return 2.0 * detail::adaptive_integrate(inner, 0.0, std::numbers::pi / 2.0, 1e-10);
}

// The same polar formula with the theta-integral done in closed form (J0 is
// the libm Bessel function):
// W~_i(t) = 2 pi int W(u^2) J0(2 pi t u) u du.
inline double w_tilde_radial(const SmoothWeight& w, double t) {
  validate(w);
  if (!(t >= 0.0)) throw DomainError("w_tilde: t must be non-negative");
  const double ulo = std::sqrt(w.support_lo), uhi = std::sqrt(w.support_hi);
  const std::size_t panels = t > 0.0 ? detail::panel_count(uhi - ulo, 0.5 / t, 64) : std::size_t{64};
  const double omega = 2.0 * std::numbers::pi * t;
  return 2.0 * std::numbers::pi *
         detail::composite_gauss(
             [&](double u) { return eval(w, u * u) * ::j0(omega * u) * u; }, ulo, uhi,
             panels);
}

// Geometric grid on [1, 1e4] used for truncation thresholds.
inline std::vector<double> decay_grid() {
  std::vector<double> grid;
  for (double t = 1.0; t <= 1e4 * (1 + 1e-12); t *= 1.05) grid.push_back(t);
  return grid;
}

// Smallest grid point T with |W~_i| <= eps on all of [T, 2T]. The window is
// sampled at spacing 1/(32 sqrt(hi)), a fraction of the shortest period
// (W~_i is band-limited to |u| <= sqrt(hi)), against eps cos(pi/32) so that
// peaks between samples stay below eps.
inline double decay_threshold_uncached(const SmoothWeight& w, double eps) {
  const auto grid = decay_grid();
  const double h = 1.0 / (32.0 * std::sqrt(w.support_hi));
  const double bound = eps * std::cos(std::numbers::pi / 32.0);
  std::vector<double> dense;
  auto value = [&](std::size_t k) {
    while (dense.size() <= k) dense.push_back(-1.0);
    if (dense[k] < 0.0) dense[k] = std::abs(w_tilde_radial(w, static_cast<double>(k) * h));
    return dense[k];
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    if (2.0 * t > grid.back()) break;
    if (std::abs(w_tilde_radial(w, t)) > eps) continue;
    const auto k0 = static_cast<std::size_t>(std::ceil(t / h));
    const auto k1 = static_cast<std::size_t>(std::floor(2.0 * t / h));
    double bad = -1.0;
    for (std::size_t k = k0; k <= k1; ++k) {
      if (value(k) > bound) {
        bad = static_cast<double>(k) * h;
        break;
      }
    }
    if (bad < 0.0) return t;
    while (i + 1 < grid.size() && grid[i + 1] <= bad) ++i;
  }
  throw ConvergenceError("decay_threshold: not found on [1, 1e4]");
}

inline double decay_threshold(const SmoothWeight& w, double eps) {
  validate(w);
  if (!(eps >= 1e-14)) throw DomainError("decay_threshold: eps must be >= 1e-14");
  using Key = std::tuple<double, double, double, double>;
  static std::mutex mu;
  static std::map<Key, double> memo;
  const Key key{w.support_lo, w.support_hi, w.amplitude, eps};
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  const double t = decay_threshold_uncached(w, eps);
  std::lock_guard lock(mu);
  memo.emplace(key, t);
  return t;
}

// W~_i tabulated as piecewise Chebyshev interpolants of degree 20 on pieces
// of width 1/2 covering [0, t_max]. W~_i is band-limited in t (the support
// lies in |u| <= sqrt(hi)), so each piece is resolved to rounding level.
class TransformTable {
 public:
  static constexpr int kDegree = 20;

  static TransformTable build(const SmoothWeight& w, double t_max, unsigned threads = 1) {
    validate(w);
    if (!(t_max > 0.0)) throw DomainError("TransformTable: t_max must be positive");
    TransformTable table;
    table.weight_ = w;
    table.requested_ = t_max;
    table.piece_width_ = 0.5 / std::max(1.0, std::sqrt(w.support_hi));
    table.pieces_ = static_cast<std::size_t>(std::ceil(t_max / table.piece_width_));
    table.t_max_ = table.piece_width_ * static_cast<double>(table.pieces_);
    constexpr int n = kDegree + 1;
    table.grid_.resize(table.pieces_ * n);
    for (std::size_t p = 0; p < table.pieces_; ++p) {
      const double a = table.piece_width_ * static_cast<double>(p);
      for (int j = 0; j < n; ++j) {
        const double x = std::cos(std::numbers::pi * (j + 0.5) / n);
        table.grid_[p * n + j] = a + 0.5 * table.piece_width_ * (x + 1.0);
      }
    }
    // Node values via the uniform rule in u = sqrt(r): the integrand vanishes
    // to all orders at both ends of the support, so the rule converges
    // spectrally once the spacing resolves the J0 oscillation with margin.
    const double ulo = std::sqrt(w.support_lo), uhi = std::sqrt(w.support_hi);
    const auto m = static_cast<std::size_t>(std::ceil((2.0 * table.t_max_ + 400.0) * (uhi - ulo))) + 1;
    const double h = (uhi - ulo) / static_cast<double>(m);
    std::vector<double> nodes, mass;
    for (std::size_t j = 1; j < m; ++j) {
      const double u = ulo + h * static_cast<double>(j);
      const double c = h * eval(w, u * u) * u;
      if (c != 0.0) {
        nodes.push_back(u);
        mass.push_back(c);
      }
    }
    table.values_ = parallel_map<double>(table.grid_.size(), threads, [&](std::size_t i) {
      const double omega = 2.0 * std::numbers::pi * table.grid_[i];
      double acc = 0.0;
      for (std::size_t j = 0; j < nodes.size(); ++j) acc += mass[j] * ::j0(omega * nodes[j]);
      return 2.0 * std::numbers::pi * acc;
    });
    table.coeffs_.assign(table.grid_.size(), 0.0);
    for (std::size_t p = 0; p < table.pieces_; ++p) {
      for (int k = 0; k < n; ++k) {
        double c = 0.0;
        for (int j = 0; j < n; ++j) c += table.values_[p * n + j] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
        table.coeffs_[p * n + k] = (k == 0 ? 1.0 : 2.0) * c / n;
      }
    }
    return table;
  }

  const SmoothWeight& weight() const { return weight_; }
  double t_max() const { return t_max_; }
  double requested_t_max() const { return requested_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  // Interpolated W~_i(t) for 0 <= t <= t_max; direct evaluation beyond.
  double operator()(double t) const {
    if (!(t >= 0.0)) throw DomainError("TransformTable: t must be non-negative");
    if (t >= t_max_) return w_tilde_radial(weight_, t);
    const auto p = std::min(pieces_ - 1, static_cast<std::size_t>(t / piece_width_));
    const double a = piece_width_ * static_cast<double>(p);
    const double x = 2.0 * (t - a) / piece_width_ - 1.0;
    const double* c = &coeffs_[p * (kDegree + 1)];
    double b1 = 0.0, b2 = 0.0;
    for (int k = kDegree; k >= 1; --k) {
      const double b0 = 2.0 * x * b1 - b2 + c[k];
      b2 = b1;
      b1 = b0;
    }
    return x * b1 - b2 + c[0];
  }

 private:
  SmoothWeight weight_;
  double piece_width_ = 0.5;
  double t_max_ = 0.0;
  double requested_ = 0.0;
  std::size_t pieces_ = 0;
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> coeffs_;
};

// Process-wide memo of tables keyed by (weight, t_max). Exact keys keep results
// independent of what else the process evaluated earlier.
inline std::shared_ptr<const TransformTable> cached_transform_table(const SmoothWeight& w, double t_max,
                                                                    unsigned threads = 1) {
  static std::mutex mutex;
  static std::vector<std::shared_ptr<const TransformTable>> tables;
  std::lock_guard lock(mutex);
  for (auto& t : tables)
    if (t->weight() == w && t->requested_t_max() == t_max) return t;
  auto table = std::make_shared<const TransformTable>(TransformTable::build(w, t_max, threads));
  tables.push_back(table);
  return table;
}

}  // namespace hecke
