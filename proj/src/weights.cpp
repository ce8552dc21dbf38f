#include "kbs/weights.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

#include "kbs/errors.hpp"

namespace kbs {
namespace mollifier {
namespace {

double bump_unnormalized(double y) {
  const double q = 1.0 - y * y;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

// Phi and the first moment m1(y) = int_{-1}^{y} t rho(t) dt on a uniform
// lattice over [-1, 1]. Each cell is integrated by 8-point Gauss-Legendre;
// between nodes we use cubic Hermite interpolation with the exact
// derivatives rho and y rho.
struct Tables {
  double h = 0.0;
  double inv_norm = 0.0;
  std::vector<double> cdf, moment;

  Tables() {
    static constexpr std::array<double, 4> gx = {
        0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
        0.9602898564975363};
    static constexpr std::array<double, 4> gw = {
        0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
        0.1012285362903763};
    const std::size_t cells = table_cells;
    h = 2.0 / static_cast<double>(cells);
    cdf.assign(cells + 1, 0.0);
    moment.assign(cells + 1, 0.0);
    double acc0 = 0.0, acc1 = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      const double mid = -1.0 + (static_cast<double>(i) + 0.5) * h;
      double c0 = 0.0, c1 = 0.0;
      for (std::size_t g = 0; g < gx.size(); ++g) {
        for (double sgn : {-1.0, 1.0}) {
          const double y = mid + sgn * 0.5 * h * gx[g];
          const double r = bump_unnormalized(y);
          c0 += gw[g] * r;
          c1 += gw[g] * y * r;
        }
      }
      acc0 += 0.5 * h * c0;
      acc1 += 0.5 * h * c1;
      cdf[i + 1] = acc0;
      moment[i + 1] = acc1;
    }
    inv_norm = 1.0 / acc0;
    for (std::size_t i = 0; i <= cells; ++i) {
      cdf[i] *= inv_norm;
      moment[i] *= inv_norm;
    }
    cdf[cells] = 1.0;
  }

  // Hermite interpolation of a tabulated function whose derivative is df.
  template <class D>
  double interpolate(const std::vector<double>& f, double y, D df) const {
    double pos = (y + 1.0) / h;
    auto i = static_cast<std::size_t>(pos);
    if (i >= table_cells) i = table_cells - 1;
    const double t = pos - static_cast<double>(i);
    const double y0 = -1.0 + static_cast<double>(i) * h;
    const double y1 = y0 + h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * f[i] + h10 * h * df(y0) + h01 * f[i + 1] + h11 * h * df(y1);
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

double rho(double y) { return bump_unnormalized(y) * tables().inv_norm; }

double rho_prime(double y) {
  const double q = 1.0 - y * y;
  if (q <= 0.0) return 0.0;
  return -2.0 * y / (q * q) * rho(y);
}

double cdf(double y) {
  if (y <= -1.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const Tables& t = tables();
  // the far tail sits below the table's rounding, where Hermite can dip
  // under 0 by a hair
  return std::clamp(t.interpolate(t.cdf, y, [](double z) { return rho(z); }), 0.0, 1.0);
}

double ramp(double y) {
  if (y <= -1.0) return 0.0;
  if (y >= 1.0) return y;
  const Tables& t = tables();
  const double m1 = t.interpolate(t.moment, y, [](double z) { return z * rho(z); });
  return y * cdf(y) - m1;
}

}  // namespace mollifier

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require_eps_b(double eps, double b) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw InvalidArgument("eps must be positive");
  if (!(b >= 5.0 * eps))
    throw InvalidArgument("b must be at least 5 eps");
}

// 1 - w
WeightFn complement(const WeightFn& w, std::string name) {
  WeightFn out;
  out.value = [v = w.value](double x) { return 1.0 - v(x); };
  out.d1 = [d = w.d1](double x) { return -d(x); };
  out.d2 = [d = w.d2](double x) { return -d(x); };
  out.support_lo = w.support_lo;
  out.support_hi = w.support_hi;
  out.name = std::move(name);
  return out;
}

// a * b, for factors whose transition regions do not overlap.
WeightFn product(const WeightFn& a, const WeightFn& b, std::string name) {
  WeightFn out;
  out.value = [a, b](double x) { return a.value(x) * b.value(x); };
  out.d1 = [a, b](double x) {
    return a.d1(x) * b.value(x) + a.value(x) * b.d1(x);
  };
  out.d2 = [a, b](double x) {
    return a.d2(x) * b.value(x) + 2.0 * a.d1(x) * b.d1(x) + a.value(x) * b.d2(x);
  };
  out.support_lo = std::min(a.support_lo, b.support_lo);
  out.support_hi = std::max(a.support_hi, b.support_hi);
  out.value_lo = std::max(a.value_lo, b.value_lo);
  out.value_hi = std::min(a.value_hi, b.value_hi);
  out.name = std::move(name);
  return out;
}

}  // namespace

std::vector<double> WeightFn::sample(const Grid& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = value(grid.nodes()[k]);
  return out;
}

std::vector<double> WeightFn::sample_d1(const Grid& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = d1(grid.nodes()[k]);
  return out;
}

std::vector<double> WeightFn::sample_d2(const Grid& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = d2(grid.nodes()[k]);
  return out;
}

WeightFn constant_weight(double c) {
  WeightFn w;
  w.value = [c](double) { return c; };
  w.d1 = [](double) { return 0.0; };
  w.d2 = [](double) { return 0.0; };
  w.constant = true;
  w.name = "constant";
  if (c == 0.0) w.value_lo = w.value_hi = 0.0;
  return w;
}

WeightFn smooth_step(double center, double halfwidth) {
  if (!(halfwidth > 0.0)) throw InvalidArgument("step half-width must be positive");
  WeightFn w;
  const double inv = 1.0 / halfwidth;
  w.value = [=](double x) { return mollifier::cdf((x - center) * inv); };
  w.d1 = [=](double x) { return inv * mollifier::rho((x - center) * inv); };
  w.d2 = [=](double x) {
    return inv * inv * mollifier::rho_prime((x - center) * inv);
  };
  w.support_lo = center - halfwidth;
  w.support_hi = center + halfwidth;
  w.value_lo = center - halfwidth;
  w.name = "smooth_step";
  return w;
}

WeightFn mollified_ramp(double x0, double x1, double w) {
  if (!(x1 > x0)) throw InvalidArgument("ramp needs x1 > x0");
  if (!(w > 0.0)) throw InvalidArgument("mollifier width must be positive");
  const double span = x1 - x0;
  WeightFn r;
  const double inv = 1.0 / w;
  r.value = [=](double x) {
    return w / span * (mollifier::ramp((x - x0) * inv) - mollifier::ramp((x - x1) * inv));
  };
  r.d1 = [=](double x) {
    return (mollifier::cdf((x - x0) * inv) - mollifier::cdf((x - x1) * inv)) / span;
  };
  r.d2 = [=](double x) {
    return (mollifier::rho((x - x0) * inv) - mollifier::rho((x - x1) * inv)) /
           (span * w);
  };
  r.support_lo = x0 - w;
  r.support_hi = x1 + w;
  r.value_lo = x0 - w;
  r.name = "mollified_ramp";
  return r;
}

WeightFn ramp_bump(double x0, double x1, double x2, double x3, double w) {
  if (!(x1 + w <= x2 - w)) throw InvalidArgument("ramp_bump plateau is empty");
  const WeightFn up = mollified_ramp(x0, x1, w);
  const WeightFn down = mollified_ramp(x2, x3, w);
  WeightFn b;
  b.value = [up, down](double x) { return up.value(x) - down.value(x); };
  b.d1 = [up, down](double x) { return up.d1(x) - down.d1(x); };
  b.d2 = [up, down](double x) { return up.d2(x) - down.d2(x); };
  b.support_lo = x0 - w;
  b.support_hi = x3 + w;
  b.value_lo = x0 - w;
  b.value_hi = x3 + w;
  b.name = "ramp_bump";
  return b;
}

// Linear ramp from 2 eps to b - eps smoothed at width eps/4: the flat part
// of the derivative covers [9 eps/4, b - 5 eps/4], which contains
// [3 eps, b - 2 eps], and supp chi' = [7 eps/4, b - 3 eps/4].
WeightFn build_chi(double eps, double b) {
  require_eps_b(eps, b);
  const double x0 = 2.0 * eps;
  const double x1 = b - eps;
  const double w = 0.25 * eps;
  const double span = b - 3.0 * eps;
  const double inv = 1.0 / w;
  WeightFn chi;
  chi.value = [=](double x) {
    if (x <= x0 - w) return 0.0;
    if (x >= x1 + w) return 1.0;
    return w / span * (mollifier::ramp((x - x0) * inv) - mollifier::ramp((x - x1) * inv));
  };
  chi.d1 = [=](double x) {
    return (mollifier::cdf((x - x0) * inv) - mollifier::cdf((x - x1) * inv)) / span;
  };
  chi.d2 = [=](double x) {
    return (mollifier::rho((x - x0) * inv) - mollifier::rho((x - x1) * inv)) /
           (span * w);
  };
  chi.support_lo = x0 - w;
  chi.support_hi = x1 + w;
  chi.value_lo = x0 - w;
  chi.name = "chi";
  return chi;
}

namespace {

// psi_eps = 1 - S(x; 3 eps/8, eps/8): 1 up to eps/4, 0 from eps/2 on.
WeightFn build_psi_eps(double eps) {
  WeightFn psi = complement(smooth_step(0.375 * eps, 0.125 * eps), "psi");
  psi.value_lo = -inf;
  psi.value_hi = 0.5 * eps;
  return psi;
}

}  // namespace

Partition build_partition(double eps, double b) {
  require_eps_b(eps, b);
  Partition p;
  p.chi = build_chi(eps, b);
  p.psi = build_psi_eps(eps);
  const WeightFn chi = p.chi, psi = p.psi;
  p.phi.value = [chi, psi](double x) { return 1.0 - chi.value(x) - psi.value(x); };
  p.phi.d1 = [chi, psi](double x) { return -chi.d1(x) - psi.d1(x); };
  p.phi.d2 = [chi, psi](double x) { return -chi.d2(x) - psi.d2(x); };
  p.phi.support_lo = psi.support_lo;
  p.phi.support_hi = chi.support_hi;
  p.phi.value_lo = psi.support_lo;
  p.phi.value_hi = chi.support_hi;
  p.phi.name = "phi";
  return p;
}

Partition build_power_partition(double eps, double b, int k) {
  if (k < 2) throw InvalidArgument("power partition needs k >= 2");
  Partition p = build_partition(eps, b);
  const WeightFn chi = p.chi, psi = p.psi;
  const double kk = static_cast<double>(k);
  // The radicand vanishes for x <= eps/4 and for x >= supp(chi') upper end.
  const double lo = psi.support_lo + 0.01 * eps;
  const double hi = chi.support_hi - 0.01 * eps;

  auto radicand = [chi, psi, kk](double x) {
    return std::max(0.0, 1.0 - std::pow(chi.value(x), kk) - psi.value(x));
  };
  auto radicand_d1 = [chi, psi, kk](double x) {
    return -kk * std::pow(chi.value(x), kk - 1.0) * chi.d1(x) - psi.d1(x);
  };
  auto radicand_d2 = [chi, psi, kk](double x) {
    const double c = chi.value(x);
    const double c1 = chi.d1(x);
    double second = kk * std::pow(c, kk - 1.0) * chi.d2(x);
    if (c1 != 0.0) second += kk * (kk - 1.0) * std::pow(c, kk - 2.0) * c1 * c1;
    return -second - psi.d2(x);
  };

  WeightFn& phi = p.phi;
  phi.value = [radicand, kk](double x) { return std::pow(radicand(x), 1.0 / kk); };
  phi.d1 = [=](double x) {
    if (x < lo || x > hi) return 0.0;
    const double r = radicand(x);
    if (r <= 0.0) return 0.0;
    return radicand_d1(x) * std::pow(r, 1.0 / kk - 1.0) / kk;
  };
  phi.d2 = [=](double x) {
    if (x < lo || x > hi) return 0.0;
    const double r = radicand(x);
    if (r <= 0.0) return 0.0;
    const double r1 = radicand_d1(x);
    const double a = 1.0 / kk;
    return a * std::pow(r, a - 1.0) * radicand_d2(x) +
           a * (a - 1.0) * std::pow(r, a - 2.0) * r1 * r1;
  };
  phi.name = "phi_tilde";
  return p;
}

ThetaEta build_theta_eta(double eps, double b) {
  require_eps_b(eps, b);
  ThetaEta out;
  const WeightFn theta_up = smooth_step(11.0 * eps / 60.0, eps / 60.0);
  const WeightFn theta_down = complement(smooth_step(b + 0.375 * eps, 0.125 * eps), "");
  out.theta = product(theta_up, theta_down, "theta");
  out.theta.value_lo = eps / 6.0;
  out.theta.value_hi = b + 0.5 * eps;

  const WeightFn eta_up = smooth_step(15.0 * eps / 112.0, eps / 112.0);
  const WeightFn eta_down = complement(smooth_step(b + 0.875 * eps, 0.125 * eps), "");
  out.eta = product(eta_up, eta_down, "eta");
  out.eta.value_lo = eps / 8.0;
  out.eta.value_hi = b + eps;
  return out;
}

WeightFn build_psi_sequence(double A, int ell) {
  if (!(A > 0.0)) throw InvalidArgument("A must be positive");
  if (ell < 1) throw InvalidArgument("ell must be >= 1");
  const double p = std::ldexp(A, -ell);
  const double q = p * std::sqrt(2.0);
  const double c = 0.5 * (p + q);
  const double w = 0.5 * (q - p);
  const double inv = 1.0 / w;
  WeightFn out;
  out.value = [=](double x) {
    return w * (mollifier::ramp((x + c) * inv) - mollifier::ramp((x - c) * inv));
  };
  out.d1 = [=](double x) {
    return mollifier::cdf((x + c) * inv) - mollifier::cdf((x - c) * inv);
  };
  out.d2 = [=](double x) {
    return inv * (mollifier::rho((x + c) * inv) - mollifier::rho((x - c) * inv));
  };
  out.support_lo = -q;
  out.support_hi = q;
  out.value_lo = -q;
  out.name = "psi_" + std::to_string(ell);
  return out;
}

WeightFn translate(const WeightFn& w, double shift) {
  WeightFn out = w;
  out.value = [v = w.value, shift](double x) { return v(x + shift); };
  out.d1 = [d = w.d1, shift](double x) { return d(x + shift); };
  out.d2 = [d = w.d2, shift](double x) { return d(x + shift); };
  out.support_lo = w.support_lo - shift;
  out.support_hi = w.support_hi - shift;
  out.value_lo = w.value_lo - shift;
  out.value_hi = w.value_hi - shift;
  return out;
}

}  // namespace kbs
