#include "ringlab/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ringlab/errors.hpp"

namespace ringlab::elliptic {
namespace {

constexpr int kMaxIterations = 64;
constexpr double kAgmTol = 1e-16;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Largest -log(1 - m) searched by invert_product; 1 - m ~ 1e-300 there.
constexpr double kMaxLogComplement = 690.0;

struct AgmResult {
  double mean;
  // sum_{n >= 0} 2^(n-1) c_n^2 with c_0^2 = m.
  double weighted_sum;
};

AgmResult agm(double m, double m1) {
  double a = 1.0;
  double b = std::sqrt(m1);
  double sum = 0.5 * m;
  double weight = 0.5;
  double prev_gap = std::numeric_limits<double>::infinity();
  for (int n = 0; n < kMaxIterations; ++n) {
    const double gap = std::abs(a - b);
    // Second clause stops a rounding-level ping-pong between a and b.
    if (gap <= kAgmTol * a || gap >= prev_gap) break;
    prev_gap = gap;
    const double c = 0.5 * (a - b);
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
    weight *= 2.0;
    sum += weight * c * c;
  }
  return {a, sum};
}

void require_below_one(EllipticParameter p, const char* who) {
  if (p.complement() <= 0.0) {
    throw DomainError(std::string(who) + ": requires m < 1");
  }
}

}  // namespace

EllipticParameter::EllipticParameter(double m) : m_(m), m1_(1.0 - m) {
  if (!(m >= 0.0 && m <= 1.0)) {
    throw DomainError("elliptic parameter m must lie in [0, 1], got " + std::to_string(m));
  }
}

EllipticParameter EllipticParameter::from_complement(double m1) {
  if (!(m1 >= 0.0 && m1 <= 1.0)) {
    throw DomainError("complementary parameter must lie in [0, 1], got " + std::to_string(m1));
  }
  return EllipticParameter(1.0 - m1, m1);
}

double complete_K(EllipticParameter p) {
  require_below_one(p, "complete_K");
  return std::numbers::pi / (2.0 * agm(p.m(), p.complement()).mean);
}

double complete_E(EllipticParameter p) {
  const double m = p.m();
  const double m1 = p.complement();
  if (m1 == 0.0) return 1.0;
  if (m <= 0.5) {
    const AgmResult r = agm(m, m1);
    return std::numbers::pi / (2.0 * r.mean) * (1.0 - r.weighted_sum);
  }
  // Legendre's relation E K' + E' K - K K' = pi/2 avoids the cancellation in
  // K (1 - sum) once K grows large.
  const double k = std::numbers::pi / (2.0 * agm(m, m1).mean);
  const AgmResult c = agm(m1, m);
  const double kc = std::numbers::pi / (2.0 * c.mean);
  const double kc_minus_ec = kc * c.weighted_sum;
  return (0.5 * std::numbers::pi + k * kc_minus_ec) / kc;
}

JacobiValues jacobi(double u, EllipticParameter p) {
  require_below_one(p, "jacobi");
  if (!std::isfinite(u)) throw DomainError("jacobi: argument must be finite");
  const double m = p.m();
  const double m1 = p.complement();
  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};

  const double period = 4.0 * complete_K(p);
  u -= period * std::round(u / period);

  std::array<double, kMaxIterations + 1> a{};
  std::array<double, kMaxIterations + 1> c{};
  a[0] = 1.0;
  c[0] = std::sqrt(m);
  double b = std::sqrt(m1);
  int n = 0;
  while (std::abs(c[n]) > kEps * a[n] && n < kMaxIterations) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }

  double phi = std::ldexp(a[n] * u, n);
  for (int j = n; j > 0; --j) {
    phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn^2 = m1 + m cn^2 keeps absolute accuracy where dn ~ sqrt(m1) is tiny.
  return {sn, cn, std::sqrt(m1 + m * cn * cn)};
}

double jacobi_sn(double u, EllipticParameter m) { return jacobi(u, m).sn; }
double jacobi_cn(double u, EllipticParameter m) { return jacobi(u, m).cn; }
double jacobi_dn(double u, EllipticParameter m) { return jacobi(u, m).dn; }

EllipticParameter invert_product(double target, double feasibility_tol) {
  if (!std::isfinite(target)) throw DomainError("invert_product: target must be finite");
  if (target < kMinProduct * (1.0 - feasibility_tol)) {
    throw InfeasibleTarget("invert_product: target " + std::to_string(target) +
                           " is below pi^2/4, the minimum of E(m)K(m)");
  }
  if (target <= kMinProduct) return EllipticParameter(0.0);

  // Search in x = -log(1 - m): g is monotone in x and well conditioned as
  // m -> 1, where m itself is no longer representable.
  auto param_at = [](double x) { return EllipticParameter(-std::expm1(-x), std::exp(-x)); };
  auto residual = [&](double x) {
    const EllipticParameter p = param_at(x);
    return complete_E(p) * complete_K(p) - target;
  };

  double lo = 0.0;
  double hi = kMaxLogComplement;
  if (residual(hi) < 0.0) {
    throw DomainError("invert_product: target " + std::to_string(target) +
                      " exceeds the representable parameter range");
  }
  double best = hi;
  double best_abs = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (std::abs(r) < best_abs) {
      best_abs = std::abs(r);
      best = mid;
    }
    if (best_abs <= 1e-14 * target) break;
    if (r < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 2.0 * kEps * hi) break;
  }
  return param_at(best);
}

}  // namespace ringlab::elliptic
