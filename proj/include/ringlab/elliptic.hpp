#pragma once

// Complete elliptic integrals and Jacobi elliptic functions in the parameter
// convention m = k^2. Everything near m = 1 is driven by the complementary
// parameter 1 - m, which is stored exactly so that solitons with 1 - m far
// below machine epsilon remain representable.

namespace ringlab::elliptic {

class EllipticParameter;
EllipticParameter invert_product(double target, double feasibility_tol);

class EllipticParameter {
 public:
  /// Parameter m in [0, 1]; throws DomainError otherwise.
  explicit EllipticParameter(double m);

  /// Build from the complementary parameter m1 = 1 - m in [0, 1].
  static EllipticParameter from_complement(double m1);

  double m() const noexcept { return m_; }
  double complement() const noexcept { return m1_; }

 private:
  friend EllipticParameter invert_product(double, double);

  EllipticParameter(double m, double m1) noexcept : m_(m), m1_(m1) {}

  double m_;
  double m1_;
};

/// K(m) by arithmetic-geometric mean. Requires m < 1.
double complete_K(EllipticParameter m);

/// E(m). Accepts m = 1 (E = 1).
double complete_E(EllipticParameter m);

struct JacobiValues {
  double sn;
  double cn;
  double dn;
};

/// sn, cn, dn from one descending Landen/AGM sweep. Requires m < 1.
JacobiValues jacobi(double u, EllipticParameter m);

double jacobi_sn(double u, EllipticParameter m);
double jacobi_cn(double u, EllipticParameter m);
double jacobi_dn(double u, EllipticParameter m);

/// Solve E(m) K(m) = target for m. Targets within `feasibility_tol`
/// (relative) below pi^2/4 snap to m = 0; anything lower throws
/// InfeasibleTarget.
EllipticParameter invert_product(double target, double feasibility_tol = 1e-7);

/// pi^2 / 4, the minimum of E(m) K(m), attained at m = 0.
inline constexpr double kMinProduct = 2.4674011002723395;

}  // namespace ringlab::elliptic
