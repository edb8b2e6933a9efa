#pragma once

#include "mad/geometry.hpp"

namespace mad::special {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Bessel function of the first kind, order zero. Absolute error below
/// 1e-12 on [0, 50].
double bessel_j0(double r);

/// Bessel function of the second kind, order zero. Throws for r <= 0.
double bessel_y0(double r);

/// J0 and Y0 at the same argument in one pass. Throws for r <= 0.
struct BesselPair {
    double j0;
    double y0;
};
BesselPair bessel_j0_y0(double r);

/// psi(m) for a positive integer m, from psi(1) = -gamma and psi(m+1) = psi(m) + 1/m.
double digamma_int(int m);

enum class KernelKind { Log2D, Newton3D, HelmholtzJ0, HelmholtzY0 };

/// A fundamental-solution kernel. Helmholtz kernels carry k > 0 and are
/// evaluated at sqrt(k) * |x - c| so that they solve lap(u) + k u = 0.
class KernelId {
public:
    static KernelId log2d() { return KernelId(KernelKind::Log2D, 0.0); }
    static KernelId newton3d() { return KernelId(KernelKind::Newton3D, 0.0); }
    static KernelId helmholtz_j0(double k);
    static KernelId helmholtz_y0(double k);

    KernelKind kind() const { return kind_; }
    double k() const { return k_; }

private:
    KernelId(KernelKind kind, double k) : kind_(kind), k_(k) {}
    KernelKind kind_;
    double k_;
};

/// Kernel at distance r > 0.
double kernel_radial(const KernelId& id, double r);

/// Kernel between x and center c. Throws std::domain_error when x == c.
double kernel_value(const KernelId& id, const Point& x, const Point& c);

namespace detail {
// Individual branches, exposed for switchover tests.
inline constexpr double kSeriesLimit = 8.0;
inline constexpr double kAsymptoticStart = 25.0;

BesselPair series(double r);           // power series, any r > 0 (accurate for r <= kSeriesLimit)
BesselPair miller(double r);           // backward recurrence + Neumann series for Y0
BesselPair asymptotic(double r);       // Hankel asymptotic expansion (accurate for large r)
double j0_series(double r);            // r >= 0
}  // namespace detail

}  // namespace mad::special
