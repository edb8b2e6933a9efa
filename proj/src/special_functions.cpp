#include "mad/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mad::special {
namespace detail {

double j0_series(double r) {
    const double q = -0.25 * r * r;
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 80; ++m) {
        term *= q / (static_cast<double>(m) * m);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && m > 2) break;
    }
    return sum;
}

BesselPair series(double r) {
    // J0 = sum_m t_m, Y0 = (2/pi) [J0 ln(r/2) - sum_m t_m psi(m+1)] with
    // t_m = (-1)^m (r/2)^{2m} / (m!)^2.
    const double q = -0.25 * r * r;
    double term = 1.0;
    double psi = -kEulerGamma;  // psi(1)
    double j0 = 1.0;
    double tail = psi;
    for (int m = 1; m < 80; ++m) {
        term *= q / (static_cast<double>(m) * m);
        psi += 1.0 / m;  // psi(m+1)
        j0 += term;
        tail += term * psi;
        if (std::abs(term) * (1.0 + std::abs(psi)) < 1e-18 && m > 2) break;
    }
    const double y0 = (2.0 / std::numbers::pi) * (j0 * std::log(0.5 * r) - tail);
    return {j0, y0};
}

BesselPair miller(double r) {
    // Backward recurrence J_{n-1} = (2n/r) J_n - J_{n+1} from an even start
    // well above r, normalized with J0 + 2 sum J_{2k} = 1.
    int start = static_cast<int>(r) + 40;
    start += start % 2;
    double jp1 = 0.0;
    double jn = 1e-30;
    double norm = 0.0;   // sum over even n >= 2 of J_n
    double neumann = 0.0;  // sum over k >= 1 of (-1)^k J_{2k} / k
    for (int n = start; n > 0; --n) {
        if (n % 2 == 0) {
            norm += jn;
            const int k = n / 2;
            neumann += (k % 2 == 0 ? 1.0 : -1.0) * jn / k;
        }
        const double jm1 = (2.0 * n / r) * jn - jp1;
        jp1 = jn;
        jn = jm1;
        if (std::abs(jn) > 1e250) {
            jn *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            neumann *= 1e-250;
        }
    }
    const double scale = 1.0 / (jn + 2.0 * norm);
    const double j0 = jn * scale;
    const double y0 = (2.0 / std::numbers::pi) * ((std::log(0.5 * r) + kEulerGamma) * j0 - 2.0 * neumann * scale);
    return {j0, y0};
}

BesselPair asymptotic(double r) {
    // P ~ sum (-1)^k a_{2k} r^{-2k}, Q ~ sum (-1)^k a_{2k+1} r^{-2k-1},
    // a_k = prod_{j<=k} (-(2j-1)^2) / (k! 8^k).
    double p = 1.0;
    double q = 0.0;
    double a = 1.0;  // a_k / r^k
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= -(odd * odd) / (8.0 * k * r);
        if (std::abs(a) > prev) break;  // series has started to diverge
        prev = std::abs(a);
        // k odd -> contributes to Q with sign (-1)^((k-1)/2); k even -> P with (-1)^(k/2)
        if (k % 2 == 1) {
            q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * a;
        } else {
            p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * a;
        }
        if (std::abs(a) < 1e-17) break;
    }
    const double chi = r - 0.25 * std::numbers::pi;
    const double amp = std::sqrt(2.0 / (std::numbers::pi * r));
    const double c = std::cos(chi);
    const double s = std::sin(chi);
    return {amp * (p * c - q * s), amp * (p * s + q * c)};
}

}  // namespace detail

double digamma_int(int m) {
    if (m < 1) throw std::domain_error("digamma_int: m must be a positive integer");
    double psi = -kEulerGamma;
    for (int i = 1; i < m; ++i) psi += 1.0 / i;
    return psi;
}

double bessel_j0(double r) {
    r = std::abs(r);
    if (r <= detail::kSeriesLimit) return detail::j0_series(r);
    if (r < detail::kAsymptoticStart) return detail::miller(r).j0;
    return detail::asymptotic(r).j0;
}

BesselPair bessel_j0_y0(double r) {
    if (!(r > 0.0)) throw std::domain_error("bessel_y0: argument must be positive");
    if (r <= detail::kSeriesLimit) return detail::series(r);
    if (r < detail::kAsymptoticStart) return detail::miller(r);
    return detail::asymptotic(r);
}

double bessel_y0(double r) { return bessel_j0_y0(r).y0; }

KernelId KernelId::helmholtz_j0(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("Helmholtz kernel requires k > 0");
    return KernelId(KernelKind::HelmholtzJ0, k);
}

KernelId KernelId::helmholtz_y0(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("Helmholtz kernel requires k > 0");
    return KernelId(KernelKind::HelmholtzY0, k);
}

double kernel_radial(const KernelId& id, double r) {
    if (!(r > 0.0)) throw std::domain_error("kernel evaluated at its singularity");
    switch (id.kind()) {
        case KernelKind::Log2D: return std::log(r) / (2.0 * std::numbers::pi);
        case KernelKind::Newton3D: return -1.0 / (4.0 * std::numbers::pi * r);
        case KernelKind::HelmholtzJ0: return bessel_j0(std::sqrt(id.k()) * r);
        case KernelKind::HelmholtzY0: return bessel_y0(std::sqrt(id.k()) * r);
    }
    return 0.0;
}

double kernel_value(const KernelId& id, const Point& x, const Point& c) {
    return kernel_radial(id, distance(x, c));
}

}  // namespace mad::special
