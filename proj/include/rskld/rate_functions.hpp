#pragma once

#include <cassert>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "rskld/error.hpp"
#include "rskld/quadrature.hpp"

namespace rskld {

/// Nonnegative extended real. +infinity is a distinct tag, never the result
/// of floating-point overflow.
class RateValue {
public:
    static RateValue infinity() noexcept { return RateValue(0.0, true); }
    static RateValue finite(double v) {
        if (std::isnan(v) || std::isinf(v)) throw NumericFailure("rate value is not a finite number");
        return RateValue(v < 0.0 ? 0.0 : v, false);
    }

    bool is_infinite() const noexcept { return infinite_; }
    bool is_finite() const noexcept { return !infinite_; }

    /// The finite value; throws for +infinity.
    double value() const {
        if (infinite_) throw std::logic_error("RateValue::value() on +infinity");
        return value_;
    }

    /// Finite value or IEEE +inf, for arithmetic at call sites that accept it.
    double as_double() const noexcept {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

    bool operator==(const RateValue&) const = default;

private:
    RateValue(double v, bool inf) : value_(v), infinite_(inf) {}
    double value_;
    bool infinite_;
};

/// I_1(x) = int_2^x sqrt(z^2 - 4) dz for x >= 2. With z = 2 cosh t this is
/// sinh(u) - u, u = 2 acosh(x/2); the series avoids cancellation near x = 2.
inline double rate_I1_antiderivative(double x) {
    if (x < 2.0) throw DomainError("rate_I1_antiderivative: x < 2");
    const double u = 2.0 * std::acosh(0.5 * x);
    if (u < 0.1) {
        const double u2 = u * u;
        return u * u2 * (1.0 / 6.0 + u2 * (1.0 / 120.0 + u2 * (1.0 / 5040.0 + u2 / 362880.0)));
    }
    return std::sinh(u) - u;
}

/// I_1(x) by adaptive quadrature of 2 sqrt((z/2)^2 - 1) after z = 2 + s^2.
inline QuadratureResult rate_I1_quadrature(double x, const QuadratureOptions& opt = {1e-13, 1e-14, 4000}) {
    if (x < 2.0) throw DomainError("rate_I1_quadrature: x < 2");
    auto integrand = [](double s) {
        const double s2 = s * s;
        return 2.0 * s2 * std::sqrt(4.0 + s2);  // sqrt(z^2-4) dz with z = 2 + s^2
    };
    return integrate(integrand, 0.0, std::sqrt(x - 2.0), opt);
}

/// Speed-m rate of the top r normalized rows: 2 sum_i int_2^{x_i} sqrt((z/2)^2-1) dz
/// on x_1 >= ... >= x_r >= 2, +infinity elsewhere.
inline RateValue rate_I_r(std::span<const double> xs) {
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] >= 2.0)) return RateValue::infinity();
        if (i > 0 && xs[i] > xs[i - 1]) return RateValue::infinity();
        total += rate_I1_antiderivative(xs[i]);
    }
    return RateValue::finite(total);
}

namespace detail {
// x + sqrt(12 + x^2) without cancellation for x < 0.
inline double x_plus_root12(double x, double s) { return x >= 0.0 ? x + s : 12.0 / (s - x); }
}  // namespace detail

/// Speed-m^2 rate of the GUE top eigenvalue below its mean; 0 for x >= 2.
inline RateValue rate_J(double x) {
    if (std::isnan(x)) throw DomainError("rate_J: NaN");
    if (x >= 2.0) return RateValue::finite(0.0);
    const double s = std::sqrt(12.0 + x * x);
    const double xps = detail::x_plus_root12(x, s);
    // x^3 + x^2 s = x^2 (x + s)
    const double poly = -x * (-72.0 * x + 30.0 * s + x * x * xps);
    return RateValue::finite((poly - 216.0 * std::log(xps / 6.0)) / 216.0);
}

inline double rate_J_prime(double x) {
    if (!(x <= 2.0)) throw DomainError("rate_J_prime: defined on x <= 2 (identically 0 to the right)");
    const double s = std::sqrt(12.0 + x * x);
    const double xps = detail::x_plus_root12(x, s);
    // -x^3 - s^3 = -(x + s)(x^2 - x s + s^2)
    return (36.0 * x - xps * (x * x - x * s + s * s)) / 54.0;
}

inline double rate_J_second(double x) {
    if (!(x <= 2.0)) throw DomainError("rate_J_second: defined on x <= 2");
    const double s = std::sqrt(12.0 + x * x);
    return (12.0 - x * detail::x_plus_root12(x, s)) / 18.0;
}

/// Speed-m^2 rate of the traceless GUE top eigenvalue below its mean:
/// +infinity for x <= 0, 0 for x >= 2, explicit formula between. Evaluated in
/// long double; the terms cancel to O((2-x)^3) near x = 2.
inline RateValue rate_K_closed(double xd) {
    if (std::isnan(xd)) throw DomainError("rate_K_closed: NaN");
    if (xd <= 0.0) return RateValue::infinity();
    if (xd >= 2.0) return RateValue::finite(0.0);
    using R = long double;
    const R x = xd;
    const R root81 = std::sqrt(R(81) * x * x + R(12));
    const R a = R(12) / (root81 + R(9) * x);  // sqrt(81x^2+12) - 9x
    const R a13 = std::cbrt(a);
    const R a23 = a13 * a13;
    const R c2 = std::cbrt(R(2));
    const R c3 = std::cbrt(R(3));
    const R three_23 = c3 * c3;                // 3^(2/3)
    const R three_16 = std::sqrt(c3);          // 3^(1/6)
    const R two_23 = c2 * c2;                  // 2^(2/3)
    const R three_56 = three_23 * three_16;    // 3^(5/6)
    const R root27 = std::sqrt(R(27) * x * x + R(4));
    const R log_arg = R(2) * c3 - c2 * a23;
    assert(a > 0 && log_arg > 0);

    const R t1 = R(3) * (R(9) * c2 * three_23 * a23 - R(8)) * x * x;
    const R t2 = R(9) * c2 * three_16 * a13 * (root27 * a13 - R(5) * c2 * three_16) * x;
    const R t3 = -R(6) * c2 * three_23 * a23;
    const R t4 = -R(3) * two_23 * three_56 * root27 * a13;
    const R t5 = R(16) * std::log(a) - R(48) * std::log(log_arg) + R(60) + R(32) * std::log(R(6));
    const R k = (t1 + t2 + t3 + t4 + t5) / R(48);
    return RateValue::finite(static_cast<double>(k));
}

/// Tail asymptotics of K_eta: x^2/(2(1-eta)) + log(-x/(1-eta)) as x -> -inf
/// for eta < 1, and -log x as x -> 0+ for eta = 1. Diagnostic only.
inline double k_eta_asymptotic(double x, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("k_eta_asymptotic: eta outside [0,1]");
    if (eta < 1.0) {
        if (!(x < 0.0)) throw DomainError("k_eta_asymptotic: eta < 1 branch needs x < 0");
        const double q = 1.0 - eta;
        return x * x / (2.0 * q) + std::log(-x / q);
    }
    if (!(x > 0.0 && x < 1.0)) throw DomainError("k_eta_asymptotic: eta = 1 branch needs 0 < x < 1");
    return -std::log(x);
}

}  // namespace rskld
