#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rskld/error.hpp"
#include "rskld/quadrature.hpp"
#include "rskld/rate_functions.hpp"
#include "rskld/rmt.hpp"

namespace rskld {

struct VariationalConfig {
    double root_tol = 1e-12;
    QuadratureOptions quadrature{1e-10, 1e-12, 4000};
};

/// Minimizer of the spectral rate over zero-mean measures on (-inf, x],
/// written in the shifted variable y = t - x with support [L, 0].
struct EquilibriumMeasure {
    double x = 0.0;
    double L = 0.0;
    double c2 = 0.0;

    double density(double y) const {
        if (!(y > L && y < 0.0)) return 0.0;
        return std::sqrt(y * (L - y)) * (2.0 * c2 + L + 2.0 * (x + y)) / (4.0 * std::numbers::pi * y);
    }

    /// int_L^0 g(y) f_x(y) dy. The range is split at L/2 and mapped by
    /// y = L + v^2 on the left and y = -u^2 on the right, which removes the
    /// square-root endpoint behavior and the 1/y factor.
    template <class G>
    QuadratureResult integrate_against(G&& g, const QuadratureOptions& opt) const {
        const double w = std::sqrt(-0.5 * L);
        const double k = 1.0 / (4.0 * std::numbers::pi);
        auto left = [&](double v) {
            const double y = L + v * v;
            // sqrt(y (L - y)) = v sqrt(-y); dy = 2 v dv
            return g(y) * v * std::sqrt(-y) * (2.0 * c2 + L + 2.0 * (x + y)) * k / y * 2.0 * v;
        };
        auto right = [&](double u) {
            const double y = -u * u;
            // f(y) 2u = -2 sqrt(-L - u^2) (2 c2 + L + 2 (x + y)) / (4 pi)
            return -g(y) * std::sqrt(std::max(0.0, -L - u * u)) * (2.0 * c2 + L + 2.0 * (x + y)) * k * 2.0;
        };
        QuadratureOptions half = opt;
        half.abs_tol = 0.5 * opt.abs_tol;
        auto a = integrate(left, 0.0, w, half);
        auto b = integrate(right, 0.0, w, half);
        return QuadratureResult{a.value + b.value, a.abs_error + b.abs_error, a.intervals + b.intervals,
                                a.converged && b.converged};
    }
};

/// L(x) and c_2(x) from their closed forms, evaluated in long double.
inline EquilibriumMeasure equilibrium_measure(double xd) {
    if (!(xd > 0.0 && xd < 2.0)) throw DomainError("equilibrium_measure: x must lie in (0, 2)");
    using R = long double;
    const R x = xd;
    const R a = R(12) / (std::sqrt(R(81) * x * x + R(12)) + R(9) * x);  // sqrt(81x^2+12) - 9x
    const R a13 = std::cbrt(a);
    const R a23 = a13 * a13;
    const R c2r = std::cbrt(R(2)), c3r = std::cbrt(R(3)), c6r = std::cbrt(R(6));
    const R L = (R(2) * c2r * c2r * a23 - R(4) * c6r) / (c3r * c3r * a13);
    const R c2 = (R(2) * c3r * c3r - c6r * a23) / (c2r * c2r * a13) -
                 (c2r * c3r * c3r * a23 + R(6) * c2r * c2r * c3r / a23 + R(6)) / (R(18) * x) - x;
    return EquilibriumMeasure{xd, static_cast<double>(L), static_cast<double>(c2)};
}

struct EquilibriumCheck {
    double mass = 0.0;  ///< int f_x
    double mean = 0.0;  ///< int y f_x, should be -x
};

inline EquilibriumCheck equilibrium_moments(const EquilibriumMeasure& mu, const VariationalConfig& cfg = {}) {
    auto m0 = mu.integrate_against([](double) { return 1.0; }, cfg.quadrature);
    auto m1 = mu.integrate_against([](double y) { return y; }, cfg.quadrature);
    if (!m0.converged || !m1.converged) throw NumericFailure("equilibrium_moments: quadrature did not converge");
    return {m0.value, m1.value};
}

/// K(x) = 1/4 int (x+y)^2 f - int log(-y) f + x^2/4 + c_2 x / 2 - 3/4.
inline RateValue rate_K_variational(double x, const VariationalConfig& cfg = {}) {
    if (std::isnan(x)) throw DomainError("rate_K_variational: NaN");
    if (x <= 0.0) return RateValue::infinity();
    if (x >= 2.0) return RateValue::finite(0.0);
    const auto mu = equilibrium_measure(x);
    auto quad = mu.integrate_against([x](double y) { return 0.25 * (x + y) * (x + y) - std::log(-y); },
                                     cfg.quadrature);
    if (!quad.converged)
        throw NumericFailure("rate_K_variational: quadrature did not converge at x = " + std::to_string(x));
    return RateValue::finite(quad.value + 0.25 * x * x + 0.5 * mu.c2 * x - 0.75);
}

// --- spectral rate of a discrete measure -----------------------------------

struct Atom {
    double location;
    double weight;
};

/// Finitely supported probability measure, atoms sorted by location.
class DiscreteMeasure {
public:
    explicit DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty()) throw std::invalid_argument("DiscreteMeasure: no atoms");
        double total = 0.0;
        for (const auto& a : atoms_) {
            if (!(a.weight > 0.0) || !std::isfinite(a.location))
                throw std::invalid_argument("DiscreteMeasure: weights must be positive, locations finite");
            total += a.weight;
        }
        if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("DiscreteMeasure: weights must sum to 1");
        std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
    }

    /// Semicircle quantiles at the midpoints (i + 1/2)/N, equal weights.
    static DiscreteMeasure semicircle(std::size_t n) {
        if (n == 0) throw std::invalid_argument("DiscreteMeasure::semicircle: n must be positive");
        std::vector<Atom> atoms;
        atoms.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            atoms.push_back({semicircle_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n)),
                             1.0 / static_cast<double>(n)});
        return DiscreteMeasure(std::move(atoms));
    }

    /// Empirical measure of the scaled spectrum lambda / sqrt(m).
    static DiscreteMeasure from_spectrum(const SpectrumSample& s) {
        std::vector<Atom> atoms;
        const double w = 1.0 / static_cast<double>(s.eigenvalues.size());
        for (double xi : s.scaled()) atoms.push_back({xi, w});
        return DiscreteMeasure(std::move(atoms));
    }

    std::span<const Atom> atoms() const noexcept { return atoms_; }

private:
    std::vector<Atom> atoms_;
};

/// 1/2 sum w x^2 - sum_{i != j} w_i w_j log|x_i - x_j| - sum w_i^2 log b_i - 3/4,
/// where b_i is the half-width of the cell around atom i (one-sided spacing at
/// the ends) and replaces the divergent diagonal of the double integral.
inline double spectral_rate(const DiscreteMeasure& mu) {
    const auto at = mu.atoms();
    const std::size_t n = at.size();
    double quad = 0.0;
    for (const auto& a : at) quad += a.weight * a.location * a.location;
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            off += 2.0 * at[i].weight * at[j].weight * std::log(std::abs(at[i].location - at[j].location));
    double self = 0.0;
    if (n > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            double b;
            if (i == 0)
                b = at[1].location - at[0].location;
            else if (i + 1 == n)
                b = at[n - 1].location - at[n - 2].location;
            else
                b = 0.5 * (at[i + 1].location - at[i - 1].location);
            self += at[i].weight * at[i].weight * std::log(b);
        }
    }
    return 0.5 * quad - off - self - 0.75;
}

// --- Legendre machinery ----------------------------------------------------

/// Unique t <= 2 with J'(t) = y, by Newton steps safeguarded by bisection on
/// the bracket (min(y, -6) - 1, 2].
inline double legendre_S(double y, const VariationalConfig& cfg = {}) {
    if (!(y <= 0.0)) throw DomainError("legendre_S: y must be <= 0");
    if (y == 0.0) return 2.0;
    double lo = std::min(y, -6.0) - 1.0, hi = 2.0;
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 300; ++it) {
        const double f = rate_J_prime(t) - y;
        if (f == 0.0) return t;
        (f < 0.0 ? lo : hi) = t;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) break;
        const double d = rate_J_second(t);
        double next = d > 0.0 ? t - f / d : lo;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        t = next;
    }
    const double resid = std::abs(rate_J_prime(t) - y);
    if (resid > cfg.root_tol * std::max(1.0, std::abs(y)))
        throw NumericFailure("legendre_S: residual " + std::to_string(resid) + " at y = " + std::to_string(y));
    return t;
}

namespace detail {
inline double legendre_H(double x, double eta, double y, double s) {
    return x * y - y * s + rate_J(s).value() + 0.5 * eta * y * y;
}
}  // namespace detail

/// K_eta(x) = sup_{y <= 0} H(y), H(y) = x y - y S(y) + J(S(y)) + eta y^2 / 2.
/// H is strictly concave, so the maximizer is the root of x - S(y) + eta y,
/// bracketed by doubling and refined by bisection; y = 0 when H'(0) >= 0.
inline RateValue rate_K_eta(double x, double eta, const VariationalConfig& cfg = {}) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("rate_K_eta: eta outside [0,1]");
    if (std::isnan(x)) throw DomainError("rate_K_eta: NaN");
    if (x >= 2.0) return RateValue::finite(0.0);
    if (eta == 1.0 && x <= 0.0) return RateValue::infinity();
    auto dH = [&](double y) { return x - legendre_S(y, cfg) + eta * y; };
    double hi = 0.0, lo = -1.0;
    int expansions = 0;
    while (dH(lo) <= 0.0) {
        hi = lo;
        lo *= 2.0;
        if (++expansions > 80) throw NumericFailure("rate_K_eta: could not bracket the maximizer");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        (dH(mid) > 0.0 ? lo : hi) = mid;
    }
    const double y = 0.5 * (lo + hi);
    return RateValue::finite(detail::legendre_H(x, eta, y, legendre_S(y, cfg)));
}

inline double gaussian_rate_G(double z, double eta) {
    if (!(eta > 0.0)) throw DomainError("gaussian_rate_G: eta must be positive");
    return z <= 0.0 ? z * z / (2.0 * eta) : 0.0;
}

struct InfConvolutionResult {
    double inf_value = 0.0;  ///< inf_y K_eta(y) + G_eta(x - y)
    double argmin = 0.0;
    double J = 0.0;
    double residual = 0.0;
};

/// Evaluates inf_y {K_eta(y) + G_eta(x - y)} and compares with J(x). Only
/// y in [x, max(x, 2)] matters: K_eta is nonincreasing, G_eta vanishes on
/// the right and K_eta vanishes beyond 2. Coarse grid, then golden section
/// on the best cell (the objective is convex).
inline InfConvolutionResult inf_convolution_check(double x, double eta, const VariationalConfig& cfg = {},
                                                  std::size_t grid = 64) {
    if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("inf_convolution_check: eta must lie in (0, 1]");
    if (!(x <= 2.0)) throw DomainError("inf_convolution_check: x must be <= 2");
    auto objective = [&](double y) { return rate_K_eta(y, eta, cfg).as_double() + gaussian_rate_G(x - y, eta); };
    const double a = x, b = std::max(x, 2.0);
    InfConvolutionResult r;
    r.J = rate_J(x).value();
    if (b == a) {
        r.argmin = a;
        r.inf_value = objective(a);
        r.residual = std::abs(r.inf_value - r.J);
        return r;
    }
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= grid; ++i) {
        const double y = a + (b - a) * static_cast<double>(i) / static_cast<double>(grid);
        const double v = objective(y);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double h = (b - a) / static_cast<double>(grid);
    double lo = a + h * (static_cast<double>(best) - 1.0), hi = a + h * (static_cast<double>(best) + 1.0);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = objective(c), fd = objective(d);
    for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = objective(d);
        }
    }
    const double y = fc < fd ? c : d;
    const double v = std::min(fc, fd);
    if (v < best_val) {
        best_val = v;
        r.argmin = y;
    } else {
        r.argmin = a + h * static_cast<double>(best);
    }
    r.inf_value = best_val;
    r.residual = std::abs(r.inf_value - r.J);
    return r;
}

}  // namespace rskld
