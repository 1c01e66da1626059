#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rskld/error.hpp"

namespace rskld {

using Complex = std::complex<double>;

/// Real symmetric tridiagonal form: diagonal d and off-diagonal e, where
/// e[i] couples i and i+1 (e has n-1 meaningful entries; e[n-1] = 0).
struct Tridiagonal {
    std::vector<double> d;
    std::vector<double> e;
};

/// Dense Hermitian matrix, full row-major storage.
class HermitianMatrix {
public:
    explicit HermitianMatrix(std::size_t n) : n_(n), a_(n * n) {}

    std::size_t size() const noexcept { return n_; }

    Complex operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    /// Sets entry (i, j) and its mirror; diagonal entries keep only the real part.
    void set(std::size_t i, std::size_t j, Complex z) {
        if (i == j) {
            a_[i * n_ + i] = Complex(z.real(), 0.0);
        } else {
            a_[i * n_ + j] = z;
            a_[j * n_ + i] = std::conj(z);
        }
    }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < n_; ++i) t += a_[i * n_ + i].real();
        return t;
    }

    double frobenius_norm_squared() const {
        double s = 0.0;
        for (const auto& z : a_) s += std::norm(z);
        return s;
    }

private:
    friend Tridiagonal tridiagonalize(HermitianMatrix a);
    Complex& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

    std::size_t n_;
    std::vector<Complex> a_;
};

/// Householder reduction of a Hermitian matrix. Off-diagonal phases are
/// dropped: a Hermitian tridiagonal matrix is unitarily similar to the real one
/// with |e_i| off the diagonal.
inline Tridiagonal tridiagonalize(HermitianMatrix a) {
    const std::size_t n = a.size();
    Tridiagonal t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    std::vector<Complex> v(n), p(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        t.d[k] = a.at(k, k).real();
        double alpha2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) alpha2 += std::norm(a.at(i, k));
        if (alpha2 == 0.0) {
            t.e[k] = 0.0;
            continue;
        }
        const double alpha = std::sqrt(alpha2);
        const Complex x0 = a.at(k + 1, k);
        const double ax0 = std::abs(x0);
        const Complex phase = ax0 == 0.0 ? Complex(1.0, 0.0) : x0 / ax0;
        for (std::size_t i = k + 1; i < n; ++i) v[i] = a.at(i, k);
        v[k + 1] += phase * alpha;
        const double tau = 1.0 / (alpha2 + alpha * ax0);  // 2 / |v|^2

        // p = tau * A22 v, K = tau/2 * v^H p, w = p - K v, A22 -= v w^H + w v^H.
        Complex vhp = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            Complex s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += a.at(i, j) * v[j];
            p[i] = tau * s;
            vhp += std::conj(v[i]) * p[i];
        }
        const double half_k = 0.5 * tau * vhp.real();
        for (std::size_t i = k + 1; i < n; ++i) p[i] -= half_k * v[i];
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) -= v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]);
        }
        t.e[k] = alpha;
    }
    if (n >= 2) {
        t.d[n - 2] = a.at(n - 2, n - 2).real();
        t.e[n - 2] = std::abs(a.at(n - 1, n - 2));
    }
    if (n >= 1) t.d[n - 1] = a.at(n - 1, n - 1).real();
    if (n >= 1) t.e[n - 1] = 0.0;
    return t;
}

/// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
/// method. Throws NumericFailure after 50*n total iterations.
inline std::vector<double> tridiagonal_eigenvalues(Tridiagonal t) {
    auto& d = t.d;
    auto& e = t.e;
    const std::size_t n = d.size();
    const std::size_t budget = 50 * std::max<std::size_t>(n, 1);
    std::size_t iterations = 0;
    const double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t l = 0; l < n; ++l) {
        std::size_t mm;
        do {
            for (mm = l; mm + 1 < n; ++mm) {
                const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
                if (std::abs(e[mm]) <= eps * dd) break;
            }
            if (mm == l) break;
            if (++iterations > budget)
                throw NumericFailure("tridiagonal QL did not converge within " + std::to_string(budget) +
                                     " iterations");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t ii = mm; ii-- > l;) {
                const double f = s * e[ii];
                const double b = c * e[ii];
                r = std::hypot(f, g);
                e[ii + 1] = r;
                if (r == 0.0) {
                    d[ii + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[ii + 1] - p;
                r = (d[ii] - g) * s + 2.0 * c * b;
                p = s * r;
                d[ii + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        } while (true);
    }
    std::sort(d.begin(), d.end(), std::greater<>());
    return d;
}

/// Eigenvalues sorted nonincreasing.
inline std::vector<double> hermitian_eigenvalues(const HermitianMatrix& a) {
    return tridiagonal_eigenvalues(tridiagonalize(a));
}

}  // namespace rskld
