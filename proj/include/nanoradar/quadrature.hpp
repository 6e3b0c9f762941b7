#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "nanoradar/constants.hpp"
#include "nanoradar/errors.hpp"

namespace nanoradar::quadrature {

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex cache_mutex;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw domain_error("gauss_legendre: n must be >= 1");

    std::vector<double> nodes(static_cast<size_t>(n)), weights(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<size_t>(i)] = x;
        weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    auto [pos, ok] = cache.emplace(n, std::make_pair(std::move(nodes), std::move(weights)));
    (void)ok;
    return pos->second;
}

/// Integral of f(theta, phi) over the full solid angle with the sin(theta)
/// Jacobian absorbed by the mu = cos(theta) substitution: Gauss-Legendre in the
/// polar variable, periodic trapezoid in phi, refined until |dP| <= tol * |P|.
inline double integrate_solid_angle(const std::function<double(double, double)>& f,
                                    double rel_tol = 1e-9, int max_polar_nodes = 2048) {
    double previous = 0.0;
    bool have_previous = false;
    for (int n = 16; n <= max_polar_nodes; n *= 2) {
        const auto& [mu, w] = gauss_legendre(n);
        const int n_phi = 2 * n;
        const double d_phi = 2.0 * constants::pi / n_phi;
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double theta = std::acos(mu[static_cast<size_t>(i)]);
            double ring = 0.0;
            for (int k = 0; k < n_phi; ++k) ring += f(theta, k * d_phi);
            total += w[static_cast<size_t>(i)] * ring * d_phi;
        }
        if (have_previous) {
            const double scale = std::max(std::abs(total), std::abs(previous));
            if (std::abs(total - previous) <= rel_tol * scale || scale < 1e-300) return total;
        }
        previous = total;
        have_previous = true;
    }
    throw numerical_error("integrate_solid_angle: quadrature did not converge to requested tolerance");
}

/// Composite Simpson rule on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n < 2) throw domain_error("simpson: need at least 2 intervals");
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * ((i % 2 != 0) ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace nanoradar::quadrature
