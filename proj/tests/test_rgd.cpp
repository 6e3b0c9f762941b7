#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nanoradar/mie.hpp"
#include "nanoradar/quadrature.hpp"
#include "nanoradar/rgd.hpp"
#include "oracles.hpp"

using namespace nanoradar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using cplx = std::complex<double>;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = a + (b - a) * i / (n - 1.0);
    return v;
}

// Deterministic equal-volume partition of a ball: radial bins uniform in r^3,
// polar bins uniform in cos(theta), azimuthal bins uniform in phi.  Every
// sample carries exactly V / (n_r n_mu n_phi), and an even n_mu splits cleanly
// at z = 0 into half-sphere clouds.
std::vector<std::array<double, 3>> ball_partition_points(double a, int n_r, int n_mu, int n_phi,
                                                         int keep_half /* -1, 0=all, +1 */) {
    std::vector<std::array<double, 3>> pts;
    for (int i = 0; i < n_r; ++i) {
        const double r = a * std::cbrt((i + 0.5) / n_r);
        for (int j = 0; j < n_mu; ++j) {
            const double mu = -1.0 + (j + 0.5) * 2.0 / n_mu;
            if (keep_half > 0 && mu < 0.0) continue;
            if (keep_half < 0 && mu >= 0.0) continue;
            const double st = std::sqrt(1.0 - mu * mu);
            for (int k = 0; k < n_phi; ++k) {
                const double phi = (k + 0.5) * 2.0 * constants::pi / n_phi;
                pts.push_back({r * st * std::cos(phi), r * st * std::sin(phi), r * mu});
            }
        }
    }
    return pts;
}

} // namespace

TEST_CASE("validity gate", "[rgd]") {
    const double k = 2.0 * constants::pi / 428e-9;

    const auto trivial = rgd::validity_check(cplx(1.0, 0.0), k, 100e-9);
    CHECK(trivial.contrast == 0.0);
    CHECK(trivial.phase_shift == 0.0);
    CHECK(trivial.valid);

    const auto fig4b = rgd::validity_check(cplx(1.05, 0.0), k, 100e-9);
    CHECK_THAT(fig4b.phase_shift, WithinRel(k * 100e-9 * 0.05, 1e-12));
    CHECK_THAT(fig4b.phase_shift, WithinAbs(0.0734, 2e-4));
    CHECK(fig4b.valid);

    const auto contrasty = rgd::validity_check(cplx(2.0, 0.0), k, 1e-9);
    CHECK_FALSE(contrasty.valid);
    CHECK(contrasty.contrast == 1.0);

    CHECK_THROWS_AS(rgd::validity_check(cplx(1.1, 0.0), 0.0, 1e-9), domain_error);
}

TEST_CASE("sphere form factor", "[rgd]") {
    CHECK(rgd::sphere_form_factor(0.0) == 1.0);

    // first zero at the root of tan u = u
    const double root = oracle::bisect([](double u) { return std::sin(u) - u * std::cos(u); }, 4.0, 4.7);
    CHECK_THAT(root, WithinAbs(4.4934, 1e-3));
    CHECK_THAT(rgd::sphere_form_factor(root), WithinAbs(0.0, 1e-12));

    // independent radial quadrature: f = (3/a^3) int_0^a r^2 sinc(q r) dr
    const double k = 2.0 * constants::pi / 428e-9;
    const double a = 50e-9;
    const double theta = constants::pi;
    const double q = 2.0 * k * std::sin(theta / 2.0);
    const double u = q * a;
    CHECK_THAT(u, WithinAbs(1.468, 2e-3));
    const double f_quad = quadrature::simpson(
                              [&](double r) { return r * r * (r > 0 ? std::sin(q * r) / (q * r) : 1.0); }, 0.0, a,
                              20000) *
                          3.0 / (a * a * a);
    CHECK_THAT(rgd::sphere_form_factor(u), WithinAbs(f_quad, 1e-6));

    CHECK_THROWS_AS(rgd::sphere_form_factor(-0.1), domain_error);
}

TEST_CASE("numeric form factor", "[rgd]") {
    const double k = 2.0 * constants::pi / 428e-9;

    SECTION("theta = 0 gives exactly 1 for every shape") {
        const auto sph = rgd::make_sphere_region(70e-9, cplx(1.05, 0.0));
        const auto box = rgd::make_box_region({100e-9, 80e-9, 120e-9}, cplx(1.05, 0.0));
        CHECK(rgd::form_factor_numeric(sph, k, 0.0) == cplx(1.0, 0.0));
        CHECK(rgd::form_factor_numeric(box, k, 0.0) == cplx(1.0, 0.0));
    }

    SECTION("sphere lattice matches the closed form") {
        for (double u : {0.5, 1.5, 3.0}) {
            const double a = 120e-9; // keeps u <= 2 k a so the angle exists
            // choose theta so that 2 k a sin(theta/2) = u
            const double theta = 2.0 * std::asin(u / (2.0 * k * a));
            const auto region = rgd::make_sphere_region(a, cplx(1.05, 0.0));
            const cplx f = rgd::form_factor_numeric(region, k, theta);
            CHECK_THAT(f.real(), WithinAbs(rgd::sphere_form_factor(u), 1e-5));
            CHECK_THAT(f.imag(), WithinAbs(0.0, 1e-5));
        }
    }

    SECTION("box matches the separable sinc product") {
        const double L = 100e-9;
        const auto region = rgd::make_box_region({L, L, L}, cplx(1.05, 0.0));
        const double theta = constants::pi / 2.0;
        const double qx = -k * std::sin(theta), qz = k * (1.0 - std::cos(theta));
        const auto sinc = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
        const double expected = sinc(qx * L / 2.0) * sinc(0.0) * sinc(qz * L / 2.0);
        const cplx f = rgd::form_factor_numeric(region, k, theta);
        CHECK_THAT(f.real(), WithinAbs(expected, 1e-5));
        CHECK_THAT(f.imag(), WithinAbs(0.0, 1e-5));
    }

    SECTION("|f| <= 1 on randomized shapes and angles") {
        std::mt19937_64 rng(4242u);
        std::uniform_real_distribution<double> len(20e-9, 150e-9), ang(0.0, constants::pi);
        for (int trial = 0; trial < 20; ++trial) {
            const auto region = (trial % 2 == 0)
                                    ? rgd::make_sphere_region(len(rng), cplx(1.05, 0.0))
                                    : rgd::make_box_region({len(rng), len(rng), len(rng)}, cplx(1.05, 0.0));
            const cplx f = rgd::form_factor_numeric(region, k, ang(rng));
            CHECK(std::abs(f) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("rgd amplitudes", "[rgd]") {
    const auto matched = rgd::make_sphere_region(50e-9, cplx(1.0, 0.0));
    const auto zero = rgd::rgd_amplitudes(matched, 1.0, 428e-9, 0.7);
    CHECK(zero.first == cplx(0.0, 0.0));
    CHECK(zero.second == cplx(0.0, 0.0));

    // polarization null at pi/2, up to the float representation of pi/2 itself
    const auto region = rgd::make_sphere_region(50e-9, cplx(1.05, 0.0));
    const auto perp = rgd::rgd_amplitudes(region, 1.0, 428e-9, constants::pi / 2.0);
    CHECK(std::abs(perp.second) <= 1e-16 * std::abs(perp.first));

    // forward amplitude agrees with Mie in the validity regime
    const auto fwd = rgd::rgd_amplitudes(region, 1.0, 428e-9, 0.0);
    const double x = mie::size_parameter(50e-9, 428e-9, 1.0);
    const auto mie_ref = oracle::mie_amplitudes_ref(x, cplx(1.05, 0.0), 30, 0.0);
    CHECK_THAT(std::norm(fwd.first), WithinRel(std::norm(mie_ref.first), 0.05));
}

TEST_CASE("S2 = S1 cos(theta) exactly", "[rgd][property]") {
    std::mt19937_64 rng(515u);
    std::uniform_real_distribution<double> ang(0.0, constants::pi), rad(20e-9, 120e-9), mm(1.01, 1.3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto region = rgd::make_sphere_region(rad(rng), cplx(mm(rng), 0.0));
        const double theta = ang(rng);
        const auto [s1, s2] = rgd::rgd_amplitudes(region, 1.0, 428e-9, theta);
        CHECK(s2 == s1 * std::cos(theta));
    }
}

TEST_CASE("heterogeneous composition", "[rgd]") {
    const double lam = 428e-9;

    SECTION("singleton sum equals rgd_amplitudes") {
        const auto region = rgd::make_sphere_region(40e-9, cplx(1.04, 0.0), {10e-9, 0, 0});
        const std::vector<rgd::HomogeneousRegion> one{region};
        const auto whole = rgd::rgd_amplitudes(region, 1.0, lam, 1.1);
        const auto sum = rgd::heterogeneous_amplitudes(one, 1.0, lam, 1.1);
        CHECK(sum.first == whole.first);
        CHECK(sum.second == whole.second);
    }

    SECTION("two half-sphere clouds rebuild the whole sphere") {
        const double a = 50e-9;
        const int n_r = 48, n_mu = 96, n_phi = 96;
        const auto upper_pts = ball_partition_points(a, n_r, n_mu, n_phi, +1);
        const auto lower_pts = ball_partition_points(a, n_r, n_mu, n_phi, -1);
        const double v_sphere = 4.0 / 3.0 * constants::pi * a * a * a;
        const double v_up = v_sphere / 2.0;
        const double v_lo = v_sphere / 2.0;
        // each half expressed in its own local frame, placed back by offset
        auto shift = [](std::vector<std::array<double, 3>> pts, double dz) {
            for (auto& p : pts) p[2] -= dz;
            return pts;
        };
        const double dz = a / 3.0;
        const std::vector<rgd::HomogeneousRegion> halves{
            rgd::make_cloud_region(shift(upper_pts, dz), v_up, cplx(1.05, 0.0), {0, 0, dz}),
            rgd::make_cloud_region(shift(lower_pts, -dz), v_lo, cplx(1.05, 0.0), {0, 0, -dz}),
        };
        const auto sphere = rgd::make_sphere_region(a, cplx(1.05, 0.0));
        for (double theta : {0.4, 1.3, 2.8}) {
            const auto got = rgd::heterogeneous_amplitudes(halves, 1.0, lam, theta);
            const auto ref = rgd::rgd_amplitudes(sphere, 1.0, lam, theta);
            CHECK(std::abs(got.first - ref.first) <= 1e-4 * std::abs(ref.first));
        }
    }

    SECTION("contrast cancellation") {
        const cplx m(1.07, 0.0);
        const auto plus = rgd::make_sphere_region(30e-9, m);
        const auto minus = rgd::make_sphere_region(30e-9, 2.0 - m);
        const std::vector<rgd::HomogeneousRegion> pair{plus, minus};
        const auto [s1, s2] = rgd::heterogeneous_amplitudes(pair, 1.0, lam, 0.9);
        CHECK(std::abs(s1) <= 1e-18);
        CHECK(std::abs(s2) <= 1e-18);
    }

    SECTION("empty list rejected") {
        const std::vector<rgd::HomogeneousRegion> none;
        CHECK_THROWS_AS(rgd::heterogeneous_amplitudes(none, 1.0, lam, 0.5), domain_error);
    }
}

TEST_CASE("rgd intensity pattern shape", "[rgd]") {
    const auto grid = linspace(0.0, constants::pi, 721);
    const auto region = rgd::make_sphere_region(50e-9, cplx(1.05, 0.0));
    const auto pat = rgd::rgd_intensity_pattern(region, 1.0, 428e-9, grid, Polarization::unpolarized);
    CHECK_FALSE(pat.rgd_validity_warning);

    // forward maximum, monotone decrease up to pi/2, recovery toward pi
    const size_t mid = pat.theta.size() / 2;
    for (size_t i = 1; i <= mid; ++i) CHECK(pat.intensity[i] < pat.intensity[i - 1]);
    const auto min_it = std::min_element(pat.intensity.begin(), pat.intensity.end());
    CHECK(pat.intensity.back() > *min_it);
    CHECK(pat.intensity.front() == *std::max_element(pat.intensity.begin(), pat.intensity.end()));

    // |m-1|^2 scaling: doubling the contrast multiplies every sample by 4
    const auto region2 = rgd::make_sphere_region(50e-9, cplx(1.10, 0.0));
    const auto pat2 = rgd::rgd_intensity_pattern(region2, 1.0, 428e-9, grid, Polarization::unpolarized);
    for (size_t i = 0; i < pat.intensity.size(); ++i)
        if (pat.intensity[i] > 0.0) CHECK_THAT(pat2.intensity[i] / pat.intensity[i], WithinRel(4.0, 1e-12));

    // index matching gives a zero pattern
    const auto matched = rgd::make_sphere_region(50e-9, cplx(1.0, 0.0));
    const auto zeros = rgd::rgd_intensity_pattern(matched, 1.0, 428e-9, grid, Polarization::unpolarized);
    for (double v : zeros.intensity) CHECK(v == 0.0);

    // out-of-regime particles carry the warning
    const auto big = rgd::make_sphere_region(500e-9, cplx(1.2, 0.0));
    const auto warned = rgd::rgd_intensity_pattern(big, 1.0, 428e-9, grid, Polarization::unpolarized);
    CHECK(warned.rgd_validity_warning);
}

TEST_CASE("k^6 amplitude scaling at theta = 0", "[rgd][property]") {
    const auto region = rgd::make_sphere_region(50e-9, cplx(1.05, 0.0));
    const double lam1 = 428e-9, lam2 = 214e-9;
    const auto s_a = rgd::rgd_amplitudes(region, 1.0, lam1, 0.0);
    const auto s_b = rgd::rgd_amplitudes(region, 1.0, lam2, 0.0);
    // f(0) = 1 for both, so |S1|^2 scales exactly as (k2/k1)^6 = 2^6
    CHECK_THAT(std::norm(s_b.first) / std::norm(s_a.first), WithinRel(64.0, 1e-12));
}

TEST_CASE("cross-model integrated power agreement in the overlap regime", "[rgd][property]") {
    const double lam = 428e-9;
    const auto& [mu, w] = quadrature::gauss_legendre(512);
    for (double x : {0.3, 0.5, 1.0}) {
        const double a = x * lam / (2.0 * constants::pi);
        const cplx m(1.05, 0.0);
        const auto region = rgd::make_sphere_region(a, m);
        const auto coeffs = mie::lorenz_mie_coefficients(x, m, mie::truncation_order(x));
        double p_rgd = 0.0, p_mie = 0.0;
        for (size_t i = 0; i < mu.size(); ++i) {
            const double theta = std::acos(mu[i]);
            const auto [r1, r2] = rgd::rgd_amplitudes(region, 1.0, lam, theta);
            const auto [m1, m2] = mie::scattering_amplitudes(coeffs, theta);
            p_rgd += w[i] * 0.5 * (std::norm(r1) + std::norm(r2));
            p_mie += w[i] * 0.5 * (std::norm(m1) + std::norm(m2));
        }
        CHECK(std::abs(p_rgd - p_mie) <= 0.05 * p_mie);
    }
}
