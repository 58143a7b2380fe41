#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weyldyn/errors.hpp"
#include "weyldyn/oracle.hpp"
#include "weyldyn/wave.hpp"

#include <cmath>

using namespace weyldyn;

namespace {

Potential box(double c, double L) { return make_catalog_potential(PotentialKind::constant_box, {c, L}); }

std::vector<double> grid(double hi, double h)
{
    std::vector<double> g;
    for (int i = 0; i <= static_cast<int>(std::llround(hi / h)); ++i)
        g.push_back(h * i);
    return g;
}

double square(double t) { return t * t; }
double cube(double t) { return t * t * t; }
double one_minus_cos(double t) { return 1.0 - std::cos(t); }

double l2_time(const std::vector<double>& a, const std::vector<double>& b, double h)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double w = (i == 0 || i + 1 == a.size()) ? 0.5 : 1.0;
        s += w * (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s * h);
}

} // namespace

TEST_CASE("boundary controls")
{
    const BoundaryControl f = BoundaryControl::sample(square, 2.0, 0.1, true);
    CHECK(f.samples.size() == 21);
    CHECK(f.duration() == doctest::Approx(2.0));
    CHECK(f(-1.0) == 0.0);
    CHECK(f(0.55) == doctest::Approx(0.5 * (0.25 + 0.36)));
    CHECK_THROWS_AS(f(2.5), DomainError);
    CHECK_THROWS_AS(BoundaryControl::from_samples({1.0, 2.0, 3.0}, 0.1, false), InvalidArgument);
    CHECK_THROWS_AS(BoundaryControl::from_samples({0.0, 1.0}, 0.1, false), InvalidArgument);
    CHECK_THROWS_AS(BoundaryControl::from_samples({0.0, 1.0, 2.0}, 0.0, false), InvalidArgument);
    // f(t) = t has f'(0) = 1: fine as a plain control, rejected as a smooth one
    CHECK_NOTHROW(BoundaryControl::sample([](double t) { return t; }, 1.0, 0.01, false));
    CHECK_THROWS_AS(BoundaryControl::sample([](double t) { return t; }, 1.0, 0.01, true), InvalidArgument);
}

TEST_CASE("free wave is a pure shift")
{
    const double h = 0.05;
    const KernelField z = neumann_solve(make_catalog_potential(PotentialKind::zero, {}), TriangleGrid::make(6.0, h));
    const BoundaryControl f = BoundaryControl::sample(square, 3.0, h, true);
    const std::vector<double> g = grid(3.0, h);
    const WaveTable u = solve_wave(f, z, g, g);
    for (std::size_t ix = 0; ix < g.size(); ++ix)
        for (std::size_t it = 0; it < g.size(); ++it) {
            const double exact = g[it] >= g[ix] ? square(g[it] - g[ix]) : 0.0;
            CHECK(u.at(ix, it) == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
        }
}

TEST_CASE("causality")
{
    const double h = 0.05;
    const KernelField f = neumann_solve(box(1.0, 1.0), TriangleGrid::make(6.0, h));
    const BoundaryControl c = BoundaryControl::sample(cube, 3.0, h, true);
    const std::vector<double> g = grid(3.0, h);
    const WaveTable u = solve_wave(c, f, g, g);
    for (std::size_t ix = 0; ix < g.size(); ++ix)
        for (std::size_t it = 0; it < ix; ++it)
            CHECK(u.at(ix, it) == 0.0);
    const std::vector<double> xs{1.0};
    const std::vector<double> late{5.5};
    CHECK_THROWS_AS(solve_wave(c, f, xs, late), DomainError);
}

TEST_CASE("time shift of the control shifts the wave")
{
    const double h = 0.05;
    const KernelField f = neumann_solve(box(1.0, 1.0), TriangleGrid::make(6.0, h));
    const BoundaryControl c = BoundaryControl::sample(cube, 3.0, h, true);
    const double tau = 0.5;
    const BoundaryControl shifted = BoundaryControl::sample(
        [&](double t) { return t > tau ? cube(t - tau) : 0.0; }, 3.0, h, true);
    const std::vector<double> xs = grid(2.0, h);
    const std::vector<double> ts = grid(3.0, h);
    const WaveTable a = solve_wave(c, f, xs, ts);
    const WaveTable b = solve_wave(shifted, f, xs, ts);
    const std::size_t lag = 10;
    for (std::size_t ix = 0; ix < xs.size(); ++ix)
        for (std::size_t it = lag; it < ts.size(); ++it)
            CHECK(b.at(ix, it) == doctest::Approx(a.at(ix, it - lag)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("wave representation converges to the finite-difference solution")
{
    const Potential p = box(1.0, 1.0);
    double err[2];
    int slot = 0;
    for (double h : {0.04, 0.02}) {
        const KernelField f = neumann_solve(p, TriangleGrid::make(4.0, h));
        const BoundaryControl c = BoundaryControl::sample(square, 2.0, h, true);
        const std::vector<double> g = grid(2.0, h);
        const WaveTable rep = solve_wave(c, f, g, g);
        const WaveTable fd = fd_wave_oracle(p, c, 2.0, h);
        double s = 0.0;
        for (std::size_t k = 0; k < rep.u.size(); ++k)
            s += (rep.u[k] - fd.u[k]) * (rep.u[k] - fd.u[k]);
        err[slot++] = std::sqrt(s) * h;
        // spot value at (0.5, 1.5)
        CHECK(rep.at(static_cast<std::size_t>(std::llround(0.5 / h)), static_cast<std::size_t>(std::llround(1.5 / h))) ==
              doctest::Approx(fd.at(static_cast<std::size_t>(std::llround(0.5 / h)), static_cast<std::size_t>(std::llround(1.5 / h))))
                  .epsilon(1e-2));
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.0);
}

TEST_CASE("response function")
{
    const KernelField z = neumann_solve(make_catalog_potential(PotentialKind::zero, {}), TriangleGrid::make(4.0, 0.05));
    const ResponseFunction r0 = response_function(z, 3.0, 0.05);
    for (double v : r0.samples)
        CHECK(v == 0.0);
    CHECK(r0.duration() == doctest::Approx(3.0));

    const KernelField e = neumann_solve(make_catalog_potential(PotentialKind::exponential, {1.0, 1.0}),
                                        TriangleGrid::make(4.0, 0.01));
    const ResponseFunction r = response_function(e, 3.0, 0.02);
    CHECK(r.h_t == 0.02);
    CHECK(r.samples.size() == 151);
    CHECK(r.samples[0] == doctest::Approx(-0.5).epsilon(1e-3)); // r(0+) = -q(0)/2

    CHECK_THROWS_AS(response_function(e, 3.0, 0.015), InvalidArgument);
    CHECK_THROWS_AS(response_function(e, 3.99, 0.01), DomainError);
}

TEST_CASE("response operator basics")
{
    const double h = 0.01;
    const KernelField z = neumann_solve(make_catalog_potential(PotentialKind::zero, {}), TriangleGrid::make(4.0, h));
    const ResponseFunction r0 = response_function(z, 3.0, h);
    const BoundaryControl f = BoundaryControl::sample(square, 3.0, h, true);
    const std::vector<double> out = apply_response_operator(f, r0);
    for (std::size_t m = 0; m < out.size(); ++m)
        CHECK(out[m] == doctest::Approx(-2.0 * h * m).epsilon(1e-12).scale(1.0));

    const KernelField b = neumann_solve(box(1.0, 1.0), TriangleGrid::make(4.0, h));
    const ResponseFunction r = response_function(b, 3.0, h);
    const BoundaryControl g = BoundaryControl::sample(cube, 3.0, h, true);
    std::vector<double> mix(f.samples.size());
    for (std::size_t m = 0; m < mix.size(); ++m)
        mix[m] = 2.0 * f.samples[m] - 0.5 * g.samples[m];
    const auto Rf = apply_response_operator(f, r);
    const auto Rg = apply_response_operator(g, r);
    const auto Rmix = apply_response_operator(BoundaryControl::from_samples(mix, h, true), r);
    for (std::size_t m = 0; m < mix.size(); ++m)
        CHECK(Rmix[m] == doctest::Approx(2.0 * Rf[m] - 0.5 * Rg[m]).epsilon(1e-12).scale(1.0));

    const BoundaryControl rough = BoundaryControl::sample([](double t) { return t; }, 3.0, h, false);
    CHECK_THROWS_AS(apply_response_operator(rough, r), InvalidArgument);
    const BoundaryControl coarse = BoundaryControl::sample(square, 3.0, 2.0 * h, true);
    CHECK_THROWS_AS(apply_response_operator(coarse, r), InvalidArgument);
}

TEST_CASE("response operator matches finite differences for the catalog")
{
    const std::vector<Potential> pots{box(1.0, 1.0), make_catalog_potential(PotentialKind::exponential, {1.0, 1.0}),
                                      make_catalog_potential(PotentialKind::sech2, {1.0, 2.0}),
                                      make_catalog_potential(PotentialKind::bump_train, {1.0, 0.5})};
    for (const Potential& p : pots)
        for (auto control : {cube, one_minus_cos}) {
            CAPTURE(to_string(p.kind()));
            double err[2];
            int slot = 0;
            for (double h : {0.04, 0.02}) {
                const KernelField f = neumann_solve(p, TriangleGrid::make(6.0, h));
                const BoundaryControl c = BoundaryControl::sample(control, 4.0, h, true);
                const auto rep = apply_response_operator(c, response_function(f, 4.0, h));
                const auto ref = boundary_derivative(fd_wave_oracle(p, c, 4.0, h));
                err[slot++] = l2_time(rep, ref, h);
            }
            CHECK(std::log2(err[0] / err[1]) >= 0.9);
        }
}
