#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weyldyn/errors.hpp"
#include "weyldyn/oracle.hpp"

#include <cmath>

using namespace weyldyn;

namespace {

Potential box(double c, double L) { return make_catalog_potential(PotentialKind::constant_box, {c, L}); }

const complex I{0.0, 1.0};

} // namespace

TEST_CASE("free equation")
{
    const Potential z = make_catalog_potential(PotentialKind::zero, {});
    const std::vector<double> xs{0.0, 0.5, 1.0, 2.5};
    for (complex k : {complex{0, 1}, complex{0, 2}, complex{1, 2}, complex{-0.5, 0.3}}) {
        const OdeWeylResult r = ode_weyl_oracle(z, k, 3.0, xs);
        CHECK(std::abs(r.m.m - I * k) < 1e-10);
        CHECK(r.m.route == Route::ode_oracle);
        CHECK(r.m.z == k * k);
        for (std::size_t i = 0; i < xs.size(); ++i)
            CHECK(std::abs(r.values[i] - std::exp(I * k * xs[i])) < 1e-10);
    }
}

TEST_CASE("box potential against the matched closed form")
{
    for (double c : {1.0, -2.0, 5.0})
        for (complex k : {complex{0, 1}, complex{0, 2}, complex{0, 3}, complex{1, 0.5}, complex{-2, 1}}) {
            CAPTURE(c);
            CAPTURE(k);
            const complex exact = box_m_closed_form(c, 1.0, k);
            const complex m = ode_weyl_oracle(box(c, 1.0), k, 1.0).m.m;
            CHECK(std::abs(m - exact) < 1e-9 * std::abs(exact));
        }
    // sqrt(k^2 - c) = 0 branch
    CHECK(std::abs(box_m_closed_form(-1.0, 1.0, complex{0, 1}) - (-1.0 / (1.0 + 1.0))) < 1e-14);
}

TEST_CASE("start point invariance")
{
    const Potential e = make_catalog_potential(PotentialKind::exponential, {1.0, 1.0});
    const Potential s = make_catalog_potential(PotentialKind::sech2, {1.0, 2.0});
    const Potential b = box(1.0, 1.0);
    for (const Potential* p : {&e, &s, &b})
        for (complex k : {complex{0, 2}, complex{1, 1}}) {
            const double X = std::max(1.0, p->x_max());
            const complex m1 = ode_weyl_oracle(*p, k, X).m.m;
            const complex m2 = ode_weyl_oracle(*p, k, X + 2.0).m.m;
            CHECK(std::abs(m1 - m2) < 1e-8 * std::abs(m1));
        }
}

TEST_CASE("sech2 well")
{
    const Potential s = make_catalog_potential(PotentialKind::sech2, {1.0, 2.0});
    const MValue m = ode_weyl_oracle(s, complex{0, 2}, s.x_max()).m;
    CHECK(std::isfinite(m.m.real()));
    CHECK(std::abs(m.m.imag()) < 1e-12);
    const MValue mc = ode_weyl_oracle(s, complex{1, 2}, s.x_max()).m;
    CHECK(mc.z.imag() > 0.0);
    CHECK(mc.m.imag() > 0.0);
}

TEST_CASE("bump train from a finite start point")
{
    const Potential t = make_catalog_potential(PotentialKind::bump_train, {1.0, 0.5});
    const complex k{0, 1.5};
    const complex m1 = ode_weyl_oracle(t, k, 30.0).m.m;
    const complex m2 = ode_weyl_oracle(t, k, 40.0).m.m;
    CHECK(std::abs(m1 - m2) < 1e-10);
}

TEST_CASE("oracle argument checks")
{
    const Potential b = box(1.0, 2.0);
    CHECK_THROWS_AS(ode_weyl_oracle(b, complex{1, 0}, 3.0), InvalidArgument);
    CHECK_THROWS_AS(ode_weyl_oracle(b, complex{0, 1}, 1.0), InvalidArgument);
    const std::vector<double> beyond{5.0};
    CHECK_THROWS_AS(ode_weyl_oracle(b, complex{0, 1}, 3.0, beyond), InvalidArgument);
    // growth of e^{40} per unit between renormalisations
    CHECK_THROWS_AS(ode_weyl_oracle(b, complex{0, 40}, 3.0), BlowUp);
}

TEST_CASE("finite differences: free shift and causality")
{
    const double h = 0.05;
    const Potential z = make_catalog_potential(PotentialKind::zero, {});
    const BoundaryControl f = BoundaryControl::sample([](double t) { return t * t; }, 3.0, h, true);
    const WaveTable u = fd_wave_oracle(z, f, 3.0, h);
    REQUIRE(u.x.size() == 61);
    for (std::size_t ix = 0; ix < u.x.size(); ++ix)
        for (std::size_t it = 0; it < u.t.size(); ++it) {
            const double exact = it >= ix ? f.samples[it - ix] : 0.0;
            CHECK(u.at(ix, it) == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }

    const WaveTable b = fd_wave_oracle(box(1.0, 1.0), f, 3.0, h);
    for (std::size_t ix = 0; ix < b.x.size(); ++ix)
        for (std::size_t it = 0; it < ix; ++it)
            CHECK(std::abs(b.at(ix, it)) < 1e-12);
}

TEST_CASE("finite differences: blow-up and arguments")
{
    const BoundaryControl f = BoundaryControl::sample([](double t) { return t * t; }, 4.0, 0.1, true);
    CHECK_THROWS_AS(fd_wave_oracle(box(-1e4, 4.0), f, 4.0, 0.1), BlowUp);
    CHECK_THROWS_AS(fd_wave_oracle(box(1.0, 1.0), f, 5.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(fd_wave_oracle(box(1.0, 1.0), f, 4.0, 0.0), InvalidArgument);
}

TEST_CASE("boundary derivative")
{
    WaveTable t;
    t.x = {0.0, 0.1, 0.2};
    t.t = {0.0, 1.0};
    // u = x^2 + 3x at both times
    t.u = {0.0, 0.0, 0.31, 0.31, 0.64, 0.64};
    const auto d = boundary_derivative(t);
    CHECK(d[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(3.0).epsilon(1e-12));
}
