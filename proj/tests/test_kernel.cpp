#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "weyldyn/errors.hpp"
#include "weyldyn/kernel.hpp"
#include "weyldyn/validation.hpp"

#include <omp.h>

#include <cmath>
#include <random>

using namespace weyldyn;

namespace {

Potential box(double c, double L) { return make_catalog_potential(PotentialKind::constant_box, {c, L}); }

std::vector<Potential> catalog()
{
    return {make_catalog_potential(PotentialKind::zero, {}), box(1.0, 1.0),
            make_catalog_potential(PotentialKind::exponential, {1.0, 1.0}),
            make_catalog_potential(PotentialKind::sech2, {1.0, 2.0}),
            make_catalog_potential(PotentialKind::bump_train, {1.0, 0.5})};
}

// w for q = c on the whole half-line: -c x J1(sqrt(c (t^2 - x^2))) / sqrt(c (t^2 - x^2))
double constant_q_kernel(double c, double x, double t)
{
    const double s2 = c * (t * t - x * x);
    if (std::abs(s2) < 1e-14)
        return -0.5 * c * x;
    if (s2 > 0.0) {
        const double s = std::sqrt(s2);
        return -c * x * std::cyl_bessel_j(1.0, s) / s;
    }
    const double s = std::sqrt(-s2);
    return -c * x * std::cyl_bessel_i(1.0, s) / s;
}

// composite Simpson on [a, b] with n (even) panels
template <class F>
double simpson(F&& f, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * f(a + h * i);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("triangle grid")
{
    const TriangleGrid g = TriangleGrid::make(2.0, 0.5);
    CHECK(g.n == 4);
    CHECK(g.node_count() == 15);
    CHECK(g.index(0, 0) == 0);
    CHECK(g.index(0, 1) == 1);
    CHECK(g.index(1, 1) == 2);
    CHECK(g.index(4, 4) == 14);
    CHECK_NOTHROW(TriangleGrid::make(8.0, 0.01));
    CHECK_THROWS_AS(TriangleGrid::make(8.0, 0.03), InvalidArgument);
    CHECK_THROWS_AS(TriangleGrid::make(8.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(TriangleGrid::make(-1.0, 0.1), InvalidArgument);
}

TEST_CASE("Q for simple potentials")
{
    const TriangleGrid g = TriangleGrid::make(4.0, 0.05);
    CHECK(build_Q(make_catalog_potential(PotentialKind::zero, {}), g).max_abs() == 0.0);

    const KernelField qc = build_Q(box(1.7, 100.0), g);
    for (std::size_t j = 0; j <= g.n; j += 7)
        for (std::size_t i = 0; i <= j; i += 3)
            CHECK(qc.at(i, j) == doctest::Approx(-1.7 * g.h * (j - i) / 4.0).epsilon(1e-12));

    const KernelField qb = build_Q(box(1.0, 1.0), g);
    CHECK(qb.at(0, 20) == doctest::Approx(-0.25).epsilon(1e-14)); // xi = 0, eta = 1
    CHECK(qb.at(0, 80) == doctest::Approx(-0.5).epsilon(1e-14));  // eta / 2 = 2 past the edge
}

TEST_CASE("K on simple inputs")
{
    const TriangleGrid g = TriangleGrid::make(3.0, 0.1);
    KernelField ones;
    ones.grid = g;
    ones.v.assign(g.node_count(), 1.0);
    const double c = 0.8;
    const KernelField k = apply_K(box(c, 100.0), ones);
    for (std::size_t j = 0; j <= g.n; ++j) {
        CHECK(k.at(0, j) == 0.0);
        for (std::size_t i = 0; i <= j; ++i) {
            const double xi = g.h * i;
            const double eta = g.h * j;
            CHECK(k.at(i, j) == doctest::Approx(0.25 * c * xi * (eta - xi)).epsilon(1e-12));
        }
    }
}

TEST_CASE("fast K matches the serial reference")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const Potential& p : catalog()) {
        CAPTURE(to_string(p.kind()));
        const TriangleGrid g = TriangleGrid::make(3.0, 0.05);
        KernelField field;
        field.grid = g;
        field.v.resize(g.node_count());
        for (double& x : field.v)
            x = u(rng);
        const KernelField fast = apply_K(p, field);
        const KernelField ref = apply_K_reference(p, field);
        double err = 0.0;
        for (std::size_t k = 0; k < fast.v.size(); ++k)
            err = std::max(err, std::abs(fast.v[k] - ref.v[k]));
        CHECK(err < 1e-13);
    }
}

TEST_CASE("K Q at a spot node against a fine Simpson rule")
{
    const Potential p = box(1.0, 1.0);
    const TriangleGrid g = TriangleGrid::make(2.0, 0.01);
    const KernelField kq = apply_K(p, build_Q(p, g));
    const double xi = 0.5;
    const double eta = 1.0;
    auto Q = [&](double a, double b) {
        return -0.5 * simpson([&](double s) { return p(s); }, a / 2.0, b / 2.0, 64);
    };
    const double oracle = 0.25 * simpson(
                                     [&](double x1) {
                                         return simpson([&](double e1) { return p((e1 - x1) / 2.0) * Q(x1, e1); },
                                                        xi, eta, 64);
                                     },
                                     0.0, xi, 64);
    CHECK(kq.at(50, 100) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("fast K does not depend on the thread count")
{
    const Potential p = make_catalog_potential(PotentialKind::sech2, {1.0, 2.0});
    const TriangleGrid g = TriangleGrid::make(6.0, 0.01);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const KernelField one = neumann_solve(p, g);
    omp_set_num_threads(3);
    const KernelField three = neumann_solve(p, g);
    omp_set_num_threads(saved);
    CHECK(one.v == three.v);
}

TEST_CASE("Neumann series")
{
    const KernelField z = neumann_solve(make_catalog_potential(PotentialKind::zero, {}), TriangleGrid::make(4.0, 0.05));
    CHECK(z.terms_used == 0);
    CHECK(z.max_abs() == 0.0);

    const KernelField b = neumann_solve(box(1.0, 1.0), TriangleGrid::make(4.0, 0.01));
    CHECK(b.terms_used <= 25);
    CHECK(b.last_term_max <= 1e-12);

    NeumannOptions tight;
    tight.max_terms = 2;
    CHECK_THROWS_AS(neumann_solve(box(1.0, 1.0), TriangleGrid::make(4.0, 0.05), tight), NoConvergence);
    try {
        neumann_solve(box(1.0, 1.0), TriangleGrid::make(4.0, 0.05), tight);
    } catch (const NoConvergence& e) {
        CHECK(e.terms_used == 2);
        CHECK(e.last_term > 1e-12);
    }
    NeumannOptions bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(neumann_solve(box(1.0, 1.0), TriangleGrid::make(4.0, 0.05), bad), InvalidArgument);

    int calls = 0;
    NeumannOptions watch;
    watch.on_term = [&](int n, const KernelField&) { CHECK(n == calls++); };
    const KernelField w = neumann_solve(box(1.0, 1.0), TriangleGrid::make(4.0, 0.05), watch);
    CHECK(calls == w.terms_used + 1);
}

TEST_CASE("constant potential against the Bessel closed form")
{
    for (double c : {1.0, -1.0, 2.5}) {
        CAPTURE(c);
        const KernelField f = neumann_solve(box(c, 100.0), TriangleGrid::make(6.0, 0.01));
        double err = 0.0;
        double scale = 0.0;
        for (std::size_t j = 0; j <= f.grid.n; j += 3)
            for (std::size_t i = 0; i <= j; i += 3) {
                const double xi = f.grid.h * i;
                const double eta = f.grid.h * j;
                const double exact = constant_q_kernel(c, 0.5 * (eta - xi), 0.5 * (eta + xi));
                err = std::max(err, std::abs(f.at(i, j) - exact));
                scale = std::max(scale, std::abs(exact));
            }
        CHECK(err < 2e-5 * std::max(1.0, scale));
    }
}

TEST_CASE("boundary conditions on every catalog potential")
{
    for (const Potential& p : catalog()) {
        CAPTURE(to_string(p.kind()));
        const double h = 0.02;
        const KernelField f = neumann_solve(p, TriangleGrid::make(6.0, h));
        const std::vector<double> cum = cumulative_trapezoid(p, 1e-4, 30001);
        for (std::size_t j = 0; j <= f.grid.n; ++j) {
            CHECK(std::abs(f.at(j, j)) < 1e-12);
            const double x = 0.5 * h * j;
            const double exact = -0.5 * cum[static_cast<std::size_t>(std::llround(x / 1e-4))];
            CHECK(std::abs(eval_w(f, x, x) - exact) < 10.0 * h * h + 1e-12);
            CHECK(std::abs(eval_w(f, 0.0, 2.0 * x)) < 1e-12);
        }
    }
}

TEST_CASE("eval_w")
{
    const KernelField f = neumann_solve(box(1.0, 1.0), TriangleGrid::make(4.0, 0.05));
    CHECK(eval_w(f, 1.5, 1.0) == 0.0);
    CHECK_THROWS_AS(eval_w(f, 1.5, 3.0), DomainError);
    CHECK_THROWS_AS(eval_w(f, -0.5, 1.0), DomainError);
    // nodes are reproduced exactly
    CHECK(eval_w(f, 0.5, 1.5) == f.at(20, 40));
    CHECK(eval_w(f, 1.0, 3.0) == f.at(40, 80));
    // interpolation between nodes stays between neighbours on a monotone stretch
    const double mid = eval_w(f, 0.525, 1.5);
    CHECK(mid == doctest::Approx(0.5 * (f.at(20, 40) + f.at(19, 41)) * 0.5 +
                                 0.25 * (f.at(19, 40) + f.at(20, 41)))
                     .epsilon(1e-12));

    const KernelField z = neumann_solve(make_catalog_potential(PotentialKind::zero, {}), TriangleGrid::make(4.0, 0.05));
    for (double x : {0.0, 0.3, 1.1})
        for (double t : {1.2, 2.0})
            CHECK(eval_w(z, x, t) == 0.0);
}

TEST_CASE("term bound")
{
    CHECK(term_bound(0, 0.7, 3.0, 2.0) == doctest::Approx(0.5 * 4.0).epsilon(1e-14));
    CHECK(term_bound(1, 1.0, 2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    for (int n = 0; n < 10; ++n)
        CHECK(term_bound(n, 1.0, 2.0, 0.0) == 0.0);
    CHECK(term_bound(3, 0.0, 2.0, 1.0) == 0.0);
    CHECK(std::isfinite(term_bound(60, 40.0, 80.0, 5.0)));
    CHECK_THROWS_AS(term_bound(1, 2.0, 1.0, 1.0), InvalidArgument);
    // n! >= sqrt(2 pi) (n / e)^n in the arithmetic used
    for (int n = 1; n <= 60; ++n)
        CHECK(std::lgamma(n + 1.0) >= 0.5 * std::log(2.0 * M_PI) + n * (std::log(double(n)) - 1.0));
}

// v = Q - K v differentiates to v_{xi eta} = -(1/4) q v
TEST_CASE("Goursat PDE residual is second order for a smooth potential")
{
    const Potential p = make_catalog_potential(PotentialKind::exponential, {1.0, 1.0});
    double res[2] = {};
    int slot = 0;
    for (double h : {0.04, 0.02}) {
        const KernelField f = neumann_solve(p, TriangleGrid::make(4.0, h));
        double worst = 0.0;
        for (std::size_t j = 1; j <= f.grid.n; ++j)
            for (std::size_t i = 0; i + 1 < j; ++i) {
                const double vxe = (f.at(i + 1, j) - f.at(i, j) - f.at(i + 1, j - 1) + f.at(i, j - 1)) / (h * h);
                const double xi = h * (i + 0.5);
                const double eta = h * (j - 0.5);
                const double vc = 0.25 * (f.at(i + 1, j) + f.at(i, j) + f.at(i + 1, j - 1) + f.at(i, j - 1));
                worst = std::max(worst, std::abs(vxe + 0.25 * p(0.5 * (eta - xi)) * vc));
            }
        res[slot++] = worst;
    }
    CHECK(res[1] < 0.3 * res[0]);
    CHECK(res[1] < 1e-3);
}

TEST_CASE("Richardson order on the box")
{
    const Potential p = box(1.0, 1.0);
    const KernelField a = neumann_solve(p, TriangleGrid::make(4.0, 0.04));
    const KernelField b = neumann_solve(p, TriangleGrid::make(4.0, 0.02));
    const KernelField c = neumann_solve(p, TriangleGrid::make(4.0, 0.01));
    CHECK(richardson_order(a, b, c) >= 1.8);
    CHECK_THROWS_AS(richardson_order(a, c, b), InvalidArgument);
}
