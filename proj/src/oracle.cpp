#include "weyldyn/oracle.hpp"

#include "weyldyn/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace weyldyn {

namespace {

using State = std::array<double, 4>; // Re u, Im u, Re u', Im u'

constexpr double kOdeTol = 1e-12;
constexpr double kGrowthLimit = 1e12;

// u'' = (q - k^2) u with q read strictly inside the current segment, so jumps at the
// segment ends never leak into the stage evaluations.
struct SchrodingerRhs {
    const Potential* p;
    complex k2;
    double lo;
    double hi;

    void operator()(const State& s, State& ds, double x) const
    {
        const double eps = 1e-13 * std::max(1.0, std::abs(x));
        const double xe = std::clamp(x, lo + eps, hi - eps);
        const complex u{s[0], s[1]};
        const complex acc = ((*p)(xe) - k2) * u;
        ds[0] = s[2];
        ds[1] = s[3];
        ds[2] = acc.real();
        ds[3] = acc.imag();
    }
};

double state_norm(const State& s)
{
    return std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2] + s[3] * s[3]);
}

} // namespace

OdeWeylResult ode_weyl_oracle(const Potential& p, complex k, double X_start,
                              std::span<const double> x_grid)
{
    if (!(k.imag() > 0.0))
        throw InvalidArgument("ode_weyl_oracle needs Im k > 0");
    if (!(X_start > 0.0) || !std::isfinite(X_start))
        throw InvalidArgument("ode_weyl_oracle needs a finite X_start > 0");
    if (p.compact() && X_start < p.x_max())
        throw InvalidArgument("ode_weyl_oracle: X_start = " + std::to_string(X_start) +
                              " lies inside the support (x_max = " + std::to_string(p.x_max()) + ")");
    for (double x : x_grid)
        if (x < 0.0 || x > X_start)
            throw InvalidArgument("ode_weyl_oracle: output point outside [0, X_start]");

    // stops in descending order
    std::vector<double> stops{X_start, 0.0};
    for (double b : p.breakpoints(0.0, X_start))
        stops.push_back(b);
    for (double u = std::floor(X_start); u > 0.0; u -= 1.0)
        stops.push_back(u);
    stops.insert(stops.end(), x_grid.begin(), x_grid.end());
    std::sort(stops.begin(), stops.end(), std::greater<>());
    stops.erase(std::unique(stops.begin(), stops.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-13 * std::max(1.0, a); }),
                stops.end());

    const complex ik{0.0, 1.0};
    State state{1.0, 0.0, (ik * k).real(), (ik * k).imag()};
    double log_scale = 0.0;

    std::vector<complex> stored(x_grid.size());
    std::vector<double> stored_log(x_grid.size(), 0.0);
    auto record = [&](double x) {
        for (std::size_t i = 0; i < x_grid.size(); ++i)
            if (std::abs(x_grid[i] - x) <= 1e-13 * std::max(1.0, x)) {
                stored[i] = {state[0], state[1]};
                stored_log[i] = log_scale;
            }
    };
    record(stops.front());

    namespace odeint = boost::numeric::odeint;
    for (std::size_t s = 0; s + 1 < stops.size(); ++s) {
        const double hi = stops[s];
        const double lo = stops[s + 1];
        SchrodingerRhs rhs{&p, k * k, lo, hi};
        auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(kOdeTol, kOdeTol);
        odeint::integrate_adaptive(stepper, rhs, state, hi, lo, -std::min(0.01, hi - lo));

        const double norm = state_norm(state);
        if (!std::isfinite(norm) || norm > kGrowthLimit)
            throw BlowUp("ode_weyl_oracle: growth above 1e12 between renormalisations near x = " +
                         std::to_string(lo));
        for (double& c : state)
            c /= norm;
        log_scale += std::log(norm);
        record(lo);
    }

    const complex u0{state[0], state[1]};
    const complex du0{state[2], state[3]};
    if (std::abs(u0) == 0.0)
        throw BlowUp("ode_weyl_oracle: u(0) vanished (Dirichlet eigenvalue)");

    OdeWeylResult out;
    out.values.resize(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i)
        out.values[i] = stored[i] / u0 * std::exp(stored_log[i] - log_scale);
    out.m.z = k * k;
    out.m.m = du0 / u0;
    out.m.route = Route::ode_oracle;
    return out;
}

complex box_m_closed_form(double c, double L, complex k)
{
    const complex ik{0.0, 1.0};
    const complex p = std::sqrt(k * k - c);
    const complex sin_over_p = std::abs(p) < 1e-8 ? complex{L} : std::sin(p * L) / p;
    const complex u0 = std::cos(p * L) - ik * k * sin_over_p;
    const complex du0 = p * p * sin_over_p + ik * k * std::cos(p * L);
    return du0 / u0;
}

WaveTable fd_wave_oracle(const Potential& p, const BoundaryControl& f, double T, double h)
{
    if (!(h > 0.0) || !(T > 0.0))
        throw InvalidArgument("fd_wave_oracle needs T > 0 and h > 0");
    if (T > f.duration() * (1.0 + 1e-12))
        throw InvalidArgument("fd_wave_oracle: control shorter than T");

    const auto steps = static_cast<std::size_t>(std::llround(T / h));
    const std::size_t nx = steps + 2; // widened by 2h so the far edge never reaches [0, T]
    std::vector<double> qx(nx + 1);
    for (std::size_t i = 0; i <= nx; ++i)
        qx[i] = p(h * static_cast<double>(i));

    double fmax = 0.0;
    for (std::size_t n = 0; n <= steps; ++n)
        fmax = std::max(fmax, std::abs(f(h * static_cast<double>(n))));

    WaveTable out;
    out.x.resize(steps + 1);
    out.t.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        out.x[i] = h * static_cast<double>(i);
        out.t[i] = h * static_cast<double>(i);
    }
    out.u.assign((steps + 1) * (steps + 1), 0.0);
    auto store = [&](std::size_t n, const std::vector<double>& row) {
        for (std::size_t i = 0; i <= steps; ++i)
            out.u[i * (steps + 1) + n] = row[i];
    };

    std::vector<double> prev(nx + 1, 0.0);
    std::vector<double> cur(nx + 1, 0.0);
    std::vector<double> next(nx + 1, 0.0);
    store(0, prev);
    if (steps == 0)
        return out;
    cur[0] = f(h);
    store(1, cur);

    const double h2 = h * h;
    const double limit = 1e6 * std::max(fmax, 1e-300);
    for (std::size_t n = 1; n < steps; ++n) {
        const auto inner = static_cast<std::ptrdiff_t>(nx);
#pragma omp parallel for if (nx > 4096)
        for (std::ptrdiff_t si = 1; si < inner; ++si) {
            const auto i = static_cast<std::size_t>(si);
            next[i] = cur[i - 1] + cur[i + 1] - prev[i] - h2 * qx[i] * cur[i];
        }
        next[0] = f(h * static_cast<double>(n + 1));
        next[nx] = 0.0;
        double umax = 0.0;
        for (double v : next)
            umax = std::max(umax, std::abs(v));
        if (fmax > 0.0 && umax > limit)
            throw BlowUp("fd_wave_oracle: solution exceeded 1e6 max|f|");
        store(n + 1, next);
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    return out;
}

std::vector<double> boundary_derivative(const WaveTable& table)
{
    if (table.x.size() < 3)
        throw InvalidArgument("boundary_derivative needs three x-points");
    const double h = table.x[1] - table.x[0];
    std::vector<double> out(table.t.size());
    for (std::size_t n = 0; n < table.t.size(); ++n)
        out[n] = (-3.0 * table.at(0, n) + 4.0 * table.at(1, n) - table.at(2, n)) / (2.0 * h);
    return out;
}

} // namespace weyldyn
