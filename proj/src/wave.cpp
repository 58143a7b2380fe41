#include "weyldyn/wave.hpp"

#include "weyldyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace weyldyn {

namespace {

bool is_multiple(double value, double step)
{
    const double ratio = value / step;
    return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, std::abs(ratio));
}

} // namespace

BoundaryControl BoundaryControl::from_samples(std::vector<double> samples, double h_t, bool smooth)
{
    if (!(h_t > 0.0))
        throw InvalidArgument("boundary control needs h_t > 0");
    if (samples.size() < 3)
        throw InvalidArgument("boundary control needs at least three samples");
    if (samples[0] != 0.0)
        throw InvalidArgument("boundary control must vanish at t = 0");
    if (smooth) {
        double curvature = h_t * h_t;
        for (std::size_t m = 1; m + 1 < samples.size(); ++m)
            curvature = std::max(curvature, std::abs(samples[m + 1] - 2.0 * samples[m] + samples[m - 1]));
        if (std::abs(samples[1]) > 2.0 * curvature)
            throw InvalidArgument("smooth control violates f'(0) = 0 (first increment not O(h^2))");
    }
    BoundaryControl out;
    out.samples = std::move(samples);
    out.h_t = h_t;
    out.smooth = smooth;
    return out;
}

BoundaryControl BoundaryControl::sample(const std::function<double(double)>& f, double T, double h_t,
                                        bool smooth)
{
    if (!(h_t > 0.0) || !(T > 0.0))
        throw InvalidArgument("boundary control needs T > 0 and h_t > 0");
    const auto steps = static_cast<std::size_t>(std::llround(T / h_t));
    std::vector<double> samples(steps + 1);
    for (std::size_t m = 0; m <= steps; ++m)
        samples[m] = f(h_t * static_cast<double>(m));
    return from_samples(std::move(samples), h_t, smooth);
}

double BoundaryControl::operator()(double tau) const
{
    if (tau <= 0.0)
        return 0.0;
    const double pos = tau / h_t;
    const auto last = static_cast<double>(samples.size() - 1);
    if (pos > last * (1.0 + 1e-12))
        throw DomainError("boundary control evaluated beyond its window");
    const double base = std::min(std::floor(pos), last - 1.0);
    const double s = std::clamp(pos - base, 0.0, 1.0);
    const auto m = static_cast<std::size_t>(base);
    return (1.0 - s) * samples[m] + s * samples[m + 1];
}

WaveTable solve_wave(const BoundaryControl& f, const KernelField& field,
                     std::span<const double> x_grid, std::span<const double> t_grid)
{
    WaveTable out;
    out.x.assign(x_grid.begin(), x_grid.end());
    out.t.assign(t_grid.begin(), t_grid.end());
    out.u.assign(out.x.size() * out.t.size(), 0.0);
    if (out.x.empty() || out.t.empty())
        return out;

    const double x_top = *std::max_element(out.x.begin(), out.x.end());
    const double t_top = *std::max_element(out.t.begin(), out.t.end());
    // only pairs with x <= t need the kernel
    double reach = 0.0;
    for (double x : out.x)
        if (x <= t_top)
            reach = std::max(reach, t_top + x);
    if (reach > field.grid.eta_max * (1.0 + 1e-12))
        throw DomainError("solve_wave: kernel triangle (eta_max = " +
                          std::to_string(field.grid.eta_max) + ") too small for t + x = " +
                          std::to_string(reach));
    if (t_top > f.duration() * (1.0 + 1e-12) + 1e-12)
        throw DomainError("solve_wave: control shorter than the requested times");
    (void)x_top;

    const double h = f.h_t;
    const auto nx = static_cast<std::ptrdiff_t>(out.x.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t sx = 0; sx < nx; ++sx) {
        const auto ix = static_cast<std::size_t>(sx);
        const double x = out.x[ix];
        for (std::size_t it = 0; it < out.t.size(); ++it) {
            const double t = out.t[it];
            if (x > t + 1e-12 * std::max(1.0, t))
                continue;
            const double span = std::max(0.0, t - x);
            const auto full = static_cast<std::size_t>(std::floor(span / h + 1e-9));
            double integral = 0.0;
            double prev = eval_w(field, x, x) * f(span);
            for (std::size_t m = 1; m <= full; ++m) {
                const double s = std::min(t, x + h * static_cast<double>(m));
                const double cur = eval_w(field, x, s) * f(t - s);
                integral += 0.5 * h * (prev + cur);
                prev = cur;
            }
            const double rest = span - h * static_cast<double>(full);
            if (rest > 1e-12 * h)
                integral += 0.5 * rest * (prev + eval_w(field, x, t) * f(0.0));
            out.u[ix * out.t.size() + it] = f(span) + integral;
        }
    }
    return out;
}

ResponseFunction response_function(const KernelField& field, double T_r, double h_t)
{
    const double h = field.grid.h;
    if (!(h_t > 0.0) || !(T_r > 0.0))
        throw InvalidArgument("response_function needs T_r > 0 and h_t > 0");
    if (h_t < h * (1.0 - 1e-9) || !is_multiple(h_t, h))
        throw InvalidArgument("response_function: h_t must be an integer multiple of the kernel step");
    if (T_r + 2.0 * h > field.grid.eta_max * (1.0 + 1e-12))
        throw DomainError("response_function: stencil at s = T_r needs T_r + 2h <= eta_max");

    const auto steps = static_cast<std::size_t>(std::llround(T_r / h_t));
    ResponseFunction r;
    r.h_t = h_t;
    r.h_x = h;
    r.samples.resize(steps + 1);
    for (std::size_t m = 0; m <= steps; ++m) {
        const double s = h_t * static_cast<double>(m);
        if (s >= 2.0 * h * (1.0 - 1e-9))
            r.samples[m] = (4.0 * eval_w(field, h, s) - eval_w(field, 2.0 * h, s)) / (2.0 * h);
        else
            r.samples[m] =
                (4.0 * eval_w(field, 0.5 * h, s + 0.5 * h) - eval_w(field, h, s + h)) / h;
    }
    return r;
}

std::vector<double> apply_response_operator(const BoundaryControl& f, const ResponseFunction& r)
{
    if (!f.smooth)
        throw InvalidArgument("response operator is defined for C^2 controls with f(0) = f'(0) = 0");
    if (std::abs(f.h_t - r.h_t) > 1e-12 * f.h_t)
        throw InvalidArgument("control and response function use different time steps");
    if (r.samples.size() < f.samples.size())
        throw DomainError("response function shorter than the control window");

    const std::vector<double>& fs = f.samples;
    const std::size_t count = fs.size();
    const double h = f.h_t;
    std::vector<double> out(count, 0.0);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 32)
    for (std::ptrdiff_t sm = 0; sm < n; ++sm) {
        const auto m = static_cast<std::size_t>(sm);
        double deriv = 0.0;
        if (m == 0)
            deriv = (-3.0 * fs[0] + 4.0 * fs[1] - fs[2]) / (2.0 * h);
        else if (m + 1 == count)
            deriv = (3.0 * fs[m] - 4.0 * fs[m - 1] + fs[m - 2]) / (2.0 * h);
        else
            deriv = (fs[m + 1] - fs[m - 1]) / (2.0 * h);
        double conv = 0.0;
        if (m > 0) {
            conv = 0.5 * (r.samples[0] * fs[m] + r.samples[m] * fs[0]);
            for (std::size_t l = 1; l < m; ++l)
                conv += r.samples[l] * fs[m - l];
            conv *= h;
        }
        out[m] = -deriv + conv;
    }
    return out;
}

} // namespace weyldyn
