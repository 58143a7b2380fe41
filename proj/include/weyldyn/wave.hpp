#pragma once

#include "weyldyn/kernel.hpp"

#include <functional>
#include <span>
#include <vector>

namespace weyldyn {

/// Dirichlet boundary control f sampled on t_m = m h_t, m = 0..M.
struct BoundaryControl {
    std::vector<double> samples;
    double h_t = 0.0;
    /// Declared C^2 with f(0) = f'(0) = 0, the domain of the response operator.
    bool smooth = false;

    /// Validates samples[0] == 0 and, for smooth controls, that the first increment is O(h_t^2).
    static BoundaryControl from_samples(std::vector<double> samples, double h_t, bool smooth);
    static BoundaryControl sample(const std::function<double(double)>& f, double T, double h_t,
                                  bool smooth);

    double duration() const { return h_t * static_cast<double>(samples.size() - 1); }
    /// Linear interpolation; 0 for tau <= 0, DomainError beyond the sampled window.
    double operator()(double tau) const;
};

/// Samples of r(t) on t_m = m h_t. h_x is the x-step of the stencil that produced them.
struct ResponseFunction {
    std::vector<double> samples;
    double h_t = 0.0;
    double h_x = 0.0;

    double duration() const { return h_t * static_cast<double>(samples.size() - 1); }
};

/// u(x, t) on a tensor grid, stored x-major: u[ix * t.size() + it].
struct WaveTable {
    std::vector<double> x;
    std::vector<double> t;
    std::vector<double> u;

    double at(std::size_t ix, std::size_t it) const { return u[ix * t.size() + it]; }
};

/// u(x, t) = f(t - x) + int_x^t w(x, s) f(t - s) ds for x <= t, and 0 for x > t.
/// The s-integral is a trapezoid rule at the control step.
WaveTable solve_wave(const BoundaryControl& f, const KernelField& field,
                     std::span<const double> x_grid, std::span<const double> t_grid);

/// r(s) = w_x(0, s) on s = m h_t, m h_t <= T_r, by one-sided differences at the kernel step h:
///   s >= 2h:  (4 w(h, s) - w(2h, s)) / (2h)
///   s <  2h:  (4 w(h/2, s + h/2) - w(h, s + h)) / h   (along the boundary x = 0 in eta)
/// h_t must be a positive integer multiple of h.
ResponseFunction response_function(const KernelField& field, double T_r, double h_t);

/// (R f)(t) = -f'(t) + int_0^t r(s) f(t - s) ds on the control grid.
std::vector<double> apply_response_operator(const BoundaryControl& f, const ResponseFunction& r);

} // namespace weyldyn
