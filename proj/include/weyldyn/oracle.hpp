#pragma once

#include "weyldyn/mvalue.hpp"
#include "weyldyn/potential.hpp"
#include "weyldyn/wave.hpp"

#include <span>
#include <vector>

namespace weyldyn {

// Independent reference solvers. Nothing here touches the kernel module.

struct OdeWeylResult {
    /// u(x) / u(0) on the requested grid.
    std::vector<complex> values;
    MValue m;
};

/// Integrates -u'' + q u = k^2 u backward from X_start with the free decaying data
/// u = e^{ikX}, u' = ik e^{ikX}, renormalising at every stop (unit marks, breakpoints of q,
/// output points). Adaptive Dormand-Prince 5(4) at tolerance 1e-12.
/// Throws BlowUp when the solution grows by more than 1e12 between renormalisations.
OdeWeylResult ode_weyl_oracle(const Potential& p, complex k, double X_start,
                              std::span<const double> x_grid = {});

/// Closed-form m for the box potential (height c on [0, L]) by matching at x = L.
complex box_m_closed_form(double c, double L, complex k);

/// Explicit leapfrog at unit Courant number, dx = dt = h:
///   u(x, t + h) = u(x - h, t) + u(x + h, t) - u(x, t - h) - h^2 q(x) u(x, t)
/// on [0, T + 2h] with u(0, t) = f(t); returns the table on x, t in [0, T].
/// Throws BlowUp if max |u| exceeds 1e6 max |f|.
WaveTable fd_wave_oracle(const Potential& p, const BoundaryControl& f, double T, double h);

/// u_x(0, t) from a table on a uniform x-grid by the second-order one-sided difference.
std::vector<double> boundary_derivative(const WaveTable& table);

} // namespace weyldyn
