#pragma once

#include <complex>
#include <string_view>

namespace weyldyn {

using complex = std::complex<double>;

enum class Route { weyl_def, response_rep, amplitude_rep, ode_oracle };

constexpr std::string_view to_string(Route route)
{
    switch (route) {
    case Route::weyl_def: return "weyl_def";
    case Route::response_rep: return "response_rep";
    case Route::amplitude_rep: return "amplitude_rep";
    case Route::ode_oracle: return "ode_oracle";
    }
    return "unknown";
}

/// One sample m(z) of the Titchmarsh-Weyl function and the route that produced it.
struct MValue {
    complex z;
    complex m;
    Route route = Route::weyl_def;
    bool inside_region = true;
    /// Bound on the truncation error of the transform (0 for the ODE route).
    double tail_bound = 0.0;
};

/// z = k^2 for wavenumber k (Im k > 0); kappa = -i k is the Laplace variable, z = -kappa^2.
inline complex z_from_k(complex k) { return k * k; }
inline complex k_from_kappa(double kappa) { return {0.0, kappa}; }

} // namespace weyldyn
