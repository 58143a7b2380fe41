#pragma once

#include "weyldyn/kernel.hpp"
#include "weyldyn/mvalue.hpp"
#include "weyldyn/potential.hpp"
#include "weyldyn/wave.hpp"

#include <limits>
#include <span>
#include <vector>

namespace weyldyn {

/// Sufficient conditions on Im k for the time-domain transform to give the Weyl solution.
struct Region {
    /// ||q||_1 / 4, +inf when q is not integrable.
    double l1_threshold = 0.0;
    /// max{e q~/2, kappa* q~/2, sqrt(q~/2)} for the windowed class.
    double window_threshold = 0.0;
    double e_branch = 0.0;         // e q~ / 2
    double kappa_star = 0.0;       // sqrt(2 / q~) (1 + margin)
    double kappa_branch = 0.0;     // kappa* q~ / 2
    double printed_branch = 0.0;   // sqrt(q~ / 2)
    /// Smallest exponential growth rate in t of the windowed kernel bound, sqrt(2 q~).
    double tail_rate = 0.0;
    /// True when tail_rate exceeds window_threshold: just above the windowed threshold the
    /// windowed kernel bound is not integrable against e^{-Im k t}.
    bool threshold_discrepancy = false;

    double effective() const { return std::min(l1_threshold, window_threshold); }
};

inline constexpr double kKappaMargin = 0.05;

Region convergence_region(const PotentialNorms& norms);

/// Bound on int_T^inf |w(x, t)| e^{-beta t} dt from the L1 or windowed kernel estimates,
/// whichever is smaller; +inf when neither is integrable at this beta.
double kernel_tail_bound(const PotentialNorms& norms, double x, double T, double beta);

struct SpectralOptions {
    /// Throw TruncationError when the tail bound exceeds this.
    double tail_tol = std::numeric_limits<double>::infinity();
    /// Evaluate below the threshold instead of throwing RegionError.
    bool force = false;
};

struct WeylSample {
    std::vector<double> x;
    std::vector<complex> values;
    complex k;
    /// u_x(0, k) from the x-derivative of the integrand at x = 0.
    complex slope0;
    double h = 0.0;
    double tail_bound = 0.0;
    double slope_tail_bound = 0.0;
    bool inside_region = true;
};

/// u(x, k) = e^{ikx} + int_x^T w(x, t) e^{ikt} dt (trapezoid at the kernel step).
/// u(0, k) = 1 exactly. The slope at 0 is ik + int_0^T r(t) e^{ikt} dt with r from
/// response_function at the kernel step, so m_from_weyl and m_from_response share one sum.
WeylSample weyl_solution(const KernelField& field, const PotentialNorms& norms, complex k,
                         std::span<const double> x_grid, double T_trunc,
                         const SpectralOptions& options = {});

/// m(k^2) = u_x(0, k) / u(0, k).
MValue m_from_weyl(const WeylSample& sample);

/// Same ratio with u_x(0, k) by a second-order one-sided difference of the sampled values at
/// x = 0, h, 2h (these must be on the sample's grid). Agrees with m_from_weyl to O(h^2).
MValue m_from_weyl_difference(const WeylSample& sample, double h);

/// m(-kappa^2) = -kappa + int_0^{T_r} r(a) e^{-kappa a} da.
MValue m_from_response(const ResponseFunction& r, const PotentialNorms& norms, double kappa,
                       const SpectralOptions& options = {});

struct AmplitudeFunction {
    std::vector<double> samples;
    double h_alpha = 0.0;
    double h_x = 0.0;

    double extent() const { return h_alpha * static_cast<double>(samples.size() - 1); }
};

/// A(alpha) = -2 r(2 alpha) on alpha_i = i h_t / 2, which hits every sample of r exactly.
AmplitudeFunction a_amplitude(const ResponseFunction& r);
/// Same on a caller-chosen alpha step, with linear interpolation of r.
AmplitudeFunction a_amplitude(const ResponseFunction& r, double h_alpha);

/// m(-kappa^2) = -kappa - int_0^{alpha_max} A(alpha) e^{-2 alpha kappa} d alpha.
MValue m_from_amplitude(const AmplitudeFunction& A, const PotentialNorms& norms, double kappa,
                        const SpectralOptions& options = {});

} // namespace weyldyn
