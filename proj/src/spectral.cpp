#include "weyldyn/spectral.hpp"

#include "weyldyn/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace weyldyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_region(double im, const PotentialNorms& norms, const SpectralOptions& options,
                  bool& inside)
{
    const double threshold = convergence_region(norms).effective();
    inside = im > threshold;
    if (!inside && !options.force)
        throw RegionError("spectral parameter with Im k = " + std::to_string(im) +
                          " is not above the convergence threshold " + std::to_string(threshold));
}

// Tail of the discrete response integrand (4 w(h, t) - w(2h, t)) / (2h) beyond T.
double response_tail_bound(const PotentialNorms& norms, double h, double T, double beta)
{
    return (4.0 * kernel_tail_bound(norms, h, T, beta) + kernel_tail_bound(norms, 2.0 * h, T, beta)) /
           (2.0 * h);
}

} // namespace

Region convergence_region(const PotentialNorms& norms)
{
    Region region;
    region.l1_threshold = norms.l1_finite() ? 0.25 * *norms.l1 : kInf;
    const double qt = norms.windowed_scaled;
    if (qt > 0.0) {
        const double e = boost::math::constants::e<double>();
        region.e_branch = 0.5 * e * qt;
        region.kappa_star = std::sqrt(2.0 / qt) * (1.0 + kKappaMargin);
        region.kappa_branch = 0.5 * region.kappa_star * qt;
        region.printed_branch = std::sqrt(0.5 * qt);
        region.tail_rate = std::sqrt(2.0 * qt);
        region.window_threshold =
            std::max({region.e_branch, region.kappa_branch, region.printed_branch});
        region.threshold_discrepancy = region.tail_rate > region.window_threshold;
    }
    return region;
}

double kernel_tail_bound(const PotentialNorms& norms, double x, double T, double beta)
{
    if (norms.l1_finite() && *norms.l1 == 0.0)
        return 0.0;
    double best = kInf;
    if (norms.l1_finite()) {
        const double l1 = *norms.l1;
        const double rate = 0.25 * l1;
        if (beta > rate)
            best = 0.5 * l1 * std::exp(-rate * x) * std::exp((rate - beta) * T) / (beta - rate);
    }
    const double qt = norms.windowed_scaled;
    if (qt == 0.0)
        return 0.0;
    const double e = boost::math::constants::e<double>();
    const double rate_first = std::sqrt(2.0 * qt); // kappa = sqrt(2 / q~) minimises the t-rate
    const double rate_second = 0.5 * e * qt;
    if (beta > rate_first && beta > rate_second) {
        const double gap = beta - rate_first;
        const double first = 0.25 * qt * std::exp(-gap * T) * ((x + T) / gap + 1.0 / (gap * gap));
        const double c = qt * e / (4.0 * boost::math::constants::root_two_pi<double>());
        const double second =
            c * std::exp(-rate_second * x) * std::exp((rate_second - beta) * T) / (beta - rate_second);
        best = std::min(best, first + second);
    }
    return best;
}

WeylSample weyl_solution(const KernelField& field, const PotentialNorms& norms, complex k,
                         std::span<const double> x_grid, double T_trunc,
                         const SpectralOptions& options)
{
    if (!(k.imag() > 0.0))
        throw InvalidArgument("weyl_solution needs Im k > 0");
    if (!(T_trunc > 0.0))
        throw InvalidArgument("weyl_solution needs T_trunc > 0");
    WeylSample sample;
    check_region(k.imag(), norms, options, sample.inside_region);

    const double h = field.grid.h;
    const double x_top = x_grid.empty() ? 0.0 : *std::max_element(x_grid.begin(), x_grid.end());
    if (T_trunc + std::max(x_top, 2.0 * h) > field.grid.eta_max * (1.0 + 1e-12))
        throw DomainError("weyl_solution: T_trunc + max x exceeds eta_max");

    for (double x : x_grid)
        if (x < 0.0)
            throw DomainError("weyl_solution: negative x");

    sample.k = k;
    sample.h = h;
    sample.x.assign(x_grid.begin(), x_grid.end());
    sample.values.assign(sample.x.size(), complex{});
    const complex ik{0.0, 1.0};

    const auto nx = static_cast<std::ptrdiff_t>(sample.x.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t sx = 0; sx < nx; ++sx) {
        const auto ix = static_cast<std::size_t>(sx);
        const double x = sample.x[ix];
        if (x == 0.0) {
            sample.values[ix] = 1.0;
            continue;
        }
        complex integral{};
        if (x < T_trunc) {
            const double span = T_trunc - x;
            const auto full = static_cast<std::size_t>(std::floor(span / h + 1e-9));
            complex prev = eval_w(field, x, x) * std::exp(ik * k * x);
            for (std::size_t m = 1; m <= full; ++m) {
                const double t = std::min(T_trunc, x + h * static_cast<double>(m));
                const complex cur = eval_w(field, x, t) * std::exp(ik * k * t);
                integral += 0.5 * h * (prev + cur);
                prev = cur;
            }
            const double rest = span - h * static_cast<double>(full);
            if (rest > 1e-12 * h)
                integral += 0.5 * rest * (prev + eval_w(field, x, T_trunc) * std::exp(ik * k * T_trunc));
        }
        sample.values[ix] = std::exp(ik * k * x) + integral;
    }

    const ResponseFunction r = response_function(field, T_trunc, h);
    complex slope{};
    for (std::size_t m = 0; m < r.samples.size(); ++m) {
        const double weight = (m == 0 || m + 1 == r.samples.size()) ? 0.5 : 1.0;
        slope += weight * r.samples[m] * std::exp(ik * k * (h * static_cast<double>(m)));
    }
    sample.slope0 = ik * k + h * slope;

    if (sample.inside_region) {
        for (double x : sample.x)
            sample.tail_bound = std::max(sample.tail_bound, kernel_tail_bound(norms, x, T_trunc, k.imag()));
        sample.slope_tail_bound = response_tail_bound(norms, h, T_trunc, k.imag());
    } else {
        sample.tail_bound = kInf;
        sample.slope_tail_bound = kInf;
    }
    if (sample.tail_bound > options.tail_tol || sample.slope_tail_bound > options.tail_tol)
        throw TruncationError("weyl_solution: tail bound exceeds tolerance at T_trunc = " +
                              std::to_string(T_trunc));
    return sample;
}

MValue m_from_weyl(const WeylSample& sample)
{
    MValue out;
    out.z = z_from_k(sample.k);
    out.m = sample.slope0; // u(0, k) = 1
    out.route = Route::weyl_def;
    out.inside_region = sample.inside_region;
    out.tail_bound = sample.slope_tail_bound;
    return out;
}

MValue m_from_weyl_difference(const WeylSample& sample, double h)
{
    auto find = [&](double x) -> complex {
        for (std::size_t i = 0; i < sample.x.size(); ++i)
            if (std::abs(sample.x[i] - x) <= 1e-12 * std::max(1.0, x))
                return sample.values[i];
        throw InvalidArgument("m_from_weyl_difference: sample lacks x = " + std::to_string(x));
    };
    const complex u0 = find(0.0);
    const complex u1 = find(h);
    const complex u2 = find(2.0 * h);
    MValue out;
    out.z = z_from_k(sample.k);
    out.m = (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * h) / u0;
    out.route = Route::weyl_def;
    out.inside_region = sample.inside_region;
    out.tail_bound = sample.tail_bound;
    return out;
}

MValue m_from_response(const ResponseFunction& r, const PotentialNorms& norms, double kappa,
                       const SpectralOptions& options)
{
    if (!(kappa > 0.0))
        throw InvalidArgument("m_from_response needs kappa > 0");
    MValue out;
    check_region(kappa, norms, options, out.inside_region);
    double integral = 0.0;
    for (std::size_t m = 0; m < r.samples.size(); ++m) {
        const double weight = (m == 0 || m + 1 == r.samples.size()) ? 0.5 : 1.0;
        integral += weight * r.samples[m] * std::exp(-kappa * r.h_t * static_cast<double>(m));
    }
    out.z = complex{-kappa * kappa, 0.0};
    out.m = -kappa + r.h_t * integral;
    out.route = Route::response_rep;
    out.tail_bound = out.inside_region ? response_tail_bound(norms, r.h_x, r.duration(), kappa) : kInf;
    if (out.tail_bound > options.tail_tol)
        throw TruncationError("m_from_response: tail bound exceeds tolerance");
    return out;
}

AmplitudeFunction a_amplitude(const ResponseFunction& r)
{
    AmplitudeFunction A;
    A.h_alpha = 0.5 * r.h_t;
    A.h_x = r.h_x;
    A.samples.resize(r.samples.size());
    for (std::size_t i = 0; i < r.samples.size(); ++i)
        A.samples[i] = -2.0 * r.samples[i];
    return A;
}

AmplitudeFunction a_amplitude(const ResponseFunction& r, double h_alpha)
{
    if (!(h_alpha > 0.0))
        throw InvalidArgument("a_amplitude needs h_alpha > 0");
    AmplitudeFunction A;
    A.h_alpha = h_alpha;
    A.h_x = r.h_x;
    const double reach = 0.5 * r.duration();
    const auto count = static_cast<std::size_t>(std::floor(reach / h_alpha + 1e-9)) + 1;
    A.samples.resize(count);
    const double last = static_cast<double>(r.samples.size() - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double pos = std::min(2.0 * h_alpha * static_cast<double>(i) / r.h_t, last);
        const double base = std::min(std::floor(pos), last - 1.0);
        const double s = pos - base;
        const auto m = static_cast<std::size_t>(base);
        A.samples[i] = -2.0 * ((1.0 - s) * r.samples[m] + s * r.samples[m + 1]);
    }
    return A;
}

MValue m_from_amplitude(const AmplitudeFunction& A, const PotentialNorms& norms, double kappa,
                        const SpectralOptions& options)
{
    if (!(kappa > 0.0))
        throw InvalidArgument("m_from_amplitude needs kappa > 0");
    MValue out;
    check_region(kappa, norms, options, out.inside_region);
    double integral = 0.0;
    for (std::size_t i = 0; i < A.samples.size(); ++i) {
        const double weight = (i == 0 || i + 1 == A.samples.size()) ? 0.5 : 1.0;
        integral += weight * A.samples[i] * std::exp(-2.0 * kappa * A.h_alpha * static_cast<double>(i));
    }
    out.z = complex{-kappa * kappa, 0.0};
    out.m = -kappa - A.h_alpha * integral;
    out.route = Route::amplitude_rep;
    out.tail_bound =
        out.inside_region ? response_tail_bound(norms, A.h_x, 2.0 * A.extent(), kappa) : kInf;
    if (out.tail_bound > options.tail_tol)
        throw TruncationError("m_from_amplitude: tail bound exceeds tolerance");
    return out;
}

} // namespace weyldyn
