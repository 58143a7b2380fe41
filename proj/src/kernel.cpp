#include "weyldyn/kernel.hpp"

#include "weyldyn/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace weyldyn {

namespace {

constexpr std::size_t kColumnBlock = 64;

// q at the characteristic offsets (eta1 - xi1)/2 = d h / 2, d = 0..n
std::vector<double> diagonal_potential(const Potential& p, const TriangleGrid& grid)
{
    std::vector<double> qd(grid.n + 1);
    for (std::size_t d = 0; d <= grid.n; ++d)
        qd[d] = p(0.5 * grid.h * static_cast<double>(d));
    return qd;
}

KernelField empty_like(const KernelField& field)
{
    KernelField out;
    out.grid = field.grid;
    out.v.assign(field.v.size(), 0.0);
    return out;
}

} // namespace

TriangleGrid TriangleGrid::make(double eta_max, double h)
{
    if (!(h > 0.0) || !(eta_max > 0.0) || !std::isfinite(eta_max))
        throw InvalidArgument("triangle grid needs eta_max > 0 and h > 0");
    const double ratio = eta_max / h;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
        throw InvalidArgument("h = " + std::to_string(h) + " does not divide eta_max = " +
                              std::to_string(eta_max));
    TriangleGrid grid;
    grid.eta_max = eta_max;
    grid.h = h;
    grid.n = static_cast<std::size_t>(n);
    return grid;
}

double KernelField::max_abs() const
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

KernelField build_Q(const Potential& p, const TriangleGrid& grid)
{
    KernelField out;
    out.grid = grid;
    out.v.assign(grid.node_count(), 0.0);

    // cum[j] = int_0^{j h / 2} q
    const std::vector<double> cum = cumulative_trapezoid(p, 0.5 * grid.h, grid.n + 1);
    for (std::size_t j = 0; j <= grid.n; ++j)
        for (std::size_t i = 0; i <= j; ++i)
            out.at(i, j) = -0.5 * (cum[j] - cum[i]);
    return out;
}

KernelField apply_K(const Potential& p, const KernelField& field)
{
    const TriangleGrid& grid = field.grid;
    const auto n = static_cast<std::ptrdiff_t>(grid.n);
    const std::vector<double> qd = diagonal_potential(p, grid);

    // partial[(i, b)] = trapezoid over xi1 in [0, xi_i] of q v along row eta_b
    std::vector<double> partial(field.v.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t sb = 0; sb <= n; ++sb) {
        const auto b = static_cast<std::size_t>(sb);
        const double* row = field.v.data() + grid.index(0, b);
        double* prow = partial.data() + grid.index(0, b);
        const double g0 = qd[b] * row[0];
        double running = 0.0;
        for (std::size_t i = 0; i <= b; ++i) {
            const double g = qd[b - i] * row[i];
            running += g;
            prow[i] = running - 0.5 * g0 - 0.5 * g;
        }
    }

    // trapezoid over eta1 in [eta_i, eta_j], accumulated down each xi-column
    KernelField out = empty_like(field);
    const double scale = 0.25 * grid.h * grid.h;
    const std::ptrdiff_t blocks = (n + 1 + static_cast<std::ptrdiff_t>(kColumnBlock) - 1) /
                                  static_cast<std::ptrdiff_t>(kColumnBlock);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
        const std::size_t i0 = static_cast<std::size_t>(blk) * kColumnBlock;
        const std::size_t i1 = std::min(grid.n + 1, i0 + kColumnBlock);
        double acc[kColumnBlock] = {};
        double diag[kColumnBlock] = {};
        for (std::size_t j = i0; j <= grid.n; ++j) {
            const double* prow = partial.data() + grid.index(0, j);
            double* orow = out.v.data() + grid.index(0, j);
            const std::size_t top = std::min(i1, j + 1);
            for (std::size_t i = i0; i < top; ++i) {
                const double pj = prow[i];
                if (i == j)
                    diag[i - i0] = pj;
                acc[i - i0] += pj;
                orow[i] = scale * (acc[i - i0] - 0.5 * diag[i - i0] - 0.5 * pj);
            }
        }
    }
    return out;
}

KernelField apply_K_reference(const Potential& p, const KernelField& field)
{
    const TriangleGrid& grid = field.grid;
    const std::vector<double> qd = diagonal_potential(p, grid);
    KernelField out = empty_like(field);
    const double scale = 0.25 * grid.h * grid.h;
    for (std::size_t j = 0; j <= grid.n; ++j) {
        for (std::size_t i = 1; i < j; ++i) {
            double sum = 0.0;
            for (std::size_t a = 0; a <= i; ++a) {
                const double wa = (a == 0 || a == i) ? 0.5 : 1.0;
                for (std::size_t b = i; b <= j; ++b) {
                    const double wb = (b == i || b == j) ? 0.5 : 1.0;
                    sum += wa * wb * qd[b - a] * field.at(a, b);
                }
            }
            out.at(i, j) = scale * sum;
        }
    }
    return out;
}

KernelField neumann_solve(const Potential& p, const TriangleGrid& grid,
                          const NeumannOptions& options)
{
    if (!(options.tol > 0.0))
        throw InvalidArgument("Neumann tolerance must be > 0");
    if (options.max_terms < 1)
        throw InvalidArgument("max_terms must be >= 1");

    KernelField term = build_Q(p, grid);
    KernelField sum = term;
    double last = term.max_abs();
    if (options.on_term)
        options.on_term(0, term);

    int n = 0;
    while (last > options.tol) {
        if (n == options.max_terms)
            throw NoConvergence("Neumann series did not converge: term " + std::to_string(n) +
                                    " has max " + std::to_string(last) + " > tol",
                                n, last);
        term = apply_K(p, term);
        ++n;
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t k = 0; k < sum.v.size(); ++k)
            sum.v[k] += sign * term.v[k];
        last = term.max_abs();
        if (options.on_term)
            options.on_term(n, term);
    }
    sum.terms_used = n;
    sum.last_term_max = last;
    return sum;
}

double eval_w(const KernelField& field, double x, double t)
{
    const TriangleGrid& grid = field.grid;
    const double slack = 1e-12 * std::max(1.0, grid.eta_max);
    if (x < -slack || t < -slack)
        throw DomainError("eval_w: negative coordinate");
    if (x > t + slack)
        return 0.0;
    if (t + x > grid.eta_max + slack)
        throw DomainError("eval_w: t + x = " + std::to_string(t + x) + " exceeds eta_max = " +
                          std::to_string(grid.eta_max));

    const double fi = std::max(0.0, t - x) / grid.h;
    const double fj = std::min(grid.eta_max, t + x) / grid.h;
    const auto last = static_cast<double>(grid.n - 1);
    const double bi = std::min(std::floor(fi), last);
    const double bj = std::min(std::floor(fj), last);
    const double si = std::clamp(fi - bi, 0.0, 1.0);
    const double sj = std::clamp(fj - bj, 0.0, 1.0);
    const auto i = static_cast<std::size_t>(bi);
    const auto j = static_cast<std::size_t>(bj);

    // corners past the diagonal use the odd extension w(-x, t) = -w(x, t)
    auto node = [&](std::size_t a, std::size_t b) { return a <= b ? field.at(a, b) : -field.at(b, a); };
    return (1.0 - si) * (1.0 - sj) * node(i, j) + si * (1.0 - sj) * node(i + 1, j) +
           (1.0 - si) * sj * node(i, j + 1) + si * sj * node(i + 1, j + 1);
}

double term_bound(int n, double xi, double eta, double q_tilde_norm)
{
    if (n < 0 || xi < 0.0 || eta < xi || q_tilde_norm < 0.0)
        throw InvalidArgument("term_bound: need n >= 0, 0 <= xi <= eta, norm >= 0");
    if (q_tilde_norm == 0.0 || (n > 0 && xi == 0.0))
        return 0.0;
    const double dn = static_cast<double>(n);
    double log_bound = (dn + 1.0) * std::log(q_tilde_norm / 4.0);
    if (n > 0)
        log_bound += dn * std::log(xi);
    log_bound += (dn + 1.0) * std::log(eta + dn + 1.0);
    log_bound -= std::lgamma(dn + 1.0) + std::lgamma(dn + 2.0);
    return std::exp(log_bound);
}

} // namespace weyldyn
