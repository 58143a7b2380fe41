#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace weyldyn {

enum class PotentialKind { zero, constant_box, exponential, sech2, bump_train, sampled };

std::string_view to_string(PotentialKind kind);
PotentialKind parse_potential_kind(std::string_view name);

/// Real potential q on the half-line.
///
/// Catalog kinds and their parameter lists:
///   zero          {}
///   constant_box  {c, L}       q = c on [0, L], 0 beyond
///   exponential   {c, a}       q = c exp(-a x), a > 0
///   sech2         {kappa, x0}  q = -2 kappa^2 sech^2(kappa (x - x0))
///   bump_train    {c, d}       q = c on [n, n + d) for every integer n >= 0
///   sampled       piecewise-linear interpolant of (x, q) rows
///
/// At a jump discontinuity the value is the mean of the one-sided limits.
/// Beyond x_max the potential is exactly zero; bump_train has x_max = +inf.
/// Immutable after construction.
class Potential {
public:
    Potential();

    double operator()(double x) const;
    /// Limit from the right (side > 0) or left (side < 0); equals operator() away from jumps.
    double one_sided(double x, int side) const;

    PotentialKind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    double x_max() const { return x_max_; }
    bool compact() const;

    /// Points in (a, b) where q or its derivative may jump, ascending.
    std::vector<double> breakpoints(double a, double b) const;

    /// Closed-form |q| mass on [x_max, inf) for analytically truncated kinds.
    double tail_mass() const { return tail_mass_; }

    const std::vector<double>& sample_x() const { return xs_; }
    const std::vector<double>& sample_q() const { return qs_; }

    friend Potential make_catalog_potential(PotentialKind kind, std::vector<double> params);
    friend Potential load_sampled_potential(std::span<const std::pair<double, double>> rows);

private:
    PotentialKind kind_;
    std::vector<double> params_;
    double x_max_ = 0.0;
    double tail_mass_ = 0.0;
    std::vector<double> xs_;
    std::vector<double> qs_;
};

Potential make_catalog_potential(PotentialKind kind, std::vector<double> params);
Potential load_sampled_potential(std::span<const std::pair<double, double>> rows);

/// Parses the two-column "x q" text format ('#' starts a comment).
Potential read_potential_file(const std::string& path);
Potential parse_potential_text(std::string_view text);

struct PotentialNorms {
    /// Integral of |q| over [0, inf); empty when the potential is not integrable.
    std::optional<double> l1;
    /// sup_x of the |q| mass in [x, x + 1].
    double windowed = 0.0;
    /// Windowed norm of q~(g) = q(g / 2), i.e. 2 sup_x of the |q| mass in [x, x + 1/2].
    double windowed_scaled = 0.0;

    bool l1_finite() const { return l1.has_value(); }
};

PotentialNorms compute_norms(const Potential& p, double window_grid_step = 1e-3);

/// Cumulative integral of q on the uniform grid [0, step * (count - 1)]. Trapezoid rule per cell
/// with one-sided limits at the cell ends, exact for piecewise-constant q with jumps on nodes.
std::vector<double> cumulative_trapezoid(const Potential& p, double step, std::size_t count);
/// Same for |q|.
std::vector<double> cumulative_abs_trapezoid(const Potential& p, double step, std::size_t count);

} // namespace weyldyn
