#include "weyldyn/bounds.hpp"

#include "weyldyn/errors.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace weyldyn {

namespace {

constexpr double kHerglotzFloor = -1e-10;

double abs_mass(const Potential& p, double upto)
{
    if (upto <= 0.0)
        return 0.0;
    auto abs_q = [&p](double x) { return std::abs(p(x)); };
    std::vector<double> cuts{0.0};
    for (double b : p.breakpoints(0.0, upto))
        cuts.push_back(b);
    cuts.push_back(upto);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(abs_q, cuts[i],
                                                                               cuts[i + 1], 15, 1e-14);
    return total;
}

// Shared node loop: value(i, j) and bound(i, j) over every node of the triangle.
template <class Bound>
BoundReport scan_field(std::string check, const KernelField& field, Bound&& bound, int term = -1)
{
    BoundReport report;
    report.check = std::move(check);
    const TriangleGrid& grid = field.grid;
    for (std::size_t j = 0; j <= grid.n; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            const double value = std::abs(field.at(i, j));
            const double b = bound(i, j);
            ++report.nodes_tested;
            if (value == 0.0)
                continue;
            const double ratio = b > 0.0 ? value / b : std::numeric_limits<double>::infinity();
            report.max_ratio = std::max(report.max_ratio, ratio);
            if (value > b * (1.0 + kBoundSlack)) {
                // cap the list; the count still shows in max_ratio
                if (report.violations.size() < 32)
                    report.violations.push_back({grid.h * static_cast<double>(i),
                                                 grid.h * static_cast<double>(j), value, b, term});
            }
        }
    }
    return report;
}

} // namespace

double gursa_bound_from_mass(double mass, double x, double s)
{
    return 0.5 * mass * std::exp(0.25 * (s - x) * mass);
}

double gursa_bound(const Potential& p, double x, double s)
{
    if (x < 0.0 || s < x)
        throw InvalidArgument("gursa_bound needs 0 <= x <= s");
    return gursa_bound_from_mass(abs_mass(p, 0.5 * (s + x)), x, s);
}

double w_bound_l1(const PotentialNorms& norms, double x, double t)
{
    if (!norms.l1_finite())
        throw InvalidArgument("w_bound_l1: potential is not in L1, use w_bound_window");
    const double l1 = *norms.l1;
    return 0.5 * l1 * std::exp(0.25 * l1 * (t - x));
}

double w_bound_window(const PotentialNorms& norms, double x, double t, double kappa)
{
    if (!(kappa > 0.0))
        throw InvalidArgument("w_bound_window needs kappa > 0");
    const double qt = norms.windowed_scaled;
    if (qt == 0.0)
        return 0.0;
    const double e = boost::math::constants::e<double>();
    const double root_two_pi = boost::math::constants::root_two_pi<double>();
    const double first = 0.25 * qt * (x + t) * std::exp(0.5 * (t - x) * qt * kappa + (t + x) / kappa);
    const double second = qt * e / (4.0 * root_two_pi) * std::exp(0.5 * (t - x) * e * qt);
    return first + second;
}

double StepFunction::operator()(double x) const
{
    if (edges.size() < 2 || x < edges.front() || x >= edges.back())
        return 0.0;
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    return heights[static_cast<std::size_t>(it - edges.begin()) - 1];
}

namespace {

void validate(const StepFunction& f)
{
    if (f.edges.size() != f.heights.size() + 1)
        throw InvalidArgument("step function needs one more edge than heights");
    if (!f.edges.empty() && f.edges.front() < 0.0)
        throw InvalidArgument("step function must live on [0, inf)");
    for (std::size_t i = 1; i < f.edges.size(); ++i)
        if (!(f.edges[i] > f.edges[i - 1]))
            throw InvalidArgument("step function edges must be strictly increasing");
    for (double h : f.heights)
        if (!(h >= 0.0))
            throw InvalidArgument("moment_check: negative sample");
}

double mass_between(const StepFunction& f, double a, double b)
{
    double total = 0.0;
    for (std::size_t i = 0; i < f.heights.size(); ++i) {
        const double lo = std::max(a, f.edges[i]);
        const double hi = std::min(b, f.edges[i + 1]);
        if (hi > lo)
            total += f.heights[i] * (hi - lo);
    }
    return total;
}

} // namespace

double StepFunction::windowed_norm() const
{
    validate(*this);
    // the window mass is piecewise linear in the start point, kinks at e and e - 1
    double best = mass_between(*this, 0.0, 1.0);
    for (double e : edges) {
        best = std::max(best, mass_between(*this, e, e + 1.0));
        if (e - 1.0 >= 0.0)
            best = std::max(best, mass_between(*this, e - 1.0, e));
    }
    return best;
}

MomentSides moment_check(const StepFunction& f, double a, double b, int n)
{
    validate(f);
    if (a < 0.0 || b < 0.0 || n < 1)
        throw InvalidArgument("moment_check needs a, b >= 0 and n >= 1");
    const double np1 = static_cast<double>(n + 1);
    MomentSides sides;
    for (std::size_t i = 0; i < f.heights.size(); ++i) {
        const double lo = std::max(0.0, f.edges[i]);
        const double hi = std::min(a, f.edges[i + 1]);
        if (hi > lo)
            sides.lhs += f.heights[i] * (std::pow(hi + b, np1) - std::pow(lo + b, np1)) / np1;
    }
    sides.rhs = std::pow(a + b + 1.0, np1) / np1 * f.windowed_norm();
    return sides;
}

std::vector<HerglotzViolation> herglotz_check(std::span<const MValue> values)
{
    std::vector<HerglotzViolation> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const MValue& v = values[i];
        if (!(v.z.imag() > 0.0))
            throw InvalidArgument("herglotz_check: sample " + std::to_string(i) +
                                  " is not in the upper half-plane");
        if (v.m.imag() < kHerglotzFloor)
            out.push_back({i, v.z, v.m});
    }
    return out;
}

void BoundReport::merge(const BoundReport& other)
{
    nodes_tested += other.nodes_tested;
    max_ratio = std::max(max_ratio, other.max_ratio);
    for (const auto& v : other.violations)
        if (violations.size() < 32)
            violations.push_back(v);
}

void to_json(nlohmann::json& j, const BoundReport& report)
{
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : report.violations) {
        nlohmann::json item = {{"xi", v.xi}, {"eta", v.eta}, {"value", v.value}, {"bound", v.bound}};
        if (v.term >= 0)
            item["term"] = v.term;
        violations.push_back(std::move(item));
    }
    j = {{"check", report.check},
         {"nodes_tested", report.nodes_tested},
         {"max_ratio", report.max_ratio},
         {"violations", std::move(violations)}};
}

BoundReport check_gursa(const Potential& p, const KernelField& field)
{
    const TriangleGrid& grid = field.grid;
    const std::vector<double> mass = cumulative_abs_trapezoid(p, 0.5 * grid.h, grid.n + 1);
    return scan_field("gursa_est", field, [&](std::size_t i, std::size_t j) {
        const double xi = grid.h * static_cast<double>(i);
        const double eta = grid.h * static_cast<double>(j);
        return gursa_bound_from_mass(mass[j], 0.5 * (eta - xi), 0.5 * (eta + xi));
    });
}

BoundReport check_w_l1(const PotentialNorms& norms, const KernelField& field)
{
    const TriangleGrid& grid = field.grid;
    if (!norms.l1_finite())
        throw InvalidArgument("check_w_l1: potential is not in L1");
    return scan_field("w_est_l1", field, [&](std::size_t i, std::size_t j) {
        const double xi = grid.h * static_cast<double>(i);
        const double eta = grid.h * static_cast<double>(j);
        return w_bound_l1(norms, 0.5 * (eta - xi), 0.5 * (eta + xi));
    });
}

BoundReport check_w_window(const PotentialNorms& norms, const KernelField& field, double kappa)
{
    const TriangleGrid& grid = field.grid;
    return scan_field("w_est_window", field, [&](std::size_t i, std::size_t j) {
        const double xi = grid.h * static_cast<double>(i);
        const double eta = grid.h * static_cast<double>(j);
        return w_bound_window(norms, 0.5 * (eta - xi), 0.5 * (eta + xi), kappa);
    });
}

BoundReport check_term(int n, const KernelField& term, double q_tilde_norm)
{
    const TriangleGrid& grid = term.grid;
    return scan_field(
        "term_bound", term,
        [&](std::size_t i, std::size_t j) {
            return term_bound(n, grid.h * static_cast<double>(i), grid.h * static_cast<double>(j),
                              q_tilde_norm);
        },
        n);
}

} // namespace weyldyn
