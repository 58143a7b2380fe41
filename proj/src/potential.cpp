#include "weyldyn/potential.hpp"

#include "weyldyn/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace weyldyn {

namespace {

constexpr double kTailMass = 1e-13; // neglected |q| mass beyond x_max, under the 1e-12 budget
constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance for deciding that x sits exactly on a jump.
double jump_eps(double x) { return 1e-10 * std::max(1.0, std::abs(x)); }

double sech2(double y)
{
    const double c = std::cosh(y);
    return 1.0 / (c * c);
}

// 5-point Gauss-Legendre on [a, b].
template <class F>
double gauss5(F&& f, double a, double b)
{
    static constexpr std::array<double, 5> nodes = {
        -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
    static constexpr std::array<double, 5> weights = {
        0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
        0.2369268850561891};
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
}

void require(bool ok, const std::string& msg)
{
    if (!ok)
        throw InvalidArgument(msg);
}

} // namespace

std::string_view to_string(PotentialKind kind)
{
    switch (kind) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::constant_box: return "constant_box";
    case PotentialKind::exponential: return "exponential";
    case PotentialKind::sech2: return "sech2";
    case PotentialKind::bump_train: return "bump_train";
    case PotentialKind::sampled: return "sampled";
    }
    return "unknown";
}

PotentialKind parse_potential_kind(std::string_view name)
{
    for (auto kind : {PotentialKind::zero, PotentialKind::constant_box, PotentialKind::exponential,
                      PotentialKind::sech2, PotentialKind::bump_train, PotentialKind::sampled}) {
        if (to_string(kind) == name)
            return kind;
    }
    throw InvalidArgument("unknown potential kind '" + std::string(name) + "'");
}

Potential::Potential() : kind_(PotentialKind::zero) {}

bool Potential::compact() const { return std::isfinite(x_max_); }

double Potential::operator()(double x) const
{
    if (x < 0.0 || x > x_max_ + jump_eps(x_max_))
        return 0.0;
    const double eps = jump_eps(x);
    switch (kind_) {
    case PotentialKind::zero:
        return 0.0;
    case PotentialKind::constant_box: {
        const double c = params_[0];
        const double len = params_[1];
        if (std::abs(x - len) <= eps)
            return 0.5 * c;
        return x < len ? c : 0.0;
    }
    case PotentialKind::exponential: {
        const double c = params_[0];
        const double a = params_[1];
        const double value = c * std::exp(-a * x);
        return std::abs(x - x_max_) <= eps ? 0.5 * value : value;
    }
    case PotentialKind::sech2: {
        const double kappa = params_[0];
        const double value = -2.0 * kappa * kappa * sech2(kappa * (x - params_[1]));
        return std::abs(x - x_max_) <= eps ? 0.5 * value : value;
    }
    case PotentialKind::bump_train: {
        const double c = params_[0];
        const double d = params_[1];
        const double cell = std::floor(x + eps);
        const double r = x - cell;
        if (std::abs(r) <= eps) {
            if (cell == 0.0 || d >= 1.0)
                return c;
            return 0.5 * c;
        }
        if (d < 1.0 && std::abs(r - d) <= eps)
            return 0.5 * c;
        return r < d ? c : 0.0;
    }
    case PotentialKind::sampled: {
        if (xs_.size() == 1)
            return x <= eps ? qs_[0] : 0.0;
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        if (it == xs_.end())
            return std::abs(x - xs_.back()) <= eps ? 0.5 * qs_.back() : 0.0;
        const auto hi = static_cast<std::size_t>(it - xs_.begin());
        const std::size_t lo = hi - 1;
        const double s = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
        return (1.0 - s) * qs_[lo] + s * qs_[hi];
    }
    }
    return 0.0;
}

std::vector<double> Potential::breakpoints(double a, double b) const
{
    std::vector<double> out;
    auto add = [&](double x) {
        if (x > a && x < b)
            out.push_back(x);
    };
    switch (kind_) {
    case PotentialKind::zero:
        break;
    case PotentialKind::constant_box:
        add(params_[1]);
        break;
    case PotentialKind::exponential:
    case PotentialKind::sech2:
        add(x_max_);
        break;
    case PotentialKind::bump_train: {
        const double d = params_[1];
        for (double n = std::max(0.0, std::floor(a)); n < b; n += 1.0) {
            add(n);
            if (d < 1.0)
                add(n + d);
        }
        break;
    }
    case PotentialKind::sampled: {
        auto first = std::upper_bound(xs_.begin(), xs_.end(), a);
        for (auto it = first; it != xs_.end() && *it < b; ++it)
            out.push_back(*it);
        break;
    }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Potential make_catalog_potential(PotentialKind kind, std::vector<double> params)
{
    Potential p;
    p.kind_ = kind;
    switch (kind) {
    case PotentialKind::zero:
        require(params.empty(), "zero potential takes no parameters");
        p.x_max_ = 0.0;
        break;
    case PotentialKind::constant_box:
        require(params.size() == 2, "constant_box needs {c, L}");
        require(std::isfinite(params[0]), "constant_box height must be finite");
        require(params[1] > 0.0 && std::isfinite(params[1]), "constant_box width must be > 0");
        p.x_max_ = params[1];
        break;
    case PotentialKind::exponential: {
        require(params.size() == 2, "exponential needs {c, a}");
        require(std::isfinite(params[0]), "exponential amplitude must be finite");
        require(params[1] > 0.0 && std::isfinite(params[1]), "exponential rate must be > 0");
        const double c = std::abs(params[0]);
        const double a = params[1];
        // mass of |c| e^{-a x} beyond X is |c| e^{-a X} / a
        p.x_max_ = c == 0.0 ? 0.0 : std::max(0.0, std::log(c / (a * kTailMass)) / a);
        p.tail_mass_ = c * std::exp(-a * p.x_max_) / a;
        break;
    }
    case PotentialKind::sech2: {
        require(params.size() == 2, "sech2 needs {kappa, x0}");
        require(params[0] > 0.0 && std::isfinite(params[0]), "sech2 kappa must be > 0");
        require(std::isfinite(params[1]), "sech2 centre must be finite");
        const double kappa = params[0];
        const double x0 = params[1];
        // mass beyond X is 2 kappa (1 - tanh(kappa (X - x0))) ~ 4 kappa e^{-2 kappa (X - x0)}
        const double y = 0.5 * std::log(4.0 * kappa / kTailMass);
        p.x_max_ = std::max(0.0, x0 + y / kappa);
        p.tail_mass_ = 2.0 * kappa * (1.0 - std::tanh(kappa * (p.x_max_ - x0)));
        break;
    }
    case PotentialKind::bump_train:
        require(params.size() == 2, "bump_train needs {c, d}");
        require(std::isfinite(params[0]), "bump_train height must be finite");
        require(params[1] > 0.0 && params[1] <= 1.0, "bump_train duty must satisfy 0 < d <= 1");
        p.x_max_ = kInf;
        break;
    case PotentialKind::sampled:
        throw InvalidArgument("sampled potentials are built with load_sampled_potential");
    }
    p.params_ = std::move(params);
    return p;
}

Potential load_sampled_potential(std::span<const std::pair<double, double>> rows)
{
    require(!rows.empty(), "sampled potential: empty input");
    require(rows.front().first == 0.0, "sampled potential: abscissae must start at 0");
    Potential p;
    p.kind_ = PotentialKind::sampled;
    p.xs_.reserve(rows.size());
    p.qs_.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto [x, q] = rows[i];
        require(std::isfinite(x) && std::isfinite(q), "sampled potential: non-finite value");
        if (i > 0 && !(x > rows[i - 1].first))
            throw InvalidArgument("sampled potential: abscissae not strictly increasing at row " +
                                  std::to_string(i + 1));
        p.xs_.push_back(x);
        p.qs_.push_back(q);
    }
    p.x_max_ = p.xs_.back();
    return p;
}

Potential parse_potential_text(std::string_view text)
{
    std::vector<std::pair<double, double>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream fields(line);
        double x = 0.0;
        double q = 0.0;
        if (!(fields >> x)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw InvalidArgument("potential file line " + std::to_string(lineno) +
                                      ": expected two numbers");
            continue;
        }
        std::string extra;
        if (!(fields >> q) || (fields >> extra))
            throw InvalidArgument("potential file line " + std::to_string(lineno) +
                                  ": expected two numbers");
        rows.emplace_back(x, q);
    }
    return load_sampled_potential(rows);
}

Potential read_potential_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open potential file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_potential_text(buf.str());
}

double Potential::one_sided(double x, int side) const
{
    const double eps = jump_eps(x);
    if (breakpoints(x - 2.0 * eps, x + 2.0 * eps).empty())
        return (*this)(x);
    return (*this)(x + (side < 0 ? -10.0 : 10.0) * eps);
}

namespace {

// per-cell trapezoid with one-sided limits at the cell ends, so jumps on nodes cost nothing
std::vector<double> cumulative(const Potential& p, double step, std::size_t count, bool absolute)
{
    auto value = [&](double x, int side) {
        const double q = p.one_sided(x, side);
        return absolute ? std::abs(q) : q;
    };
    std::vector<double> out(count, 0.0);
    for (std::size_t m = 1; m < count; ++m) {
        const double a = step * static_cast<double>(m - 1);
        const double b = step * static_cast<double>(m);
        out[m] = out[m - 1] + 0.5 * step * (value(a, +1) + value(b, -1));
    }
    return out;
}

} // namespace

std::vector<double> cumulative_trapezoid(const Potential& p, double step, std::size_t count)
{
    return cumulative(p, step, count, false);
}

std::vector<double> cumulative_abs_trapezoid(const Potential& p, double step, std::size_t count)
{
    return cumulative(p, step, count, true);
}

PotentialNorms compute_norms(const Potential& p, double window_grid_step)
{
    if (!(window_grid_step > 0.0))
        throw InvalidArgument("window_grid_step must be > 0");
    PotentialNorms norms;
    auto abs_q = [&p](double x) { return std::abs(p(x)); };

    if (p.kind() == PotentialKind::zero) {
        norms.l1 = 0.0;
        return norms;
    }

    // l1: adaptive Gauss-Kronrod between breakpoints, plus the analytic tail
    if (p.compact()) {
        std::vector<double> cuts{0.0};
        for (double b : p.breakpoints(0.0, p.x_max()))
            cuts.push_back(b);
        cuts.push_back(p.x_max());
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (cuts[i + 1] > cuts[i])
                total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                    abs_q, cuts[i], cuts[i + 1], 15, 1e-14);
        }
        norms.l1 = total + p.tail_mass();
    } else if (p.params()[0] == 0.0) {
        norms.l1 = 0.0;
    }

    // windowed norms: cumulative cell table at a step that divides 1/2
    double base = window_grid_step;
    if (p.kind() == PotentialKind::sampled && p.sample_x().size() > 1) {
        const auto& xs = p.sample_x();
        double spacing = kInf;
        for (std::size_t i = 1; i < xs.size(); ++i)
            spacing = std::min(spacing, xs[i] - xs[i - 1]);
        base = std::min(base, spacing);
    }
    const double target = base / 4.0;
    const auto half_cells = static_cast<std::size_t>(std::ceil(0.5 / target));
    const double delta = 0.5 / static_cast<double>(half_cells);
    const std::size_t unit_cells = 2 * half_cells;

    // window starts sweep [0, span]; periodic kinds need one period only
    const double span = p.compact() ? p.x_max() : 1.0;
    const auto start_cells = static_cast<std::size_t>(std::ceil(span / delta));
    const std::size_t total_cells = start_cells + unit_cells;
    const double table_end = delta * static_cast<double>(total_cells);

    std::vector<double> breaks = p.breakpoints(0.0, table_end);
    std::vector<double> mass(total_cells + 1, 0.0);
    std::size_t bi = 0;
    for (std::size_t m = 0; m < total_cells; ++m) {
        const double a = delta * static_cast<double>(m);
        const double b = delta * static_cast<double>(m + 1);
        while (bi < breaks.size() && breaks[bi] <= a)
            ++bi;
        double left = a;
        double cell = 0.0;
        for (std::size_t k = bi; k < breaks.size() && breaks[k] < b; ++k) {
            cell += gauss5(abs_q, left, breaks[k]);
            left = breaks[k];
        }
        cell += gauss5(abs_q, left, b);
        mass[m + 1] = mass[m] + cell;
    }

    double unit = 0.0;
    double half = 0.0;
    for (std::size_t m = 0; m <= start_cells; ++m) {
        unit = std::max(unit, mass[m + unit_cells] - mass[m]);
        half = std::max(half, mass[m + half_cells] - mass[m]);
    }
    norms.windowed = unit;
    norms.windowed_scaled = 2.0 * half;
    return norms;
}

} // namespace weyldyn
