#pragma once

#include "weyldyn/kernel.hpp"
#include "weyldyn/mvalue.hpp"
#include "weyldyn/potential.hpp"

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace weyldyn {

/// Goursat estimate for |w(x, s)| given the mass m = int_0^{(s+x)/2} |q|.
double gursa_bound_from_mass(double mass, double x, double s);

/// Goursat estimate with the |q| mass computed by adaptive quadrature.
double gursa_bound(const Potential& p, double x, double s);

/// (1/2) ||q||_1 exp(||q||_1 (t - x) / 4). Throws InvalidArgument when l1 is infinite.
double w_bound_l1(const PotentialNorms& norms, double x, double t);

/// Windowed-class kernel bound with free parameter kappa > 0.
double w_bound_window(const PotentialNorms& norms, double x, double t, double kappa);

/// Non-negative step function: heights[i] on [edges[i], edges[i+1]), zero elsewhere.
struct StepFunction {
    std::vector<double> edges;
    std::vector<double> heights;

    double operator()(double x) const;
    /// sup over x >= 0 of the mass in [x, x + 1], exact (windows pinned to edges).
    double windowed_norm() const;
};

struct MomentSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// lhs = int_0^a (x + b)^n f(x) dx (closed form per step), rhs = (a + b + 1)^{n+1} / (n + 1) ||f||.
MomentSides moment_check(const StepFunction& f, double a, double b, int n);

struct HerglotzViolation {
    std::size_t index = 0;
    complex z;
    complex m;
};

/// Samples with Im m < -1e-10. Throws InvalidArgument if some sample has Im z <= 0.
std::vector<HerglotzViolation> herglotz_check(std::span<const MValue> values);

/// Result of checking a computed field against one of the pointwise bounds.
struct BoundReport {
    std::string check;
    std::size_t nodes_tested = 0;
    double max_ratio = 0.0;
    struct Violation {
        double xi = 0.0;
        double eta = 0.0;
        double value = 0.0;
        double bound = 0.0;
        int term = -1;
    };
    std::vector<Violation> violations;

    bool passed() const { return violations.empty(); }
    void merge(const BoundReport& other);
};

void to_json(nlohmann::json& j, const BoundReport& report);

/// Relative slack used by every bound assertion.
inline constexpr double kBoundSlack = 1e-6;

/// |w| <= gursa bound at every node; the |q| mass comes from the trapezoid table at step h/2.
BoundReport check_gursa(const Potential& p, const KernelField& field);
BoundReport check_w_l1(const PotentialNorms& norms, const KernelField& field);
BoundReport check_w_window(const PotentialNorms& norms, const KernelField& field, double kappa);
/// Node-wise |K^n Q| <= term_bound(n, ...) for one Neumann term.
BoundReport check_term(int n, const KernelField& term, double q_tilde_norm);

} // namespace weyldyn
