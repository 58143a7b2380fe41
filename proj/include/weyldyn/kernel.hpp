#pragma once

#include "weyldyn/potential.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace weyldyn {

/// Uniform grid on the characteristic triangle {0 <= xi <= eta <= eta_max}.
/// Node (i, j) sits at (xi, eta) = (i h, j h) with 0 <= i <= j <= n.
struct TriangleGrid {
    double eta_max = 0.0;
    double h = 0.0;
    std::size_t n = 0;

    /// Validates that eta_max / h is a positive integer (to 1e-9 relative).
    static TriangleGrid make(double eta_max, double h);

    std::size_t node_count() const { return (n + 1) * (n + 2) / 2; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * (j + 1) / 2 + i; }
};

/// Goursat kernel in characteristic coordinates, v(xi, eta) = w((eta - xi)/2, (eta + xi)/2).
/// Values are stored row by row in eta.
struct KernelField {
    TriangleGrid grid;
    std::vector<double> v;
    int terms_used = 0;
    double last_term_max = 0.0;

    double at(std::size_t i, std::size_t j) const { return v[grid.index(i, j)]; }
    double& at(std::size_t i, std::size_t j) { return v[grid.index(i, j)]; }
    double max_abs() const;
};

/// Q(xi, eta) = -(1/2) * integral of q over [xi/2, eta/2], cumulative trapezoid at step h/2.
KernelField build_Q(const Potential& p, const TriangleGrid& grid);

/// (Kv)(xi, eta) = (1/4) int_0^xi dxi1 int_xi^eta deta1 q((eta1 - xi1)/2) v(xi1, eta1),
/// 2D trapezoid over the rectangle, evaluated with row prefix sums in O(n^2).
/// Parallel over eta-rows and xi-column blocks; results do not depend on the thread count.
KernelField apply_K(const Potential& p, const KernelField& field);

/// Direct node-by-node rectangle quadrature, O(n^4). Serial reference for tests and benchmarks.
KernelField apply_K_reference(const Potential& p, const KernelField& field);

struct NeumannOptions {
    double tol = 1e-12;
    int max_terms = 60;
    /// Called with (n, K^n Q) for every term that is summed, n = 0 included.
    std::function<void(int, const KernelField&)> on_term;
};

/// v = Q + sum_{n>=1} (-1)^n K^n Q, stopped at the first term with max-norm <= tol.
/// Throws NoConvergence when max_terms is reached first.
KernelField neumann_solve(const Potential& p, const TriangleGrid& grid,
                          const NeumannOptions& options = {});

/// w(x, t) by bilinear interpolation on the triangle; 0 for x > t.
/// Throws DomainError when t + x exceeds eta_max.
double eval_w(const KernelField& field, double x, double t);

/// Bound on |K^n Q|(xi, eta) from the induction estimate, evaluated in log space.
double term_bound(int n, double xi, double eta, double q_tilde_norm);

} // namespace weyldyn
