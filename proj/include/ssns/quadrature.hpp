#pragma once

#include <span>
#include <vector>

namespace ssns {

/// Composite Gauss-Legendre rule on panels graded toward the right endpoint.
struct QuadratureRule {
    int nodes_per_panel = 4;
    double grading_exponent = 2.0;
    int panels = 8;

    /// Throws DomainError on nodes_per_panel < 2, grading_exponent < 1 or panels < 1.
    void validate() const;
    QuadratureRule refined() const { return {nodes_per_panel, grading_exponent, 2 * panels}; }
};

struct QuadratureNodes {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
QuadratureNodes gauss_legendre(int n);

/// Nodes on [a, b]. Panel breakpoints are b - (b - a) (1 - i/P)^g, so panels shrink
/// toward b where the Duhamel kernel concentrates.
QuadratureNodes graded_nodes(const QuadratureRule& rule, double a, double b);
/// Same, with every point of `extra_breaks` inside (a, b) added as a panel boundary, so
/// that integrands with kinks there keep the full Gauss order on each panel.
QuadratureNodes graded_nodes(const QuadratureRule& rule, double a, double b, std::span<const double> extra_breaks);

}  // namespace ssns
