#include "ssns/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "ssns/errors.hpp"

namespace ssns {

void QuadratureRule::validate() const {
    if (nodes_per_panel < 2) throw DomainError("quadrature: nodes_per_panel must be >= 2");
    if (!(grading_exponent >= 1.0) || !std::isfinite(grading_exponent))
        throw DomainError("quadrature: grading_exponent must be >= 1");
    if (panels < 1) throw DomainError("quadrature: panels must be >= 1");
}

QuadratureNodes gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, QuadratureNodes> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    QuadratureNodes q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            // Recompute the derivative at the converged node.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    cache.emplace(n, q);
    return q;
}

QuadratureNodes graded_nodes(const QuadratureRule& rule, double a, double b) {
    return graded_nodes(rule, a, b, {});
}

QuadratureNodes graded_nodes(const QuadratureRule& rule, double a, double b, std::span<const double> extra_breaks) {
    rule.validate();
    const QuadratureNodes ref = gauss_legendre(rule.nodes_per_panel);
    std::vector<double> breaks;
    breaks.reserve(rule.panels + 1 + extra_breaks.size());
    for (int i = 0; i < rule.panels; ++i)
        breaks.push_back(b - (b - a) * std::pow(1.0 - double(i) / rule.panels, rule.grading_exponent));
    breaks.push_back(b);
    const double eps = 1e-12 * (b - a);
    for (double x : extra_breaks)
        if (x > a + eps && x < b - eps) breaks.push_back(x);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(), [&](double x, double y) { return y - x <= eps; }),
                 breaks.end());
    breaks.back() = b;

    QuadratureNodes out;
    out.nodes.reserve((breaks.size() - 1) * ref.nodes.size());
    out.weights.reserve(out.nodes.capacity());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double half = 0.5 * (breaks[i + 1] - breaks[i]), mid = 0.5 * (breaks[i + 1] + breaks[i]);
        for (std::size_t k = 0; k < ref.nodes.size(); ++k) {
            out.nodes.push_back(mid + half * ref.nodes[k]);
            out.weights.push_back(half * ref.weights[k]);
        }
    }
    return out;
}

}  // namespace ssns
