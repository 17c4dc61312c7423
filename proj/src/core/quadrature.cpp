#include "quadrature.hpp"

namespace sqdyn {

QuadratureRule gauss_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

QuadratureRule gauss_chebyshev2(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 1; i <= n; ++i) {
        const double theta = i * M_PI / (n + 1.0);
        rule.nodes[i - 1] = std::cos(theta);
        rule.weights[i - 1] = M_PI / (n + 1.0) * std::sin(theta) * std::sin(theta);
    }
    return rule;
}

QuadratureRule gauss_chebyshev1(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 1; i <= n; ++i) {
        rule.nodes[i - 1] = std::cos((2.0 * i - 1.0) * M_PI / (2.0 * n));
        rule.weights[i - 1] = M_PI / n;
    }
    return rule;
}

} // namespace sqdyn
