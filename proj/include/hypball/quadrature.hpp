#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hypball::quad {

/// Nodes and weights of an interpolatory rule.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }

    template <class F>
    double apply(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

/// Gauss-Legendre rule of the given order on [a, b]. Cached per order.
Rule gauss_legendre(int order, double a = -1.0, double b = 1.0);

/// Gauss-Jacobi rule on [0, 1] for the weight (1 - x)^a x^b, a, b > -1.
/// Weights sum to B(a + 1, b + 1).
Rule gauss_jacobi01(int order, double a, double b);

/// Result of an adaptive 1-D integration.
struct Result1D {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
};

/// Finite interval [a, b]; endpoint singularities allowed (tanh-sinh).
Result1D integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12);

/// Half line [a, inf) (exp-sinh); a = 0 splits at 1 to handle a singular origin.
Result1D integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol = 1e-12);

/// Composite Gauss-Legendre over the given breakpoints (sorted), `order` nodes per panel.
double composite_gauss(const std::function<double(double)>& f, std::span<const double> breaks, int order);

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson).
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double derivative(double x) const;
    [[nodiscard]] bool empty() const noexcept { return x_.empty(); }

private:
    [[nodiscard]] std::size_t segment(double x) const;

    std::vector<double> x_, y_, d_;
};

}  // namespace hypball::quad
