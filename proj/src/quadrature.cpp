#include "hypball/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace hypball::quad {

namespace {

Rule legendre_reference(int order) {
    Rule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        // Tricomi initial guess, then Newton on P_order.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[order - 1 - i] = x;
        rule.weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace

Rule gauss_legendre(int order, double a, double b) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    static std::mutex mutex;
    static std::map<int, Rule> cache;
    Rule ref;
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(order);
        if (it == cache.end()) it = cache.emplace(order, legendre_reference(order)).first;
        ref = it->second;
    }
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        ref.nodes[i] = mid + half * ref.nodes[i];
        ref.weights[i] *= half;
    }
    return ref;
}

Rule gauss_jacobi01(int order, double a, double b) {
    if (order < 1) throw std::invalid_argument("gauss_jacobi01: order must be positive");
    if (!(a > -1.0) || !(b > -1.0)) throw std::domain_error("gauss_jacobi01: exponents must exceed -1");
    // Golub-Welsch on [-1, 1] for (1 - y)^a (1 + y)^b, then x = (1 + y) / 2.
    Eigen::VectorXd diag(order);
    Eigen::VectorXd sub(std::max(order - 1, 1));
    const double ab = a + b;
    for (int k = 0; k < order; ++k) {
        const double denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        diag(k) = (k == 0 && std::abs(ab + 2.0) > 0.0) ? (b - a) / (ab + 2.0)
                                                       : (b * b - a * a) / (denom == 0.0 ? 1.0 : denom);
        if (k + 1 < order) {
            const double k1 = k + 1.0;
            const double s = 2.0 * k1 + ab;
            sub(k) = std::sqrt(4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + ab) / (s * s * (s + 1.0) * (s - 1.0)));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(std::max(order - 1, 0)), Eigen::ComputeEigenvectors);
    const double mass = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                                 std::lgamma(ab + 2.0));
    Rule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int k = 0; k < order; ++k) {
        const double v0 = solver.eigenvectors()(0, k);
        rule.nodes[k] = 0.5 * (1.0 + solver.eigenvalues()(k));
        // Scale from [-1, 1] measure to [0, 1]: factor 2^{-(a+b+1)}.
        rule.weights[k] = mass * v0 * v0 * std::exp(-(ab + 1.0) * std::log(2.0));
    }
    return rule;
}

Result1D integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (!(b > a)) return {};
    boost::math::quadrature::tanh_sinh<double> integrator(15);
    double error = 0.0;
    double l1 = 0.0;
    const double value = integrator.integrate(f, a, b, rel_tol, &error, &l1);
    return {value, error * std::max(l1, std::abs(value))};
}

Result1D integrate_to_infinity(const std::function<double(double)>& f, double a, double rel_tol) {
    boost::math::quadrature::exp_sinh<double> tail(12);
    if (a > 0.0) {
        double error = 0.0;
        double l1 = 0.0;
        const double value = tail.integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol, &error, &l1);
        return {value, error * std::max(l1, std::abs(value))};
    }
    const Result1D head = integrate(f, a, a + 1.0, rel_tol);
    double error = 0.0;
    double l1 = 0.0;
    const double value =
        tail.integrate(f, a + 1.0, std::numeric_limits<double>::infinity(), rel_tol, &error, &l1);
    return {head.value + value, head.error + error * std::max(l1, std::abs(value))};
}

double composite_gauss(const std::function<double(double)>& f, std::span<const double> breaks, int order) {
    const Rule ref = gauss_legendre(order);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double half = 0.5 * (breaks[i + 1] - breaks[i]);
        const double mid = 0.5 * (breaks[i + 1] + breaks[i]);
        if (half <= 0.0) continue;
        for (std::size_t k = 0; k < ref.size(); ++k) acc += half * ref.weights[k] * f(mid + half * ref.nodes[k]);
    }
    return acc;
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t m = x_.size();
    if (m != y_.size() || m < 2) throw std::invalid_argument("Pchip: need at least two matching points");
    std::vector<double> h(m - 1), delta(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        h[i] = x_[i + 1] - x_[i];
        if (!(h[i] > 0.0)) throw std::invalid_argument("Pchip: abscissae must increase");
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(m, 0.0);
    if (m == 2) {
        d_[0] = d_[1] = delta[0];
        return;
    }
    for (std::size_t i = 1; i + 1 < m; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) continue;
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    const auto endpoint = [](double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0) d = 0.0;
        else if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) d = 3.0 * d0;
        return d;
    };
    d_[0] = endpoint(h[0], h[1], delta[0], delta[1]);
    d_[m - 1] = endpoint(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
}

std::size_t Pchip::segment(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t idx = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(idx, x_.size() - 2);
}

double Pchip::operator()(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * d_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
           (t3 - t2) * h * d_[i + 1];
}

double Pchip::derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y_[i] + (-6 * t2 + 6 * t) * y_[i + 1]) / h + (3 * t2 - 4 * t + 1) * d_[i] +
           (3 * t2 - 2 * t) * d_[i + 1];
}

}  // namespace hypball::quad
