#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hypball/geometry.hpp"

namespace hypball {

/// Exponent vector of a monomial z^a = z_1^{a_1} ... z_n^{a_n}.
struct MultiIndex {
    std::vector<int> exponents;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> e);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(exponents.size()); }
    [[nodiscard]] int degree() const noexcept;
    /// a! = prod a_i!
    [[nodiscard]] double factorial() const;

    auto operator<=>(const MultiIndex&) const = default;
};

/// Sparse polynomial in n complex variables with complex coefficients.
class Polynomial {
public:
    explicit Polynomial(int n);

    static Polynomial constant(int n, Complex c);
    /// The coordinate function z_i (0-based i).
    static Polynomial coordinate(int n, int i);

    /// Adds c to the coefficient of z^a.
    Polynomial& add_term(const MultiIndex& a, Complex c);

    [[nodiscard]] int dim() const noexcept { return n_; }
    [[nodiscard]] const std::map<MultiIndex, Complex>& terms() const noexcept { return terms_; }
    [[nodiscard]] int degree() const noexcept;
    /// sum |c_a|; bounds |f| on the closed ball.
    [[nodiscard]] double coefficient_l1() const noexcept;
    [[nodiscard]] bool is_zero() const noexcept;

    [[nodiscard]] Complex operator()(std::span<const Complex> z) const;
    [[nodiscard]] Complex operator()(const BallPoint& z) const { return (*this)(z.coords()); }

    /// Exact partial derivatives d f / d z_i, i = 0..n-1.
    [[nodiscard]] std::vector<Polynomial> partials() const;

    /// Coefficients g_d of f(r zeta) = sum_d g_d r^d for a unit direction zeta.
    [[nodiscard]] CVector radial_coefficients(std::span<const Complex> zeta) const;

    [[nodiscard]] Polynomial operator*(const Polynomial& other) const;
    [[nodiscard]] Polynomial scaled(Complex s) const;
    /// f(lambda z).
    [[nodiscard]] Polynomial dilated(double lambda) const;

    bool operator==(const Polynomial&) const = default;

private:
    int n_;
    std::map<MultiIndex, Complex> terms_;
};

namespace holo {

Complex evaluate(const Polynomial& f, const BallPoint& z);
std::vector<Polynomial> complex_partials(const Polynomial& f);

/// Parses / writes the polynomial file format {n, terms: [{exponents, re, im}]}.
Polynomial polynomial_from_json(const std::string& text);
std::string polynomial_to_json(const Polynomial& f);
Polynomial read_polynomial(const std::string& path);
void write_polynomial(const Polynomial& f, const std::string& path);

}  // namespace holo

/// u(z) = |f(z)|^a (1 - |z|^2)^b with a, b > 0.
class LevelFunction {
public:
    LevelFunction(Polynomial f, double a, double b);

    [[nodiscard]] const Polynomial& poly() const noexcept { return f_; }
    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] int dim() const noexcept { return f_.dim(); }

    [[nodiscard]] double operator()(const BallPoint& z) const;
    /// du/dz_i; falls back to finite differences where f vanishes.
    [[nodiscard]] CVector complex_gradient(const BallPoint& z) const;
    [[nodiscard]] double gradient_norm(const BallPoint& z) const;
    /// True when |f(z)| is below the zero-detection threshold.
    [[nodiscard]] bool near_zero(Complex fz) const noexcept;

    /// Restriction to the ray rho -> tanh(rho) zeta, parametrized by geodesic radius.
    class Ray {
    public:
        Ray(const LevelFunction& u, std::span<const Complex> zeta);
        [[nodiscard]] double value(double rho) const;
        /// du/drho.
        [[nodiscard]] double derivative(double rho) const;

    private:
        CVector coeffs_;
        double a_, b_;
    };

    [[nodiscard]] Ray ray(std::span<const Complex> zeta) const { return Ray(*this, zeta); }

private:
    Polynomial f_;
    std::vector<Polynomial> partials_;
    double a_, b_;
    double zero_tol_;
};

namespace holo {

ScalarField level_function_field(const LevelFunction& u);

/// Global maximum t0 = max u with its location.
struct LevelMaximum {
    double value = 0.0;
    CVector argmax;
};

/// Multi-start coordinate-wise golden-section ascent from 256 low-discrepancy starts.
LevelMaximum level_maximum(const LevelFunction& u, int starts = 256, double tol = 1e-10);

/// Deterministic families of test polynomials.
struct FamilySpec {
    std::string name;  // constants | coordinates | random_poly | dilates
    int n = 1;
    int degree = 2;
    int count = 1;
    double lambda = 0.5;  // dilation factor for `dilates`
    std::uint64_t seed = 42;
};

std::vector<Polynomial> test_family(const FamilySpec& spec);

}  // namespace holo
}  // namespace hypball
