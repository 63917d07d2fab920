#include "hypball/holo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hypball/rng.hpp"

namespace hypball {

MultiIndex::MultiIndex(std::vector<int> e) : exponents(std::move(e)) {
    for (int x : exponents)
        if (x < 0) throw std::invalid_argument("MultiIndex: exponents must be nonnegative");
}

int MultiIndex::degree() const noexcept {
    int d = 0;
    for (int x : exponents) d += x;
    return d;
}

double MultiIndex::factorial() const {
    double acc = 1.0;
    for (int x : exponents) acc *= std::tgamma(x + 1.0);
    return acc;
}

Polynomial::Polynomial(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("Polynomial: dimension must be >= 1");
}

Polynomial Polynomial::constant(int n, Complex c) {
    Polynomial p(n);
    p.add_term(MultiIndex(std::vector<int>(n, 0)), c);
    return p;
}

Polynomial Polynomial::coordinate(int n, int i) {
    if (i < 0 || i >= n) throw std::out_of_range("Polynomial::coordinate: index out of range");
    std::vector<int> e(n, 0);
    e[i] = 1;
    Polynomial p(n);
    p.add_term(MultiIndex(std::move(e)), 1.0);
    return p;
}

Polynomial& Polynomial::add_term(const MultiIndex& a, Complex c) {
    if (a.dim() != n_) throw std::invalid_argument("Polynomial::add_term: dimension mismatch");
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (!inserted) it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
    return *this;
}

int Polynomial::degree() const noexcept {
    int d = 0;
    for (const auto& [a, c] : terms_) d = std::max(d, a.degree());
    return d;
}

double Polynomial::coefficient_l1() const noexcept {
    double s = 0.0;
    for (const auto& [a, c] : terms_) s += std::abs(c);
    return s;
}

bool Polynomial::is_zero() const noexcept { return terms_.empty(); }

Complex Polynomial::operator()(std::span<const Complex> z) const {
    if (static_cast<int>(z.size()) != n_) throw std::invalid_argument("Polynomial: dimension mismatch in evaluation");
    Complex acc{};
    for (const auto& [a, c] : terms_) {
        Complex m = c;
        for (int i = 0; i < n_; ++i) {
            for (int k = 0; k < a.exponents[i]; ++k) m *= z[i];
        }
        acc += m;
    }
    return acc;
}

std::vector<Polynomial> Polynomial::partials() const {
    std::vector<Polynomial> out(n_, Polynomial(n_));
    for (const auto& [a, c] : terms_) {
        for (int i = 0; i < n_; ++i) {
            if (a.exponents[i] == 0) continue;
            MultiIndex d = a;
            d.exponents[i] -= 1;
            out[i].add_term(d, c * static_cast<double>(a.exponents[i]));
        }
    }
    return out;
}

CVector Polynomial::radial_coefficients(std::span<const Complex> zeta) const {
    CVector g(static_cast<std::size_t>(degree()) + 1, Complex{});
    for (const auto& [a, c] : terms_) {
        Complex m = c;
        for (int i = 0; i < n_; ++i) {
            for (int k = 0; k < a.exponents[i]; ++k) m *= zeta[i];
        }
        g[a.degree()] += m;
    }
    return g;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    if (other.n_ != n_) throw std::invalid_argument("Polynomial product: dimension mismatch");
    Polynomial out(n_);
    for (const auto& [a, c] : terms_) {
        for (const auto& [b, d] : other.terms_) {
            MultiIndex s = a;
            for (int i = 0; i < n_; ++i) s.exponents[i] += b.exponents[i];
            out.add_term(s, c * d);
        }
    }
    return out;
}

Polynomial Polynomial::scaled(Complex s) const {
    Polynomial out(n_);
    for (const auto& [a, c] : terms_) out.add_term(a, c * s);
    return out;
}

Polynomial Polynomial::dilated(double lambda) const {
    Polynomial out(n_);
    for (const auto& [a, c] : terms_) out.add_term(a, c * std::pow(lambda, a.degree()));
    return out;
}

namespace holo {

Complex evaluate(const Polynomial& f, const BallPoint& z) { return f(z); }

std::vector<Polynomial> complex_partials(const Polynomial& f) { return f.partials(); }

Polynomial polynomial_from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    const int n = doc.at("n").get<int>();
    Polynomial f(n);
    for (const auto& term : doc.at("terms")) {
        MultiIndex a(term.at("exponents").get<std::vector<int>>());
        if (a.dim() != n) throw std::invalid_argument("polynomial file: exponent vector length != n");
        f.add_term(a, Complex(term.value("re", 0.0), term.value("im", 0.0)));
    }
    return f;
}

std::string polynomial_to_json(const Polynomial& f) {
    nlohmann::json doc;
    doc["n"] = f.dim();
    doc["terms"] = nlohmann::json::array();
    for (const auto& [a, c] : f.terms()) {
        doc["terms"].push_back({{"exponents", a.exponents}, {"re", c.real()}, {"im", c.imag()}});
    }
    return doc.dump(2);
}

Polynomial read_polynomial(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open polynomial file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return polynomial_from_json(buffer.str());
}

void write_polynomial(const Polynomial& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write polynomial file: " + path);
    out << polynomial_to_json(f) << '\n';
}

}  // namespace holo

LevelFunction::LevelFunction(Polynomial f, double a, double b)
    : f_(std::move(f)), partials_(f_.partials()), a_(a), b_(b), zero_tol_(1e-12 * (1.0 + f_.coefficient_l1())) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("LevelFunction: exponents a, b must be positive");
}

bool LevelFunction::near_zero(Complex fz) const noexcept { return std::abs(fz) < zero_tol_; }

double LevelFunction::operator()(const BallPoint& z) const {
    return std::pow(std::abs(f_(z)), a_) * std::pow(z.defect(), b_);
}

CVector LevelFunction::complex_gradient(const BallPoint& z) const {
    const Complex fz = f_(z);
    if (near_zero(fz)) {
        ScalarField field{[this](const BallPoint& p) { return (*this)(p); }, {}, 1.0};
        return geometry::finite_difference_gradient(field, z);
    }
    const double u = std::pow(std::abs(fz), a_) * std::pow(z.defect(), b_);
    CVector grad(static_cast<std::size_t>(dim()));
    for (int i = 0; i < dim(); ++i) {
        // d|f|^a/dz_i = (a/2)|f|^a f_i / f ; d(1-|z|^2)^b/dz_i = -b conj(z_i) (1-|z|^2)^{b-1}
        grad[i] = u * (0.5 * a_ * partials_[i](z) / fz - b_ * std::conj(z[i]) / z.defect());
    }
    return grad;
}

double LevelFunction::gradient_norm(const BallPoint& z) const {
    const CVector g = complex_gradient(z);
    return geometry::gradient_norm_from_partials(g, z);
}

LevelFunction::Ray::Ray(const LevelFunction& u, std::span<const Complex> zeta)
    : coeffs_(u.poly().radial_coefficients(zeta)), a_(u.a()), b_(u.b()) {}

double LevelFunction::Ray::value(double rho) const {
    const double r = std::tanh(rho);
    Complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + *it;
    const double c = std::cosh(rho);
    return std::pow(std::abs(acc), a_) * std::pow(c, -2.0 * b_);
}

double LevelFunction::Ray::derivative(double rho) const {
    const double r = std::tanh(rho);
    Complex acc{};
    Complex dacc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        dacc = dacc * r + acc;
        acc = acc * r + *it;
    }
    if (acc == Complex{}) return 0.0;
    const double c = std::cosh(rho);
    const double sech2 = 1.0 / (c * c);
    const double u = std::pow(std::abs(acc), a_) * std::pow(c, -2.0 * b_);
    const double dlog = a_ * (dacc / acc).real() * sech2 - 2.0 * b_ * r;
    return u * dlog;
}

namespace holo {

ScalarField level_function_field(const LevelFunction& u) {
    ScalarField field;
    field.eval = [u](const BallPoint& z) { return u(z); };
    field.complex_gradient = [u](const BallPoint& z) { return u.complex_gradient(z); };
    field.support_radius_hint = 1.0;
    return field;
}

namespace {

double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

/// Real coordinates x (length 2n) <-> complex point.
CVector to_complex(const std::vector<double>& x) {
    const std::size_t n = x.size() / 2;
    CVector z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = {x[i], x[i + n]};
    return z;
}

double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

class Ascent {
public:
    explicit Ascent(const LevelFunction& u) : u_(u) {}

    double value(const std::vector<double>& x) const {
        if (norm2(x) >= 1.0) return 0.0;
        return u_(BallPoint(to_complex(x)));
    }

    /// Coordinate sweeps with golden-section line maximization until the step falls below tol.
    double climb(std::vector<double>& x, double tol, int max_sweeps) const {
        double best = value(x);
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            double moved = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                const double before = x[k];
                // Chord of the ball through x along axis k.
                const double rest = norm2(x) - x[k] * x[k];
                const double half = std::sqrt(std::max(1.0 - rest, 0.0)) * (1.0 - 1e-12);
                double lo = std::max(-half, before - step_);
                double hi = std::min(half, before + step_);
                const double v = golden(x, k, lo, hi, tol);
                if (v >= best) best = v;
                else x[k] = before;
                moved = std::max(moved, std::abs(x[k] - before));
            }
            if (moved < tol) break;
        }
        return best;
    }

    void set_step(double s) { step_ = s; }

private:
    double golden(std::vector<double>& x, std::size_t k, double lo, double hi, double tol) const {
        constexpr double kInvPhi = 0.6180339887498949;
        auto at = [&](double t) {
            x[k] = t;
            return value(x);
        };
        double c = hi - kInvPhi * (hi - lo);
        double d = lo + kInvPhi * (hi - lo);
        double fc = at(c);
        double fd = at(d);
        while (hi - lo > tol) {
            if (fc > fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - kInvPhi * (hi - lo);
                fc = at(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + kInvPhi * (hi - lo);
                fd = at(d);
            }
        }
        const double t = 0.5 * (lo + hi);
        return at(t);
    }

    const LevelFunction& u_;
    double step_ = 2.0;
};

}  // namespace

LevelMaximum level_maximum(const LevelFunction& u, int starts, double tol) {
    const std::size_t dim = 2 * static_cast<std::size_t>(u.dim());
    if (dim > std::size(kPrimes)) throw std::invalid_argument("level_maximum: dimension too large");
    Ascent ascent(u);

    struct Candidate {
        double value;
        std::vector<double> x;
    };
    std::vector<Candidate> coarse;
    std::uint64_t index = 1;
    while (static_cast<int>(coarse.size()) < starts) {
        std::vector<double> x(dim);
        for (std::size_t k = 0; k < dim; ++k) x[k] = 2.0 * radical_inverse(index, kPrimes[k]) - 1.0;
        ++index;
        if (norm2(x) >= 0.98 * 0.98) continue;
        ascent.set_step(0.25);
        const double v = ascent.climb(x, 1e-4, 8);
        coarse.push_back({v, std::move(x)});
    }
    std::stable_sort(coarse.begin(), coarse.end(), [](const Candidate& l, const Candidate& r) { return l.value > r.value; });

    LevelMaximum best;
    best.value = -1.0;
    const std::size_t refine = std::min<std::size_t>(4, coarse.size());
    for (std::size_t i = 0; i < refine; ++i) {
        std::vector<double> x = coarse[i].x;
        double step = 1e-2;
        double v = coarse[i].value;
        for (int round = 0; round < 6; ++round) {
            ascent.set_step(step);
            v = ascent.climb(x, tol, 400);
            step *= 0.1;
        }
        if (v > best.value) {
            best.value = v;
            best.argmax = to_complex(x);
        }
    }
    return best;
}

std::vector<Polynomial> test_family(const FamilySpec& spec) {
    const int n = spec.n;
    if (n < 1) throw std::invalid_argument("test_family: n must be >= 1");
    if (spec.name == "constants") return {Polynomial::constant(n, 1.0)};
    if (spec.name == "coordinates") {
        std::vector<Polynomial> out;
        for (int i = 0; i < n; ++i) out.push_back(Polynomial::coordinate(n, i));
        return out;
    }
    if (spec.name == "random_poly" || spec.name == "dilates") {
        if (spec.degree < 0 || spec.count < 1) throw std::invalid_argument("test_family: bad degree or count");
        // All multi-indices of total degree <= d, in lexicographic order.
        std::vector<MultiIndex> indices;
        std::vector<int> e(n, 0);
        const auto enumerate = [&](auto&& self, int pos, int remaining) -> void {
            if (pos == n) {
                indices.emplace_back(e);
                return;
            }
            for (int k = 0; k <= remaining; ++k) {
                e[pos] = k;
                self(self, pos + 1, remaining - k);
            }
            e[pos] = 0;
        };
        enumerate(enumerate, 0, spec.degree);

        const auto gen = rng::make(spec.seed, rng::Stream::test_family,
                                   (static_cast<std::uint64_t>(n) << 16) | static_cast<std::uint64_t>(spec.degree));
        std::vector<Polynomial> out;
        for (int m = 0; m < spec.count; ++m) {
            Polynomial f(n);
            for (std::size_t t = 0; t < indices.size(); ++t) {
                const auto [u1, u2] = gen.uniform2(static_cast<std::uint64_t>(m) * 4096 + t);
                f.add_term(indices[t], std::polar(std::sqrt(u1), 2.0 * std::numbers::pi * u2));
            }
            out.push_back(spec.name == "dilates" ? f.dilated(spec.lambda) : f);
        }
        return out;
    }
    throw std::invalid_argument("test_family: unknown family '" + spec.name + "'");
}

}  // namespace holo
}  // namespace hypball
