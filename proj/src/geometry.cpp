#include "tetra/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace tetra::geometry {

TetraPoint project(const Matrix2c& a)
{
    return {a(0, 0), a(1, 1), a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)};
}

double norm2x2(const Matrix2c& a)
{
    const Matrix2c g = a.adjoint() * a;
    const double p = g(0, 0).real();
    const double s = g(1, 1).real();
    const double half_gap = 0.5 * (p - s);
    const double top = 0.5 * (p + s) + std::sqrt(half_gap * half_gap + std::norm(g(0, 1)));
    return std::sqrt(std::max(0.0, top));
}

Matrix2c witness_for_radius(const TetraPoint& p, double r)
{
    const Complex c = p.x1 * p.x2 - p.x3;
    Matrix2c a;
    a << p.x1, r, c / r, p.x2;
    return a;
}

Membership in_tetrablock(const TetraPoint& p, bool closed, double tol)
{
    if (!std::isfinite(std::abs(p.x1)) || !std::isfinite(std::abs(p.x2)) || !std::isfinite(std::abs(p.x3)))
        throw TetraError(ErrorKind::InvalidArgument, "tetrablock point has non-finite entries");

    Membership out;
    out.closed = closed;

    const Complex c = p.x1 * p.x2 - p.x3;
    const double scale = std::max({1.0, std::abs(p.x1), std::abs(p.x2), std::abs(p.x3)});
    if (std::abs(c) <= tol * scale) {
        // a12 a21 = 0: the minimal completion is the diagonal matrix.
        out.witness << p.x1, 0.0, 0.0, p.x2;
        out.witness_norm = norm2x2(out.witness);
    } else {
        auto objective = [&](double log_r) { return norm2x2(witness_for_radius(p, std::exp(log_r))); };

        // The minimizer sits at r = sqrt|c|; bracket generously around it.
        const double centre = 0.5 * std::log(std::abs(c));
        constexpr int grid = 81;
        constexpr double half_width = 20.0;
        double best = std::numeric_limits<double>::infinity();
        int best_k = 0;
        for (int k = 0; k < grid; ++k) {
            const double value = objective(centre - half_width + 2.0 * half_width * k / (grid - 1));
            if (value < best) {
                best = value;
                best_k = k;
            }
        }
        if (best_k == 0 || best_k == grid - 1 || !std::isfinite(best)) {
            std::ostringstream msg;
            msg << "no interior minimizer on the radius bracket (best index " << best_k << ")";
            throw TetraError(ErrorKind::SearchFailed, msg.str());
        }

        const double step = 2.0 * half_width / (grid - 1);
        double lo = centre - half_width + (best_k - 1) * step;
        double hi = centre - half_width + (best_k + 1) * step;
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = hi - inv_phi * (hi - lo);
        double b = lo + inv_phi * (hi - lo);
        double fa = objective(a);
        double fb = objective(b);
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            if (fa < fb) {
                hi = b;
                b = a;
                fb = fa;
                a = hi - inv_phi * (hi - lo);
                fa = objective(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + inv_phi * (hi - lo);
                fb = objective(b);
            }
        }
        const double log_r = fa < fb ? a : b;
        out.witness = witness_for_radius(p, std::exp(log_r));
        out.witness_norm = std::min(fa, fb);
    }

    out.member = closed ? out.witness_norm <= 1.0 + tol : out.witness_norm < 1.0 - tol;
    return out;
}

bool in_distinguished_boundary(const TetraPoint& p, double tol)
{
    return std::abs(p.x1 - std::conj(p.x2) * p.x3) <= tol && std::abs(p.x2) <= 1.0 + tol &&
           std::abs(std::abs(p.x3) - 1.0) <= tol;
}

std::vector<TetraPoint> sample_tetrablock(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<TetraPoint> points;
    points.reserve(n);
    while (points.size() < n) {
        Matrix2c a;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double re = normal(rng);
                const double im = normal(rng);
                a(i, j) = Complex(re, im);
            }
        const double norm = norm2x2(a);
        if (norm == 0.0)
            continue;
        // Bias radii toward the boundary, where suprema live.
        const double radius = std::pow(unit(rng), 0.25) * (1.0 - 1e-6);
        points.push_back(project(a * (radius / norm)));
    }
    return points;
}

TetraPoint boundary_point(double b_modulus, double b_phase, double u_phase)
{
    const Complex b = std::polar(b_modulus, b_phase);
    const Complex u = std::polar(1.0, u_phase);
    return {std::conj(b) * u, b, u};
}

std::vector<TetraPoint> sample_distinguished_boundary(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double two_pi = 2.0 * std::numbers::pi;

    std::vector<TetraPoint> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u1 = unit(rng);
        const double u2 = unit(rng);
        const double u3 = unit(rng);
        const double modulus = (i % 2 == 1) ? 1.0 : std::sqrt(u1);
        points.push_back(boundary_point(modulus, two_pi * u2, two_pi * u3));
    }
    return points;
}

} // namespace tetra::geometry
