#include "tetra/analysis.hpp"

#include "tetra/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace tetra {

std::vector<Monomial> monomials_up_to(int degree)
{
    if (degree < 0)
        throw TetraError(ErrorKind::InvalidArgument, "monomial degree must be nonnegative");
    std::vector<Monomial> out;
    for (int d = 0; d <= degree; ++d)
        for (int a = d; a >= 0; --a)
            for (int b = d - a; b >= 0; --b)
                out.push_back({a, b, d - a - b});
    return out;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string monomial_label(const Monomial& m)
{
    std::string s;
    auto term = [&](const char* var, int power) {
        if (power == 0)
            return;
        if (!s.empty())
            s += " ";
        s += var;
        if (power > 1)
            s += "^" + std::to_string(power);
    };
    term("x1", m.a);
    term("x2", m.b);
    term("x3", m.c);
    return s.empty() ? "1" : s;
}

// Values of every monomial at a point.
Eigen::RowVectorXcd monomial_row(const geometry::TetraPoint& p, const std::vector<Monomial>& monomials, int degree)
{
    std::vector<Complex> p1(degree + 1), p2(degree + 1), p3(degree + 1);
    p1[0] = p2[0] = p3[0] = 1.0;
    for (int k = 1; k <= degree; ++k) {
        p1[k] = p1[k - 1] * p.x1;
        p2[k] = p2[k - 1] * p.x2;
        p3[k] = p3[k - 1] * p.x3;
    }
    Eigen::RowVectorXcd row(static_cast<Index>(monomials.size()));
    for (std::size_t i = 0; i < monomials.size(); ++i)
        row(static_cast<Index>(i)) = p1[monomials[i].a] * p2[monomials[i].b] * p3[monomials[i].c];
    return row;
}

class SupEstimator {
public:
    SupEstimator(const std::vector<Monomial>& monomials, int degree, std::size_t n_samples, std::uint64_t seed)
        : monomials_(monomials), degree_(degree)
    {
        const auto interior = geometry::sample_tetrablock(n_samples, mix_seed(seed, 1001));
        const auto boundary_seed = mix_seed(seed, 1002);
        std::mt19937_64 rng(boundary_seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double two_pi = 2.0 * std::numbers::pi;

        interior_.resize(static_cast<Index>(interior.size()), static_cast<Index>(monomials.size()));
        for (std::size_t i = 0; i < interior.size(); ++i)
            interior_.row(static_cast<Index>(i)) = monomial_row(interior[i], monomials_, degree_);

        // Boundary samples are kept in parameter form for the local ascent.
        params_.resize(n_samples);
        boundary_.resize(static_cast<Index>(n_samples), static_cast<Index>(monomials.size()));
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double u1 = unit(rng);
            const double u2 = unit(rng);
            const double u3 = unit(rng);
            params_[i] = {(i % 2 == 1) ? 1.0 : std::sqrt(u1), two_pi * u2, two_pi * u3};
            boundary_.row(static_cast<Index>(i)) = row_at(params_[i]);
        }
    }

    /// Sampled sup; `refine` adds a coordinate ascent on the distinguished boundary.
    double sup(const ComplexVector& coeffs, bool refine) const
    {
        double best = interior_.rows() > 0 ? (interior_ * coeffs).cwiseAbs().maxCoeff() : 0.0;
        if (boundary_.rows() == 0)
            return best;
        const Eigen::VectorXd values = (boundary_ * coeffs).cwiseAbs();
        Index arg = 0;
        best = std::max(best, values.maxCoeff(&arg));
        if (refine)
            best = std::max(best, ascend(coeffs, params_[static_cast<std::size_t>(arg)]));
        return best;
    }

private:
    using Params = std::array<double, 3>;  // |b|, arg b, arg u

    Eigen::RowVectorXcd row_at(const Params& q) const
    {
        return monomial_row(geometry::boundary_point(q[0], q[1], q[2]), monomials_, degree_);
    }

    double value(const ComplexVector& coeffs, const Params& q) const
    {
        return std::abs((row_at(q) * coeffs)(0));
    }

    double ascend(const ComplexVector& coeffs, Params q) const
    {
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double best = value(coeffs, q);
        double window = 0.3;
        for (int sweep = 0; sweep < 6; ++sweep, window *= 0.5) {
            for (int axis = 0; axis < 3; ++axis) {
                double lo = q[axis] - window;
                double hi = q[axis] + window;
                if (axis == 0) {
                    lo = std::max(0.0, lo);
                    hi = std::min(1.0, hi);
                }
                auto f = [&](double x) {
                    Params trial = q;
                    trial[axis] = x;
                    return value(coeffs, trial);
                };
                double a = hi - inv_phi * (hi - lo);
                double b = lo + inv_phi * (hi - lo);
                double fa = f(a);
                double fb = f(b);
                for (int it = 0; it < 40; ++it) {
                    if (fa > fb) {
                        hi = b;
                        b = a;
                        fb = fa;
                        a = hi - inv_phi * (hi - lo);
                        fa = f(a);
                    } else {
                        lo = a;
                        a = b;
                        fa = fb;
                        b = lo + inv_phi * (hi - lo);
                        fb = f(b);
                    }
                }
                const double x = fa > fb ? a : b;
                const double fx = std::max(fa, fb);
                if (fx > best) {
                    best = fx;
                    q[axis] = x;
                }
            }
        }
        return best;
    }

    const std::vector<Monomial>& monomials_;
    int degree_;
    ComplexMatrix interior_;
    ComplexMatrix boundary_;
    std::vector<Params> params_;
};

} // namespace

std::optional<ViolationCertificate> spectral_set_falsifier(const CommutingTriple& t, const FalsifierConfig& config)
{
    if (config.degree < 0 || config.n_polys < 0 || config.margin < 0.0)
        throw TetraError(ErrorKind::InvalidArgument, "falsifier degree, polynomial count and margin must be nonnegative");

    const auto monomials = monomials_up_to(config.degree);
    const Index n = t.dim();
    const int d = config.degree;

    std::vector<ComplexMatrix> pow1{ComplexMatrix::Identity(n, n)}, pow2 = pow1, pow3 = pow1;
    for (int k = 1; k <= d; ++k) {
        pow1.push_back(pow1.back() * t.T1);
        pow2.push_back(pow2.back() * t.T2);
        pow3.push_back(pow3.back() * t.T);
    }
    std::vector<ComplexMatrix> at_triple;
    at_triple.reserve(monomials.size());
    for (const auto& m : monomials)
        at_triple.push_back(pow1[m.a] * pow2[m.b] * pow3[m.c]);

    const SupEstimator estimator(monomials, d, config.n_samples, config.seed);

    auto test = [&](const ComplexVector& coeffs, std::string label) -> std::optional<ViolationCertificate> {
        ComplexMatrix p = ComplexMatrix::Zero(n, n);
        for (std::size_t i = 0; i < monomials.size(); ++i)
            if (coeffs(static_cast<Index>(i)) != Complex(0.0))
                p += coeffs(static_cast<Index>(i)) * at_triple[i];
        const double norm = operator_norm(p);
        double sup = estimator.sup(coeffs, false);
        if (!(sup > 0.0) || norm <= sup * (1.0 + config.margin))
            return std::nullopt;
        // Candidate: sharpen the lower bound for the sup before reporting.
        sup = estimator.sup(coeffs, true);
        if (norm <= sup * (1.0 + config.margin))
            return std::nullopt;

        ViolationCertificate cert;
        for (std::size_t i = 0; i < monomials.size(); ++i)
            if (coeffs(static_cast<Index>(i)) != Complex(0.0)) {
                cert.monomials.push_back(monomials[i]);
                cert.coefficients.push_back(coeffs(static_cast<Index>(i)) / sup);
            }
        cert.operator_norm = norm / sup;
        cert.sup_estimate = 1.0;
        cert.ratio = norm / sup;
        cert.label = std::move(label);
        return cert;
    };

    const Index count = static_cast<Index>(monomials.size());
    if (config.probe_monomials)
        for (Index i = 1; i < count; ++i) {
            ComplexVector coeffs = ComplexVector::Zero(count);
            coeffs(i) = 1.0;
            if (auto cert = test(coeffs, "monomial " + monomial_label(monomials[static_cast<std::size_t>(i)])))
                return cert;
        }

    for (int k = 0; k < config.n_polys; ++k) {
        std::mt19937_64 rng(mix_seed(config.seed, static_cast<std::uint64_t>(k)));
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        ComplexVector coeffs(count);
        for (Index i = 0; i < count; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            coeffs(i) = Complex(re, im);
        }
        if (auto cert = test(coeffs, "random polynomial #" + std::to_string(k)))
            return cert;
    }
    return std::nullopt;
}

} // namespace tetra
