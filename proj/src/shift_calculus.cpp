#include "tetra/shift_calculus.hpp"

#include <algorithm>
#include <sstream>
#include <variant>

namespace tetra::shift {

// FinSuppVector ----------------------------------------------------------------

FinSuppVector::FinSuppVector(int fiber) : fiber_(fiber)
{
    if (fiber < 1)
        throw TetraError(ErrorKind::FiberMismatch, "fiber dimension must be positive");
}

FinSuppVector::FinSuppVector(int fiber, std::vector<Complex> coefficients)
    : fiber_(fiber), coeffs_(std::move(coefficients))
{
    if (fiber < 1)
        throw TetraError(ErrorKind::FiberMismatch, "fiber dimension must be positive");
    coeffs_.resize((coeffs_.size() + fiber_ - 1) / fiber_ * fiber_, Complex(0.0));
    trim();
}

FinSuppVector FinSuppVector::basis(int fiber, int degree, int component)
{
    if (component < 0 || component >= fiber || degree < 0)
        throw TetraError(ErrorKind::FiberMismatch, "basis index out of range");
    std::vector<Complex> c(static_cast<std::size_t>((degree + 1) * fiber), Complex(0.0));
    c[static_cast<std::size_t>(degree * fiber + component)] = 1.0;
    return FinSuppVector(fiber, std::move(c));
}

Complex FinSuppVector::coeff(int degree, int component) const
{
    const auto idx = static_cast<std::size_t>(degree * fiber_ + component);
    return idx < coeffs_.size() ? coeffs_[idx] : Complex(0.0);
}

void FinSuppVector::trim()
{
    while (!coeffs_.empty()) {
        const auto start = coeffs_.end() - fiber_;
        if (std::any_of(start, coeffs_.end(), [](Complex c) { return c != Complex(0.0); }))
            break;
        coeffs_.erase(start, coeffs_.end());
    }
}

FinSuppVector& FinSuppVector::operator+=(const FinSuppVector& other)
{
    if (other.fiber_ != fiber_)
        throw TetraError(ErrorKind::FiberMismatch, "adding vectors of different fibers");
    if (other.coeffs_.size() > coeffs_.size())
        coeffs_.resize(other.coeffs_.size(), Complex(0.0));
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i)
        coeffs_[i] += other.coeffs_[i];
    trim();
    return *this;
}

FinSuppVector FinSuppVector::operator+(const FinSuppVector& other) const
{
    FinSuppVector out = *this;
    out += other;
    return out;
}

FinSuppVector FinSuppVector::scaled(Complex factor) const
{
    std::vector<Complex> c = coeffs_;
    for (auto& x : c)
        x *= factor;
    return FinSuppVector(fiber_, std::move(c));
}

Complex FinSuppVector::inner(const FinSuppVector& other) const
{
    if (other.fiber_ != fiber_)
        throw TetraError(ErrorKind::FiberMismatch, "inner product of different fibers");
    Complex sum = 0.0;
    const std::size_t n = std::min(coeffs_.size(), other.coeffs_.size());
    for (std::size_t i = 0; i < n; ++i)
        sum += std::conj(coeffs_[i]) * other.coeffs_[i];
    return sum;
}

double FinSuppVector::max_abs_difference(const FinSuppVector& other) const
{
    if (other.fiber_ != fiber_)
        throw TetraError(ErrorKind::FiberMismatch, "comparing vectors of different fibers");
    const std::size_t n = std::max(coeffs_.size(), other.coeffs_.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = i < coeffs_.size() ? coeffs_[i] : Complex(0.0);
        const Complex b = i < other.coeffs_.size() ? other.coeffs_[i] : Complex(0.0);
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

// Expression nodes ------------------------------------------------------------------

using NodePtr = std::shared_ptr<const Node>;

struct IdentityLeaf {};
struct ZeroLeaf {};
struct ShiftLeaf {};
struct BackwardShiftLeaf {};
struct UnitLeaf {
    int row;
    int col;
};
struct FiberLeaf {
    ComplexMatrix m;
};
struct TensorNode {
    NodePtr op;
    ComplexMatrix m;
};
struct ScaleNode {
    Complex s;
    NodePtr op;
};
struct SumNode {
    NodePtr a, b;
};
struct ProductNode {
    NodePtr a, b;
};
struct BlockNode {
    NodePtr a, b, c, d;
};

struct Node {
    int out_fiber;
    int in_fiber;
    std::variant<IdentityLeaf, ZeroLeaf, ShiftLeaf, BackwardShiftLeaf, UnitLeaf, FiberLeaf,
                 TensorNode, ScaleNode, SumNode, ProductNode, BlockNode>
        kind;
};

namespace {

template <class Kind>
NodePtr make(int out_fiber, int in_fiber, Kind kind)
{
    return std::make_shared<const Node>(Node{out_fiber, in_fiber, std::move(kind)});
}

[[noreturn]] void fiber_mismatch(const char* where, int expected, int got)
{
    std::ostringstream msg;
    msg << where << ": expected fiber " << expected << ", got " << got;
    throw TetraError(ErrorKind::FiberMismatch, msg.str());
}

FinSuppVector evaluate(const Node& node, const FinSuppVector& v);

// Splits v in H^2(C^{f0+f1}) into its two fiber components.
std::pair<FinSuppVector, FinSuppVector> split(const FinSuppVector& v, int f0, int f1)
{
    const int f = f0 + f1;
    const int support = v.support();
    std::vector<Complex> c0(static_cast<std::size_t>(support * f0));
    std::vector<Complex> c1(static_cast<std::size_t>(support * f1));
    for (int k = 0; k < support; ++k) {
        for (int i = 0; i < f0; ++i)
            c0[static_cast<std::size_t>(k * f0 + i)] = v.coefficients()[static_cast<std::size_t>(k * f + i)];
        for (int i = 0; i < f1; ++i)
            c1[static_cast<std::size_t>(k * f1 + i)] = v.coefficients()[static_cast<std::size_t>(k * f + f0 + i)];
    }
    return {FinSuppVector(f0, std::move(c0)), FinSuppVector(f1, std::move(c1))};
}

FinSuppVector merge(const FinSuppVector& v0, const FinSuppVector& v1)
{
    const int f0 = v0.fiber();
    const int f1 = v1.fiber();
    const int f = f0 + f1;
    const int support = std::max(v0.support(), v1.support());
    std::vector<Complex> c(static_cast<std::size_t>(support * f), Complex(0.0));
    for (int k = 0; k < support; ++k) {
        for (int i = 0; i < f0; ++i)
            c[static_cast<std::size_t>(k * f + i)] = v0.coeff(k, i);
        for (int i = 0; i < f1; ++i)
            c[static_cast<std::size_t>(k * f + f0 + i)] = v1.coeff(k, i);
    }
    return FinSuppVector(f, std::move(c));
}

FinSuppVector apply_fiber_matrix(const ComplexMatrix& m, const FinSuppVector& v)
{
    const int in = v.fiber();
    const int out = static_cast<int>(m.rows());
    const int support = v.support();
    std::vector<Complex> c(static_cast<std::size_t>(support * out), Complex(0.0));
    for (int k = 0; k < support; ++k)
        for (int r = 0; r < out; ++r) {
            Complex sum = 0.0;
            for (int j = 0; j < in; ++j) {
                const Complex mij = m(r, j);
                if (mij != Complex(0.0))
                    sum += mij * v.coeff(k, j);
            }
            c[static_cast<std::size_t>(k * out + r)] = sum;
        }
    return FinSuppVector(out, std::move(c));
}

FinSuppVector evaluate(const Node& node, const FinSuppVector& v)
{
    if (v.fiber() != node.in_fiber)
        fiber_mismatch("apply", node.in_fiber, v.fiber());

    return std::visit(
        [&](const auto& k) -> FinSuppVector {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, IdentityLeaf>) {
                return v;
            } else if constexpr (std::is_same_v<K, ZeroLeaf>) {
                return FinSuppVector(node.out_fiber);
            } else if constexpr (std::is_same_v<K, ShiftLeaf>) {
                std::vector<Complex> c(static_cast<std::size_t>(v.fiber()), Complex(0.0));
                c.insert(c.end(), v.coefficients().begin(), v.coefficients().end());
                return FinSuppVector(v.fiber(), std::move(c));
            } else if constexpr (std::is_same_v<K, BackwardShiftLeaf>) {
                if (v.support() <= 1)
                    return FinSuppVector(v.fiber());
                return FinSuppVector(v.fiber(),
                                     std::vector<Complex>(v.coefficients().begin() + v.fiber(),
                                                          v.coefficients().end()));
            } else if constexpr (std::is_same_v<K, UnitLeaf>) {
                const int f = v.fiber();
                std::vector<Complex> c(static_cast<std::size_t>((k.row + 1) * f), Complex(0.0));
                for (int i = 0; i < f; ++i)
                    c[static_cast<std::size_t>(k.row * f + i)] = v.coeff(k.col, i);
                return FinSuppVector(f, std::move(c));
            } else if constexpr (std::is_same_v<K, FiberLeaf>) {
                return apply_fiber_matrix(k.m, v);
            } else if constexpr (std::is_same_v<K, TensorNode>) {
                const int a = k.op->in_fiber;
                const int b = k.op->out_fiber;
                const int p = static_cast<int>(k.m.rows());
                const int q = static_cast<int>(k.m.cols());
                const int support = v.support();
                std::vector<FinSuppVector> images;
                images.reserve(static_cast<std::size_t>(q));
                for (int j = 0; j < q; ++j) {
                    std::vector<Complex> cj(static_cast<std::size_t>(support * a));
                    for (int deg = 0; deg < support; ++deg)
                        for (int i = 0; i < a; ++i)
                            cj[static_cast<std::size_t>(deg * a + i)] = v.coeff(deg, i * q + j);
                    images.push_back(evaluate(*k.op, FinSuppVector(a, std::move(cj))));
                }
                int out_support = 0;
                for (const auto& w : images)
                    out_support = std::max(out_support, w.support());
                std::vector<Complex> c(static_cast<std::size_t>(out_support * b * p), Complex(0.0));
                for (int deg = 0; deg < out_support; ++deg)
                    for (int i = 0; i < b; ++i)
                        for (int l = 0; l < p; ++l) {
                            Complex sum = 0.0;
                            for (int j = 0; j < q; ++j)
                                if (k.m(l, j) != Complex(0.0))
                                    sum += k.m(l, j) * images[static_cast<std::size_t>(j)].coeff(deg, i);
                            c[static_cast<std::size_t>(deg * b * p + i * p + l)] = sum;
                        }
                return FinSuppVector(b * p, std::move(c));
            } else if constexpr (std::is_same_v<K, ScaleNode>) {
                return evaluate(*k.op, v).scaled(k.s);
            } else if constexpr (std::is_same_v<K, SumNode>) {
                return evaluate(*k.a, v) + evaluate(*k.b, v);
            } else if constexpr (std::is_same_v<K, ProductNode>) {
                return evaluate(*k.a, evaluate(*k.b, v));
            } else {
                static_assert(std::is_same_v<K, BlockNode>);
                const auto [v0, v1] = split(v, k.a->in_fiber, k.b->in_fiber);
                const FinSuppVector top = evaluate(*k.a, v0) + evaluate(*k.b, v1);
                const FinSuppVector bottom = evaluate(*k.c, v0) + evaluate(*k.d, v1);
                return merge(top, bottom);
            }
        },
        node.kind);
}

NodePtr adjoint_of(const NodePtr& p)
{
    const Node& node = *p;
    const int out = node.in_fiber;
    const int in = node.out_fiber;
    return std::visit(
        [&](const auto& k) -> NodePtr {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, IdentityLeaf> || std::is_same_v<K, ZeroLeaf>) {
                return make(out, in, k);
            } else if constexpr (std::is_same_v<K, ShiftLeaf>) {
                return make(out, in, BackwardShiftLeaf{});
            } else if constexpr (std::is_same_v<K, BackwardShiftLeaf>) {
                return make(out, in, ShiftLeaf{});
            } else if constexpr (std::is_same_v<K, UnitLeaf>) {
                return make(out, in, UnitLeaf{k.col, k.row});
            } else if constexpr (std::is_same_v<K, FiberLeaf>) {
                return make(out, in, FiberLeaf{k.m.adjoint()});
            } else if constexpr (std::is_same_v<K, TensorNode>) {
                return make(out, in, TensorNode{adjoint_of(k.op), k.m.adjoint()});
            } else if constexpr (std::is_same_v<K, ScaleNode>) {
                return make(out, in, ScaleNode{std::conj(k.s), adjoint_of(k.op)});
            } else if constexpr (std::is_same_v<K, SumNode>) {
                return make(out, in, SumNode{adjoint_of(k.a), adjoint_of(k.b)});
            } else if constexpr (std::is_same_v<K, ProductNode>) {
                return make(out, in, ProductNode{adjoint_of(k.b), adjoint_of(k.a)});
            } else {
                static_assert(std::is_same_v<K, BlockNode>);
                return make(out, in,
                            BlockNode{adjoint_of(k.a), adjoint_of(k.c), adjoint_of(k.b), adjoint_of(k.d)});
            }
        },
        node.kind);
}

} // namespace

// StructuredOperator -------------------------------------------------------------------

StructuredOperator StructuredOperator::identity(int fiber)
{
    return StructuredOperator(make(fiber, fiber, IdentityLeaf{}));
}

StructuredOperator StructuredOperator::zero(int out_fiber, int in_fiber)
{
    return StructuredOperator(make(out_fiber, in_fiber, ZeroLeaf{}));
}

StructuredOperator StructuredOperator::shift(int fiber)
{
    return StructuredOperator(make(fiber, fiber, ShiftLeaf{}));
}

StructuredOperator StructuredOperator::backward_shift(int fiber)
{
    return StructuredOperator(make(fiber, fiber, BackwardShiftLeaf{}));
}

StructuredOperator StructuredOperator::unit(int row, int col, int fiber)
{
    if (row < 0 || col < 0)
        throw TetraError(ErrorKind::InvalidArgument, "unit indices must be nonnegative");
    return StructuredOperator(make(fiber, fiber, UnitLeaf{row, col}));
}

StructuredOperator StructuredOperator::fiber_matrix(const ComplexMatrix& m)
{
    return StructuredOperator(
        make(static_cast<int>(m.rows()), static_cast<int>(m.cols()), FiberLeaf{m}));
}

StructuredOperator StructuredOperator::tensor(const StructuredOperator& op, const ComplexMatrix& m)
{
    const int out = op.out_fiber() * static_cast<int>(m.rows());
    const int in = op.in_fiber() * static_cast<int>(m.cols());
    return StructuredOperator(make(out, in, TensorNode{op.node_, m}));
}

StructuredOperator StructuredOperator::block(const StructuredOperator& a, const StructuredOperator& b,
                                             const StructuredOperator& c, const StructuredOperator& d)
{
    if (a.in_fiber() != c.in_fiber())
        fiber_mismatch("block (first column)", a.in_fiber(), c.in_fiber());
    if (b.in_fiber() != d.in_fiber())
        fiber_mismatch("block (second column)", b.in_fiber(), d.in_fiber());
    if (a.out_fiber() != b.out_fiber())
        fiber_mismatch("block (first row)", a.out_fiber(), b.out_fiber());
    if (c.out_fiber() != d.out_fiber())
        fiber_mismatch("block (second row)", c.out_fiber(), d.out_fiber());
    return StructuredOperator(make(a.out_fiber() + c.out_fiber(), a.in_fiber() + b.in_fiber(),
                                   BlockNode{a.node_, b.node_, c.node_, d.node_}));
}

int StructuredOperator::in_fiber() const { return node_->in_fiber; }
int StructuredOperator::out_fiber() const { return node_->out_fiber; }

StructuredOperator StructuredOperator::adjoint() const
{
    return StructuredOperator(adjoint_of(node_));
}

FinSuppVector StructuredOperator::apply(const FinSuppVector& v) const
{
    return evaluate(*node_, v);
}

StructuredOperator operator+(const StructuredOperator& a, const StructuredOperator& b)
{
    if (a.in_fiber() != b.in_fiber())
        fiber_mismatch("sum (input)", a.in_fiber(), b.in_fiber());
    if (a.out_fiber() != b.out_fiber())
        fiber_mismatch("sum (output)", a.out_fiber(), b.out_fiber());
    return StructuredOperator(make(a.out_fiber(), a.in_fiber(), SumNode{a.node_, b.node_}));
}

StructuredOperator operator-(const StructuredOperator& a, const StructuredOperator& b)
{
    return a + Complex(-1.0) * b;
}

StructuredOperator operator*(const StructuredOperator& a, const StructuredOperator& b)
{
    if (a.in_fiber() != b.out_fiber())
        fiber_mismatch("product", a.in_fiber(), b.out_fiber());
    return StructuredOperator(make(a.out_fiber(), b.in_fiber(), ProductNode{a.node_, b.node_}));
}

StructuredOperator operator*(Complex s, const StructuredOperator& a)
{
    return StructuredOperator(make(a.out_fiber(), a.in_fiber(), ScaleNode{s, a.node_}));
}

// Bridges ----------------------------------------------------------------------------------

ComplexMatrix compress(const StructuredOperator& op, int n)
{
    if (n < 1)
        throw TetraError(ErrorKind::InvalidArgument, "compress needs N >= 1");
    const int fin = op.in_fiber();
    const int fout = op.out_fiber();
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(fout) * n, static_cast<Index>(fin) * n);
    for (int comp = 0; comp < fin; ++comp)
        for (int deg = 0; deg < n; ++deg) {
            const FinSuppVector image = op.apply(FinSuppVector::basis(fin, deg, comp));
            const int top = std::min(image.support(), n);
            for (int r_comp = 0; r_comp < fout; ++r_comp)
                for (int r_deg = 0; r_deg < top; ++r_deg)
                    m(static_cast<Index>(r_comp) * n + r_deg, static_cast<Index>(comp) * n + deg) =
                        image.coeff(r_deg, r_comp);
        }
    return m;
}

IdentityCheck verify_identity(const StructuredOperator& lhs, const StructuredOperator& rhs,
                              int degree_budget, double tolerance)
{
    if (lhs.in_fiber() != rhs.in_fiber())
        fiber_mismatch("verify_identity (input)", lhs.in_fiber(), rhs.in_fiber());
    if (lhs.out_fiber() != rhs.out_fiber())
        fiber_mismatch("verify_identity (output)", lhs.out_fiber(), rhs.out_fiber());

    IdentityCheck check;
    for (int deg = 0; deg <= degree_budget; ++deg)
        for (int comp = 0; comp < lhs.in_fiber(); ++comp) {
            const FinSuppVector e = FinSuppVector::basis(lhs.in_fiber(), deg, comp);
            const double diff = lhs.apply(e).max_abs_difference(rhs.apply(e));
            if (diff > check.max_residual)
                check.max_residual = diff;
            if (diff > tolerance && !check.witness)
                check.witness = std::make_pair(deg, comp);
        }
    check.holds = !check.witness.has_value();
    return check;
}

double compressed_norm(const StructuredOperator& op, int n)
{
    return operator_norm(compress(op, n));
}

} // namespace tetra::shift
