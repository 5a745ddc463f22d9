#pragma once
//
// Exact operator calculus on finitely supported vectors of H^2(C^f).
//
// A StructuredOperator is an immutable expression tree built from the
// unilateral shift and a handful of finite generators. Adjoints are pushed
// down to the leaves at construction time, so evaluation never needs an
// adjoint node: the adjoint of the shift is the backward-shift leaf, the
// adjoint of a block operator transposes the blocks, and so on.
//
// Vectors are sequences of fiber blocks c_0, c_1, ... in C^f. All generator
// actions are exact on these sequences, so identities such as S*S = I and
// I - SS* = P_0 hold without truncation error.
//

#include <memory>
#include <optional>
#include <vector>

#include "tetra/operator_core.hpp"

namespace tetra::shift {

class FinSuppVector {
public:
    explicit FinSuppVector(int fiber = 1);
    /// Coefficients laid out degree-major: block k occupies [k*fiber, (k+1)*fiber).
    FinSuppVector(int fiber, std::vector<Complex> coefficients);

    /// Unit vector e_degree (x) e_component.
    static FinSuppVector basis(int fiber, int degree, int component);

    int fiber() const { return fiber_; }
    /// Number of stored degree blocks; block support() - 1 is nonzero.
    int support() const { return static_cast<int>(coeffs_.size()) / fiber_; }
    Complex coeff(int degree, int component) const;
    const std::vector<Complex>& coefficients() const { return coeffs_; }

    FinSuppVector& operator+=(const FinSuppVector& other);
    FinSuppVector operator+(const FinSuppVector& other) const;
    FinSuppVector scaled(Complex factor) const;
    bool operator==(const FinSuppVector& other) const = default;

    /// sum_k <c_k, other_k>, conjugate-linear in *this.
    Complex inner(const FinSuppVector& other) const;
    double max_abs_difference(const FinSuppVector& other) const;

private:
    void trim();

    int fiber_ = 1;
    std::vector<Complex> coeffs_;
};

struct Node;

class StructuredOperator {
public:
    // Generators. `fiber` is the fiber dimension of H^2(C^fiber).
    static StructuredOperator identity(int fiber = 1);
    static StructuredOperator zero(int out_fiber = 1, int in_fiber = 1);
    static StructuredOperator shift(int fiber = 1);
    static StructuredOperator backward_shift(int fiber = 1);
    /// |e_row><e_col| on H^2, tensored with the identity of the fiber.
    static StructuredOperator unit(int row, int col, int fiber = 1);
    /// I_{H^2} (x) M for a constant fiber matrix M.
    static StructuredOperator fiber_matrix(const ComplexMatrix& m);
    /// op (x) M: acts on H^2(C^{in*q}) -> H^2(C^{out*p}) for M of size p x q.
    static StructuredOperator tensor(const StructuredOperator& op, const ComplexMatrix& m);
    /// [[a, b], [c, d]] on H^2(C^{f0}) (+) H^2(C^{f1}) identified with H^2(C^{f0+f1}).
    static StructuredOperator block(const StructuredOperator& a, const StructuredOperator& b,
                                    const StructuredOperator& c, const StructuredOperator& d);

    int in_fiber() const;
    int out_fiber() const;

    StructuredOperator adjoint() const;
    FinSuppVector apply(const FinSuppVector& v) const;

    friend StructuredOperator operator+(const StructuredOperator& a, const StructuredOperator& b);
    friend StructuredOperator operator-(const StructuredOperator& a, const StructuredOperator& b);
    friend StructuredOperator operator*(const StructuredOperator& a, const StructuredOperator& b);
    friend StructuredOperator operator*(Complex s, const StructuredOperator& a);

private:
    explicit StructuredOperator(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Matrix of P_N op |_{span{e_0..e_{N-1}}} (fiber-expanded). Rows and
/// columns are ordered fiber-major: index = component * N + degree, so a
/// block operator compresses to the matching block matrix.
///
/// This is the compression of the operator itself; compress(a * b, N) is in
/// general different from compress(a, N) * compress(b, N).
ComplexMatrix compress(const StructuredOperator& op, int n);

struct IdentityCheck {
    bool holds = false;
    double max_residual = 0.0;
    /// First basis vector (degree, component) where the two sides differ.
    std::optional<std::pair<int, int>> witness;
};

/// Compares lhs and rhs on every e_k (x) e_f with k <= degree_budget.
/// With dyadic constants the comparison is exact; `tolerance` absorbs
/// rounding for inexact scalars.
IdentityCheck verify_identity(const StructuredOperator& lhs, const StructuredOperator& rhs,
                              int degree_budget, double tolerance = 0.0);

/// Operator norm of compress(op, n); a lower bound for ||op|| that is exact
/// once n covers the range of a finite-rank defect.
double compressed_norm(const StructuredOperator& op, int n);

} // namespace tetra::shift
