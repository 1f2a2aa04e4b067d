// superop.cpp — operator and superoperator algebra

#include "mqme/superop.hpp"

#include <cmath>

#include "mqme/errors.hpp"

namespace mqme {

Vec vec(const Op& a) { return Eigen::Map<const Vec>(a.data(), a.size()); }

Op unvec(const Vec& v) {
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (d * d != v.size()) throw DomainError("unvec: vector length is not a perfect square");
    return Eigen::Map<const Op>(v.data(), d, d);
}

cplx hs_inner(const Op& a, const Op& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("hs_inner: dimension mismatch");
    return (a.adjoint() * b).trace();
}

SuperOp left_mult(const Op& o) {
    if (o.rows() != o.cols()) throw DomainError("left_mult: operator must be square");
    const auto d = o.rows();
    SuperOp s = SuperOp::Zero(d * d, d * d);
    for (Eigen::Index j = 0; j < d; ++j) s.block(j * d, j * d, d, d) = o; // I (x) O
    return s;
}

SuperOp right_mult(const Op& o) {
    if (o.rows() != o.cols()) throw DomainError("right_mult: operator must be square");
    const auto d = o.rows();
    SuperOp s = SuperOp::Zero(d * d, d * d);
    const Op id = Op::Identity(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (o(j, i) != 0.0) s.block(i * d, j * d, d, d) = o(j, i) * id; // O^T (x) I
    return s;
}

SuperOp commutator(const Op& o) { return left_mult(o) - right_mult(o); }

Op apply(const SuperOp& s, const Op& a) {
    if (s.cols() != a.size()) throw DomainError("apply: dimension mismatch");
    return unvec(s * vec(a));
}

double trace_norm(const Op& a) {
    Eigen::JacobiSVD<Op> svd(a);
    return svd.singularValues().sum();
}

double operator_norm(const Op& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Op> svd(a);
    return svd.singularValues()(0);
}

bool is_hermitian(const Op& a, double rel_tol) {
    return (a - a.adjoint()).norm() <= rel_tol * std::max(a.norm(), 1e-300);
}

namespace pauli {
Op identity() { return Op::Identity(2, 2); }
Op x() {
    Op m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Op y() {
    Op m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
Op z() {
    Op m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
Op up() {
    Op m = Op::Zero(2, 2);
    m(0, 0) = 1.0;
    return m;
}
} // namespace pauli

SystemModel::SystemModel(Op hamiltonian, std::vector<Op> couplings)
    : h_(std::move(hamiltonian)), x_(std::move(couplings)) {
    if (h_.rows() == 0 || h_.rows() != h_.cols()) throw DomainError("Hamiltonian must be square and non-empty");
    if (!is_hermitian(h_, 1e-12) && h_.norm() > 0.0) throw DomainError("Hamiltonian must be Hermitian");
    for (const auto& x : x_) {
        if (x.rows() != h_.rows() || x.cols() != h_.cols()) throw DomainError("coupling dimension mismatch");
        if (std::abs(operator_norm(x) - 1.0) > 1e-10) throw DomainError("coupling operators must have operator norm 1");
    }
    Eigen::SelfAdjointEigenSolver<Op> es(0.5 * (h_ + h_.adjoint()));
    energies_ = es.eigenvalues();
    v_ = es.eigenvectors();
}

Op SystemModel::propagator(double t) const {
    Vec ph(energies_.size());
    for (Eigen::Index k = 0; k < energies_.size(); ++k) ph(k) = std::exp(cplx(0.0, -energies_(k) * t));
    return v_ * ph.asDiagonal() * v_.adjoint();
}

Op SystemModel::interaction_coupling(int alpha, double t) const {
    const Op u = propagator(t);
    return u.adjoint() * x_.at(alpha) * u;
}

SuperOp SystemModel::rotation(double t) const {
    const Op u = propagator(t);
    return left_mult(u.adjoint()) * right_mult(u);
}

SystemModel spin_boson_system(double omega) { return SystemModel(omega * pauli::z(), {pauli::x()}); }

} // namespace mqme
