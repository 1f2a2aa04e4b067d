// superop.hpp — operators, column-stacked superoperators and the interaction picture

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace mqme {

using cplx = std::complex<double>;
using Op = Eigen::MatrixXcd;      // d x d
using SuperOp = Eigen::MatrixXcd; // d^2 x d^2, acting on vec(A)
using Vec = Eigen::VectorXcd;

// Column-stacking vectorization: vec(A)[i + d j] = A(i, j).
Vec vec(const Op& a);
Op unvec(const Vec& v);

// <<A|B>> = Tr(A^dagger B).
cplx hs_inner(const Op& a, const Op& b);

// Superoperators of A -> O A and A -> A O.
SuperOp left_mult(const Op& o);
SuperOp right_mult(const Op& o);

// Commutator superoperator A -> [O, A].
SuperOp commutator(const Op& o);

// Applies a superoperator to an operator.
Op apply(const SuperOp& s, const Op& a);

double trace_norm(const Op& a);
double operator_norm(const Op& a);
bool is_hermitian(const Op& a, double rel_tol = 1e-12);

namespace pauli {
Op identity();
Op x();
Op y();
Op z();
Op up(); // |up><up|
} // namespace pauli

// Time-independent system Hamiltonian H_S and unit-norm coupling operators X_alpha.
class SystemModel {
public:
    SystemModel(Op hamiltonian, std::vector<Op> couplings);

    int dim() const { return static_cast<int>(h_.rows()); }
    int coupling_count() const { return static_cast<int>(x_.size()); }
    const Op& hamiltonian() const { return h_; }
    const Op& coupling(int alpha) const { return x_[alpha]; }

    const Eigen::VectorXd& energies() const { return energies_; }
    const Op& eigenvectors() const { return v_; }

    // e^{-i H t}
    Op propagator(double t) const;
    // X_alpha(t) = e^{iHt} X_alpha e^{-iHt}
    Op interaction_coupling(int alpha, double t) const;
    // Superoperator A -> e^{iHt} A e^{-iHt} (Schroedinger -> interaction picture).
    SuperOp rotation(double t) const;

private:
    Op h_;
    std::vector<Op> x_;
    Eigen::VectorXd energies_;
    Op v_;
};

// H_S = omega sigma_z, single coupling X = sigma_x.
SystemModel spin_boson_system(double omega);

} // namespace mqme
