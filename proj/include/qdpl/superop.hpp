// superop.hpp — vectorization and superoperator algebra on the Liouville space.
// Column-stacking convention: vec(A rho B) = (B^T kron A) vec(rho), which matches
// Eigen's column-major storage, so vectorize/devectorize are plain reshapes.
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qdpl/space.hpp"

namespace qdpl {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
    return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

inline Eigen::MatrixXcd devectorize(const Eigen::VectorXcd& v, int dim) {
    if (v.size() != Eigen::Index(dim) * dim) throw Error("devectorize: size mismatch");
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

struct Superoperator {
    Eigen::MatrixXcd m; // dim^2 x dim^2
    int dim = 0;

    Superoperator() = default;
    Superoperator(Eigen::MatrixXcd mat, int d) : m(std::move(mat)), dim(d) {}

    static Superoperator zero(int dim) {
        return {Eigen::MatrixXcd::Zero(Eigen::Index(dim) * dim, Eigen::Index(dim) * dim), dim};
    }

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const {
        return devectorize(m * vectorize(rho), dim);
    }

    Superoperator& operator+=(const Superoperator& o) {
        if (dim != o.dim) throw Error("superoperator dimension mismatch");
        m += o.m;
        return *this;
    }
};

inline Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }

inline Superoperator operator*(std::complex<double> c, const Superoperator& s) {
    return {c * s.m, s.dim};
}

inline Superoperator operator*(double c, const Superoperator& s) { return {c * s.m, s.dim}; }

inline Superoperator spre(const OperatorMatrix& a) {
    const int d = a.dim();
    return {kron(Eigen::MatrixXcd::Identity(d, d), a.mat), d};
}

inline Superoperator spost(const OperatorMatrix& b) {
    const int d = b.dim();
    return {kron(b.mat.transpose(), Eigen::MatrixXcd::Identity(d, d)), d};
}

// L(C) rho = 2 C rho C+ - C+C rho - rho C+C  (rates enter as Gamma/2 * dissipator).
inline Superoperator dissipator(const OperatorMatrix& c) {
    const int d = c.dim();
    const Eigen::MatrixXcd cd_ = c.mat.adjoint();
    const Eigen::MatrixXcd cdc = cd_ * c.mat;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd m = 2.0 * kron(cd_.transpose(), c.mat); // 2 spre(C) spost(C+)
    m -= kron(id, cdc);                                      // spre(C+C)
    m -= kron(cdc.transpose(), id);                          // spost(C+C)
    return {std::move(m), d};
}

// -i [H, rho] with H in rad/ps.
inline Superoperator commutator_superop(const OperatorMatrix& h) {
    const int d = h.dim();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const std::complex<double> mi(0.0, -1.0);
    return {mi * (kron(id, h.mat) - kron(h.mat.transpose(), id)), d};
}

// max_k |vec(I)^T L|_k — zero for a trace-preserving generator.
inline double trace_defect(const Superoperator& L) {
    const int d = L.dim;
    Eigen::RowVectorXcd tr = Eigen::RowVectorXcd::Zero(Eigen::Index(d) * d);
    for (int i = 0; i < d; ++i) tr(Eigen::Index(i) * d + i) = 1.0;
    return (tr * L.m).cwiseAbs().maxCoeff();
}

} // namespace qdpl
