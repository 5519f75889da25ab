// space.hpp — excitation-truncated Jaynes-Cummings state space and operator matrices.
// Truncation is by total excitation number n + [exciton=+], so n_max=2 gives 5 states
// and n_max=6 gives 13. Basis order: |-,0>, then per rung m>=1: |-,m>, |+,m-1>.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "qdpl/errors.hpp"
#include "qdpl/units.hpp"

namespace qdpl {

struct BasisState {
    int exciton; // 0 = ground (-), 1 = excited (+)
    int photons;
};

struct TruncatedSpace {
    int n_max = 0;
    int dim = 0;
    std::vector<BasisState> basis;

    static TruncatedSpace make(int n_max) {
        if (n_max < 1) throw Error("TruncatedSpace: n_max must be >= 1");
        TruncatedSpace s;
        s.n_max = n_max;
        s.basis.push_back({0, 0});
        for (int m = 1; m <= n_max; ++m) {
            s.basis.push_back({0, m});
            s.basis.push_back({1, m - 1});
        }
        s.dim = static_cast<int>(s.basis.size());
        return s;
    }

    // -1 when the state falls outside the truncated set.
    int index_of(int exciton, int photons) const {
        if (photons < 0 || exciton < 0 || exciton > 1) return -1;
        const int m = photons + exciton;
        if (m > n_max) return -1;
        if (m == 0) return 0;
        return 2 * m - 1 + exciton;
    }
};

struct OperatorMatrix {
    Eigen::MatrixXcd mat;
    int n_max = 0;

    OperatorMatrix() = default;
    OperatorMatrix(Eigen::MatrixXcd m, int n) : mat(std::move(m)), n_max(n) {}

    int dim() const { return static_cast<int>(mat.rows()); }

    OperatorMatrix adjoint() const { return {mat.adjoint(), n_max}; }

    bool is_hermitian(double tol = 1e-12) const {
        return (mat - mat.adjoint()).cwiseAbs().maxCoeff() < tol;
    }
};

inline void require_same_space(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.n_max != b.n_max || a.dim() != b.dim())
        throw Error("operators live on different truncated spaces");
}

inline OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a, b);
    return {a.mat * b.mat, a.n_max};
}

inline OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a, b);
    return {a.mat + b.mat, a.n_max};
}

inline OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a, b);
    return {a.mat - b.mat, a.n_max};
}

inline OperatorMatrix operator*(std::complex<double> c, const OperatorMatrix& a) {
    return {c * a.mat, a.n_max};
}

inline OperatorMatrix operator*(double c, const OperatorMatrix& a) { return {c * a.mat, a.n_max}; }

struct Operators {
    OperatorMatrix a;
    OperatorMatrix a_dag;
    OperatorMatrix sig_minus;
    OperatorMatrix sig_plus;
    OperatorMatrix sig_11;
    OperatorMatrix n_photon;
    OperatorMatrix identity;
};

// Bare dot/cavity operators on the truncated space; matrix elements leading out of
// the excitation-truncated set are dropped.
inline Operators build_operators(const TruncatedSpace& s) {
    auto zero = [&] { return OperatorMatrix{Eigen::MatrixXcd::Zero(s.dim, s.dim), s.n_max}; };
    Operators ops{zero(), zero(), zero(), zero(), zero(), zero(),
                  OperatorMatrix{Eigen::MatrixXcd::Identity(s.dim, s.dim), s.n_max}};
    for (int j = 0; j < s.dim; ++j) {
        const auto& st = s.basis[j];
        // a |sigma, n> = sqrt(n) |sigma, n-1>
        if (st.photons > 0) {
            const int tgt = s.index_of(st.exciton, st.photons - 1);
            if (tgt >= 0) ops.a.mat(tgt, j) = std::sqrt(double(st.photons));
        }
        // sigma^- |+, n> = |-, n>
        if (st.exciton == 1) {
            const int tgt = s.index_of(0, st.photons);
            if (tgt >= 0) ops.sig_minus.mat(tgt, j) = 1.0;
        }
    }
    ops.a_dag = ops.a.adjoint();
    ops.sig_plus = ops.sig_minus.adjoint();
    ops.sig_11 = ops.sig_plus * ops.sig_minus;
    ops.n_photon = ops.a_dag * ops.a;
    return ops;
}

} // namespace qdpl
