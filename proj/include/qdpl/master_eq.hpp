// master_eq.hpp — polaron-frame system Hamiltonian, background dissipators, the
// Markovian TCL phonon scattering superoperator, the effective phonon Lindblad
// (EPME) generator, and the total Liouvillian for every model variant.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "qdpl/bath.hpp"
#include "qdpl/half_fourier.hpp"
#include "qdpl/params.hpp"
#include "qdpl/rates.hpp"
#include "qdpl/space.hpp"
#include "qdpl/superop.hpp"

namespace qdpl {

struct HamiltonianSet {
    OperatorMatrix h_sys; // rad/ps, Hermitian
    OperatorMatrix x_g;   // rad/ps (bath-coupled interaction operators, Hermitian)
    OperatorMatrix x_u;
    Eigen::VectorXd eigvals;
    Eigen::MatrixXcd eigvecs;
};

// H'_sys = (Delta_xL - Delta_P?) sig11 + Delta_cL a+a + <B> X_g, with the cavity drive
// eta_c (a + a+) entering un-renormalized (it commutes with the polaron transform).
// For an exciton-driven system the drive lives inside X_g and is renormalized by <B>.
inline HamiltonianSet build_system_hamiltonian(const TruncatedSpace& space,
                                               const SystemParams& p, double b_mean,
                                               double delta_p = 0.0) {
    const Operators ops = build_operators(space);
    const double dxl = p.delta_xL - (p.explicit_polaron_shift ? delta_p : 0.0);

    OperatorMatrix x_g = p.g * (ops.a_dag * ops.sig_minus + ops.sig_plus * ops.a);
    OperatorMatrix x_u =
        std::complex<double>(0.0, 1.0) * (p.g * (ops.sig_plus * ops.a - ops.a_dag * ops.sig_minus));
    if (p.drive_kind == DriveKind::exciton_driven) {
        x_g = x_g + p.eta_x * (ops.sig_plus + ops.sig_minus);
        x_u = x_u + std::complex<double>(0.0, 1.0) * (p.eta_x * (ops.sig_plus - ops.sig_minus));
    }

    OperatorMatrix h = dxl * ops.sig_11 + p.delta_cL * ops.n_photon + b_mean * x_g;
    if (p.drive_kind == DriveKind::cavity_driven && p.eta_c != 0.0)
        h = h + p.eta_c * (ops.a + ops.a_dag);

    HamiltonianSet set{std::move(h), std::move(x_g), std::move(x_u), {}, {}};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(set.h_sys.mat);
    if (es.info() != Eigen::Success) throw EigenFailure("H'_sys eigendecomposition failed");
    set.eigvals = es.eigenvalues();
    set.eigvecs = es.eigenvectors();
    return set;
}

// L(rho) = (gamma~/2) D[sigma-] + kappa D[a] + (gamma~'/2) D[sig11]. Both exciton
// channels carry the polaron-frame renormalization, gamma~ = gamma <B>^2 and
// gamma~' = gamma' <B>^2; the cavity decay is untouched. The gamma' factor is what
// the published FWHM tables were computed with (see the project notes).
inline Superoperator background_lindblad(const TruncatedSpace& space, const SystemParams& p,
                                         double b_mean) {
    const Operators ops = build_operators(space);
    const double b2 = b_mean * b_mean;
    const double gamma_tilde = p.gamma * b2;
    const double gamma_prime_tilde = p.gamma_prime * b2;
    Superoperator L = Superoperator::zero(space.dim);
    if (gamma_tilde != 0.0) L += 0.5 * gamma_tilde * dissipator(ops.sig_minus);
    if (p.kappa != 0.0) L += p.kappa * dissipator(ops.a);
    if (gamma_prime_tilde != 0.0) L += 0.5 * gamma_prime_tilde * dissipator(ops.sig_11);
    return L;
}

// The TCL phonon scattering term in its Markov limit, evaluated in the eigenbasis of the
// full (drive-dressed) H'_sys:
//   chi_m = sum_jk (X_m)_jk |j><k| K_m(E_j - E_k),  K_m(w) = Int_0^inf G_m(tau) e^{-iw tau} dtau
//   S(rho) = -sum_m ( [x_m, chi_m rho] + h.c. )
// which annihilates trace (commutator structure) and preserves Hermiticity.
inline Superoperator tcl_scattering_superop(const TruncatedSpace& space, const HamiltonianSet& h,
                                            const BathTable& table) {
    const int d = space.dim;
    Superoperator S = Superoperator::zero(d);
    if (table.phi.empty()) return S; // no phonon coupling
    const Eigen::MatrixXcd& U = h.eigvecs;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);

    const std::array<const std::vector<cd>*, 2> greens{&table.g_g, &table.g_u};
    const std::array<const OperatorMatrix*, 2> xs{&h.x_g, &h.x_u};
    for (int m = 0; m < 2; ++m) {
        const auto& G = *greens[m];
        bool all_zero = true;
        for (const auto& v : G)
            if (std::abs(v) != 0.0) {
                all_zero = false;
                break;
            }
        if (all_zero) continue;
        const Eigen::MatrixXcd xt = U.adjoint() * xs[m]->mat * U;
        Eigen::MatrixXcd chit(d, d);
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                const double w_jk = h.eigvals(j) - h.eigvals(k);
                chit(j, k) = xt(j, k) * half_fourier(G, table.tau_step, w_jk).value;
            }
        const Eigen::MatrixXcd chi = U * chit * U.adjoint();
        const Eigen::MatrixXcd& x = xs[m]->mat;
        // -( spre(x chi) - spre(chi) spost(x) + spost(chi+ x) - spre(x) spost(chi+) )
        S.m -= kron(id, x * chi);
        S.m += kron(x.transpose(), chi);
        S.m -= kron((chi.adjoint() * x).transpose(), id);
        S.m += kron(chi.conjugate(), x);
    }
    return S;
}

struct RateMask {
    bool sig_minus = true;
    bool sig_plus = true;
    bool feed = true;   // Gamma^{a+ sigma-}
    bool defeed = true; // Gamma^{sigma+ a}
};

struct LiouvillianOptions {
    RateMask mask{};
    bool include_stark_shifts = true;
};

// Effective phonon master equation: coherent part (H'_sys plus the four Stark-shift
// terms, each on its dissipator's D+D) plus background plus the four Lindblad channels.
// For a cavity-driven system Gamma^{sigma+-} = 0 identically.
inline Superoperator epme_liouvillian(const TruncatedSpace& space, const SystemParams& p,
                                      const PhononRates& rates, double b_mean,
                                      const LiouvillianOptions& opts = {}, double delta_p = 0.0) {
    const Operators ops = build_operators(space);
    HamiltonianSet h = build_system_hamiltonian(space, p, b_mean, delta_p);

    PhononRates r = rates;
    if (p.drive_kind == DriveKind::cavity_driven) {
        r.gamma_sig_minus = r.gamma_sig_plus = 0.0;
        r.delta_sig_minus = r.delta_sig_plus = 0.0;
    }
    if (!opts.mask.sig_minus) r.gamma_sig_minus = r.delta_sig_minus = 0.0;
    if (!opts.mask.sig_plus) r.gamma_sig_plus = r.delta_sig_plus = 0.0;
    if (!opts.mask.feed) r.gamma_feed = r.delta_feed = 0.0;
    if (!opts.mask.defeed) r.gamma_defeed = r.delta_defeed = 0.0;

    const OperatorMatrix feed_op = ops.a_dag * ops.sig_minus; // a+ sigma-
    const OperatorMatrix defeed_op = ops.sig_plus * ops.a;    // sigma+ a

    OperatorMatrix h_eff = h.h_sys;
    if (opts.include_stark_shifts) {
        h_eff = h_eff + r.delta_sig_minus * ops.sig_11 +
                r.delta_sig_plus * (ops.sig_minus * ops.sig_plus) +
                r.delta_feed * (feed_op.adjoint() * feed_op) +
                r.delta_defeed * (defeed_op.adjoint() * defeed_op);
    }

    Superoperator L = commutator_superop(h_eff);
    L += background_lindblad(space, p, b_mean);
    if (r.gamma_sig_minus != 0.0) L += 0.5 * r.gamma_sig_minus * dissipator(ops.sig_minus);
    if (r.gamma_sig_plus != 0.0) L += 0.5 * r.gamma_sig_plus * dissipator(ops.sig_plus);
    if (r.gamma_feed != 0.0) L += 0.5 * r.gamma_feed * dissipator(feed_op);
    if (r.gamma_defeed != 0.0) L += 0.5 * r.gamma_defeed * dissipator(defeed_op);
    return L;
}

// Total Liouvillian for the table's variant. The EPME path needs a RateCalculator
// (reused across sweep points); one is created on the fly when absent.
inline Superoperator full_liouvillian(const TruncatedSpace& space, const SystemParams& p,
                                      const BathTable& table, const LiouvillianOptions& opts = {},
                                      const RateCalculator* rc = nullptr) {
    p.validate();
    const double b = table.b_mean;
    switch (table.variant) {
        case ModelVariant::no_phonon: {
            HamiltonianSet h = build_system_hamiltonian(space, p, 1.0, 0.0);
            Superoperator L = commutator_superop(h.h_sys);
            L += background_lindblad(space, p, 1.0);
            return L;
        }
        case ModelVariant::one_phonon:
        case ModelVariant::full_polaron_tcl: {
            HamiltonianSet h = build_system_hamiltonian(space, p, b, table.delta_p);
            Superoperator L = commutator_superop(h.h_sys);
            L += background_lindblad(space, p, b);
            L += tcl_scattering_superop(space, h, table);
            return L;
        }
        case ModelVariant::epme: {
            PhononRates r;
            if (rc) {
                r = rc->rates(p);
            } else {
                RateCalculator tmp(std::make_shared<BathTable>(table));
                r = tmp.rates(p);
            }
            return epme_liouvillian(space, p, r, b, opts, table.delta_p);
        }
    }
    throw Error("full_liouvillian: unknown variant");
}

} // namespace qdpl
