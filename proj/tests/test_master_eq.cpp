#include <doctest.h>

#include <cmath>
#include <random>

#include "qdpl/master_eq.hpp"
#include "qdpl/solver.hpp"

using namespace qdpl;

namespace {

const BathParams kBath4K{0.06, energy_to_angular(1000.0), 4.0};

SystemParams base_params(DriveKind drive, int n_max) {
    SystemParams p;
    p.g = energy_to_angular(20);
    p.gamma = energy_to_angular(2);
    p.kappa = energy_to_angular(50);
    p.gamma_prime = energy_to_angular(2);
    p.n_max = n_max;
    p.drive_kind = drive;
    return p;
}

Eigen::MatrixXcd random_hermitian(int d, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = cd(u(rng), u(rng));
    return 0.5 * (m + m.adjoint().eval());
}

} // namespace

TEST_CASE("system Hamiltonian structure") {
    const auto space = TruncatedSpace::make(2);

    SUBCASE("g = eta = 0 is diagonal with n Delta_cL + [exciton] Delta_xL") {
        SystemParams p = base_params(DriveKind::exciton_driven, 2);
        p.g = 0.0;
        p.delta_xL = energy_to_angular(120);
        p.delta_cL = energy_to_angular(-75);
        const auto h = build_system_hamiltonian(space, p, 0.9);
        for (int j = 0; j < space.dim; ++j) {
            const auto& st = space.basis[j];
            const double expect = st.photons * p.delta_cL + st.exciton * p.delta_xL;
            CHECK(std::real(h.h_sys.mat(j, j)) == doctest::Approx(expect).epsilon(1e-14));
        }
        CHECK(h.h_sys.mat.cwiseAbs().sum() ==
              doctest::Approx(h.h_sys.mat.diagonal().cwiseAbs().sum()));
    }

    SUBCASE("one-excitation splitting is 2<B>g on resonance") {
        SystemParams p = base_params(DriveKind::exciton_driven, 1);
        p.delta_xL = p.delta_cL = energy_to_angular(500);
        const double b = 0.91;
        const auto h = build_system_hamiltonian(TruncatedSpace::make(1), p, b);
        // eigenvalues: {0, Delta - <B>g, Delta + <B>g}
        Eigen::VectorXd ev = h.eigvals;
        std::sort(ev.data(), ev.data() + ev.size());
        CHECK(ev(2) - ev(1) == doctest::Approx(2.0 * b * p.g).epsilon(1e-12));
    }

    SUBCASE("exciton drive enters as <B> eta_x") {
        SystemParams p = base_params(DriveKind::exciton_driven, 2);
        p.eta_x = energy_to_angular(40);
        const double b = 0.91;
        const auto h = build_system_hamiltonian(space, p, b);
        const int g0 = space.index_of(0, 0), e0 = space.index_of(1, 0);
        CHECK(std::real(h.h_sys.mat(e0, g0)) == doctest::Approx(b * p.eta_x).epsilon(1e-14));
        // but the interaction operator X_g keeps the bare drive
        CHECK(std::real(h.x_g.mat(e0, g0)) == doctest::Approx(p.eta_x).epsilon(1e-14));
    }

    SUBCASE("cavity drive is not renormalized") {
        SystemParams p = base_params(DriveKind::cavity_driven, 2);
        p.eta_c = energy_to_angular(30);
        const auto h = build_system_hamiltonian(space, p, 0.5);
        const int g0 = space.index_of(0, 0), g1 = space.index_of(0, 1);
        CHECK(std::real(h.h_sys.mat(g1, g0)) == doctest::Approx(p.eta_c).epsilon(1e-14));
        // and X_g carries no drive term for cavity pumping
        CHECK(std::abs(h.x_g.mat(g1, g0)) == 0.0);
    }

    SUBCASE("hermiticity and spectral reconstruction") {
        SystemParams p = base_params(DriveKind::exciton_driven, 2);
        p.eta_x = energy_to_angular(40);
        p.delta_xL = energy_to_angular(-300);
        p.delta_cL = p.delta_xL + energy_to_angular(3000);
        const auto h = build_system_hamiltonian(space, p, 0.84);
        CHECK(h.h_sys.is_hermitian());
        CHECK(h.x_g.is_hermitian());
        CHECK(h.x_u.is_hermitian());
        const Eigen::MatrixXcd rebuilt =
            h.eigvecs * h.eigvals.asDiagonal() * h.eigvecs.adjoint();
        CHECK((rebuilt - h.h_sys.mat).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("background dissipators") {
    const auto space = TruncatedSpace::make(1);
    const auto ops = build_operators(space);

    SystemParams p = base_params(DriveKind::exciton_driven, 1);
    p.g = 0.0;

    SUBCASE("excited exciton decays at gamma~ = gamma <B>^2") {
        const double b = 0.91;
        CHECK(b * b == doctest::Approx(0.8281));
        const Superoperator L = background_lindblad(space, p, b);
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(3, 3);
        rho0(space.index_of(1, 0), space.index_of(1, 0)) = 1.0;
        const double t = 40.0;
        const auto traj = evolve(rho0, L, std::vector<double>{t});
        const double nx = std::real(expectation(traj[0], ops.sig_11));
        CHECK(nx == doctest::Approx(std::exp(-p.gamma * b * b * t)).epsilon(1e-6));
    }

    SUBCASE("single photon decays at 2 kappa") {
        const Superoperator L = background_lindblad(space, p, 1.0);
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(3, 3);
        rho0(space.index_of(0, 1), space.index_of(0, 1)) = 1.0;
        const double t = 8.0;
        const auto traj = evolve(rho0, L, std::vector<double>{t});
        const double nc = std::real(expectation(traj[0], ops.n_photon));
        CHECK(nc == doctest::Approx(std::exp(-2.0 * p.kappa * t)).epsilon(1e-6));
    }

    SUBCASE("gamma' dephases coherence at gamma'/2") {
        SystemParams q = p;
        q.gamma = 0.0;
        q.kappa = 0.0;
        const Superoperator L = background_lindblad(space, q, 1.0);
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(3, 3);
        const int g0 = space.index_of(0, 0), e0 = space.index_of(1, 0);
        rho0(g0, g0) = rho0(e0, e0) = 0.5;
        rho0(g0, e0) = rho0(e0, g0) = 0.5;
        const double t = 20.0;
        const auto traj = evolve(rho0, L, std::vector<double>{t});
        CHECK(std::abs(traj[0](g0, e0)) ==
              doctest::Approx(0.5 * std::exp(-0.5 * q.gamma_prime * t)).epsilon(1e-6));
    }
}

TEST_CASE("TCL scattering superoperator") {
    const auto space = TruncatedSpace::make(2);
    SystemParams p = base_params(DriveKind::exciton_driven, 2);
    p.eta_x = energy_to_angular(40);
    p.delta_cL = energy_to_angular(3000);

    SUBCASE("empty bath gives the zero superoperator") {
        const auto table = BathTable::build({0.0, 1.5, 4.0}, ModelVariant::full_polaron_tcl);
        const auto h = build_system_hamiltonian(space, p, 1.0);
        const auto S = tcl_scattering_superop(space, h, table);
        CHECK(S.m.cwiseAbs().maxCoeff() == 0.0);
    }

    const auto table = BathTable::build(kBath4K, ModelVariant::full_polaron_tcl);
    const auto h = build_system_hamiltonian(space, p, table.b_mean);
    const auto S = tcl_scattering_superop(space, h, table);

    SUBCASE("annihilates trace") {
        CHECK(trace_defect(S) < 1e-12 * S.m.cwiseAbs().maxCoeff());
        const Eigen::MatrixXcd rho = random_hermitian(space.dim, 3);
        CHECK(std::abs(S.apply(rho).trace()) < 1e-12);
    }

    SUBCASE("preserves hermiticity") {
        const Eigen::MatrixXcd rho = random_hermitian(space.dim, 5);
        const Eigen::MatrixXcd out = S.apply(rho);
        CHECK((out - out.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("TCL phonon transfer rates match the EPME rates at weak dressing") {
    // n_max = 1, g = 0, resonant exciton drive: population transfer extracted from the
    // time decay under the scattering term alone vs Gamma^{sigma+-} from the rates module.
    const auto space = TruncatedSpace::make(1);
    SystemParams p = base_params(DriveKind::exciton_driven, 1);
    p.g = 0.0;
    p.eta_x = energy_to_angular(40);
    p.delta_xL = 0.0;
    p.delta_cL = 0.0;

    const auto table = std::make_shared<BathTable>(
        BathTable::build(kBath4K, ModelVariant::full_polaron_tcl));
    const auto h = build_system_hamiltonian(space, p, table->b_mean);
    const Superoperator S = tcl_scattering_superop(space, h, *table);

    RateCalculator rc(std::make_shared<BathTable>(BathTable::build(kBath4K, ModelVariant::epme)));
    const auto [gm, gp] = rc.eid_rates(p.eta_x, 0.0);

    const int g0 = space.index_of(0, 0), e0 = space.index_of(1, 0);
    Eigen::MatrixXcd rho_e = Eigen::MatrixXcd::Zero(3, 3);
    rho_e(e0, e0) = 1.0;
    Eigen::MatrixXcd rho_g = Eigen::MatrixXcd::Zero(3, 3);
    rho_g(g0, g0) = 1.0;
    const auto ops = build_operators(space);

    const double down = -std::real(expectation(S.apply(rho_e), ops.sig_11));
    const double up = std::real(expectation(S.apply(rho_g), ops.sig_11));
    CHECK(down + up == doctest::Approx(gm + gp).epsilon(0.15));

    // time-decay extraction: n_x relaxes toward its fixed point at ~(down+up)
    const double rate0 = down + up;
    std::vector<double> ts{0.25 / rate0, 0.5 / rate0};
    const auto traj = evolve(rho_g, S, ts);
    const double nx_inf = up / (up + down);
    const double d1 = nx_inf - std::real(expectation(traj[0], ops.sig_11));
    const double d2 = nx_inf - std::real(expectation(traj[1], ops.sig_11));
    const double fitted = std::log(d1 / d2) / (ts[1] - ts[0]);
    CHECK(fitted == doctest::Approx(gm + gp).epsilon(0.15));
}

TEST_CASE("EPME Liouvillian") {
    const auto space = TruncatedSpace::make(2);
    SystemParams p = base_params(DriveKind::exciton_driven, 2);
    p.eta_x = energy_to_angular(40);
    p.delta_cL = energy_to_angular(3000);

    SUBCASE("zero rates reduce exactly to coherent + background") {
        const PhononRates none{};
        const Superoperator L = epme_liouvillian(space, p, none, 0.91);
        const auto h = build_system_hamiltonian(space, p, 0.91);
        Superoperator expect = commutator_superop(h.h_sys);
        expect += background_lindblad(space, p, 0.91);
        CHECK((L.m - expect.m).cwiseAbs().maxCoeff() < 1e-14);
    }

    SUBCASE("cavity-driven EPME carries no sigma channels") {
        SystemParams q = base_params(DriveKind::cavity_driven, 2);
        q.eta_c = energy_to_angular(40);
        q.delta_cL = energy_to_angular(500);
        PhononRates r;
        r.gamma_sig_minus = r.gamma_sig_plus = energy_to_angular(5); // must be ignored
        r.delta_sig_minus = r.delta_sig_plus = energy_to_angular(1);
        r.gamma_feed = energy_to_angular(0.2);
        r.gamma_defeed = energy_to_angular(0.1);
        const Superoperator L = epme_liouvillian(space, q, r, 0.91);
        PhononRates feeding_only = r;
        feeding_only.gamma_sig_minus = feeding_only.gamma_sig_plus = 0.0;
        feeding_only.delta_sig_minus = feeding_only.delta_sig_plus = 0.0;
        const Superoperator L2 = epme_liouvillian(space, q, feeding_only, 0.91);
        CHECK((L.m - L2.m).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("rate mask removes exactly one channel") {
        PhononRates r;
        r.gamma_sig_minus = energy_to_angular(0.4);
        r.gamma_sig_plus = energy_to_angular(0.3);
        r.gamma_feed = energy_to_angular(0.2);
        r.gamma_defeed = energy_to_angular(0.1);
        LiouvillianOptions opts;
        opts.mask = {true, true, false, true};
        const Superoperator masked = epme_liouvillian(space, p, r, 0.91, opts);
        PhononRates no_feed = r;
        no_feed.gamma_feed = 0.0;
        const Superoperator direct = epme_liouvillian(space, p, no_feed, 0.91);
        CHECK((masked.m - direct.m).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("<B> with fixed rates changes only the coherent part") {
        SystemParams q = p;
        q.gamma = 0.0;       // both exciton channels carry <B>^2, so drop them and
        q.gamma_prime = 0.0; // compare the remaining (kappa-only) incoherent part
        PhononRates r;
        r.gamma_sig_minus = energy_to_angular(0.4);
        r.gamma_feed = energy_to_angular(0.2);
        const Superoperator L1 = epme_liouvillian(space, q, r, 1.0);
        const Superoperator L2 = epme_liouvillian(space, q, r, 0.5);
        const auto h1 = build_system_hamiltonian(space, q, 1.0);
        const auto h2 = build_system_hamiltonian(space, q, 0.5);
        const Eigen::MatrixXcd diff = L1.m - L2.m;
        const Eigen::MatrixXcd coherent_diff =
            commutator_superop(h1.h_sys).m - commutator_superop(h2.h_sys).m;
        CHECK((diff - coherent_diff).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("assembled Liouvillians preserve trace and hermiticity") {
    const auto space = TruncatedSpace::make(2);
    SystemParams p = base_params(DriveKind::exciton_driven, 2);
    p.eta_x = energy_to_angular(40);
    p.delta_xL = energy_to_angular(-200);
    p.delta_cL = p.delta_xL + energy_to_angular(3000);

    for (ModelVariant v : {ModelVariant::no_phonon, ModelVariant::one_phonon,
                           ModelVariant::full_polaron_tcl, ModelVariant::epme}) {
        CAPTURE(to_string(v));
        const auto table = BathTable::build(kBath4K, v);
        const Superoperator L = full_liouvillian(space, p, table);
        CHECK(trace_defect(L) < 1e-10 * L.m.cwiseAbs().maxCoeff());
        const Eigen::MatrixXcd rho = random_hermitian(space.dim, 11);
        const Eigen::MatrixXcd out = L.apply(rho);
        CHECK((out - out.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("full TCL collapses to the no-phonon generator as alpha_p -> 0") {
    const auto space = TruncatedSpace::make(2);
    SystemParams p = base_params(DriveKind::exciton_driven, 2);
    p.eta_x = energy_to_angular(40);
    p.delta_cL = energy_to_angular(3000);

    const auto none = BathTable::build({0.0, energy_to_angular(1000.0), 4.0},
                                       ModelVariant::no_phonon);
    const Superoperator L0 = full_liouvillian(space, p, none);
    double prev = 1e300;
    for (double a : {0.01, 0.003, 0.001}) {
        const auto table =
            BathTable::build({a, energy_to_angular(1000.0), 4.0}, ModelVariant::full_polaron_tcl);
        const Superoperator L = full_liouvillian(space, p, table);
        const double gap = (L.m - L0.m).cwiseAbs().maxCoeff() / L0.m.cwiseAbs().maxCoeff();
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 5e-3);
}
