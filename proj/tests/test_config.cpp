#include <doctest.h>

#include "qdpl/config.hpp"

using namespace qdpl;

namespace {
const char* kCanonical = R"(
# reference dot-driven parameter set
[bath]
alpha_p = 0.06
omega_b_mev = 1
temperature = 4

[system]
g = 20
kappa = 50
gamma = 2
gamma_prime = 2
delta_cx = 3000
eta_x = 40

[run]
variant = full
)";
}

TEST_CASE("reference config parses to the expected parameter set") {
    const RunConfig cfg = parse_config(kCanonical);
    CHECK(cfg.bath.alpha_p == doctest::Approx(0.06));
    CHECK(angular_to_energy(cfg.bath.omega_b) == doctest::Approx(1000.0));
    CHECK(cfg.bath.temperature == doctest::Approx(4.0));
    CHECK(angular_to_energy(cfg.system.g) == doctest::Approx(20.0));
    CHECK(angular_to_energy(cfg.system.kappa) == doctest::Approx(50.0));
    CHECK(angular_to_energy(cfg.system.gamma) == doctest::Approx(2.0));
    CHECK(angular_to_energy(cfg.system.gamma_prime) == doctest::Approx(2.0));
    CHECK(angular_to_energy(cfg.system.delta_cx()) == doctest::Approx(3000.0));
    CHECK(angular_to_energy(cfg.system.eta_x) == doctest::Approx(40.0));
    CHECK(cfg.system.drive_kind == DriveKind::exciton_driven);
    CHECK(cfg.system.n_max == 2); // dot-driven default
    CHECK(cfg.variant == ModelVariant::full_polaron_tcl);
}

TEST_CASE("cavity-driven default truncation is six photons") {
    std::string text = kCanonical;
    text.replace(text.find("eta_x = 40"), 10, "eta_c = 40");
    const RunConfig cfg = parse_config(text);
    CHECK(cfg.system.drive_kind == DriveKind::cavity_driven);
    CHECK(cfg.system.n_max == 6);
}

TEST_CASE("config validation failures") {
    SUBCASE("missing required keys are listed") {
        try {
            parse_config("[bath]\nalpha_p = 0.06\nomega_b = 1000\ntemperature = 4\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("[system] g") != std::string::npos);
            CHECK(msg.find("gamma") != std::string::npos);
            CHECK(msg.find("eta_x or eta_c") != std::string::npos);
        }
    }

    SUBCASE("both drives set") {
        std::string text = kCanonical;
        text.replace(text.find("eta_x = 40"), 10, "eta_x = 40\neta_c = 40");
        CHECK_THROWS_AS(parse_config(text), ConfigError);
    }

    SUBCASE("unknown keys are hard errors") {
        std::string text = kCanonical;
        text += "\n[system]\netax = 40\n";
        CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("unknown [system] key 'etax'"),
                             ConfigError);
    }

    SUBCASE("keys outside sections are rejected") {
        CHECK_THROWS_AS(parse_config("alpha_p = 0.06\n"), ConfigError);
    }

    SUBCASE("malformed numbers carry the line") {
        std::string text = kCanonical;
        text.replace(text.find("g = 20"), 6, "g = twenty");
        CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("expects a number"),
                             ConfigError);
    }
}

TEST_CASE("alpha convention switch") {
    std::string text = kCanonical;
    text.replace(text.find("alpha_p = 0.06"), 14,
                 "alpha_p = 0.06\nalpha_convention = two_pi_squared");
    const RunConfig cfg = parse_config(text);
    CHECK(cfg.bath.alpha_p == doctest::Approx(0.06 * 4.0 * M_PI * M_PI));
}

TEST_CASE("resolved metadata covers the physics keys") {
    const RunConfig cfg = parse_config(kCanonical);
    const auto kv = cfg.resolved();
    auto find = [&](const std::string& k) {
        for (const auto& [key, val] : kv)
            if (key == k) return val;
        return std::string("<missing>");
    };
    CHECK(find("g_uev") == "20");
    CHECK(find("variant") == "full");
    CHECK(find("drive") == "exciton-driven");
}
