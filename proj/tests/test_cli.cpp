#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qdpl/run.hpp"

using namespace qdpl;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmallSweep = R"(
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
variant = epme
grid_min = -400
grid_max = 400
grid_step = 20
)";

} // namespace

TEST_CASE("sweep subcommand is deterministic across runs and thread counts") {
    const RunConfig cfg = parse_config(kSmallSweep);
    const auto dir = std::filesystem::temp_directory_path() / "qdpl_cli_test";
    std::filesystem::remove_all(dir);

    RunContext one;
    one.out_dir = (dir / "a").string();
    one.threads = 1;
    CHECK(run_subcommand("sweep", cfg, one) == 0);

    RunContext two;
    two.out_dir = (dir / "b").string();
    two.threads = 2;
    CHECK(run_subcommand("sweep", cfg, two) == 0);

    RunContext again;
    again.out_dir = (dir / "c").string();
    again.threads = 2;
    CHECK(run_subcommand("sweep", cfg, again) == 0);

    const std::string a = slurp((dir / "a" / "sweep.csv").string());
    const std::string b = slurp((dir / "b" / "sweep.csv").string());
    const std::string c = slurp((dir / "c" / "sweep.csv").string());
    CHECK(a == b);
    CHECK(b == c);

    // resolved configuration embedded as metadata
    CHECK(a.find("# g_uev = 20") != std::string::npos);
    CHECK(a.find("# variant = epme") != std::string::npos);
    CHECK(a.find("detuning_ueV,i_x,i_c") != std::string::npos);
}

TEST_CASE("rates subcommand emits the documented columns") {
    RunConfig cfg = parse_config(kSmallSweep);
    cfg.run.rates_min_uev = -100;
    cfg.run.rates_max_uev = 100;
    cfg.run.rates_step_uev = 50;
    const auto dir = std::filesystem::temp_directory_path() / "qdpl_cli_rates";
    std::filesystem::remove_all(dir);
    RunContext ctx;
    ctx.out_dir = dir.string();
    CHECK(run_subcommand("rates", cfg, ctx) == 0);
    const std::string csv = slurp((dir / "rates.csv").string());
    CHECK(csv.find("detuning_ueV,gamma_sig_minus,gamma_sig_plus,gamma_feed,gamma_defeed,"
                   "delta_sig_minus,delta_sig_plus,delta_feed,delta_defeed") !=
          std::string::npos);
}

TEST_CASE("unknown subcommand is rejected") {
    const RunConfig cfg = parse_config(kSmallSweep);
    RunContext ctx;
    CHECK_THROWS_AS(run_subcommand("spectra", cfg, ctx), Error);
}
