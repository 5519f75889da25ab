// qdpl — power-broadened photoluminescence of a driven quantum-dot cavity system
// with an acoustic-phonon bath. Subcommands: rates, sweep, fwhm, ipl, convergence.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qdpl/run.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qdpl::Error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"driven quantum-dot cavity photoluminescence simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string variant_override;
    int threads = 0;
    bool normalize = false;
    bool svg = false;

    app.add_option("--config", config_path, "path to the key = value config file")->required();
    app.add_option("--out", out_dir, "output directory (default .)");
    app.add_option("--threads", threads, "worker threads (default: hardware concurrency)");
    app.add_flag("--normalize", normalize, "peak-normalize curve outputs");
    app.add_flag("--svg", svg, "also render an SVG plot per curve");
    app.add_option("--variant", variant_override,
                   "override model variant: full|epme|one-phonon|no-phonon");

    for (const char* name : {"rates", "sweep", "fwhm", "ipl", "convergence"})
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        qdpl::RunConfig cfg = qdpl::parse_config(slurp(config_path));
        if (!variant_override.empty()) cfg.variant = qdpl::variant_from_string(variant_override);
        if (normalize) cfg.run.normalize = true;

        qdpl::RunContext ctx;
        ctx.out_dir = out_dir;
        ctx.threads = threads;
        ctx.svg = svg;

        const std::string sub = app.get_subcommands().front()->get_name();
        const int rc = qdpl::run_subcommand(sub, cfg, ctx);
        for (const auto& f : ctx.written) std::cout << "wrote " << f << "\n";
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
