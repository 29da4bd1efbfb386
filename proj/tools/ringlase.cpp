#include <iostream>

#include "CLI11.hpp"
#include "ringlase/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Self-pumped microring photon-pair simulator"};
    app.set_version_flag("--version", RINGLASE_VERSION);

    ringlase::RunOptions opts;
    std::string out_dir, input;
    std::uint64_t seed = 0;
    double power = 0.0;
    bool no_timestamp = false;

    app.add_option("command", opts.command,
                   "lasing-curve | pump-spectra | jsd | schmidt | coincidences | validate")
        ->required();
    app.add_option("--config", opts.config_path, "scenario JSON")->required();
    auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides seed)");
    app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp from output headers");
    auto* power_opt = app.add_option("--power", power, "jsd: single ring input power in mW; 0 forces a CW pump");
    auto* input_opt = app.add_option("--input", input, "schmidt: JSD/JSA matrix file to decompose");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ringlase::kExitConfig;
    }
    if (*out_opt) opts.out_dir = out_dir;
    if (*seed_opt) opts.seed = seed;
    if (*power_opt) opts.power_mw = power;
    if (*input_opt) opts.input = input;
    opts.timestamp = !no_timestamp;
    return ringlase::run(opts, std::cout, std::cerr);
}
