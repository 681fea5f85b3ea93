// Command-line front end for the SM/AL-OFDM identifier. Talks to the core
// exclusively through the C API in stbcid/stbcid.h.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stbcid/stbcid.h"

namespace {

struct ConfigDeleter {
    void operator()(stbcid_config* c) const { stbcid_config_free(c); }
};
using ConfigPtr = std::unique_ptr<stbcid_config, ConfigDeleter>;

int report(int rc) {
    if (rc != STBCID_OK) std::fprintf(stderr, "error: %s\n", stbcid_last_error());
    return rc;
}

// Shared flag set; values are forwarded to the config as string overrides
// so the CLI stays a thin shell over the C API.
struct Flags {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;

    void add_common(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        add_opt(cmd, "--seed", "seed", "master seed (u64)");
        add_opt(cmd, "--trials", "trials", "Monte Carlo trials per grid point");
        add_opt(cmd, "--snr", "snr", "SNR grid, dB: \"a:b:step\" or comma list");
        add_opt(cmd, "--scheme", "scheme", "sm | al");
        add_opt(cmd, "--profile", "profile", "flat | exp | peda | veha");
        add_opt(cmd, "--paths", "paths", "number of channel paths");
        add_opt(cmd, "--pf", "pf", "false-alarm target P_F");
        add_opt(cmd, "--nrx", "nrx", "receive antennas");
        add_opt(cmd, "--n-symbols", "n_symbols", "OFDM symbols per trial");
        add_opt(cmd, "--n", "n", "subcarrier count N");
        add_opt(cmd, "--n-guard", "n_guard", "guard samples N_G");
        add_opt(cmd, "--n-window", "n_window", "window transition samples N_W");
        add_opt(cmd, "--phase-noise", "phase_noise", "phase noise rate betaT");
        add_opt(cmd, "--freq-offset", "freq_offset", "normalized frequency offset foT");
        add_opt(cmd, "--timing-offset", "timing_offset", "timing offset epsilon");
    }

    int apply(stbcid_config* cfg) const {
        if (!config_path.empty()) {
            if (const int rc = stbcid_config_load_file(cfg, config_path.c_str()))
                return report(rc);
        }
        for (const auto& [key, value] : overrides)
            if (const int rc = stbcid_config_set(cfg, key.c_str(), value.c_str()))
                return report(rc);
        return STBCID_OK;
    }

  private:
    void add_opt(CLI::App* cmd, const char* flag, std::string key, const char* desc) {
        cmd->add_option_function<std::string>(
            flag,
            [this, key = std::move(key)](const std::string& v) { overrides.emplace_back(key, v); },
            desc);
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SM-OFDM / AL-OFDM space-time-code identifier"};
    app.require_subcommand(1);

    Flags flags;
    std::string out_path;
    std::string prefix;
    std::int64_t flops_ns = 2000;
    int flops_n = 64;
    int flops_nu = 8;

    auto* gen = app.add_subcommand("generate", "synthesize a received signal and save it");
    flags.add_common(gen);
    gen->add_option("--out", prefix, "recording path prefix")->required();

    auto* cls = app.add_subcommand("classify", "classify a saved recording");
    flags.add_common(cls);
    cls->add_option("recording", prefix, "recording path prefix")->required();

    auto* ccf = app.add_subcommand("ccf", "emit an estimated CCF grid as CSV");
    flags.add_common(ccf);
    ccf->add_option("--out", out_path, "output CSV path")->required();

    auto* mc = app.add_subcommand("mc", "run a Monte Carlo experiment grid");
    flags.add_common(mc);
    mc->add_option("--out", out_path, "output CSV path")->required();

    auto* fl = app.add_subcommand("flops", "identification flop count");
    fl->add_option("--n-symbols", flops_ns, "OFDM symbols");
    fl->add_option("--n", flops_n, "subcarrier count N");
    fl->add_option("--nu", flops_nu, "total guard nu");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : STBCID_ERR_CONFIG;
    }

    if (fl->parsed()) {
        std::int64_t flops = 0;
        if (const int rc = report(stbcid_flops(flops_ns, flops_n, flops_nu, &flops))) return rc;
        std::printf("n_symbols=%lld n=%d nu=%d flops=%lld\n",
                    static_cast<long long>(flops_ns), flops_n, flops_nu,
                    static_cast<long long>(flops));
        return 0;
    }

    ConfigPtr cfg(stbcid_config_new());
    if (const int rc = flags.apply(cfg.get())) return rc;

    if (gen->parsed()) {
        if (const int rc = report(stbcid_generate(cfg.get(), prefix.c_str()))) return rc;
        std::printf("wrote recording set %s.*\n", prefix.c_str());
        return 0;
    }
    if (cls->parsed()) {
        stbcid_decision d{};
        if (const int rc = report(stbcid_classify(cfg.get(), prefix.c_str(), &d))) return rc;
        std::printf("label=%s exceedances=%d/%d threshold=%.6g sigma_hat=%.6g\n",
                    d.label_al ? "AL" : "SM", d.n_exceedances, d.n_features, d.threshold,
                    d.sigma_hat);
        return 0;
    }
    if (ccf->parsed()) {
        if (const int rc = report(stbcid_ccf(cfg.get(), out_path.c_str()))) return rc;
        std::printf("wrote %s\n", out_path.c_str());
        return 0;
    }
    if (mc->parsed()) {
        if (const int rc = report(stbcid_mc(cfg.get(), out_path.c_str()))) return rc;
        std::printf("wrote %s\n", out_path.c_str());
        return 0;
    }
    return STBCID_ERR_CONFIG;
}
