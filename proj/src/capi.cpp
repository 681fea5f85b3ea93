#include "stbcid/stbcid.h"

#include <cstring>
#include <fstream>
#include <string>

#include "stbcid/cyclostat.hpp"
#include "stbcid/detector.hpp"
#include "stbcid/harness.hpp"

using namespace stbcid;

struct stbcid_config_s {
    harness::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return STBCID_OK;
    } catch (const harness::IoError& e) {
        return fail(STBCID_ERR_IO, e.what());
    } catch (const ConfigError& e) {
        return fail(STBCID_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(STBCID_ERR_CONFIG, e.what());
    }
}

} // namespace

extern "C" {

stbcid_config* stbcid_config_new(void) { return new stbcid_config_s(); }

void stbcid_config_free(stbcid_config* cfg) { delete cfg; }

int stbcid_config_load_file(stbcid_config* cfg, const char* path) {
    if (!cfg || !path) return fail(STBCID_ERR_CONFIG, "null argument");
    return guarded([&] { cfg->cfg = harness::ExperimentConfig::from_json_file(path); });
}

int stbcid_config_set(stbcid_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return fail(STBCID_ERR_CONFIG, "null argument");
    return guarded([&] { cfg->cfg.set(key, value); });
}

const char* stbcid_last_error(void) { return g_last_error.c_str(); }

const char* stbcid_version(void) { return "1.0.0"; }

int stbcid_generate(const stbcid_config* cfg, const char* prefix) {
    if (!cfg || !prefix) return fail(STBCID_ERR_CONFIG, "null argument");
    return guarded([&] {
        const auto& c = cfg->cfg;
        const auto seed = harness::mix_seed(c.master_seed, 0, 0);
        const auto rx = harness::synthesize_rx(c, c.snr_grid.at(0), seed);
        harness::RecordingMeta meta;
        meta.n_subcarriers = c.n_subcarriers;
        meta.n_guard = c.n_guard;
        meta.n_window = c.n_window;
        meta.n_symbols = c.n_symbols;
        meta.scheme = c.scheme == tx::StbcScheme::SM ? "sm" : "al";
        meta.seed = c.master_seed;
        for (const auto& s : rx) meta.origin_indices.push_back(s.origin_index);
        harness::write_recording(rx, meta, prefix);
    });
}

int stbcid_classify(const stbcid_config* cfg, const char* prefix, stbcid_decision* out) {
    if (!cfg || !prefix || !out) return fail(STBCID_ERR_CONFIG, "null argument");
    return guarded([&] {
        auto [streams, meta] = harness::read_recording(prefix);
        const OfdmParams params(meta.n_subcarriers, meta.n_guard, meta.n_window);
        const auto det = detector::DetectorConfig::defaults(params, cfg->cfg.p_false_alarm,
                                                            static_cast<int>(streams.size()));
        const auto d = detector::classify(streams, params, det);
        out->label_al = d.label == tx::StbcScheme::AL ? 1 : 0;
        out->n_exceedances = d.n_exceedances;
        out->threshold = d.threshold;
        out->sigma_hat = d.sigma_hat;
        out->n_features = static_cast<int>(d.feature_grid.entries.size());
    });
}

int stbcid_ccf(const stbcid_config* cfg, const char* out_csv) {
    if (!cfg || !out_csv) return fail(STBCID_ERR_CONFIG, "null argument");
    return guarded([&] {
        const auto& c = cfg->cfg;
        const OfdmParams params = c.ofdm();
        const auto seed = harness::mix_seed(c.master_seed, 0, 0);
        const auto rx = harness::synthesize_rx(c, c.snr_grid.at(0), seed);
        const auto sets = cyclostat::compute_delay_sets(params);
        const auto cfs = cyclostat::detector_cfs(params);
        std::vector<int> delays = sets.feature_delays;
        delays.insert(delays.end(), sets.noise_delays.begin(), sets.noise_delays.end());
        const auto grid =
            cyclostat::estimate_grid(rx[0].samples, rx[1].samples, cfs, delays);
        std::ofstream out(out_csv);
        if (!out) throw harness::IoError(std::string("cannot open output file: ") + out_csv);
        out << "alpha,tau,re,im,mag\n";
        char buf[256];
        for (const auto& e : grid.entries) {
            std::snprintf(buf, sizeof(buf), "%.10g,%d,%.10g,%.10g,%.10g\n", e.alpha, e.tau,
                          e.value.real(), e.value.imag(), std::abs(e.value));
            out << buf;
        }
        if (!out) throw harness::IoError(std::string("write failed: ") + out_csv);
    });
}

int stbcid_mc(const stbcid_config* cfg, const char* out_csv) {
    if (!cfg || !out_csv) return fail(STBCID_ERR_CONFIG, "null argument");
    return guarded([&] {
        const auto records = harness::run_experiment(cfg->cfg);
        harness::write_csv(records, out_csv);
    });
}

int stbcid_flops(int64_t n_symbols, int n, int nu, int64_t* out) {
    if (!out) return fail(STBCID_ERR_CONFIG, "null argument");
    return guarded([&] { *out = detector::flop_count(n_symbols, n, nu); });
}

} // extern "C"
