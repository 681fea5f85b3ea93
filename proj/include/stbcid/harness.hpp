#ifndef STBCID_HARNESS_HPP
#define STBCID_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stbcid/channel.hpp"
#include "stbcid/detector.hpp"
#include "stbcid/ofdm.hpp"
#include "stbcid/txchain.hpp"

namespace stbcid::harness {

/// Thrown on unreadable/unwritable paths and malformed recordings.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    tx::StbcScheme scheme = tx::StbcScheme::AL;
    std::vector<double> snr_grid{10.0};
    int n_symbols = 2000;
    int n_trials = 200;
    double p_false_alarm = 1e-2;
    int n_rx = 2;
    channel::Profile profile = channel::Profile::Exponential;
    int n_paths = 4;
    channel::ImpairmentSpec impairments;
    std::uint64_t master_seed = 1;
    std::string out_path;

    int n_subcarriers = 64;
    int n_guard = 6;
    int n_window = 2;
    tx::ConstellationFamily constellation_family = tx::ConstellationFamily::PSK;
    int constellation_order = 4;

    OfdmParams ofdm() const { return {n_subcarriers, n_guard, n_window}; }
    tx::ConstellationSpec constellation() const {
        return {constellation_family, constellation_order};
    }

    static ExperimentConfig from_json_file(const std::string& path);
    /// Applies one "flag" override, e.g. set("snr", "-10:10:2").
    void set(const std::string& key, const std::string& value);
};

struct ResultRecord {
    std::string scheme;
    double snr_db = 0.0;
    int n_symbols = 0;
    double p_false_alarm = 0.0;
    int n_rx = 0;
    std::string impair_kind;
    double impair_value = 0.0;
    int trials = 0;
    int correct = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double seconds = 0.0;
};

/// splitmix64 of (master_seed, grid_index, trial_index); decorrelated
/// per-trial streams.
std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t grid_index,
                       std::uint64_t trial_index);

/// Wilson score interval for x successes in n trials.
std::pair<double, double> wilson_interval(int successes, int trials, double z = 1.96);

/// One full generate -> channel -> impair -> classify pass, deterministic
/// given (cfg, snr_db, trial_seed).
detector::Decision run_trial(const ExperimentConfig& cfg, double snr_db,
                             std::uint64_t trial_seed);

/// Received streams for one trial, before classification (used by the
/// `generate` and `ccf` commands).
std::vector<SampleStream> synthesize_rx(const ExperimentConfig& cfg, double snr_db,
                                        std::uint64_t trial_seed);

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg);
void write_csv(const std::vector<ResultRecord>& records, const std::string& path);
std::string csv_header();
std::string csv_row(const ResultRecord& r);

/// Recording I/O: per antenna `<prefix>.ant<i>.iq` holds little-endian
/// float32 (I, Q) pairs; `<prefix>.meta.json` carries the OFDM parameters,
/// symbol count, scheme tag, sample-rate tag, and seed.
struct RecordingMeta {
    int n_subcarriers = 64;
    int n_guard = 6;
    int n_window = 2;
    int n_symbols = 0;
    std::string scheme;  // "sm", "al", or "" when unknown
    std::string sample_rate_tag = "unspecified";
    std::uint64_t seed = 0;
    std::vector<std::int64_t> origin_indices;
};

void write_recording(const std::vector<SampleStream>& streams, const RecordingMeta& meta,
                     const std::string& prefix);
std::pair<std::vector<SampleStream>, RecordingMeta> read_recording(const std::string& prefix);

} // namespace stbcid::harness

#endif
