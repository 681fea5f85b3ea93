#include "stbcid/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace stbcid::harness {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::vector<double> parse_snr_spec(const std::string& spec) {
    // "a:b:step" range or a comma-separated list.
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double a = 0.0, b = 0.0, step = 1.0;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0.0)
            throw ConfigError("bad SNR range, expected a:b:step");
        for (double v = a; v <= b + 1e-9; v += step) out.push_back(v);
    } else {
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    }
    if (out.empty()) throw ConfigError("empty SNR grid");
    return out;
}

tx::StbcScheme scheme_from_string(const std::string& s) {
    if (s == "sm" || s == "SM") return tx::StbcScheme::SM;
    if (s == "al" || s == "AL") return tx::StbcScheme::AL;
    throw ConfigError("unknown scheme: " + s);
}

std::string impair_kind(const channel::ImpairmentSpec& imp) {
    if (imp.phase_noise_rate > 0.0) return "phase_noise";
    if (imp.freq_offset != 0.0) return "freq_offset";
    if (imp.timing_offset > 0.0) return "timing_offset";
    return "none";
}

double impair_value(const channel::ImpairmentSpec& imp) {
    if (imp.phase_noise_rate > 0.0) return imp.phase_noise_rate;
    if (imp.freq_offset != 0.0) return imp.freq_offset;
    if (imp.timing_offset > 0.0) return imp.timing_offset;
    return 0.0;
}

void write_le_float(std::ofstream& out, float v) {
    static_assert(sizeof(float) == 4);
    // Little-endian host assumed; bytes written in memory order.
    out.write(reinterpret_cast<const char*>(&v), 4);
}

} // namespace

std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t grid_index,
                       std::uint64_t trial_index) {
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ splitmix64(grid_index + 0x1234567ULL));
    s = splitmix64(s ^ splitmix64(trial_index + 0x89ABCDEFULL));
    return s;
}

std::pair<double, double> wilson_interval(int successes, int trials, double z) {
    if (trials <= 0) return {0.0, 1.0};
    const double n = trials;
    const double p = successes / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    for (const auto& [key, val] : j.items()) {
        if (key == "snr" && val.is_array()) {
            cfg.snr_grid = val.get<std::vector<double>>();
        } else if (val.is_string()) {
            cfg.set(key, val.get<std::string>());
        } else {
            cfg.set(key, val.dump());
        }
    }
    return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    try {
        if (key == "scheme") scheme = scheme_from_string(value);
        else if (key == "snr") snr_grid = parse_snr_spec(value);
        else if (key == "n_symbols") n_symbols = std::stoi(value);
        else if (key == "trials") n_trials = std::stoi(value);
        else if (key == "pf") p_false_alarm = std::stod(value);
        else if (key == "nrx") n_rx = std::stoi(value);
        else if (key == "profile") profile = channel::profile_from_string(value);
        else if (key == "paths") n_paths = std::stoi(value);
        else if (key == "phase_noise") impairments.phase_noise_rate = std::stod(value);
        else if (key == "freq_offset") impairments.freq_offset = std::stod(value);
        else if (key == "timing_offset") impairments.timing_offset = std::stod(value);
        else if (key == "seed") master_seed = std::stoull(value);
        else if (key == "out") out_path = value;
        else if (key == "n") n_subcarriers = std::stoi(value);
        else if (key == "n_guard") n_guard = std::stoi(value);
        else if (key == "n_window") n_window = std::stoi(value);
        else if (key == "order") constellation_order = std::stoi(value);
        else if (key == "constellation") {
            if (value == "psk") constellation_family = tx::ConstellationFamily::PSK;
            else if (value == "qam") constellation_family = tx::ConstellationFamily::QAM;
            else throw ConfigError("unknown constellation family: " + value);
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const ConfigError*>(&e)) throw;
        throw ConfigError("bad value for " + key + ": " + value);
    }
    if (profile == channel::Profile::Flat) n_paths = 1;
}

std::vector<SampleStream> synthesize_rx(const ExperimentConfig& cfg, double snr_db,
                                        std::uint64_t trial_seed) {
    const OfdmParams params = cfg.ofdm();
    std::mt19937_64 channel_rng(splitmix64(trial_seed ^ 0x11ULL));
    std::mt19937_64 noise_rng(splitmix64(trial_seed ^ 0x22ULL));
    std::mt19937_64 pn_rng(splitmix64(trial_seed ^ 0x33ULL));
    const std::uint64_t data_seed = splitmix64(trial_seed ^ 0x44ULL);

    const auto txs = tx::generate_signal(cfg.scheme, params, cfg.constellation(),
                                         cfg.n_symbols, data_seed);
    const auto ch = channel::draw_channel(cfg.n_paths, cfg.profile, cfg.n_rx, channel_rng);
    auto rx = channel::apply_channel({txs[0], txs[1]}, ch);

    // Receiver observes M_r = N_s (N+nu) samples from m = 0 (the leading
    // partial CP ramp before m = 0 is discarded).
    const auto m_r = static_cast<size_t>(cfg.n_symbols) * static_cast<size_t>(params.symbol_len());
    for (auto& s : rx) {
        const auto skip = static_cast<size_t>(-s.origin_index);
        s.samples.erase(s.samples.begin(), s.samples.begin() + static_cast<std::ptrdiff_t>(skip));
        s.samples.resize(m_r);
        s.origin_index = 0;
    }

    channel::apply_timing_offset(rx, cfg.impairments.timing_offset);
    channel::apply_freq_offset(rx, cfg.impairments.freq_offset, params);
    channel::apply_phase_noise(rx, cfg.impairments.phase_noise_rate, params, pn_rng);
    channel::add_awgn(rx, snr_db, noise_rng);
    return rx;
}

detector::Decision run_trial(const ExperimentConfig& cfg, double snr_db,
                             std::uint64_t trial_seed) {
    const OfdmParams params = cfg.ofdm();
    const auto rx = synthesize_rx(cfg, snr_db, trial_seed);
    const auto det = detector::DetectorConfig::defaults(params, cfg.p_false_alarm, cfg.n_rx);
    return detector::classify(rx, params, det);
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
    std::vector<ResultRecord> records;
    for (size_t gi = 0; gi < cfg.snr_grid.size(); ++gi) {
        const double snr = cfg.snr_grid[gi];
        const auto t0 = std::chrono::steady_clock::now();
        int correct = 0;
        for (int t = 0; t < cfg.n_trials; ++t) {
            const auto seed = mix_seed(cfg.master_seed, gi, static_cast<std::uint64_t>(t));
            const auto decision = run_trial(cfg, snr, seed);
            if (decision.label == cfg.scheme) ++correct;
        }
        const auto t1 = std::chrono::steady_clock::now();
        ResultRecord r;
        r.scheme = cfg.scheme == tx::StbcScheme::SM ? "sm" : "al";
        r.snr_db = snr;
        r.n_symbols = cfg.n_symbols;
        r.p_false_alarm = cfg.p_false_alarm;
        r.n_rx = cfg.n_rx;
        r.impair_kind = impair_kind(cfg.impairments);
        r.impair_value = impair_value(cfg.impairments);
        r.trials = cfg.n_trials;
        r.correct = correct;
        r.p_hat = cfg.n_trials > 0 ? static_cast<double>(correct) / cfg.n_trials : 0.0;
        std::tie(r.ci_lo, r.ci_hi) = wilson_interval(correct, cfg.n_trials);
        r.seconds = std::chrono::duration<double>(t1 - t0).count();
        records.push_back(std::move(r));
    }
    return records;
}

std::string csv_header() {
    return "scheme,snr_db,n_symbols,p_fa,n_rx,impair_kind,impair_value,trials,correct,"
           "p_hat,ci_lo,ci_hi,seconds";
}

std::string csv_row(const ResultRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s,%.6g,%d,%.6g,%d,%s,%.6g,%d,%d,%.6f,%.6f,%.6f,%.3f",
                  r.scheme.c_str(), r.snr_db, r.n_symbols, r.p_false_alarm, r.n_rx,
                  r.impair_kind.c_str(), r.impair_value, r.trials, r.correct, r.p_hat, r.ci_lo,
                  r.ci_hi, r.seconds);
    return buf;
}

void write_csv(const std::vector<ResultRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    out << csv_header() << "\n";
    for (const auto& r : records) out << csv_row(r) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

void write_recording(const std::vector<SampleStream>& streams, const RecordingMeta& meta,
                     const std::string& prefix) {
    for (size_t i = 0; i < streams.size(); ++i) {
        const std::string path = prefix + ".ant" + std::to_string(i) + ".iq";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open output file: " + path);
        for (const auto& v : streams[i].samples) {
            write_le_float(out, static_cast<float>(v.real()));
            write_le_float(out, static_cast<float>(v.imag()));
        }
        if (!out) throw IoError("write failed: " + path);
    }
    nlohmann::json j;
    j["n"] = meta.n_subcarriers;
    j["n_guard"] = meta.n_guard;
    j["n_window"] = meta.n_window;
    j["n_symbols"] = meta.n_symbols;
    j["scheme"] = meta.scheme;
    j["sample_rate_tag"] = meta.sample_rate_tag;
    j["seed"] = meta.seed;
    j["n_antennas"] = streams.size();
    std::vector<std::int64_t> origins;
    for (const auto& s : streams) origins.push_back(s.origin_index);
    j["origin_indices"] = origins;
    std::ofstream out(prefix + ".meta.json");
    if (!out) throw IoError("cannot open output file: " + prefix + ".meta.json");
    out << j.dump(2) << "\n";
}

std::pair<std::vector<SampleStream>, RecordingMeta> read_recording(const std::string& prefix) {
    std::ifstream min(prefix + ".meta.json");
    if (!min) throw IoError("cannot open metadata file: " + prefix + ".meta.json");
    nlohmann::json j;
    try {
        min >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed metadata: ") + e.what());
    }
    RecordingMeta meta;
    try {
        meta.n_subcarriers = j.at("n").get<int>();
        meta.n_guard = j.at("n_guard").get<int>();
        meta.n_window = j.at("n_window").get<int>();
        meta.n_symbols = j.at("n_symbols").get<int>();
        meta.scheme = j.value("scheme", "");
        meta.sample_rate_tag = j.value("sample_rate_tag", "unspecified");
        meta.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("origin_indices"))
            meta.origin_indices = j["origin_indices"].get<std::vector<std::int64_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed metadata: ") + e.what());
    }
    const auto n_ant = j.value("n_antennas", 2);

    std::vector<SampleStream> streams;
    for (int i = 0; i < n_ant; ++i) {
        const std::string path = prefix + ".ant" + std::to_string(i) + ".iq";
        std::ifstream in(path, std::ios::binary | std::ios::ate);
        if (!in) throw IoError("cannot open recording file: " + path);
        const auto size = static_cast<std::int64_t>(in.tellg());
        if (size % 8 != 0)
            throw IoError("truncated payload in " + path + ": format error at byte offset " +
                          std::to_string(size - size % 8));
        in.seekg(0);
        SampleStream s;
        s.antenna_id = i;
        if (static_cast<size_t>(i) < meta.origin_indices.size())
            s.origin_index = meta.origin_indices[static_cast<size_t>(i)];
        s.samples.resize(static_cast<size_t>(size / 8));
        for (auto& v : s.samples) {
            float re = 0.0f, im = 0.0f;
            in.read(reinterpret_cast<char*>(&re), 4);
            in.read(reinterpret_cast<char*>(&im), 4);
            v = cplx{re, im};
        }
        if (!in) throw IoError("read failed: " + path);
        streams.push_back(std::move(s));
    }
    return {std::move(streams), std::move(meta)};
}

} // namespace stbcid::harness
