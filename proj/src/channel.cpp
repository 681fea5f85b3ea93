#include "stbcid/channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace stbcid::channel {

namespace {

constexpr double kSamplePeriodUs = 91.4 / 72.0; // T = 91.4 us over N+nu = 72 samples

// ITU tapped-delay-line tables, delays rounded to the nearest sample at the
// above timing; coincident taps are merged.
struct ItuTap {
    double delay_ns;
    double power_db;
};
constexpr ItuTap kPedestrianA[] = {{0, 0.0}, {110, -9.7}, {190, -19.2}, {410, -22.8}};
constexpr ItuTap kVehicularA[] = {{0, 0.0},    {310, -1.0},  {710, -9.0},
                                  {1090, -15.0}, {1730, -8.0}, {2510, -17.7}};

PowerDelayProfile merge_itu(const ItuTap* taps, size_t count) {
    std::map<int, double> merged;
    for (size_t i = 0; i < count; ++i) {
        const int d = static_cast<int>(std::lround(taps[i].delay_ns / (kSamplePeriodUs * 1e3)));
        merged[d] += std::pow(10.0, taps[i].power_db / 10.0);
    }
    PowerDelayProfile p;
    double total = 0.0;
    for (const auto& [d, pw] : merged) {
        p.delays.push_back(d);
        p.powers.push_back(pw);
        total += pw;
    }
    for (auto& pw : p.powers) pw /= total;
    return p;
}

} // namespace

Profile profile_from_string(const std::string& name) {
    if (name == "flat") return Profile::Flat;
    if (name == "exp" || name == "exponential") return Profile::Exponential;
    if (name == "peda" || name == "pedestrianA") return Profile::PedestrianA;
    if (name == "veha" || name == "vehicularA") return Profile::VehicularA;
    throw ConfigError("unknown channel profile: " + name);
}

std::string to_string(Profile p) {
    switch (p) {
        case Profile::Flat: return "flat";
        case Profile::Exponential: return "exp";
        case Profile::PedestrianA: return "peda";
        case Profile::VehicularA: return "veha";
    }
    return "?";
}

PowerDelayProfile power_delay_profile(Profile profile, int n_paths) {
    if (n_paths < 1) throw ConfigError("channel needs at least one path");
    switch (profile) {
        case Profile::Flat: {
            if (n_paths != 1) throw ConfigError("flat profile implies a single path");
            return {{0}, {1.0}};
        }
        case Profile::Exponential: {
            PowerDelayProfile p;
            double total = 0.0;
            for (int i = 0; i < n_paths; ++i) {
                p.delays.push_back(i);
                p.powers.push_back(std::exp(-i / 5.0));
                total += p.powers.back();
            }
            for (auto& pw : p.powers) pw /= total;
            return p;
        }
        case Profile::PedestrianA:
            return merge_itu(kPedestrianA, std::size(kPedestrianA));
        case Profile::VehicularA:
            return merge_itu(kVehicularA, std::size(kVehicularA));
    }
    throw ConfigError("unknown channel profile");
}

ChannelRealization draw_channel(int n_paths, Profile profile, int n_rx, std::mt19937_64& rng) {
    if (n_rx < 1) throw ConfigError("draw_channel: n_rx must be >= 1");
    const PowerDelayProfile pdp = power_delay_profile(profile, n_paths);
    ChannelRealization ch;
    ch.n_rx = n_rx;
    ch.n_tx = 2;
    ch.delays = pdp.delays;
    std::normal_distribution<double> gauss(0.0, 1.0);
    const size_t np = pdp.delays.size();
    ch.gains.resize(static_cast<size_t>(n_rx) * 2 * np);
    for (int v = 0; v < n_rx; ++v)
        for (int f = 0; f < 2; ++f)
            for (size_t p = 0; p < np; ++p) {
                const double s = std::sqrt(pdp.powers[p] / 2.0);
                ch.gains[(static_cast<size_t>(v) * 2 + static_cast<size_t>(f)) * np + p] =
                    cplx{s * gauss(rng), s * gauss(rng)};
            }
    // Doppler fading for the ITU profiles (sum-of-sinusoids, 8 tones).
    if (profile == Profile::PedestrianA || profile == Profile::VehicularA) {
        const double fd_hz = profile == Profile::PedestrianA ? 6.9 : 104.2;
        ch.max_doppler_norm = fd_hz * kSamplePeriodUs * 1e-6;
        std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
        const int n_tones = 8;
        for (int t = 0; t < n_tones; ++t) {
            const double theta = uni(rng);
            ch.doppler_freqs.push_back(ch.max_doppler_norm * std::cos(theta));
            ch.doppler_phases.push_back(uni(rng));
        }
    }
    return ch;
}

std::vector<SampleStream> apply_channel(const std::vector<SampleStream>& tx,
                                        const ChannelRealization& ch) {
    if (tx.size() != static_cast<size_t>(ch.n_tx))
        throw std::length_error("apply_channel: tx stream count != channel n_tx");
    const size_t len = tx[0].samples.size();
    for (const auto& s : tx)
        if (s.samples.size() != len)
            throw std::length_error("apply_channel: tx stream length mismatch");

    std::vector<SampleStream> rx(static_cast<size_t>(ch.n_rx));
    const size_t np = ch.delays.size();
    const size_t n_tones = ch.doppler_freqs.size();
    for (int v = 0; v < ch.n_rx; ++v) {
        auto& out = rx[static_cast<size_t>(v)];
        out.antenna_id = v;
        out.origin_index = tx[0].origin_index;
        out.samples.assign(len, cplx{0.0, 0.0});
        for (int f = 0; f < ch.n_tx; ++f) {
            const auto& in = tx[static_cast<size_t>(f)].samples;
            for (size_t p = 0; p < np; ++p) {
                const cplx h = ch.gain(v, f, static_cast<int>(p));
                const auto d = static_cast<size_t>(ch.delays[p]);
                for (size_t m = d; m < len; ++m) out.samples[m] += h * in[m - d];
            }
        }
        if (n_tones > 0) {
            // Common fading process across taps; each (v, f) tap keeps its
            // drawn gain, modulated by the unit-power Doppler process.
            for (size_t m = 0; m < len; ++m) {
                cplx fade{0.0, 0.0};
                for (size_t t = 0; t < n_tones; ++t)
                    fade += std::polar(1.0, 2.0 * M_PI * ch.doppler_freqs[t] *
                                                    static_cast<double>(m) +
                                                ch.doppler_phases[t]);
                out.samples[m] *= fade / std::sqrt(static_cast<double>(n_tones));
            }
        }
    }
    return rx;
}

double noise_variance(double snr_db) { return 2.0 * std::pow(10.0, -snr_db / 10.0); }

void add_awgn(std::vector<SampleStream>& streams, double snr_db, std::mt19937_64& rng) {
    if (std::isinf(snr_db) && snr_db > 0) return;
    const double sigma = std::sqrt(noise_variance(snr_db) / 2.0);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (auto& s : streams)
        for (auto& v : s.samples) v += cplx{gauss(rng), gauss(rng)};
}

void apply_phase_noise(std::vector<SampleStream>& streams, double beta_t,
                       const OfdmParams& params, std::mt19937_64& rng) {
    if (beta_t < 0.0) throw ConfigError("phase noise rate must be non-negative");
    if (beta_t == 0.0 || streams.empty()) return;
    const double step_sigma = std::sqrt(2.0 * M_PI * beta_t / params.symbol_len());
    std::normal_distribution<double> gauss(0.0, step_sigma);
    const size_t len = streams[0].samples.size();
    std::vector<cplx> rot(len);
    double phi = 0.0;
    for (size_t m = 0; m < len; ++m) {
        if (m > 0) phi += gauss(rng);
        rot[m] = std::polar(1.0, -phi);
    }
    for (auto& s : streams) {
        if (s.samples.size() != len)
            throw std::length_error("apply_phase_noise: stream length mismatch");
        for (size_t m = 0; m < len; ++m) s.samples[m] *= rot[m];
    }
}

void apply_freq_offset(std::vector<SampleStream>& streams, double fo_t,
                       const OfdmParams& params) {
    if (fo_t == 0.0) return;
    const double rate = 2.0 * M_PI * fo_t / params.symbol_len();
    for (auto& s : streams)
        for (size_t m = 0; m < s.samples.size(); ++m)
            s.samples[m] *= std::polar(1.0, rate * static_cast<double>(m));
}

void apply_timing_offset(std::vector<SampleStream>& streams, double epsilon) {
    if (epsilon < 0.0 || epsilon > 0.5)
        throw ConfigError("timing offset must lie in [0, 0.5]");
    if (epsilon == 0.0) return;
    for (auto& s : streams) {
        cplx prev{0.0, 0.0};
        for (auto& v : s.samples) {
            const cplx cur = v;
            v = (1.0 - epsilon) * cur + epsilon * prev;
            prev = cur;
        }
    }
}

} // namespace stbcid::channel
