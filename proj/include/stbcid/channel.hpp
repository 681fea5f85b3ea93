#ifndef STBCID_CHANNEL_HPP
#define STBCID_CHANNEL_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "stbcid/ofdm.hpp"
#include "stbcid/types.hpp"

namespace stbcid::channel {

enum class Profile { Flat, Exponential, PedestrianA, VehicularA };

Profile profile_from_string(const std::string& name);
std::string to_string(Profile p);

/// One draw of the MIMO multipath channel: complex gain per
/// (rx antenna v, tx antenna f, path p) and integer sample delays.
struct ChannelRealization {
    int n_rx = 2;
    int n_tx = 2;
    std::vector<int> delays;              // strictly increasing, delays[0] == 0
    std::vector<cplx> gains;              // [v][f][p] flattened
    std::vector<double> doppler_phases;   // sum-of-sinusoids state, empty if static
    std::vector<double> doppler_freqs;    // normalized Doppler per sinusoid
    double max_doppler_norm = 0.0;        // f_D * sample period; 0 => static

    int n_paths() const { return static_cast<int>(delays.size()); }
    cplx gain(int v, int f, int p) const {
        return gains[(static_cast<size_t>(v) * n_tx + f) * delays.size() + p];
    }
};

/// Receive-side impairments applied after the multipath channel.
struct ImpairmentSpec {
    double snr_db = 10.0;
    double phase_noise_rate = 0.0;  // beta*T
    double freq_offset = 0.0;       // f_o*T
    double timing_offset = 0.0;     // epsilon in [0, 0.5]
};

/// Per-path average powers for a profile, normalized to sum 1, with the
/// sample-spaced delays used for each tap.
struct PowerDelayProfile {
    std::vector<int> delays;
    std::vector<double> powers;
};
PowerDelayProfile power_delay_profile(Profile profile, int n_paths);

/// Draws i.i.d. zero-mean complex Gaussian gains per (v, f, p) with the
/// profile's per-path variances. Flat requires n_paths == 1.
ChannelRealization draw_channel(int n_paths, Profile profile, int n_rx, std::mt19937_64& rng);

/// r(v, m) = sum_f sum_p h_vf(p) s_f(m - delay(p)); out-of-range taps are
/// zero. For Doppler profiles the gains ride sum-of-sinusoids fading.
std::vector<SampleStream> apply_channel(const std::vector<SampleStream>& tx,
                                        const ChannelRealization& ch);

/// Adds circular complex Gaussian noise with variance
/// sigma_w^2 = 2 * 10^(-snr_db/10) per sample, independent per antenna.
void add_awgn(std::vector<SampleStream>& streams, double snr_db, std::mt19937_64& rng);
double noise_variance(double snr_db);

/// Multiplies sample m by e^{-j phi(m)} where phi is a Wiener process with
/// increment variance 2 pi betaT / (N+nu). One oscillator: the same phi
/// trajectory is applied to every receive antenna.
void apply_phase_noise(std::vector<SampleStream>& streams, double beta_t,
                       const OfdmParams& params, std::mt19937_64& rng);

/// Multiplies sample m by e^{j 2 pi foT m / (N+nu)}: one full foT cycle per
/// OFDM symbol duration.
void apply_freq_offset(std::vector<SampleStream>& streams, double fo_t, const OfdmParams& params);

/// Two-tap timing-offset filter [1-eps, eps], eps in [0, 0.5].
void apply_timing_offset(std::vector<SampleStream>& streams, double epsilon);

} // namespace stbcid::channel

#endif
