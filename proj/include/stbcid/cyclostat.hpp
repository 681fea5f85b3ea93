#ifndef STBCID_CYCLOSTAT_HPP
#define STBCID_CYCLOSTAT_HPP

#include <span>
#include <vector>

#include "stbcid/ofdm.hpp"
#include "stbcid/types.hpp"

namespace stbcid::cyclostat {

/// One estimated (or analytical) CCF value at cycle frequency alpha and
/// integer delay tau.
struct CcfEntry {
    double alpha = 0.0;
    int tau = 0;
    cplx value{0.0, 0.0};
};

struct CcfGrid {
    std::vector<CcfEntry> entries;
    std::int64_t n_samples_used = 0;
};

/// Delay sets of the flat-fading AL CCF and the detector's feature/noise
/// delay ranges. I2 subset of I0 subset of I1 for practical parameters.
struct DelaySets {
    std::vector<int> i0;              // {N-nu, N-nu+2, ..., N+3nu}
    std::vector<int> i1;              // {nu-2Nw+2, ..., 2N+nu+2Nw-2}
    std::vector<int> i2;              // {N+nu-2Nw+2, ..., N+nu+2Nw-2}
    std::vector<int> feature_delays;  // +-tau, N-nu <= tau <= N+3nu, both parities
    std::vector<int> noise_delays;    // 2(N+nu)+1 .. 3(N+nu)
    int zeta = 0;                     // 8nu+2 features per cycle frequency
};

DelaySets compute_delay_sets(const OfdmParams& params);

/// The three detector cycle frequencies {0, +a0, -a0}, a0 = 1/(2(N+nu)).
std::vector<double> detector_cfs(const OfdmParams& params);

/// C_hat(alpha, tau) = (1/M_r) sum_m r0(m) r1(m+tau) e^{-j 2 pi alpha m},
/// samples past either stream end treated as zero. Non-conjugate.
cplx estimate_ccf(std::span<const cplx> r0, std::span<const cplx> r1, double alpha, int tau);

/// Batch estimation over the cartesian product cfs x delays; entry values
/// are bit-identical to individual estimate_ccf calls.
CcfGrid estimate_grid(std::span<const cplx> r0, std::span<const cplx> r1,
                      const std::vector<double>& cfs, const std::vector<int>& delays);

/// Closed-form flat-fading AL CCF. h is the 2x2 flat channel (h[v][f]).
/// alpha must lie on the lattice l/(2(N+nu)). Odd |tau| (window-index
/// parity violation) yields 0.
cplx analytical_ccf_flat(const std::array<std::array<cplx, 2>, 2>& h, const OfdmParams& params,
                         double sigma_s2, double alpha, int tau);

/// Rayleigh scale in the CCDF-exp(-x^2/sigma^2) convention, fitted from a
/// null grid: sigma_hat^2 = mean |C_hat|^2.
double estimate_null_sigma(const CcfGrid& grid_noise);

/// Deterministic attenuation of the CCF magnitude estimate under Wiener
/// phase noise: (2/N_s)(1 - e^{-4 N_s pi betaT}) / (1 - e^{-8 pi betaT}).
double phase_noise_scaling(double beta_t, int n_symbols);

} // namespace stbcid::cyclostat

#endif
