#ifndef STBCID_DETECTOR_HPP
#define STBCID_DETECTOR_HPP

#include <cstdint>
#include <vector>

#include "stbcid/cyclostat.hpp"
#include "stbcid/ofdm.hpp"
#include "stbcid/txchain.hpp"
#include "stbcid/types.hpp"

namespace stbcid::detector {

/// kappa-out-of-zeta CFAR configuration. kappa/zeta are the base (single
/// antenna-pair) values; classify scales both by the number of pairs.
struct DetectorConfig {
    double p_false_alarm = 1e-2;
    int kappa = 0;  // default nu/2
    int zeta = 0;   // default 24nu+6 (three cycle frequencies)
    int n_rx = 2;

    static DetectorConfig defaults(const OfdmParams& params, double p_fa = 1e-2, int n_rx = 2);
};

struct Decision {
    tx::StbcScheme label = tx::StbcScheme::SM;
    int n_exceedances = 0;
    double threshold = 0.0;
    double sigma_hat = 0.0;
    cyclostat::CcfGrid feature_grid;
};

/// Solves sum_{l=kappa}^{zeta} C(zeta,l) Pf^l (1-Pf)^{zeta-l} = P_F for the
/// per-feature false-alarm probability Pf by monotone bisection.
double invert_false_alarm(double p_fa_total, int kappa, int zeta);

/// Binomial tail P(X >= kappa), X ~ Binomial(zeta, p). Exposed for tests.
double binomial_tail(double p, int kappa, int zeta);

/// Gamma = sigma_hat * sqrt(-ln Pf), the Rayleigh CCDF inversion.
double threshold(double sigma_hat, double p_f);

/// Counts magnitudes strictly above gamma; label AL iff count >= kappa.
/// Ties at exactly gamma do not count.
Decision decide(const cyclostat::CcfGrid& feature_magnitudes, double gamma, int kappa);

/// Full pipeline for N_r >= 2 streams: per antenna pair, estimate the
/// feature and noise grids; pool the noise grids for sigma_hat; threshold
/// the pooled feature magnitudes with kappa, zeta scaled by the pair count.
Decision classify(const std::vector<SampleStream>& rx, const OfdmParams& params,
                  const DetectorConfig& cfg);

/// Flop count of the identification algorithm:
/// 3 (14 N_s (N+nu) - 2) (N + 9 nu + 2).
std::int64_t flop_count(std::int64_t n_symbols, int n, int nu);

} // namespace stbcid::detector

#endif
