#include "stbcid/detector.hpp"

#include <cmath>

namespace stbcid::detector {

DetectorConfig DetectorConfig::defaults(const OfdmParams& params, double p_fa, int n_rx) {
    DetectorConfig cfg;
    cfg.p_false_alarm = p_fa;
    cfg.kappa = params.nu() / 2;
    cfg.zeta = 24 * params.nu() + 6;
    cfg.n_rx = n_rx;
    return cfg;
}

double binomial_tail(double p, int kappa, int zeta) {
    if (p <= 0.0) return kappa == 0 ? 1.0 : 0.0;
    if (p >= 1.0) return 1.0;
    double tail = 0.0;
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (int l = kappa; l <= zeta; ++l) {
        const double log_binom =
            std::lgamma(zeta + 1.0) - std::lgamma(l + 1.0) - std::lgamma(zeta - l + 1.0);
        tail += std::exp(log_binom + l * lp + (zeta - l) * lq);
    }
    return std::min(tail, 1.0);
}

double invert_false_alarm(double p_fa_total, int kappa, int zeta) {
    if (!(p_fa_total > 0.0 && p_fa_total < 1.0))
        throw ConfigError("invert_false_alarm: P_F must lie in (0,1)");
    if (kappa < 1 || kappa > zeta)
        throw ConfigError("invert_false_alarm: need 1 <= kappa <= zeta");
    // The tail is strictly increasing in p; bisect.
    double lo = 1e-15;
    double hi = 1.0 - 1e-15;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (binomial_tail(mid, kappa, zeta) < p_fa_total)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double threshold(double sigma_hat, double p_f) {
    return sigma_hat * std::sqrt(-std::log(p_f));
}

Decision decide(const cyclostat::CcfGrid& feature_magnitudes, double gamma, int kappa) {
    if (kappa > static_cast<int>(feature_magnitudes.entries.size()))
        throw ConfigError("decide: kappa exceeds feature count");
    Decision d;
    d.threshold = gamma;
    d.feature_grid = feature_magnitudes;
    for (const auto& e : feature_magnitudes.entries)
        if (std::abs(e.value) > gamma) ++d.n_exceedances;
    d.label = d.n_exceedances >= kappa ? tx::StbcScheme::AL : tx::StbcScheme::SM;
    return d;
}

Decision classify(const std::vector<SampleStream>& rx, const OfdmParams& params,
                  const DetectorConfig& cfg) {
    const int n_rx = static_cast<int>(rx.size());
    if (n_rx < 2) throw ConfigError("classify: at least two receive antennas required");
    const size_t len = rx[0].samples.size();
    for (const auto& s : rx)
        if (s.samples.size() != len)
            throw std::length_error("classify: stream length mismatch");

    const auto sets = cyclostat::compute_delay_sets(params);
    const auto cfs = cyclostat::detector_cfs(params);
    const int n_pairs = n_rx * (n_rx - 1) / 2;

    cyclostat::CcfGrid features;
    double noise_sum_sq = 0.0;
    std::int64_t noise_count = 0;
    for (int i0 = 0; i0 < n_rx; ++i0) {
        for (int i1 = i0 + 1; i1 < n_rx; ++i1) {
            auto feat = cyclostat::estimate_grid(rx[static_cast<size_t>(i0)].samples,
                                                 rx[static_cast<size_t>(i1)].samples, cfs,
                                                 sets.feature_delays);
            const auto noise = cyclostat::estimate_grid(rx[static_cast<size_t>(i0)].samples,
                                                        rx[static_cast<size_t>(i1)].samples, cfs,
                                                        sets.noise_delays);
            features.n_samples_used = feat.n_samples_used;
            features.entries.insert(features.entries.end(), feat.entries.begin(),
                                    feat.entries.end());
            for (const auto& e : noise.entries) noise_sum_sq += std::norm(e.value);
            noise_count += static_cast<std::int64_t>(noise.entries.size());
        }
    }
    const double sigma_hat = std::sqrt(noise_sum_sq / static_cast<double>(noise_count));

    const int kappa = cfg.kappa * n_pairs;
    const int zeta = cfg.zeta * n_pairs;
    if (zeta != static_cast<int>(features.entries.size()))
        throw ConfigError("classify: zeta does not match the feature grid size");
    const double p_f = invert_false_alarm(cfg.p_false_alarm, kappa, zeta);
    Decision d = decide(features, threshold(sigma_hat, p_f), kappa);
    d.sigma_hat = sigma_hat;
    return d;
}

std::int64_t flop_count(std::int64_t n_symbols, int n, int nu) {
    if (n_symbols < 1 || n < 1 || nu < 0)
        throw ConfigError("flop_count: positive arguments required");
    return 3 * (14 * n_symbols * (n + nu) - 2) * (n + 9 * static_cast<std::int64_t>(nu) + 2);
}

} // namespace stbcid::detector
