#include "stbcid/cyclostat.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace stbcid::cyclostat {

namespace {

std::vector<int> even_range(int lo, int hi) {
    std::vector<int> out;
    for (int t = lo; t <= hi; t += 2) out.push_back(t);
    return out;
}

// Accumulation order is fixed (m ascending) so grid evaluation is
// bit-identical to per-entry estimation regardless of batching.
cplx ccf_sum(std::span<const cplx> r0, std::span<const cplx> r1, int tau,
             std::span<const cplx> phase) {
    const auto m_r = static_cast<std::int64_t>(r0.size());
    const std::int64_t lo = std::max<std::int64_t>(0, -static_cast<std::int64_t>(tau));
    const std::int64_t hi = std::min<std::int64_t>(m_r, m_r - tau);
    cplx acc{0.0, 0.0};
    for (std::int64_t m = lo; m < hi; ++m)
        acc += (r0[static_cast<size_t>(m)] * r1[static_cast<size_t>(m + tau)]) *
               phase[static_cast<size_t>(m)];
    return acc / static_cast<double>(m_r);
}

std::vector<cplx> phase_table(double alpha, size_t len) {
    std::vector<cplx> phase(len);
    for (size_t m = 0; m < len; ++m)
        phase[m] = std::polar(1.0, -2.0 * M_PI * alpha * static_cast<double>(m));
    return phase;
}

} // namespace

DelaySets compute_delay_sets(const OfdmParams& params) {
    const int n = params.n();
    const int nu = params.nu();
    const int nw = params.n_window();
    DelaySets s;
    s.i0 = even_range(n - nu, n + 3 * nu);
    s.i1 = even_range(nu - 2 * nw + 2, 2 * n + nu + 2 * nw - 2);
    s.i2 = even_range(n + nu - 2 * nw + 2, n + nu + 2 * nw - 2);
    for (int t = -(n + 3 * nu); t <= -(n - nu); ++t) s.feature_delays.push_back(t);
    for (int t = n - nu; t <= n + 3 * nu; ++t) s.feature_delays.push_back(t);
    for (int t = 2 * params.symbol_len() + 1; t <= 3 * params.symbol_len(); ++t)
        s.noise_delays.push_back(t);
    s.zeta = 8 * nu + 2;
    return s;
}

std::vector<double> detector_cfs(const OfdmParams& params) {
    const double a0 = 1.0 / (2.0 * params.symbol_len());
    return {0.0, a0, -a0};
}

cplx estimate_ccf(std::span<const cplx> r0, std::span<const cplx> r1, double alpha, int tau) {
    if (r0.size() != r1.size())
        throw std::length_error("estimate_ccf: stream length mismatch");
    if (r0.empty()) throw std::length_error("estimate_ccf: empty streams");
    return ccf_sum(r0, r1, tau, phase_table(alpha, r0.size()));
}

CcfGrid estimate_grid(std::span<const cplx> r0, std::span<const cplx> r1,
                      const std::vector<double>& cfs, const std::vector<int>& delays) {
    if (cfs.empty() || delays.empty())
        throw ConfigError("estimate_grid: empty CF or delay set");
    if (r0.size() != r1.size())
        throw std::length_error("estimate_grid: stream length mismatch");
    CcfGrid grid;
    grid.n_samples_used = static_cast<std::int64_t>(r0.size());
    grid.entries.reserve(cfs.size() * delays.size());
    for (const double alpha : cfs) {
        const auto phase = phase_table(alpha, r0.size());
        for (const int tau : delays)
            grid.entries.push_back({alpha, tau, ccf_sum(r0, r1, tau, phase)});
    }
    return grid;
}

cplx analytical_ccf_flat(const std::array<std::array<cplx, 2>, 2>& h, const OfdmParams& params,
                         double sigma_s2, double alpha, int tau) {
    const int m0 = 2 * params.symbol_len();
    const double ell = alpha * m0;
    if (std::abs(ell - std::round(ell)) > 1e-9)
        throw std::domain_error("analytical_ccf_flat: alpha off the l/(2(N+nu)) lattice");
    if (tau == 0) return {0.0, 0.0};

    const DelaySets sets = compute_delay_sets(params);
    const int atau = std::abs(tau);
    const auto contains = [atau](const std::vector<int>& set) {
        return std::binary_search(set.begin(), set.end(), atau);
    };
    int n_terms = 0;
    if (contains(sets.i2)) n_terms = 3;
    else if (contains(sets.i0)) n_terms = 2;
    else if (contains(sets.i1)) n_terms = 1;
    else return {0.0, 0.0};

    const int n = params.n();
    const int nu = params.nu();
    const cplx det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    const double sign = tau > 0 ? 1.0 : -1.0;
    const cplx coeff = det * (sigma_s2 / static_cast<double>(m0));

    // Term q exists when both window indices are integers in range; the
    // Kronecker-delta parity constraint zeroes odd |tau|.
    cplx acc{0.0, 0.0};
    const std::array<int, 3> qs = n_terms == 1 ? std::array<int, 3>{1, -1, -1}
                                 : n_terms == 2 ? std::array<int, 3>{0, 1, -1}
                                                : std::array<int, 3>{0, 1, 2};
    for (int qi = 0; qi < n_terms; ++qi) {
        const int q = qs[static_cast<size_t>(qi)];
        const int num0 = q * n - atau + n + nu; // 2*n0
        const int num1 = q * n + atau - n - nu; // 2*n1
        if (num0 % 2 != 0 || num1 % 2 != 0) continue;
        const int idx0 = num0 / 2;
        const int idx1 = num1 / 2;
        if (idx0 < -nu || idx0 >= n + params.n_window()) continue;
        if (idx1 < -nu || idx1 >= n + params.n_window()) continue;
        const double g = params.w(idx0) * params.w(idx1);
        acc += g * std::polar(1.0, -M_PI * alpha * ((q + 1) * n + nu - tau));
    }
    return sign * coeff * acc;
}

double estimate_null_sigma(const CcfGrid& grid_noise) {
    if (grid_noise.entries.empty())
        throw ConfigError("estimate_null_sigma: empty grid");
    double sum_sq = 0.0;
    for (const auto& e : grid_noise.entries) sum_sq += std::norm(e.value);
    return std::sqrt(sum_sq / static_cast<double>(grid_noise.entries.size()));
}

double phase_noise_scaling(double beta_t, int n_symbols) {
    if (beta_t < 0.0) throw ConfigError("phase_noise_scaling: betaT must be non-negative");
    if (n_symbols < 2 || n_symbols % 2 != 0)
        throw ConfigError("phase_noise_scaling: N_s must be an even integer >= 2");
    if (beta_t == 0.0) return 1.0;
    const double num = -std::expm1(-4.0 * n_symbols * M_PI * beta_t);
    const double den = -std::expm1(-8.0 * M_PI * beta_t);
    return 2.0 * num / (n_symbols * den);
}

} // namespace stbcid::cyclostat
