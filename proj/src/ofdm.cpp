#include "stbcid/ofdm.hpp"

#include <cmath>

namespace stbcid {

OfdmParams::OfdmParams(int n_subcarriers, int n_guard, int n_window)
    : n_subcarriers_(n_subcarriers), n_guard_(n_guard), n_window_(n_window) {
    if (n_subcarriers <= 0 || n_guard < 0 || n_window < 0)
        throw ConfigError("OfdmParams: N must be positive, N_G and N_W non-negative");
    const int nu_val = n_guard + n_window;
    if (n_subcarriers % 2 != 0 || nu_val % 2 != 0)
        throw ConfigError("OfdmParams: N and nu must be even");
    if (2 * nu_val >= n_subcarriers)
        throw ConfigError("OfdmParams: nu < N/2 required");
    if (2 * (n_window - 1) >= n_subcarriers)
        throw ConfigError("OfdmParams: 2(N_W-1) < N required");

    // Raised-cosine edges: rise over n = -nu .. -nu+N_W-1, unity over the
    // body, symmetric fall over n = N .. N+N_W-1. Overlapped rise and fall
    // weights sum to 1 at each junction sample.
    const int n = n_subcarriers;
    const int nw = n_window;
    window_.assign(static_cast<size_t>(n + nw + nu_val), 1.0);
    for (int i = 0; i < nw; ++i) {
        const double edge = 0.5 * (1.0 - std::cos(M_PI * (i + 0.5) / nw));
        window_[static_cast<size_t>(i)] = edge;                       // n = -nu + i
        window_[static_cast<size_t>(nu_val + n + nw - 1 - i)] = edge; // n = N + N_W - 1 - i
    }
}

} // namespace stbcid
