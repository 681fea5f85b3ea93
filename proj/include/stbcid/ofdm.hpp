#ifndef STBCID_OFDM_HPP
#define STBCID_OFDM_HPP

#include <stdexcept>
#include <vector>

namespace stbcid {

/// Thrown for invalid parameterizations and option values.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// OFDM symbol geometry: N subcarriers, N_G guard samples, N_W windowed
/// transition samples, nu = N_G + N_W. A symbol occupies N + nu samples on
/// the air; the windowed block z spans sample indices -nu .. N+N_W-1.
class OfdmParams {
  public:
    /// Builds the parameter set and the raised-cosine window. Requires
    /// N and nu even, nu < N/2 and 2(N_W-1) < N.
    OfdmParams(int n_subcarriers, int n_guard, int n_window);

    int n() const { return n_subcarriers_; }
    int n_guard() const { return n_guard_; }
    int n_window() const { return n_window_; }
    int nu() const { return n_guard_ + n_window_; }
    int symbol_len() const { return n_subcarriers_ + nu(); }

    /// Window coefficient W_n for n = -nu .. N+N_W-1.
    double w(int n) const { return window_.at(static_cast<size_t>(n + nu())); }
    const std::vector<double>& window() const { return window_; }

  private:
    int n_subcarriers_;
    int n_guard_;
    int n_window_;
    std::vector<double> window_;
};

} // namespace stbcid

#endif
