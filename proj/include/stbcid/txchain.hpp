#ifndef STBCID_TXCHAIN_HPP
#define STBCID_TXCHAIN_HPP

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "stbcid/ofdm.hpp"
#include "stbcid/types.hpp"

namespace stbcid::tx {

enum class ConstellationFamily { PSK, QAM };

/// Unit-average-power, zero-mean symbol alphabet.
class ConstellationSpec {
  public:
    ConstellationSpec(ConstellationFamily family, int order);

    ConstellationFamily family() const { return family_; }
    int order() const { return order_; }
    const std::vector<cplx>& points() const { return points_; }

    static ConstellationSpec qpsk() { return {ConstellationFamily::PSK, 4}; }

  private:
    ConstellationFamily family_;
    int order_;
    std::vector<cplx> points_;
};

enum class StbcScheme { SM, AL };

/// Block instants spanned by one code matrix: 1 for SM, 2 for AL.
inline int block_span(StbcScheme s) { return s == StbcScheme::SM ? 1 : 2; }

/// Code matrix: per transmit antenna, U*N frequency-domain symbols
/// (block instants concatenated).
struct CodeMatrix {
    std::array<std::vector<cplx>, 2> antenna;
    int block_span = 1;
};

/// Draws n_blocks i.i.d. data blocks of N symbols each.
std::vector<std::vector<cplx>> generate_data_blocks(int n_blocks, int n,
                                                    const ConstellationSpec& constellation,
                                                    std::mt19937_64& rng);

/// Maps a pair of data blocks onto the two transmit antennas.
/// SM: antennas carry the blocks unchanged, U = 1.
/// AL: antenna 0 sends (d_even, -conj(d_odd)), antenna 1 (d_odd, conj(d_even)), U = 2.
CodeMatrix stbc_encode(const std::vector<cplx>& d_even, const std::vector<cplx>& d_odd,
                       StbcScheme scheme);

/// Unitary N-point inverse DFT, x(n) = (1/sqrt(N)) sum c(n1) e^{j2 pi n n1 / N}.
std::vector<cplx> ifft_block(const std::vector<cplx>& c);

/// Cyclic prefix + postfix + raised-cosine window: z(n) = W_n x(mod(n,N))
/// for n = -nu .. N+N_W-1. Returned vector index i corresponds to n = i - nu.
std::vector<cplx> apply_window_cp(const std::vector<cplx>& x, const OfdmParams& params);

/// Overlap-adds consecutive windowed blocks at symbol spacing N+nu.
/// The stream starts at absolute index -nu (origin of the first CP) and
/// covers all block supports; samples in the N_W-wide junctions add.
SampleStream serialize(const std::vector<std::vector<cplx>>& blocks, const OfdmParams& params,
                       int antenna_id);

/// Full transmit chain for n_symbols OFDM symbols: data -> STBC -> IFFT ->
/// window/CP -> serialization. AL requires even n_symbols.
std::array<SampleStream, 2> generate_signal(StbcScheme scheme, const OfdmParams& params,
                                            const ConstellationSpec& constellation,
                                            int n_symbols, std::uint64_t seed);

} // namespace stbcid::tx

#endif
