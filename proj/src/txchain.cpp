#include "stbcid/txchain.hpp"

#include <cmath>
#include <stdexcept>

namespace stbcid::tx {

namespace {

bool is_power_of_two(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 inverse DFT (no 1/N scaling).
void ifft_pow2_inplace(std::vector<cplx>& a) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * M_PI / static_cast<double>(len);
        const cplx wlen = std::polar(1.0, ang);
        for (size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

} // namespace

ConstellationSpec::ConstellationSpec(ConstellationFamily family, int order)
    : family_(family), order_(order) {
    if (order < 4) throw ConfigError("constellation order must be >= 4");
    if (family == ConstellationFamily::PSK) {
        points_.reserve(static_cast<size_t>(order));
        // pi/order offset puts QPSK on {(+-1 +-j)/sqrt(2)}.
        for (int k = 0; k < order; ++k)
            points_.push_back(std::polar(1.0, 2.0 * M_PI * k / order + M_PI / order));
    } else {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
        if (side * side != order || side % 2 != 0)
            throw ConfigError("QAM order must be a square of an even integer");
        const double scale = std::sqrt(3.0 / (2.0 * (order - 1)));
        points_.reserve(static_cast<size_t>(order));
        for (int i = 0; i < side; ++i)
            for (int q = 0; q < side; ++q)
                points_.emplace_back(scale * (2 * i - side + 1), scale * (2 * q - side + 1));
    }
}

std::vector<std::vector<cplx>> generate_data_blocks(int n_blocks, int n,
                                                    const ConstellationSpec& constellation,
                                                    std::mt19937_64& rng) {
    if (n_blocks < 1) throw ConfigError("generate_data_blocks: n_blocks must be >= 1");
    std::uniform_int_distribution<size_t> pick(0, constellation.points().size() - 1);
    std::vector<std::vector<cplx>> blocks(static_cast<size_t>(n_blocks));
    for (auto& block : blocks) {
        block.resize(static_cast<size_t>(n));
        for (auto& sym : block) sym = constellation.points()[pick(rng)];
    }
    return blocks;
}

CodeMatrix stbc_encode(const std::vector<cplx>& d_even, const std::vector<cplx>& d_odd,
                       StbcScheme scheme) {
    if (d_even.size() != d_odd.size())
        throw std::length_error("stbc_encode: block length mismatch");
    CodeMatrix c;
    c.block_span = block_span(scheme);
    if (scheme == StbcScheme::SM) {
        c.antenna[0] = d_even;
        c.antenna[1] = d_odd;
        return c;
    }
    const size_t n = d_even.size();
    c.antenna[0].reserve(2 * n);
    c.antenna[1].reserve(2 * n);
    c.antenna[0] = d_even;
    c.antenna[1] = d_odd;
    for (const auto& s : d_odd) c.antenna[0].push_back(-std::conj(s));
    for (const auto& s : d_even) c.antenna[1].push_back(std::conj(s));
    return c;
}

std::vector<cplx> ifft_block(const std::vector<cplx>& c) {
    const size_t n = c.size();
    std::vector<cplx> x(c);
    if (is_power_of_two(n)) {
        ifft_pow2_inplace(x);
    } else {
        for (size_t m = 0; m < n; ++m) {
            cplx acc{0.0, 0.0};
            for (size_t k = 0; k < n; ++k)
                acc += c[k] * std::polar(1.0, 2.0 * M_PI * static_cast<double>(m * k % n) / n);
            x[m] = acc;
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : x) v *= scale;
    return x;
}

std::vector<cplx> apply_window_cp(const std::vector<cplx>& x, const OfdmParams& params) {
    const int n = params.n();
    if (static_cast<int>(x.size()) != n)
        throw std::length_error("apply_window_cp: block length != N");
    const int nu = params.nu();
    const int nw = params.n_window();
    std::vector<cplx> z(static_cast<size_t>(n + nw + nu));
    for (int idx = -nu; idx < n + nw; ++idx) {
        const int folded = ((idx % n) + n) % n;
        z[static_cast<size_t>(idx + nu)] = params.w(idx) * x[static_cast<size_t>(folded)];
    }
    return z;
}

SampleStream serialize(const std::vector<std::vector<cplx>>& blocks, const OfdmParams& params,
                       int antenna_id) {
    const int nu = params.nu();
    const int nw = params.n_window();
    const int step = params.symbol_len();
    const auto n_blocks = static_cast<std::int64_t>(blocks.size());
    SampleStream out;
    out.antenna_id = antenna_id;
    out.origin_index = -nu;
    if (n_blocks == 0) return out;
    // Support: [-nu, (n_blocks-1)(N+nu) + N + N_W - 1]; junctions overlap-add.
    out.samples.assign(static_cast<size_t>(n_blocks * step + nw), cplx{0.0, 0.0});
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        const auto& z = blocks[static_cast<size_t>(b)];
        if (static_cast<int>(z.size()) != params.n() + nw + nu)
            throw std::length_error("serialize: bad windowed-block length");
        const std::int64_t base = b * step; // index of z's n = -nu sample in `samples`
        for (size_t i = 0; i < z.size(); ++i)
            out.samples[static_cast<size_t>(base) + i] += z[i];
    }
    return out;
}

std::array<SampleStream, 2> generate_signal(StbcScheme scheme, const OfdmParams& params,
                                            const ConstellationSpec& constellation,
                                            int n_symbols, std::uint64_t seed) {
    if (n_symbols < 1) throw ConfigError("generate_signal: n_symbols must be >= 1");
    if (scheme == StbcScheme::AL && n_symbols % 2 != 0)
        throw ConfigError("generate_signal: AL requires an even number of OFDM symbols");
    std::mt19937_64 rng(seed);
    const int u = block_span(scheme);
    const int n_code_words = n_symbols / u;
    std::array<std::vector<std::vector<cplx>>, 2> windowed;
    windowed[0].reserve(static_cast<size_t>(n_symbols));
    windowed[1].reserve(static_cast<size_t>(n_symbols));
    for (int k = 0; k < n_code_words; ++k) {
        auto data = generate_data_blocks(2, params.n(), constellation, rng);
        const CodeMatrix code = stbc_encode(data[0], data[1], scheme);
        for (int f = 0; f < 2; ++f) {
            for (int slot = 0; slot < u; ++slot) {
                const auto first = code.antenna[static_cast<size_t>(f)].begin() +
                                   static_cast<std::ptrdiff_t>(slot) * params.n();
                std::vector<cplx> block(first, first + params.n());
                windowed[static_cast<size_t>(f)].push_back(
                    apply_window_cp(ifft_block(block), params));
            }
        }
    }
    return {serialize(windowed[0], params, 0), serialize(windowed[1], params, 1)};
}

} // namespace stbcid::tx
