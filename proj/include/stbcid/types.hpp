#ifndef STBCID_TYPES_HPP
#define STBCID_TYPES_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace stbcid {

using cplx = std::complex<double>;

/// Per-antenna complex baseband sample sequence. `origin_index` is the
/// absolute sample index of samples[0] (the first cyclic prefix of a
/// transmission starts at -nu).
struct SampleStream {
    std::vector<cplx> samples;
    std::int64_t origin_index = 0;
    int antenna_id = 0;
};

} // namespace stbcid

#endif
