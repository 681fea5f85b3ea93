#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "stbcid/channel.hpp"
#include "stbcid/cyclostat.hpp"
#include "stbcid/txchain.hpp"

using namespace stbcid;
using namespace stbcid::cyclostat;

namespace {

// Independent direct-summation CCF oracle, written from the definition and
// kept apart from the library implementation on purpose.
cplx ccf_oracle(const std::vector<cplx>& r0, const std::vector<cplx>& r1, double alpha, int tau) {
    const auto m_r = static_cast<std::int64_t>(r0.size());
    cplx acc{0.0, 0.0};
    for (std::int64_t m = 0; m < m_r; ++m) {
        const std::int64_t j = m + tau;
        if (j < 0 || j >= m_r) continue;
        acc += (r0[static_cast<size_t>(m)] * r1[static_cast<size_t>(j)]) *
               std::polar(1.0, -2.0 * M_PI * alpha * static_cast<double>(m));
    }
    return acc / static_cast<double>(m_r);
}

std::vector<cplx> random_vec(size_t len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> out(len);
    for (auto& v : out) v = cplx{g(rng), g(rng)};
    return out;
}

std::vector<SampleStream> flat_channel_rx(tx::StbcScheme scheme, const OfdmParams& params,
                                          const std::array<std::array<cplx, 2>, 2>& h,
                                          int n_symbols, double snr_db, std::uint64_t seed) {
    const auto txs =
        tx::generate_signal(scheme, params, tx::ConstellationSpec::qpsk(), n_symbols, seed);
    channel::ChannelRealization ch;
    ch.n_rx = 2;
    ch.delays = {0};
    ch.gains = {h[0][0], h[0][1], h[1][0], h[1][1]};
    auto rx = channel::apply_channel({txs[0], txs[1]}, ch);
    const auto m_r = static_cast<size_t>(n_symbols) * static_cast<size_t>(params.symbol_len());
    for (auto& s : rx) {
        s.samples.erase(s.samples.begin(), s.samples.begin() + params.nu());
        s.samples.resize(m_r);
    }
    std::mt19937_64 noise_rng(seed ^ 0xA5A5ULL);
    channel::add_awgn(rx, snr_db, noise_rng);
    return rx;
}

} // namespace

TEST_CASE("delay sets at N=32, nu=4, N_W=1 parameters") {
    // N_W=1 forces odd nu unless paired with odd N_G; nu = N_G + N_W = 4.
    const OfdmParams p(32, 3, 1);
    const auto s = compute_delay_sets(p);
    CHECK(s.i0 == std::vector<int>{28, 30, 32, 34, 36, 38, 40, 42, 44});
    REQUIRE(!s.i1.empty());
    CHECK(s.i1.front() == 4);
    CHECK(s.i1.back() == 68);
    CHECK(s.i1.size() == 33);
    CHECK(s.i2 == std::vector<int>{36});
    CHECK(s.zeta == 8 * 4 + 2);
    CHECK(s.feature_delays.size() == static_cast<size_t>(8 * 4 + 2));
    CHECK(s.noise_delays.front() == 2 * 36 + 1);
    CHECK(s.noise_delays.back() == 3 * 36);
}

TEST_CASE("delay sets at N=64, nu=8") {
    const OfdmParams p(64, 6, 2);
    const auto s = compute_delay_sets(p);
    CHECK(s.zeta == 66);
    CHECK(s.feature_delays.size() == 66);
    CHECK(*std::min_element(s.feature_delays.begin(), s.feature_delays.end()) == -88);
    CHECK(*std::max_element(s.feature_delays.begin(), s.feature_delays.end()) == 88);
    // all |tau| in 56..88, both parities
    for (int t : s.feature_delays) CHECK((std::abs(t) >= 56 && std::abs(t) <= 88));
    // I2 subset of I0 subset of I1
    for (int t : s.i2) CHECK(std::binary_search(s.i0.begin(), s.i0.end(), t));
    for (int t : s.i0) CHECK(std::binary_search(s.i1.begin(), s.i1.end(), t));
    CHECK(s.i2.size() < s.i0.size());
    CHECK(s.i0.size() < s.i1.size());
}

TEST_CASE("delay set definitions match the closed forms for random parameters") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 * (8 + static_cast<int>(rng() % 60));      // even N in [16, 134]
        const int nu_max = n / 2 - 1;
        const int nu = 2 * (1 + static_cast<int>(rng() % static_cast<unsigned>(nu_max / 2)));
        const int nw_cap = std::min(nu, (n + 1) / 2); // 2(N_W-1) < N
        const int nw = static_cast<int>(rng() % static_cast<unsigned>(nw_cap + 1));
        const OfdmParams p(n, nu - nw, nw);
        const auto s = compute_delay_sets(p);

        std::vector<int> i0, i1, i2;
        for (int t = n - nu; t <= n + 3 * nu; t += 2) i0.push_back(t);
        for (int t = nu - 2 * nw + 2; t <= 2 * n + nu + 2 * nw - 2; t += 2) i1.push_back(t);
        for (int t = n + nu - 2 * nw + 2; t <= n + nu + 2 * nw - 2; t += 2) i2.push_back(t);
        CHECK(s.i0 == i0);
        CHECK(s.i1 == i1);
        CHECK(s.i2 == i2);
        CHECK(s.zeta == 8 * nu + 2);
    }
}

TEST_CASE("estimate_ccf basics") {
    std::vector<cplx> zeros(100, cplx{0.0, 0.0});
    CHECK(std::abs(estimate_ccf(zeros, zeros, 0.01, 5)) == 0.0);

    std::vector<cplx> ones(100, cplx{1.0, 0.0});
    for (int tau : {0, 3, 17}) {
        const cplx c = estimate_ccf(ones, ones, 0.0, tau);
        CHECK(c.real() == doctest::Approx((100.0 - tau) / 100.0).epsilon(1e-12));
        CHECK(std::abs(c.imag()) < 1e-15);
    }

    std::vector<cplx> short_vec(50);
    CHECK_THROWS_AS(estimate_ccf(ones, short_vec, 0.0, 0), std::length_error);
}

TEST_CASE("estimate_ccf agrees with the direct-summation oracle bit for bit") {
    const auto r0 = random_vec(4096, 101);
    const auto r1 = random_vec(4096, 102);
    for (double alpha : {0.0, 1.0 / 144.0, -1.0 / 144.0, 0.013}) {
        for (int tau : {-91, -1, 0, 7, 72, 300}) {
            const cplx got = estimate_ccf(r0, r1, alpha, tau);
            const cplx want = ccf_oracle(r0, r1, alpha, tau);
            CHECK(got.real() == want.real());
            CHECK(got.imag() == want.imag());
        }
    }
}

TEST_CASE("estimate_grid consistency and shapes") {
    const auto r0 = random_vec(2048, 103);
    const auto r1 = random_vec(2048, 104);

    const OfdmParams p64(64, 6, 2);
    const auto sets64 = compute_delay_sets(p64);
    const auto cfs = detector_cfs(p64);
    const auto grid = estimate_grid(r0, r1, cfs, sets64.feature_delays);
    CHECK(grid.entries.size() == 198); // 24 nu + 6 at nu = 8
    CHECK(grid.n_samples_used == 2048);
    for (const auto& e : grid.entries) {
        const cplx single = estimate_ccf(r0, r1, e.alpha, e.tau);
        CHECK(e.value.real() == single.real());
        CHECK(e.value.imag() == single.imag());
    }

    const OfdmParams p32(32, 3, 1);
    const auto sets32 = compute_delay_sets(p32);
    const auto grid32 = estimate_grid(r0, r1, {0.0}, sets32.feature_delays);
    CHECK(grid32.entries.size() == 34); // 8 nu + 2 at nu = 4

    CHECK_THROWS_AS(estimate_grid(r0, r1, {}, sets64.feature_delays), ConfigError);
    CHECK_THROWS_AS(estimate_grid(r0, r1, cfs, {}), ConfigError);
}

TEST_CASE("time-shift of both streams leaves |C_hat| unchanged") {
    const size_t len = 8192;
    const auto base0 = random_vec(len + 64, 105);
    const auto base1 = random_vec(len + 64, 106);
    const std::vector<cplx> r0(base0.begin(), base0.begin() + len);
    const std::vector<cplx> r1(base1.begin(), base1.begin() + len);
    const std::vector<cplx> s0(base0.begin() + 40, base0.begin() + 40 + len);
    const std::vector<cplx> s1(base1.begin() + 40, base1.begin() + 40 + len);
    const double alpha = 1.0 / 144.0;
    for (int tau : {60, -72}) {
        const double a = std::abs(estimate_ccf(r0, r1, alpha, tau));
        const double b = std::abs(estimate_ccf(s0, s1, alpha, tau));
        // identical up to edge-truncation terms <= (m0+|tau|)/M_r
        CHECK(std::abs(a - b) < 4.0 * (40.0 + std::abs(tau)) / static_cast<double>(len));
    }
}

TEST_CASE("analytical flat-fading CCF") {
    const OfdmParams p(32, 3, 1); // N=32, nu=4, N_W=1
    const std::array<std::array<cplx, 2>, 2> identity{{{cplx{1, 0}, cplx{0, 0}},
                                                       {cplx{0, 0}, cplx{1, 0}}}};
    const double a0 = 1.0 / 72.0;

    SUBCASE("zero outside I1 and for rank-1 channels") {
        CHECK(std::abs(analytical_ccf_flat(identity, p, 1.0, 0.0, 0)) == 0.0);
        CHECK(std::abs(analytical_ccf_flat(identity, p, 1.0, 0.0, 2)) == 0.0);   // even, < I1
        CHECK(std::abs(analytical_ccf_flat(identity, p, 1.0, 0.0, 70)) == 0.0);  // even, > I1
        CHECK(std::abs(analytical_ccf_flat(identity, p, a0, 0.0, 37)) == 0.0);   // odd
        const std::array<std::array<cplx, 2>, 2> rank1{{{cplx{1, 0}, cplx{2, 1}},
                                                        {cplx{0.5, 0}, cplx{1, 0.5}}}};
        for (int tau : {28, 36, 44, -36, 10})
            CHECK(std::abs(analytical_ccf_flat(rank1, p, 1.0, 0.0, tau)) < 1e-15);
        CHECK_THROWS_AS(analytical_ccf_flat(identity, p, 1.0, 0.013, 36), std::domain_error);
    }

    SUBCASE("tau = 36 (in I2) sums three window-product terms at alpha = 0") {
        // q = 0,1,2 give window index pairs (n0, n1) = (20,-20)->... indices
        // (q*32 -36+36)/2 = 16q and (q*32+36-36)/2 = 16q, i.e. {0,16,32}^2
        // pairs (0,0),(16,16),(32,32); n1 index = (q*32+36-36)/2 = 16q.
        const double expected =
            (p.w(0) * p.w(0) + p.w(16) * p.w(16) + p.w(32) * p.w(32)) / 72.0;
        const cplx got = analytical_ccf_flat(identity, p, 1.0, 0.0, 36);
        CHECK(got.real() == doctest::Approx(expected).epsilon(1e-12));
        CHECK(std::abs(got.imag()) < 1e-15);
        // negative delay flips the overall sign at alpha = 0
        const cplx neg = analytical_ccf_flat(identity, p, 1.0, 0.0, -36);
        CHECK(neg.real() == doctest::Approx(-expected).epsilon(1e-12));
    }

    SUBCASE("matches the simulation estimate on the flat channel") {
        const std::array<std::array<cplx, 2>, 2> h{{{cplx{0.83, -0.31}, cplx{-0.42, 0.55}},
                                                    {cplx{0.12, 0.77}, cplx{-0.91, 0.08}}}};
        const int n_symbols = 80000;
        const auto rx = flat_channel_rx(tx::StbcScheme::AL, p, h, n_symbols, 25.0, 2024);
        const auto sets = compute_delay_sets(p);
        for (double alpha : {0.0, a0}) {
            for (int tau : {36, 32, -40}) {
                const cplx est = estimate_ccf(rx[0].samples, rx[1].samples, alpha, tau);
                const cplx ana = analytical_ccf_flat(h, p, 1.0, alpha, tau);
                REQUIRE(std::abs(ana) > 1e-3);
                CHECK(std::abs(est - ana) / std::abs(ana) < 0.10);
            }
        }
        // SM on the same channel: feature magnitudes collapse toward zero
        const auto rx_sm = flat_channel_rx(tx::StbcScheme::SM, p, h, n_symbols, 25.0, 2025);
        const auto noise_grid = estimate_grid(rx_sm[0].samples, rx_sm[1].samples,
                                              detector_cfs(p), sets.noise_delays);
        const double sigma = estimate_null_sigma(noise_grid);
        for (int tau : {36, 32, -40})
            CHECK(std::abs(estimate_ccf(rx_sm[0].samples, rx_sm[1].samples, 0.0, tau)) <
                  5.0 * sigma);
    }
}

TEST_CASE("estimate_null_sigma") {
    CcfGrid grid;
    CHECK_THROWS_AS(estimate_null_sigma(grid), ConfigError);

    for (int i = 0; i < 10; ++i) grid.entries.push_back({0.0, i, cplx{0.3, 0.4}}); // |.| = 0.5
    CHECK(estimate_null_sigma(grid) == doctest::Approx(0.5).epsilon(1e-12));

    // doubling all magnitudes doubles sigma
    auto doubled = grid;
    for (auto& e : doubled.entries) e.value *= 2.0;
    CHECK(estimate_null_sigma(doubled) == doctest::Approx(1.0).epsilon(1e-12));

    // consistency on synthetic Rayleigh draws: sigma_hat within 5% at K >= 200
    std::mt19937_64 rng(303);
    const double sigma_true = 0.7;
    std::normal_distribution<double> g(0.0, sigma_true / std::sqrt(2.0));
    CcfGrid synth;
    for (int k = 0; k < 216; ++k) synth.entries.push_back({0.0, k, cplx{g(rng), g(rng)}});
    CHECK(estimate_null_sigma(synth) == doctest::Approx(sigma_true).epsilon(0.05));
}

TEST_CASE("phase_noise_scaling closed form") {
    CHECK(phase_noise_scaling(0.0, 2000) == 1.0);
    CHECK(phase_noise_scaling(1e-12, 2000) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(phase_noise_scaling(-1e-6, 2000), ConfigError);
    CHECK_THROWS_AS(phase_noise_scaling(1e-5, 1999), ConfigError);

    // monotonically decreasing in betaT
    double prev = 1.0;
    for (double bt : {1e-6, 1e-5, 3e-5, 1e-4, 1e-3}) {
        const double f = phase_noise_scaling(bt, 2000);
        CHECK(f < prev);
        CHECK(f > 0.0);
        prev = f;
    }

    // displayed closed form evaluated directly
    const double bt = 3e-5;
    const double expect = 2.0 * (1.0 - std::exp(-4.0 * 2000 * M_PI * bt)) /
                          (2000.0 * (1.0 - std::exp(-8.0 * M_PI * bt)));
    CHECK(phase_noise_scaling(bt, 2000) == doctest::Approx(expect).epsilon(1e-12));
}
