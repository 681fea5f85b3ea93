/* C API for the SM/AL-OFDM space-time-code identifier.
 *
 * All functions return STBCID_OK on success. On failure a short message is
 * available from stbcid_last_error() (thread-local, valid until the next
 * call on the same thread). Handles are opaque; free them with the matching
 * *_free function.
 */
#ifndef STBCID_H
#define STBCID_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define STBCID_OK 0
#define STBCID_ERR_CONFIG 2
#define STBCID_ERR_IO 3

typedef struct stbcid_config_s stbcid_config;

/* Configuration: defaults mirror the library defaults (N=64, nu=8, QPSK,
 * N_s=2000, P_F=1e-2, exponential 4-path channel, N_r=2, 200 trials). */
stbcid_config* stbcid_config_new(void);
void stbcid_config_free(stbcid_config* cfg);

/* Loads a JSON config file; unknown keys are rejected. */
int stbcid_config_load_file(stbcid_config* cfg, const char* path);

/* Single key override, mirroring the CLI flags: scheme, snr, trials, seed,
 * pf, nrx, profile, paths, phase_noise, freq_offset, timing_offset,
 * n_symbols, n, n_guard, n_window, constellation, order, out. */
int stbcid_config_set(stbcid_config* cfg, const char* key, const char* value);

const char* stbcid_last_error(void);
const char* stbcid_version(void);

typedef struct {
    int label_al; /* 1 = AL, 0 = SM */
    int n_exceedances;
    double threshold;
    double sigma_hat;
    int n_features;
} stbcid_decision;

/* Synthesizes one received-signal realization per the config and writes it
 * as an IQ recording set under `prefix` (see the recording format notes in
 * the README). Uses the first SNR grid entry. */
int stbcid_generate(const stbcid_config* cfg, const char* prefix);

/* Classifies a recording set written by stbcid_generate (or compatible).
 * OFDM parameters are taken from the recording metadata; P_F and N_r from
 * the config. */
int stbcid_classify(const stbcid_config* cfg, const char* prefix, stbcid_decision* out);

/* Synthesizes one realization and writes the estimated CCF grid (feature
 * and noise delays, three cycle frequencies) to CSV; for flat channels a
 * column with the analytical flat-fading magnitude is included. */
int stbcid_ccf(const stbcid_config* cfg, const char* out_csv);

/* Runs the Monte Carlo experiment grid and writes the result CSV. */
int stbcid_mc(const stbcid_config* cfg, const char* out_csv);

/* Flop count of one identification, 3(14 N_s (N+nu) - 2)(N + 9 nu + 2). */
int stbcid_flops(int64_t n_symbols, int n, int nu, int64_t* out);

#ifdef __cplusplus
}
#endif

#endif /* STBCID_H */
