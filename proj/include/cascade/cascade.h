/* cascade.h - C interface to the cascade-network simulator.
 *
 * All functions return a cascade_status; on failure a human-readable message
 * is available from cascade_last_error() (thread-local, valid until the next
 * failing call on the same thread).  Complex matrices are passed through
 * row-major double buffers with interleaved re,im pairs, so an MxM complex
 * matrix occupies 2*M*M doubles.  Channel and site indices are 1-based.
 */

#ifndef CASCADE_CASCADE_H
#define CASCADE_CASCADE_H

#include <stddef.h>

#if defined(_WIN32)
#define CASCADE_API __declspec(dllexport)
#else
#define CASCADE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cascade_status {
  CASCADE_OK = 0,
  CASCADE_ERROR_INTERNAL = 1,   /* unexpected failure                     */
  CASCADE_ERROR_VALIDATION = 2, /* malformed input, schema violation      */
  CASCADE_ERROR_PHYSICALITY = 3,/* unphysical input, threshold violation  */
  CASCADE_ERROR_RESOURCE = 4    /* size cap exceeded                      */
} cascade_status;

CASCADE_API const char* cascade_last_error(void);
CASCADE_API const char* cascade_version(void);
CASCADE_API void cascade_string_free(char* s);

/* ---- network handles -------------------------------------------------- */

typedef struct cascade_network cascade_network;

/* Parse a network-spec JSON document (see README for the schema). */
CASCADE_API cascade_status cascade_network_parse(const char* json_text,
                                                 cascade_network** out);
CASCADE_API cascade_status cascade_network_load(const char* path,
                                                cascade_network** out);
/* Build a regular (translation-invariant) network from M-1 transmissivities
 * and phases. */
CASCADE_API cascade_status cascade_network_regular(int sites, const double* taus,
                                                   const double* phis, int count,
                                                   double loss, double gamma,
                                                   cascade_network** out);
CASCADE_API void cascade_network_free(cascade_network* net);

CASCADE_API int cascade_network_sites(const cascade_network* net);
CASCADE_API double cascade_network_gamma(const cascade_network* net);
CASCADE_API double cascade_network_loss(const cascade_network* net);
/* 1 when the handle carries regular (diagonal-constant) parameters. */
CASCADE_API int cascade_network_is_regular(const cascade_network* net);
/* Fills M-1 entries each; fails unless the handle is regular. */
CASCADE_API cascade_status cascade_network_regular_params(const cascade_network* net,
                                                          double* taus, double* phis);
/* Serialize to the spec-file JSON schema; free with cascade_string_free. */
CASCADE_API cascade_status cascade_network_to_json(const cascade_network* net,
                                                   char** out_json);

/* ---- coupling constants ------------------------------------------------ */

/* zeta buffer: 2*M*M doubles, strictly upper triangular content. */
CASCADE_API cascade_status cascade_coupling_matrix(const cascade_network* net,
                                                   double* zeta_out);
/* Independent brute-force path enumeration (sites <= 12). */
CASCADE_API cascade_status cascade_coupling_matrix_oracle(const cascade_network* net,
                                                          double* zeta_out);

/* ---- GKSL decomposition ------------------------------------------------ */

/* rates_out: M doubles, descending.  lindblad_out: 2*M*M doubles; column i
 * holds the site coefficients of the i-th jump operator.  heff_out: 2*M*M
 * doubles, Hermitian coefficient matrix of the effective Hamiltonian.
 * Any output pointer may be NULL to skip it. */
CASCADE_API cascade_status cascade_gksl_decompose(const cascade_network* net,
                                                  double* rates_out,
                                                  double* lindblad_out,
                                                  double* heff_out);
/* Analytic even/odd-network form (regular, tau_2 = 0, phi_2 = phi_1 + pi/2),
 * in the gauge with a real coupling profile. */
CASCADE_API cascade_status cascade_gksl_evenodd_closed_form(int sites, double tau1,
                                                            double gamma,
                                                            double* rates_out,
                                                            double* lindblad_out,
                                                            double* heff_out);
/* Compares the numeric decomposition of an even/odd network against the
 * closed form: max |rate difference| and max Frobenius distance between the
 * spectral projectors of the two nonzero rates (gauge-adjusted, so any phi_1
 * is accepted). */
CASCADE_API cascade_status cascade_gksl_evenodd_compare(const cascade_network* net,
                                                        double* max_rate_dev,
                                                        double* max_projector_dev);

/* ---- regular networks -------------------------------------------------- */

/* xi_out: 2*kmax doubles (re,im of xi_1..xi_kmax).  Requires a regular
 * handle and kmax <= M-1. */
CASCADE_API cascade_status cascade_xi_profile(const cascade_network* net, int kmax,
                                              double* xi_out);
/* Transfer-matrix route: K-1 transmissivities (tau_K = 0 implicit) and K
 * phases describe the active block. */
CASCADE_API cascade_status cascade_xi_profile_closed(const double* taus,
                                                     const double* phis, int K,
                                                     int kmax, double* xi_out);
/* K=2 analytic formula; *used_fallback (may be NULL) is set when the
 * degenerate case forced the transfer-matrix route. */
CASCADE_API cascade_status cascade_xi_k2_analytic(double tau1, double phi1,
                                                  double phi2, int kmax,
                                                  double* xi_out, int* used_fallback);

/* Pruned-interaction designer: keeps only the order-n coupling.  taus_out and
 * phis_out receive `count` entries.  Optional diagnostics: retained coupling
 * modulus and max residual over pruned orders. */
CASCADE_API cascade_status cascade_design_pruned(int order, double tau_base,
                                                 double phi_base, int count,
                                                 double* taus_out, double* phis_out,
                                                 double* retained_out,
                                                 double* residual_out);
/* Smallest tau_1 on the grid for which the pruning recursion stays in [0,1]
 * up to order k; refine != 0 bisects the bracket down to 1e-8. */
CASCADE_API cascade_status cascade_threshold_scan(int k, double grid, int refine,
                                                  double* threshold_out);

/* ---- dynamics ----------------------------------------------------------- */

typedef struct cascade_sim cascade_sim;

/* Integrates the master equation from a product state with the listed sites
 * excited to occupation 1 (RK4, fixed step dt, emitted every `stride` steps).
 * local_dim >= 2; the generator dimension cap d^(2M) <= 2^24 applies unless
 * override_cap != 0. */
CASCADE_API cascade_status cascade_simulate(const cascade_network* net, int local_dim,
                                            double t_final, double dt,
                                            const int* excited_sites, int n_excited,
                                            int stride, int override_cap,
                                            cascade_sim** out);
CASCADE_API void cascade_sim_free(cascade_sim* sim);
CASCADE_API int cascade_sim_samples(const cascade_sim* sim);
CASCADE_API int cascade_sim_sites(const cascade_sim* sim);
CASCADE_API double cascade_sim_time(const cascade_sim* sim, int sample);
CASCADE_API double cascade_sim_population(const cascade_sim* sim, int sample, int site);
CASCADE_API cascade_status cascade_sim_moment(const cascade_sim* sim, int sample,
                                              int site, double* re, double* im);
/* Step-halving estimate of the integration error at t_final. */
CASCADE_API double cascade_sim_convergence_error(const cascade_sim* sim);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CASCADE_CASCADE_H */
