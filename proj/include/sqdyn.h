/* sqdyn: 1D semiclassical quantum dynamics engine.
 *
 * C API over the C++ core: opaque handles, status codes, plain buffers.
 * All functions return SQDYN_OK on success; on failure they return an error
 * code and leave a message retrievable with sqdyn_last_error().
 */
#ifndef SQDYN_H
#define SQDYN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqdyn_status {
    SQDYN_OK = 0,
    SQDYN_ERR_INVALID_ARGUMENT = 1,
    SQDYN_ERR_UNSUPPORTED_SYMBOL = 2,
    SQDYN_ERR_DEGREE_TOO_HIGH = 3,
    SQDYN_ERR_STEP_FAILURE = 4,
    SQDYN_ERR_NONFINITE_STATE = 5,
    SQDYN_ERR_DEGENERATE = 6,
    SQDYN_ERR_NO_CONVERGENCE = 7,
    SQDYN_ERR_BRANCH_AMBIGUITY = 8,
    SQDYN_ERR_UNBOUND = 9,
    SQDYN_ERR_BELOW_MINIMUM = 10,
    SQDYN_ERR_NO_BRACKET = 11,
    SQDYN_ERR_GRID_TOO_COARSE = 12,
    SQDYN_ERR_NOT_CONFINING = 13,
    SQDYN_ERR_QUADRATURE_FAILURE = 14,
    SQDYN_ERR_LEAKAGE = 15,
    SQDYN_ERR_NO_ROOT_TRAJECTORY = 16,
    SQDYN_ERR_DEGENERATE_STATIONARY_POINT = 17,
    SQDYN_ERR_ZERO_CROSSING = 18,
    SQDYN_ERR_STATIONARY_POINT = 19,
    SQDYN_ERR_INTERNAL = 20
} sqdyn_status;

typedef enum sqdyn_symbol {
    SQDYN_SYMBOL_WEYL = 0,
    SQDYN_SYMBOL_SMOOTHED = 1,
    SQDYN_SYMBOL_ANTISMOOTHED = 2
} sqdyn_symbol;

typedef enum sqdyn_method {
    SQDYN_METHOD_SMOOTHED_IVR = 0,
    SQDYN_METHOD_HERMAN_KLUK = 1,
    SQDYN_METHOD_HELLER = 2
} sqdyn_method;

typedef enum sqdyn_rule {
    SQDYN_RULE_SMOOTHED_PLUS_I = 0,
    SQDYN_RULE_ANTISMOOTHED_MINUS_I = 1,
    SQDYN_RULE_WEYL_WKB = 2
} sqdyn_rule;

typedef struct sqdyn_model sqdyn_model;
typedef struct sqdyn_trajectory sqdyn_trajectory;
typedef struct sqdyn_spectrum sqdyn_spectrum;

typedef struct sqdyn_complex {
    double re;
    double im;
} sqdyn_complex;

const char* sqdyn_version(void);
const char* sqdyn_last_error(void);

/* ---- models -------------------------------------------------------- */

sqdyn_status sqdyn_model_create_harmonic(double mass, double omega, double b,
                                         double hbar, sqdyn_model** out);
/* coeffs[k] multiplies q^k; degree capped at 12 */
sqdyn_status sqdyn_model_create_polynomial(double mass, const double* coeffs,
                                           size_t n_coeffs, double b, double hbar,
                                           sqdyn_model** out);
/* H = p^2/2m + 2 V0 e^{-alpha A} cosh(alpha x) */
sqdyn_status sqdyn_model_create_barrier(double v0, double alpha, double a, double mass,
                                        double b, double hbar, sqdyn_model** out);
void sqdyn_model_free(sqdyn_model* model);

sqdyn_status sqdyn_model_params(const sqdyn_model* model, double* b, double* c,
                                double* hbar, double* mass);

typedef struct sqdyn_local_derivs {
    sqdyn_complex h, h_q, h_p, h_qq, h_pp, h_qp;
} sqdyn_local_derivs;

sqdyn_status sqdyn_eval_symbol(const sqdyn_model* model, sqdyn_symbol symbol,
                               sqdyn_complex q, sqdyn_complex p,
                               sqdyn_local_derivs* out);
/* potential part of the symbol at real q, and the kinetic constant shift */
sqdyn_status sqdyn_potential(const sqdyn_model* model, sqdyn_symbol symbol, double q,
                             double* out);
sqdyn_status sqdyn_kinetic_shift(const sqdyn_model* model, sqdyn_symbol symbol,
                                 double* out);

/* ---- coherent states ------------------------------------------------ */

sqdyn_status sqdyn_coherent_wavefunction(const sqdyn_model* model, double q, double p,
                                         const double* xs, size_t n,
                                         sqdyn_complex* out);
sqdyn_status sqdyn_overlap(const sqdyn_model* model, double q1, double p1, double q2,
                           double p2, sqdyn_complex* out);
/* <z|psi> by quadrature over a uniform grid */
sqdyn_status sqdyn_bargmann(const sqdyn_model* model, const sqdyn_complex* psi,
                            const double* xs, size_t n, double q, double p,
                            sqdyn_complex* out);

/* ---- real trajectories ---------------------------------------------- */

sqdyn_status sqdyn_integrate(const sqdyn_model* model, sqdyn_symbol symbol, double q0,
                             double p0, double t, sqdyn_trajectory** out);
void sqdyn_trajectory_free(sqdyn_trajectory* traj);
size_t sqdyn_trajectory_size(const sqdyn_trajectory* traj);

typedef struct sqdyn_traj_sample {
    double t, q, p;
    double m_qq, m_qp, m_pq, m_pp;
    double action; /* S_H */
    double iterm;  /* I */
} sqdyn_traj_sample;

sqdyn_status sqdyn_trajectory_sample(const sqdyn_trajectory* traj, size_t index,
                                     sqdyn_traj_sample* out);
sqdyn_status sqdyn_trajectory_energy_drift(const sqdyn_trajectory* traj, double* out);

/* gamma = M_uv / M_vv of a scaled tangent matrix */
sqdyn_status sqdyn_gamma(double m_qq, double m_qp, double m_pq, double m_pp,
                         sqdyn_complex* out);

/* ---- coherent-state propagator -------------------------------------- */

typedef struct sqdyn_propagator_result {
    sqdyn_complex value;  /* K(z'', t; z', 0) */
    sqdyn_complex action; /* complex S */
    sqdyn_complex iterm;  /* complex I */
    sqdyn_complex m_vv;
    sqdyn_complex v0; /* shooting solution v(0) */
    double residual;
} sqdyn_propagator_result;

sqdyn_status sqdyn_propagator(const sqdyn_model* model, sqdyn_symbol symbol, double q1,
                              double p1, double q2, double p2, double t,
                              sqdyn_propagator_result* out);

/* Newton from every seed for v(0); distinct roots land in `results` (capacity
 * must cover n_seeds). The principal root is the conj(z') seed. */
sqdyn_status sqdyn_propagator_roots(const sqdyn_model* model, sqdyn_symbol symbol,
                                    double q1, double p1, double q2, double p2, double t,
                                    const sqdyn_complex* seeds, size_t n_seeds,
                                    sqdyn_propagator_result* results, size_t* count);

/* |S + I (smoothed) - S (weyl)| at shared boundary data from the real
 * smoothed-flow endpoint */
sqdyn_status sqdyn_action_gap(const sqdyn_model* model, double q0, double p0, double t,
                              double* out);

/* ---- mixed-representation propagators -------------------------------- */

typedef struct sqdyn_packet_info {
    double q_r, p_r;
    double m_qq, m_qp, m_pq, m_pp;
    sqdyn_complex gamma;
    sqdyn_complex prefactor;
    double action;
    double iterm;
    double norm; /* integral |amp|^2 dx (0 unless amplitudes requested) */
} sqdyn_packet_info;

sqdyn_status sqdyn_mixed_packet(const sqdyn_model* model, sqdyn_method method, double q0,
                                double p0, double t, const double* xs, size_t n,
                                sqdyn_complex* amplitudes, sqdyn_packet_info* info);

/* verify_convergence != 0 re-runs on a doubled phase-space grid and fails
 * with SQDYN_ERR_GRID_TOO_COARSE when the result moves by more than 1e-4 L2 */
sqdyn_status sqdyn_propagate_state(const sqdyn_model* model, sqdyn_method method,
                                   const sqdyn_complex* psi0, const double* xs, size_t n,
                                   double t, double q_min, double q_max, size_t nq,
                                   double p_min, double p_max, size_t np, int threads,
                                   int verify_convergence, sqdyn_complex* psi_out);

typedef enum sqdyn_coordinate_mode {
    SQDYN_COORD_STATIONARY_PHASE = 0,
    SQDYN_COORD_BRUTE_FORCE = 1
} sqdyn_coordinate_mode;

sqdyn_status sqdyn_coordinate_propagator(const sqdyn_model* model, sqdyn_method method,
                                         double x_from, double x_to, double t,
                                         sqdyn_coordinate_mode mode, sqdyn_complex* out);

sqdyn_status sqdyn_sampling_spread(const sqdyn_model* model, sqdyn_method method,
                                   double m_qq, double m_qp, double m_pq, double m_pp,
                                   double* out);

/* ---- semiclassical quantization and Husimi --------------------------- */

typedef struct sqdyn_level {
    int m;
    double energy;
    double action;
    double iterm;
    double period;
    double dI_dE;
    double dT_dE;
} sqdyn_level;

/* out_levels needs capacity for m_max - m_min + 1 entries */
sqdyn_status sqdyn_quantize(const sqdyn_model* model, sqdyn_rule rule, int m_min,
                            int m_max, sqdyn_level* out_levels, size_t* out_count);

/* density buffer is row-major over (nq, np); stationary points yield NaN */
sqdyn_status sqdyn_husimi_semiclassical(const sqdyn_model* model, sqdyn_rule rule,
                                        const sqdyn_level* level, double q_min,
                                        double q_max, size_t nq, double p_min,
                                        double p_max, size_t np, double* density);

sqdyn_status sqdyn_greens_function(const sqdyn_model* model, sqdyn_rule rule, double q,
                                   double p, double energy, double gamma,
                                   sqdyn_complex* out, int* pole_proximity);

typedef enum sqdyn_ho_reference_kind {
    SQDYN_HO_SEMICLASSICAL_FULL = 0,
    SQDYN_HO_SEMICLASSICAL_EXPANDED = 1,
    SQDYN_HO_EXACT = 2
} sqdyn_ho_reference_kind;

sqdyn_status sqdyn_ho_reference(int m, double z_abs2, sqdyn_ho_reference_kind kind,
                                double* out);

/* ---- exact quantum reference ----------------------------------------- */

/* n_basis = 0 derives the size from e_max; L_override = 0 solves V(L) = E_max */
sqdyn_status sqdyn_spectrum_solve(const sqdyn_model* model, int n_basis, double e_max,
                                  double L_override, int with_trust_check,
                                  sqdyn_spectrum** out);
void sqdyn_spectrum_free(sqdyn_spectrum* spectrum);
sqdyn_status sqdyn_spectrum_info(const sqdyn_spectrum* spectrum, size_t* n_levels,
                                 int* trusted, double* box_half_width, double* e_max);
sqdyn_status sqdyn_spectrum_energies(const sqdyn_spectrum* spectrum, double* out,
                                     size_t capacity);
sqdyn_status sqdyn_spectrum_eigenfunction(const sqdyn_spectrum* spectrum, int level,
                                          const double* xs, size_t n, double* out);
sqdyn_status sqdyn_spectrum_evolve(const sqdyn_spectrum* spectrum,
                                   const sqdyn_complex* psi0, const double* xs, size_t n,
                                   double t, sqdyn_complex* psi_out, double* captured);
sqdyn_status sqdyn_spectrum_husimi(const sqdyn_spectrum* spectrum, int level,
                                   double q_min, double q_max, size_t nq, double p_min,
                                   double p_max, size_t np, size_t x_resolution,
                                   double* density);

/* ---- stationary-phase asymptotics ------------------------------------ */

typedef struct sqdyn_spa_result {
    sqdyn_complex a0;
    double r;
    sqdyn_complex corrected;
} sqdyn_spa_result;

/* derivative values of f (to 4th) and g (to 2nd) at the stationary point */
sqdyn_status sqdyn_spa_integrate(double f0, double f1, double f2, double f3, double f4,
                                 double g0, double g1, double g2, double hbar,
                                 sqdyn_spa_result* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SQDYN_H */
