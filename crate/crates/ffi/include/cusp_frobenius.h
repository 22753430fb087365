#ifndef CUSP_FROBENIUS_H
#define CUSP_FROBENIUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CfStatus {
  CF_STATUS_OK = 0,
  /*
   Null pointer, bad UTF-8 or an unknown suite name.
   */
  CF_STATUS_INVALID_ARGUMENT = 1,
  CF_STATUS_INVALID_TRIPLET = 2,
  CF_STATUS_CHI_ZERO = 3,
  CF_STATUS_DEGENERATE_ARM = 4,
  CF_STATUS_TRUNCATION_TOO_SMALL = 5,
  CF_STATUS_UNDERDETERMINED = 6,
  CF_STATUS_INCONSISTENT = 7,
  CF_STATUS_SINGULAR_CARTAN = 8,
  CF_STATUS_DEGENERATE_METRIC = 9,
  CF_STATUS_PARSE = 10,
  /*
   Any other library error.
   */
  CF_STATUS_FAILED = 11,
  /*
   A panic was caught at the boundary.
   */
  CF_STATUS_PANIC = 12,
} CfStatus;

/*
 A solved potential.
 */
typedef struct CfPotential CfPotential;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Solves for the potential through q-order `q_order`. `t_degree` = 0 picks
 the smallest admissible bound. The triplet may be given in any order.

 # Safety
 `out` must be a valid pointer.
 */
enum CfStatus cf_potential_solve(uint32_t a1,
                                 uint32_t a2,
                                 uint32_t a3,
                                 uint32_t q_order,
                                 uint32_t t_degree,
                                 struct CfPotential **out);

/*
 Parses the JSON written by [`cf_potential_to_json`].

 # Safety
 `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum CfStatus cf_potential_from_json(const char *json, struct CfPotential **out);

/*
 # Safety
 `p` must come from this library and not be used afterwards. Null is ignored.
 */
void cf_potential_free(struct CfPotential *p);

/*
 # Safety
 `p` must be a live potential and `out` a valid pointer.
 */
enum CfStatus cf_potential_to_json(const struct CfPotential *p, char **out);

/*
 Number of terms of the stored series (cubic part included).

 # Safety
 `p` must be a live potential and `out` a valid pointer.
 */
enum CfStatus cf_potential_term_count(const struct CfPotential *p, size_t *out);

/*
 Number of nonzero WDVV residual coefficients within the truncation.

 # Safety
 `p` must be a live potential and `out` a valid pointer.
 */
enum CfStatus cf_potential_wdvv_residual_count(const struct CfPotential *p, size_t *out);

/*
 Intersection form entries and the mu-row identity report, as JSON.

 # Safety
 `p` must be a live potential and `out` a valid pointer.
 */
enum CfStatus cf_intersection_json(const struct CfPotential *p, char **out);

/*
 Milnor number, chi and exponents, as JSON.

 # Safety
 `out` must be a valid pointer.
 */
enum CfStatus cf_info_json(uint32_t a1, uint32_t a2, uint32_t a3, char **out);

/*
 Residue table as JSON. `s_mu` is "p" or "p/q"; null means 1.

 # Safety
 `s_mu` must be null or a nul-terminated string; `out` a valid pointer.
 */
enum CfStatus cf_residue_json(uint32_t a1, uint32_t a2, uint32_t a3, const char *s_mu, char **out);

/*
 Cartan matrix, coweights and Gram data as JSON.

 # Safety
 `out` must be a valid pointer.
 */
enum CfStatus cf_weyl_json(uint32_t a1, uint32_t a2, uint32_t a3, char **out);

/*
 Runs a verification suite ("all", "wdvv", "intersection", "residue",
 "weyl" or "periods") and writes the report as JSON. `passed` receives 1
 when no check failed. A failed check is not an error status.

 # Safety
 `suite` must be a nul-terminated string; `out` and `passed` valid pointers.
 */
enum CfStatus cf_verify_json(uint32_t a1,
                             uint32_t a2,
                             uint32_t a3,
                             const char *suite,
                             uint32_t q_order,
                             uint32_t t_degree,
                             uint64_t seed,
                             char **out,
                             int32_t *passed);

/*
 Message for the last failed call on this thread, or null. The pointer
 stays valid until the next library call on the same thread.
 */
const char *cf_last_error(void);

/*
 # Safety
 `s` must come from this library and not be used afterwards. Null is ignored.
 */
void cf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUSP_FROBENIUS_H */
