#ifndef WHFACTOR_H
#define WHFACTOR_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit classes.
 */
typedef enum WhStatus {
  /**
   * Success.
   */
  WhStatus_Ok = 0,
  /**
   * Malformed request (bad JSON, bad flags, null pointers).
   */
  WhStatus_BadRequest = 1,
  /**
   * Input polynomial outside the method's domain.
   */
  WhStatus_Validation = 2,
  /**
   * Numerical failure; retry with higher ell or precision.
   */
  WhStatus_Numerical = 3,
} WhStatus;

/**
 * Opaque factorization report.
 */
typedef struct WhReport WhReport;

/**
 * Options of a factorization request; zero/NULL fields mean defaults.
 */
typedef struct WhOptions {
  /**
   * "kernel", "direct" or "both"; NULL means kernel.
   */
  const char *path;
  /**
   * "native" or "ext:\<digits\>"; NULL means native.
   */
  const char *precision;
  /**
   * "auto", "general", "self-inversive", "one" or a number; NULL = auto.
   */
  const char *delta0;
  /**
   * Decimal string; NULL means the automatic recipe.
   */
  const char *eps_tilde;
  /**
   * Decimal string; NULL takes the value from the request JSON.
   */
  const char *rho;
  /**
   * Decimal string; NULL takes the value from the request JSON.
   */
  const char *delta;
  /**
   * Window half-length; 0 means degree + 1.
   */
  uintptr_t n;
  /**
   * Enable the root-based delta0 hypothesis check.
   */
  bool oracle_check;
} WhOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Factorizes the polynomial described by `request_json`
 * (`{"coefficients": [[re, im], ...], "rho": ..., "delta": ...}`) and
 * returns an opaque report through `out`.
 *
 * # Safety
 * `request_json` must be a valid NUL-terminated string; `options` may be
 * NULL or point to a valid [`WhOptions`]; `out` must be a valid pointer.
 * The report must be released with [`wh_report_free`].
 */
enum WhStatus wh_factorize_json(const char *request_json,
                                const struct WhOptions *options,
                                struct WhReport **out);

/**
 * Serialized report; the pointer stays valid until [`wh_report_free`].
 *
 * # Safety
 * `report` must be a live pointer from [`wh_factorize_json`].
 */
const char *wh_report_json(const struct WhReport *report);

/**
 * Winding number of the factorized polynomial.
 *
 * # Safety
 * `report` must be a live pointer from [`wh_factorize_json`].
 */
int wh_report_kappa(const struct WhReport *report);

/**
 * Sampling order used for the Laurent window.
 *
 * # Safety
 * `report` must be a live pointer from [`wh_factorize_json`].
 */
int wh_report_ell(const struct WhReport *report);

/**
 * Residual `||p1 p2 - p||` as a double (lossy for extended precision).
 *
 * # Safety
 * `report` must be a live pointer from [`wh_factorize_json`].
 */
double wh_report_residual(const struct WhReport *report);

/**
 * Certified factor accuracy `eps` as a double.
 *
 * # Safety
 * `report` must be a live pointer from [`wh_factorize_json`].
 */
double wh_report_eps(const struct WhReport *report);

/**
 * Releases a report handle; NULL is allowed.
 *
 * # Safety
 * `report` must be NULL or a pointer from [`wh_factorize_json`] not yet
 * freed.
 */
void wh_report_free(struct WhReport *report);

/**
 * Message of the last error on this thread, or NULL; valid until the next
 * library call on the same thread.
 */
const char *wh_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *wh_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WHFACTOR_H */
