#ifndef COINDET_H
#define COINDET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CoindetStatus {
  COINDET_STATUS_OK = 0,
  COINDET_STATUS_NULL_POINTER = 1,
  COINDET_STATUS_INVALID_UTF8 = 2,
  COINDET_STATUS_PARSE_ERROR = 3,
  COINDET_STATUS_INVALID_DGA = 4,
  COINDET_STATUS_UNKNOWN_FIXTURE = 5,
  /**
   * The mathematics refused: undefined bracket, non-cycle input, degree
   * out of range. The message starts with a reason code.
   */
  COINDET_STATUS_REFUSED = 6,
  COINDET_STATUS_PANIC = 7,
  COINDET_STATUS_INTERNAL = 8,
} CoindetStatus;

/**
 * Homology of a validated DGA.
 */
typedef struct CoindetHomology CoindetHomology;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread; empty after a success.
 * Valid until the next call into this library from the same thread.
 */
const char *coindet_last_error_message(void);

/**
 * Parses and validates presentation text.
 *
 * # Safety
 * `text_ptr` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum CoindetStatus coindet_homology_from_text(const char *text_ptr, struct CoindetHomology **out);

/**
 * Loads a shipped fixture such as `"A"` or `"A_prime"`.
 *
 * # Safety
 * `name` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum CoindetStatus coindet_homology_from_fixture(const char *name, struct CoindetHomology **out);

/**
 * # Safety
 * `h` must come from this library and not have been freed; null is ignored.
 */
void coindet_homology_free(struct CoindetHomology *h);

/**
 * Whether presentation text parses and passes validation. A parse failure
 * is reported through the status, a validation failure through `out_valid`
 * with the violations left in the error message.
 *
 * # Safety
 * `text_ptr` must be a valid NUL-terminated string and `out_valid` a valid pointer.
 */
enum CoindetStatus coindet_validate_text(const char *text_ptr, bool *out_valid);

/**
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum CoindetStatus coindet_homology_dim(const struct CoindetHomology *h,
                                        int32_t degree,
                                        size_t *out);

/**
 * Whether `⟨c0, c1, c2⟩` contains zero. Arguments are chain polynomials.
 *
 * # Safety
 * `h` must be a live handle, the strings valid and `out` a valid pointer.
 */
enum CoindetStatus coindet_triple_contains_zero(const struct CoindetHomology *h,
                                                const char *c0,
                                                const char *c1,
                                                const char *c2,
                                                bool *out);

/**
 * Whether the coindeterminacy of four cycles contains zero.
 *
 * # Safety
 * `h` must be a live handle, the strings valid and `out` a valid pointer.
 */
enum CoindetStatus coindet_coindet_contains_zero(const struct CoindetHomology *h,
                                                 const char *c0,
                                                 const char *c1,
                                                 const char *c2,
                                                 const char *c3,
                                                 bool *out);

/**
 * Whether `⟨c0, c1, c2, c3⟩` is defined.
 *
 * # Safety
 * `h` must be a live handle, the strings valid and `out` a valid pointer.
 */
enum CoindetStatus coindet_fourfold_defined(const struct CoindetHomology *h,
                                            const char *c0,
                                            const char *c1,
                                            const char *c2,
                                            const char *c3,
                                            bool *out);

/**
 * Runs a command-line invocation (without the program name) and returns
 * its output, e.g. `{"fourfold", "A.dga", "a0", "a1", "a2", "a3", "--json"}`.
 * The string must be released with [`coindet_string_free`]. The command's
 * exit code goes to `out_exit`; the status only reflects the call itself.
 *
 * # Safety
 * `argv` must point to `argc` valid NUL-terminated strings; `out` and
 * `out_exit` must be valid pointers.
 */
enum CoindetStatus coindet_run_command(const char *const *argv,
                                       size_t argc,
                                       char **out,
                                       int32_t *out_exit);

/**
 * # Safety
 * `s` must come from this library and not have been freed; null is ignored.
 */
void coindet_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COINDET_H */
