#ifndef ORBQ_H
#define ORBQ_H

/* C interface to the orbital-integral engine.  All computational entry
 * points exchange JSON strings; returned strings are owned by the library
 * and must be released with orbq_free.  Every function returning int uses
 * the orbq_status codes below.  A context is not thread-safe; create one
 * per thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define ORBQ_API __declspec(dllexport)
#else
#define ORBQ_API __attribute__((visibility("default")))
#endif

typedef struct orbq_ctx orbq_ctx;

typedef enum orbq_status {
    ORBQ_OK = 0,
    ORBQ_E_PARSE = 1,      /* malformed request or grammar error */
    ORBQ_E_DOMAIN = 2,     /* precondition violated (separability, field, ...) */
    ORBQ_E_PRECISION = 3,  /* truncation hides the answer */
    ORBQ_E_UNSTABLE = 4,   /* window certificate failed */
    ORBQ_E_INTERNAL = 5,
} orbq_status;

ORBQ_API const char* orbq_version(void);

/* options_json: {"precision": 40, "window": -1}; NULL for defaults */
ORBQ_API orbq_ctx* orbq_ctx_new(const char* options_json);
ORBQ_API void orbq_ctx_free(orbq_ctx* ctx);

/* last error message of a failed call on this context */
ORBQ_API const char* orbq_last_error(const orbq_ctx* ctx);

ORBQ_API void orbq_free(char* s);

/* Evaluate one orbital integral.
 * request: {"q":3,"n":1,"lambda":"1/2","side":"LINEAR","x":"t^2"}
 *          side LINEAR|QUATERNION|CONJUGATION|TWISTED
 * result:  {"poly":{"1":1,"-1":-1},"value":0,"derivative_log_q":2,...} */
ORBQ_API int orbq_orb(orbq_ctx* ctx, const char* request_json, char** result_json);

/* Invariant profile, vanishing orders, functional-equation sign.
 * request: {"q":3,"n":1,"lambda":"1/2","delta":"T - t^2"} or {"x":...,"side":...} */
ORBQ_API int orbq_inv(orbq_ctx* ctx, const char* request_json, char** result_json);

/* Run verification suites on one instance (schema documented in README). */
ORBQ_API int orbq_verify(orbq_ctx* ctx, const char* instance_json, char** report_json);

/* Deterministically generate instances from a generator config. */
ORBQ_API int orbq_gen(orbq_ctx* ctx, const char* config_json, char** instances_json);

#ifdef __cplusplus
}
#endif

#endif /* ORBQ_H */
