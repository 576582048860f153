/* charp: exact linear differential operators over F_p(x) -- polynomial and
 * rational solution spaces, p-curvature.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every function returns a charp_status; on failure charp_last_error() gives
 * a thread-local description of what went wrong.
 */
#ifndef CHARP_H
#define CHARP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    CHARP_OK = 0,
    CHARP_ERR_ARG = 1,          /* bad handle / null pointer / unusable input */
    CHARP_ERR_PARSE = 2,        /* operator text does not match the grammar */
    CHARP_ERR_PRECONDITION = 3, /* hypothesis H fails, r > p, ...            */
    CHARP_ERR_MISMATCH = 4,     /* oracle cross-check failed                 */
    CHARP_ERR_INTERNAL = 5
} charp_status;

typedef struct charp_ctx charp_ctx;       /* prime field context */
typedef struct charp_op charp_op;         /* parsed differential operator */
typedef struct charp_result charp_result; /* computation result */

/* p must be an odd prime below 2^31 */
charp_status charp_ctx_new(unsigned p, charp_ctx** out);
void charp_ctx_free(charp_ctx* ctx);

/* Parse the operator grammar: sums of terms, coefficients are integer
 * polynomials in x (parenthesized when not monomials), D denotes d/dx:
 *   "(x^2+1)*D^2 + 3*x*D + (x+2)"
 * On CHARP_ERR_PARSE, *err_pos (when non-null) receives the text offset. */
charp_status charp_op_parse(const charp_ctx* ctx, const char* text, charp_op** out, int* err_pos);
void charp_op_free(charp_op* op);
unsigned charp_op_order(const charp_op* op);
long charp_op_degree(const charp_op* op);

/* computations; zero or more results may be produced per operator */
charp_status charp_pcurv(const charp_ctx* ctx, const charp_op* op, charp_result** out);
charp_status charp_pcurv_naive(const charp_ctx* ctx, const charp_op* op, charp_result** out);
charp_status charp_katz_vector(const charp_ctx* ctx, const charp_op* op, charp_result** out);
charp_status charp_polsols(const charp_ctx* ctx, const charp_op* op, charp_result** out);
charp_status charp_exists(const charp_ctx* ctx, const charp_op* op, charp_result** out);
charp_status charp_ratdim(const charp_ctx* ctx, const charp_op* op, charp_result** out);
charp_status charp_trace(const charp_ctx* ctx, const charp_op* op, charp_result** out);
charp_status charp_nilpotent(const charp_ctx* ctx, const charp_op* op, charp_result** out);

/* Re-run `command` ("pcurv", "exists", ...) against the independent slow
 * path (Katz recurrence / dense band system) and compare with `res`.
 * *match is set to 1 or 0; a 0 also returns CHARP_ERR_MISMATCH. */
charp_status charp_check_oracle(const charp_ctx* ctx, const charp_op* op, const char* command,
                                const charp_result* res, int* match);

/* serialized views; returned strings are malloc'd, free with charp_string_free */
charp_status charp_result_json(const charp_result* res, char** out);
charp_status charp_result_human(const charp_result* res, char** out);
int charp_result_equal(const charp_result* a, const charp_result* b);
void charp_result_free(charp_result* res);
void charp_string_free(char* s);

const char* charp_last_error(void);

#ifdef __cplusplus
}
#endif

#endif
