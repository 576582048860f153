#include "charp.h"

#include <cstdlib>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "op_parser.hpp"
#include "pcurv.hpp"

using namespace charp;
using ordered_json = nlohmann::ordered_json;

struct charp_ctx {
    FpCtx F;
};

struct charp_op {
    DiffOp L;
};

struct charp_result {
    enum class Kind { Matrix, Basis, Dimension, Flag } kind;
    std::string command;
    u32 p = 0;
    u32 shift = 0;  // regularization shift that was applied (results already shifted back)
    u32 order = 0;
    i64 degree = 0;
    RatMat mat;
    std::vector<FpPoly> basis;
    u64 degree_bound = 0;
    size_t dimension = 0;
    bool flag = false;
};

namespace {

thread_local std::string g_last_error;

charp_status set_error(charp_status st, const std::string& msg) {
    g_last_error = msg;
    return st;
}

template <typename Fn>
charp_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const parse_error& e) {
        return set_error(CHARP_ERR_PARSE, e.what());
    } catch (const precondition_error& e) {
        return set_error(CHARP_ERR_PRECONDITION, e.what());
    } catch (const charp_error& e) {
        return set_error(CHARP_ERR_INTERNAL, e.what());
    } catch (const std::exception& e) {
        return set_error(CHARP_ERR_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = (char*)std::malloc(s.size() + 1);
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

FpPoly shift_back(const FpCtx& F, const FpPoly& f, u32 x0) {
    return x0 ? taylor_shift(F, f, F.neg(x0)) : f;
}

RatMat shift_back(const FpCtx& F, const RatMat& M, u32 x0) {
    if (!x0) return M;
    RatMat R = M;
    for (auto& e : R.num.a) e = shift_back(F, e, x0);
    R.den = shift_back(F, R.den, x0);
    return R;
}

charp_result* new_result(const charp_ctx* ctx, const charp_op* op, const char* command) {
    auto* r = new charp_result;
    r->command = command;
    r->p = ctx->F.p;
    r->order = (u32)op->L.order();
    r->degree = op->L.max_coeff_degree();
    return r;
}

ordered_json poly_json(const FpPoly& f) {
    ordered_json a = ordered_json::array();
    for (u32 c : f.c) a.push_back(c);
    return a;
}

ordered_json ratmat_json(const RatMat& M) {
    ordered_json num = ordered_json::array();
    for (size_t i = 0; i < M.num.rows; ++i) {
        ordered_json row = ordered_json::array();
        for (size_t j = 0; j < M.num.cols; ++j) row.push_back(poly_json(M.num.at(i, j)));
        num.push_back(row);
    }
    return ordered_json{{"den", poly_json(M.den)}, {"exp", M.exp}, {"num", num}};
}

}  // namespace

extern "C" {

charp_status charp_ctx_new(unsigned p, charp_ctx** out) {
    if (!out) return set_error(CHARP_ERR_ARG, "null output pointer");
    return guarded([&] {
        auto* c = new charp_ctx{FpCtx((u32)p)};
        *out = c;
        return CHARP_OK;
    });
}

void charp_ctx_free(charp_ctx* ctx) { delete ctx; }

charp_status charp_op_parse(const charp_ctx* ctx, const char* text, charp_op** out, int* err_pos) {
    if (!ctx || !text || !out) return set_error(CHARP_ERR_ARG, "null argument");
    if (err_pos) *err_pos = -1;
    try {
        auto* op = new charp_op{parse_operator(ctx->F, text)};
        *out = op;
        return CHARP_OK;
    } catch (const parse_error& e) {
        if (err_pos) *err_pos = (int)e.pos;
        return set_error(CHARP_ERR_PARSE, e.what());
    } catch (const std::exception& e) {
        return set_error(CHARP_ERR_INTERNAL, e.what());
    }
}

void charp_op_free(charp_op* op) { delete op; }

unsigned charp_op_order(const charp_op* op) { return op ? (unsigned)op->L.order() : 0; }

long charp_op_degree(const charp_op* op) { return op ? (long)op->L.max_coeff_degree() : -1; }

charp_status charp_pcurv(const charp_ctx* ctx, const charp_op* op, charp_result** out) {
    if (!ctx || !op || !out) return set_error(CHARP_ERR_ARG, "null argument");
    return guarded([&] {
        Regularized reg = regularize(ctx->F, op->L);
        Curvature c = reg.op.order() == 1 ? pcurvature_order1(ctx->F, reg.op)
                                          : pcurvature_general(ctx->F, reg.op);
        auto* r = new_result(ctx, op, "pcurv");
        r->kind = charp_result::Kind::Matrix;
        r->shift = reg.shift;
        r->mat = shift_back(ctx->F, c.Ap, reg.shift);
        *out = r;
        return CHARP_OK;
    });
}

charp_status charp_pcurv_naive(const charp_ctx* ctx, const charp_op* op, charp_result** out) {
    if (!ctx || !op || !out) return set_error(CHARP_ERR_ARG, "null argument");
    return guarded([&] {
        RatMat Ap = katz_recurrence(ctx->F, op->L, ctx->F.p);
        auto* r = new_result(ctx, op, "pcurv-naive");
        r->kind = charp_result::Kind::Matrix;
        r->mat = std::move(Ap);
        *out = r;
        return CHARP_OK;
    });
}

charp_status charp_katz_vector(const charp_ctx* ctx, const charp_op* op, charp_result** out) {
    if (!ctx || !op || !out) return set_error(CHARP_ERR_ARG, "null argument");
    return guarded([&] {
        RatMat Ap = katz_vector(ctx->F, op->L);
        auto* r = new_result(ctx, op, "katz-vector");
        r->kind = charp_result::Kind::Matrix;
        r->mat = std::move(Ap);
        *out = r;
        return CHARP_OK;
    });
}

charp_status charp_polsols(const charp_ctx* ctx, const charp_op* op, charp_result** out) {
    if (!ctx || !op || !out) return set_error(CHARP_ERR_ARG, "null argument");
    return guarded([&] {
        Regularized reg = regularize(ctx->F, op->L);
        SolutionSpace S = basis_G(ctx->F, reg.op);
        auto* r = new_result(ctx, op, "polsols");
        r->kind = charp_result::Kind::Basis;
        r->shift = reg.shift;
        r->dimension = S.dimension;
        r->degree_bound = S.degree_bound;
        for (auto& u : S.basis) r->basis.push_back(shift_back(ctx->F, u, reg.shift));
        *out = r;
        return CHARP_OK;
    });
}

charp_status charp_exists(const charp_ctx* ctx, const charp_op* op, charp_result** out) {
    if (!ctx || !op || !out) return set_error(CHARP_ERR_ARG, "null argument");
    return guarded([&] {
        Regularized reg = regularize(ctx->F, op->L);
        auto* r = new_result(ctx, op, "exists");
        r->kind = charp_result::Kind::Dimension;
        r->shift = reg.shift;
        r->dimension = dimension_G(ctx->F, reg.op);
        *out = r;
        return CHARP_OK;
    });
}

charp_status charp_ratdim(const charp_ctx* ctx, const charp_op* op, charp_result** out) {
    if (!ctx || !op || !out) return set_error(CHARP_ERR_ARG, "null argument");
    return guarded([&] {
        Regularized reg = regularize(ctx->F, op->L);
        auto* r = new_result(ctx, op, "ratdim");
        r->kind = charp_result::Kind::Dimension;
        r->shift = reg.shift;
        r->dimension = rational_solution_space(ctx->F, reg.op).dimension;
        *out = r;
        return CHARP_OK;
    });
}

charp_status charp_trace(const charp_ctx* ctx, const charp_op* op, charp_result** out) {
    if (!ctx || !op || !out) return set_error(CHARP_ERR_ARG, "null argument");
    return guarded([&] {
        Regularized reg = regularize(ctx->F, op->L);
        RatMat t = trace_pcurvature(ctx->F, reg.op);
        auto* r = new_result(ctx, op, "trace");
        r->kind = charp_result::Kind::Matrix;
        r->shift = reg.shift;
        r->mat = shift_back(ctx->F, t, reg.shift);
        *out = r;
        return CHARP_OK;
    });
}

charp_status charp_nilpotent(const charp_ctx* ctx, const charp_op* op, charp_result** out) {
    if (!ctx || !op || !out) return set_error(CHARP_ERR_ARG, "null argument");
    return guarded([&] {
        Regularized reg = regularize(ctx->F, op->L);
        auto* r = new_result(ctx, op, "nilpotent");
        r->kind = charp_result::Kind::Flag;
        r->shift = reg.shift;
        r->flag = nilpotence_test(ctx->F, reg.op);
        *out = r;
        return CHARP_OK;
    });
}

charp_status charp_check_oracle(const charp_ctx* ctx, const charp_op* op, const char* command,
                                const charp_result* res, int* match) {
    if (!ctx || !op || !command || !res || !match) return set_error(CHARP_ERR_ARG, "null argument");
    *match = 0;
    return guarded([&] {
        const FpCtx& F = ctx->F;
        std::string cmd = command;
        bool ok = false;
        if (cmd == "pcurv" || cmd == "pcurv-naive") {
            RatMat oracle = katz_recurrence(F, op->L, F.p);
            ok = res->kind == charp_result::Kind::Matrix && res->mat.same_value(F, oracle);
        } else if (cmd == "exists" || cmd == "polsols") {
            Regularized reg = regularize(F, op->L);
            size_t dim = dense_dimension(F, reg.op);
            ok = res->dimension == dim;
        } else if (cmd == "ratdim") {
            RatMat oracle = katz_recurrence(F, op->L, F.p);
            size_t rank = poly_mat_rank(F, oracle.num);
            ok = res->dimension == op->L.order() - rank;
        } else if (cmd == "trace") {
            RatMat oracle = katz_recurrence(F, op->L, F.p);
            RatMat tr;
            tr.num = PolyMat(1, 1);
            tr.num.at(0, 0) = poly_add(F, oracle.num.at(0, 0), oracle.num.at(1, 1));
            tr.den = oracle.den;
            tr.exp = oracle.exp;
            ok = res->kind == charp_result::Kind::Matrix && res->mat.same_value(F, tr);
        } else if (cmd == "nilpotent") {
            RatMat oracle = katz_recurrence(F, op->L, F.p);
            PolyMat sq = poly_mat_mul(F, oracle.num, oracle.num);
            ok = res->flag == sq.is_zero();
        } else {
            return set_error(CHARP_ERR_ARG, "no oracle for command: " + cmd);
        }
        *match = ok ? 1 : 0;
        if (!ok) return set_error(CHARP_ERR_MISMATCH, "oracle mismatch for " + cmd);
        return CHARP_OK;
    });
}

charp_status charp_result_json(const charp_result* res, char** out) {
    if (!res || !out) return set_error(CHARP_ERR_ARG, "null argument");
    return guarded([&] {
        ordered_json j;
        j["command"] = res->command;
        j["p"] = res->p;
        j["shift"] = res->shift;
        j["order"] = res->order;
        j["degree"] = res->degree;
        switch (res->kind) {
            case charp_result::Kind::Matrix:
                j["curvature"] = ratmat_json(res->mat);
                break;
            case charp_result::Kind::Basis: {
                j["dimension"] = res->dimension;
                j["degree_bound"] = res->degree_bound;
                ordered_json b = ordered_json::array();
                for (auto& u : res->basis) b.push_back(poly_json(u));
                j["basis"] = b;
                break;
            }
            case charp_result::Kind::Dimension:
                j["dimension"] = res->dimension;
                break;
            case charp_result::Kind::Flag:
                j["nilpotent"] = res->flag;
                break;
        }
        *out = dup_string(j.dump());
        return CHARP_OK;
    });
}

charp_status charp_result_human(const charp_result* res, char** out) {
    if (!res || !out) return set_error(CHARP_ERR_ARG, "null argument");
    return guarded([&] {
        FpCtx F(res->p);
        std::ostringstream os;
        switch (res->kind) {
            case charp_result::Kind::Matrix: {
                const RatMat& M = res->mat;
                bool unit_den = (M.den.degree() == 0);
                u32 scale = 1;
                if (unit_den) scale = F.inv(F.pow(M.den.c[0], M.exp));
                os << "[";
                for (size_t i = 0; i < M.num.rows; ++i) {
                    os << "[";
                    for (size_t j = 0; j < M.num.cols; ++j) {
                        FpPoly e = unit_den ? poly_scale(F, M.num.at(i, j), scale) : M.num.at(i, j);
                        os << poly_to_string(F, e) << (j + 1 < M.num.cols ? ", " : "");
                    }
                    os << "]" << (i + 1 < M.num.rows ? ", " : "");
                }
                os << "]";
                if (!unit_den)
                    os << " / (" << poly_to_string(F, M.den) << ")^" << M.exp;
                if (res->shift) os << "   (computed with shift x -> x + " << res->shift << ", mapped back)";
                break;
            }
            case charp_result::Kind::Basis: {
                os << "dimension " << res->dimension << " (degree bound " << res->degree_bound << ")";
                for (auto& u : res->basis) os << "\n  " << poly_to_string(F, u);
                break;
            }
            case charp_result::Kind::Dimension:
                os << "dimension " << res->dimension;
                break;
            case charp_result::Kind::Flag:
                os << (res->flag ? "true" : "false");
                break;
        }
        *out = dup_string(os.str());
        return CHARP_OK;
    });
}

int charp_result_equal(const charp_result* a, const charp_result* b) {
    if (!a || !b) return 0;
    if (a->kind != b->kind || a->p != b->p) return 0;
    try {
        FpCtx F(a->p);
        switch (a->kind) {
            case charp_result::Kind::Matrix:
                return a->mat.same_value(F, b->mat) ? 1 : 0;
            case charp_result::Kind::Basis:
                return (a->dimension == b->dimension && a->basis == b->basis) ? 1 : 0;
            case charp_result::Kind::Dimension:
                return a->dimension == b->dimension ? 1 : 0;
            case charp_result::Kind::Flag:
                return a->flag == b->flag ? 1 : 0;
        }
    } catch (...) {
        return 0;
    }
    return 0;
}

void charp_result_free(charp_result* res) { delete res; }

void charp_string_free(char* s) { std::free(s); }

const char* charp_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
