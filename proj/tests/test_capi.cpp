#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "charp.h"
#include "op_parser.hpp"
#include "pcurv.hpp"

using json = nlohmann::json;
using namespace charp;

namespace {

struct Ctx {
    charp_ctx* c = nullptr;
    explicit Ctx(unsigned p) { REQUIRE(charp_ctx_new(p, &c) == CHARP_OK); }
    ~Ctx() { charp_ctx_free(c); }
};

struct Op {
    charp_op* o = nullptr;
    Op(const Ctx& ctx, const char* text) {
        REQUIRE(charp_op_parse(ctx.c, text, &o, nullptr) == CHARP_OK);
    }
    ~Op() { charp_op_free(o); }
};

std::string json_of(const charp_result* r) {
    char* s = nullptr;
    REQUIRE(charp_result_json(r, &s) == CHARP_OK);
    std::string out(s);
    charp_string_free(s);
    return out;
}

std::string human_of(const charp_result* r) {
    char* s = nullptr;
    REQUIRE(charp_result_human(r, &s) == CHARP_OK);
    std::string out(s);
    charp_string_free(s);
    return out;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(CHARP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("operator grammar") {
    FpCtx F3(3);
    DiffOp L = parse_operator(F3, "D^2 - x");
    CHECK(L.order() == 2);
    CHECK(L.max_coeff_degree() == 1);
    CHECK(L.coeffs[0].at(0, 0) == poly_from_ints(F3, {0, -1}));
    CHECK(L.coeffs[2].at(0, 0) == poly_one());

    FpCtx F5(5);
    DiffOp L2 = parse_operator(F5, "(x^2+1)*D + 3");
    CHECK(L2.order() == 1);
    CHECK(L2.max_coeff_degree() == 2);
    CHECK(L2.coeffs[1].at(0, 0) == poly_from_ints(F5, {1, 0, 1}));
    CHECK(L2.coeffs[0].at(0, 0) == constant_poly(3));

    FpCtx F7(7);
    DiffOp L3 = parse_operator(F7, "x*D - 1");
    CHECK(L3.order() == 1);
    CHECK(L3.coeffs[1].at(0, 0) == poly_x());
    CHECK(L3.coeffs[0].at(0, 0) == poly_from_ints(F7, {-1}));

    // whitespace-insensitive, nested parens, reduction mod p
    DiffOp L4 = parse_operator(F5, "  ( x + 2 ) ^ 2 * D^3+10*x*D -(7)");
    CHECK(L4.order() == 3);
    CHECK(L4.coeffs[3].at(0, 0) == poly_mul(F5, poly_from_ints(F5, {2, 1}), poly_from_ints(F5, {2, 1})));
    CHECK(L4.coeffs[1].at(0, 0).is_zero());  // 10 = 0 mod 5
    CHECK(L4.coeffs[0].at(0, 0) == poly_from_ints(F5, {-7}));

    CHECK_THROWS_AS(parse_operator(F5, "D^2 + "), parse_error);
    CHECK_THROWS_AS(parse_operator(F5, "y + 1"), parse_error);
    CHECK_THROWS_AS(parse_operator(F5, "5*x - 5*x"), parse_error);  // zero operator
    CHECK_THROWS_AS(parse_operator(F5, "D*x"), parse_error);        // coefficient after D
    try {
        parse_operator(F5, "x^2 + $");
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(e.pos == 6);
    }
}

TEST_CASE("C API basics and error codes") {
    charp_ctx* c = nullptr;
    CHECK(charp_ctx_new(4, &c) == CHARP_ERR_PRECONDITION);
    CHECK(charp_ctx_new(9, &c) == CHARP_ERR_PRECONDITION);
    REQUIRE(charp_ctx_new(3, &c) == CHARP_OK);
    charp_op* op = nullptr;
    int pos = -1;
    CHECK(charp_op_parse(c, "D^^2", &op, &pos) == CHARP_ERR_PARSE);
    CHECK(pos >= 0);
    REQUIRE(charp_op_parse(c, "D^2 - x", &op, &pos) == CHARP_OK);
    CHECK(charp_op_order(op) == 2);
    CHECK(charp_op_degree(op) == 1);
    charp_result* res = nullptr;
    REQUIRE(charp_pcurv(c, op, &res) == CHARP_OK);
    std::string h = human_of(res);
    CHECK(h == "[[1, x^2], [x, 2]]");
    int match = 0;
    CHECK(charp_check_oracle(c, op, "pcurv", res, &match) == CHARP_OK);
    CHECK(match == 1);
    charp_result_free(res);
    charp_op_free(op);

    // H failure is a distinct precondition error
    charp_op* bad = nullptr;
    REQUIRE(charp_op_parse(c, "(x^3 - x)*D - 1", &bad, &pos) == CHARP_OK);
    charp_result* r2 = nullptr;
    CHECK(charp_pcurv(c, bad, &r2) == CHARP_ERR_PRECONDITION);
    charp_op_free(bad);
    charp_ctx_free(c);
}

TEST_CASE("json output round-trips") {
    Ctx ctx(3);
    Op op(ctx, "D^2 - x");
    charp_result* res = nullptr;
    REQUIRE(charp_pcurv(ctx.c, op.o, &res) == CHARP_OK);
    std::string js = json_of(res);
    json j = json::parse(js);
    CHECK(j["command"] == "pcurv");
    CHECK(j["p"] == 3);
    CHECK(j["curvature"]["exp"] == 3);
    // reconstruct the numerator and compare against the direct computation
    FpCtx F(3);
    DiffOp L = parse_operator(F, "D^2 - x");
    RatMat oracle = katz_recurrence(F, L, 3);
    auto num = j["curvature"]["num"];
    REQUIRE(num.size() == 2);
    for (size_t i = 0; i < 2; ++i)
        for (size_t k = 0; k < 2; ++k) {
            std::vector<u32> cs = num[i][k].get<std::vector<u32>>();
            CHECK(FpPoly(std::move(cs)) == oracle.num.at(i, k));
        }
    // printing is deterministic
    CHECK(json::parse(js).dump() == json::parse(js).dump());
    charp_result_free(res);

    // polsols carries the basis
    Ctx c5(5);
    Op xd(c5, "x*D - 1");
    charp_result* rb = nullptr;
    REQUIRE(charp_polsols(c5.c, xd.o, &rb) == CHARP_OK);
    json jb = json::parse(json_of(rb));
    CHECK(jb["dimension"] == 1);
    auto basis = jb["basis"];
    REQUIRE(basis.size() == 1);
    std::vector<u32> b0 = basis[0].get<std::vector<u32>>();
    FpCtx F5(5);
    CHECK(poly_monic(F5, FpPoly(std::move(b0))) == poly_x());
    charp_result_free(rb);
}

TEST_CASE("results across commands") {
    Ctx c5(5);
    Op d2(c5, "D^2");
    charp_result* r = nullptr;
    REQUIRE(charp_nilpotent(c5.c, d2.o, &r) == CHARP_OK);
    CHECK(human_of(r) == "true");
    charp_result_free(r);
    Op dm1(c5, "D - 1");
    REQUIRE(charp_exists(c5.c, dm1.o, &r) == CHARP_OK);
    CHECK(human_of(r) == "dimension 0");
    charp_result_free(r);
    Op xd(c5, "x*D - 1");
    REQUIRE(charp_ratdim(c5.c, xd.o, &r) == CHARP_OK);
    CHECK(human_of(r) == "dimension 1");
    charp_result_free(r);
    // pcurv equals pcurv-naive equals katz-vector through the API
    Op airy(c5, "D^2 - x");
    charp_result *a = nullptr, *b = nullptr, *c = nullptr;
    REQUIRE(charp_pcurv(c5.c, airy.o, &a) == CHARP_OK);
    REQUIRE(charp_pcurv_naive(c5.c, airy.o, &b) == CHARP_OK);
    REQUIRE(charp_katz_vector(c5.c, airy.o, &c) == CHARP_OK);
    CHECK(charp_result_equal(a, b));
    CHECK(charp_result_equal(b, c));
    charp_result_free(a);
    charp_result_free(b);
    charp_result_free(c);
}

TEST_CASE("regularization shift is mapped back") {
    // x*D - 1 needs a shift; polsols must return the solution in original coordinates
    Ctx c7(7);
    Op xd(c7, "x*D - 1");
    charp_result* r = nullptr;
    REQUIRE(charp_polsols(c7.c, xd.o, &r) == CHARP_OK);
    json j = json::parse(json_of(r));
    CHECK(j["shift"] == 1);
    std::vector<u32> b0 = j["basis"][0].get<std::vector<u32>>();
    FpCtx F(7);
    CHECK(poly_monic(F, FpPoly(std::move(b0))) == poly_x());
    charp_result_free(r);

    // pcurv of the shifted operator maps back to the unshifted curvature
    charp_result *fast = nullptr, *naive = nullptr;
    REQUIRE(charp_pcurv(c7.c, xd.o, &fast) == CHARP_OK);
    REQUIRE(charp_pcurv_naive(c7.c, xd.o, &naive) == CHARP_OK);
    CHECK(charp_result_equal(fast, naive));
    charp_result_free(fast);
    charp_result_free(naive);
}

TEST_CASE("CLI exit code contract") {
    CHECK(run_cli("pcurv -p 3 \"D^2 - x\"") == 0);
    CHECK(run_cli("pcurv -p 3 \"D^2 - x\" --json") == 0);
    CHECK(run_cli("nilpotent -p 5 \"D^2\"") == 0);
    CHECK(run_cli("exists -p 5 \"D - 1\"") == 0);
    CHECK(run_cli("pcurv -p 3 \"D^2 + @\"") == 2);          // parse error
    CHECK(run_cli("pcurv -p 5 \"(x^5 - x)*D - 1\"") == 3);  // H fails
    CHECK(run_cli("exists -p 3 \"D^4 + x*D - 1\"") == 3);   // r > p
    CHECK(run_cli("pcurv -p 7 \"D^2 - x\" --check-oracle") == 0);
    CHECK(run_cli("polsols -p 5 \"x*D - 1\" --check-oracle") == 0);
    CHECK(run_cli("ratdim -p 5 \"x*D - 1\" --check-oracle") == 0);
    CHECK(run_cli("trace -p 5 \"D^2 + x*D\" --check-oracle") == 0);
    CHECK(run_cli("nilpotent -p 5 \"D^2 - x\" --check-oracle") == 0);
    CHECK(run_cli("bench pcurv \"D^2 - x\" --bench-sizes 5,7") == 0);
}
