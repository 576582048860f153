#include "op_parser.hpp"

#include <cctype>

namespace charp {

namespace {

struct Parser {
    const FpCtx& F;
    const std::string& s;
    size_t i = 0;

    Parser(const FpCtx& f, const std::string& text) : F(f), s(text) {}

    void skip() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return i < s.size() ? s[i] : '\0';
    }
    [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, i); }

    u64 integer() {
        skip();
        if (i >= s.size() || !std::isdigit((unsigned char)s[i])) fail("expected integer");
        u64 v = 0;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) {
            v = v * 10 + (s[i] - '0');
            if (v > ((u64)1 << 62)) fail("integer literal too large");
            ++i;
        }
        return v;
    }

    u64 exponent() {
        if (eat('^')) return integer();
        return 1;
    }

    // polynomial expression (no D), for parenthesized coefficients
    FpPoly poly_expr() {
        FpPoly acc;
        bool first = true;
        while (true) {
            skip();
            u32 sign = 1;
            if (eat('+')) {
            } else if (eat('-')) {
                sign = F.neg(1);
            } else if (!first) {
                break;
            }
            FpPoly t = poly_term();
            acc = poly_add(F, acc, sign == 1 ? t : poly_scale(F, t, sign));
            first = false;
        }
        return acc;
    }

    FpPoly poly_term() {
        FpPoly prod = poly_factor();
        while (true) {
            skip();
            if (eat('*')) {
                prod = poly_mul(F, prod, poly_factor());
            } else {
                break;
            }
        }
        return prod;
    }

    FpPoly poly_factor() {
        skip();
        if (i >= s.size()) fail("unexpected end of input");
        char c = s[i];
        FpPoly base;
        if (std::isdigit((unsigned char)c)) {
            base = constant_poly(F.reduce(integer() % F.p));
        } else if (c == 'x') {
            ++i;
            base = poly_x();
        } else if (c == '(') {
            ++i;
            base = poly_expr();
            if (!eat(')')) fail("expected ')'");
        } else if (c == 'D') {
            fail("D is not allowed inside a coefficient");
        } else {
            fail("expected a coefficient factor");
        }
        u64 e = exponent();
        return poly_pow(F, base, e);
    }

    // one term of the operator: product of coefficient factors and D^k
    void term(std::vector<FpPoly>& coeffs, u32 sign) {
        FpPoly coef = poly_one();
        u64 dpow = 0;
        bool have_d = false;
        bool expect_factor = true;
        while (expect_factor) {
            skip();
            if (i >= s.size()) fail("unexpected end of term");
            char c = s[i];
            if (c == 'D') {
                ++i;
                dpow += exponent();
                have_d = true;
            } else if (std::isdigit((unsigned char)c) || c == 'x' || c == '(') {
                if (have_d) fail("coefficient factors must precede D in a term");
                coef = poly_mul(F, coef, poly_factor());
            } else {
                fail("expected a factor");
            }
            expect_factor = eat('*');
        }
        if (dpow > 4096) fail("operator order too large");
        if (coeffs.size() <= dpow) coeffs.resize(dpow + 1);
        FpPoly signedc = sign == 1 ? coef : poly_scale(F, coef, sign);
        coeffs[dpow] = poly_add(F, coeffs[dpow], signedc);
    }
};

}  // namespace

DiffOp parse_operator(const FpCtx& F, const std::string& text) {
    Parser P(F, text);
    std::vector<FpPoly> coeffs;
    bool first = true;
    while (true) {
        P.skip();
        if (P.i >= text.size()) {
            if (first) P.fail("empty operator");
            break;
        }
        u32 sign = 1;
        if (P.eat('+')) {
        } else if (P.eat('-')) {
            sign = F.neg(1);
        } else if (!first) {
            P.fail("expected '+' or '-'");
        }
        P.term(coeffs, sign);
        first = false;
    }
    DiffOp L = scalar_op(OpBasis::Derivation, std::move(coeffs));
    if (L.is_zero()) throw parse_error("operator is zero after reduction mod p", 0);
    return L;
}

}  // namespace charp
