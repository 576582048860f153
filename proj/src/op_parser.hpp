#ifndef CHARP_OP_PARSER_HPP
#define CHARP_OP_PARSER_HPP

#include <string>

#include "diff_op.hpp"

namespace charp {

struct parse_error : charp_error {
    size_t pos;
    parse_error(const std::string& msg, size_t at) : charp_error(msg), pos(at) {}
};

// Text grammar shared with the CLI: sums of terms, each a product of integer
// polynomial factors in x and an optional power of D; integers reduce mod p.
//   (x^2+1)*D^2 + 3*x*D + (x+2)
DiffOp parse_operator(const FpCtx& F, const std::string& text);

}  // namespace charp

#endif
