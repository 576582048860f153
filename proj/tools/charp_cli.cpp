#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "charp.h"

namespace {

struct CtxGuard {
    charp_ctx* c = nullptr;
    ~CtxGuard() { charp_ctx_free(c); }
};
struct OpGuard {
    charp_op* o = nullptr;
    ~OpGuard() { charp_op_free(o); }
};
struct ResGuard {
    charp_result* r = nullptr;
    ~ResGuard() { charp_result_free(r); }
};

int status_to_exit(charp_status st) {
    switch (st) {
        case CHARP_OK: return 0;
        case CHARP_ERR_PARSE: return 2;
        case CHARP_ERR_PRECONDITION: return 3;
        case CHARP_ERR_MISMATCH: return 4;
        default: return 5;
    }
}

using RunFn = charp_status (*)(const charp_ctx*, const charp_op*, charp_result**);

RunFn dispatch(const std::string& cmd) {
    if (cmd == "pcurv") return charp_pcurv;
    if (cmd == "pcurv-naive") return charp_pcurv_naive;
    if (cmd == "katz-vector") return charp_katz_vector;
    if (cmd == "polsols") return charp_polsols;
    if (cmd == "exists") return charp_exists;
    if (cmd == "ratdim") return charp_ratdim;
    if (cmd == "trace") return charp_trace;
    if (cmd == "nilpotent") return charp_nilpotent;
    return nullptr;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) {
        std::cerr << "cannot open output file: " << path << "\n";
        std::exit(5);
    }
    return file;
}

int run_command(const std::string& cmd, unsigned p, const std::string& optext, bool json,
                bool check_oracle, const std::string& outpath) {
    RunFn fn = dispatch(cmd);
    if (!fn) {
        std::cerr << "unknown command: " << cmd << "\n";
        return 5;
    }
    CtxGuard ctx;
    charp_status st = charp_ctx_new(p, &ctx.c);
    if (st != CHARP_OK) {
        std::cerr << "error: " << charp_last_error() << "\n";
        return status_to_exit(st);
    }
    OpGuard op;
    int err_pos = -1;
    st = charp_op_parse(ctx.c, optext.c_str(), &op.o, &err_pos);
    if (st != CHARP_OK) {
        std::cerr << "parse error";
        if (err_pos >= 0) std::cerr << " at position " << err_pos;
        std::cerr << ": " << charp_last_error() << "\n";
        return status_to_exit(st);
    }
    ResGuard res;
    st = fn(ctx.c, op.o, &res.r);
    if (st != CHARP_OK) {
        std::cerr << "error: " << charp_last_error() << "\n";
        return status_to_exit(st);
    }

    std::ofstream file;
    std::ostream& os = open_out(file, outpath);
    char* text = nullptr;
    st = json ? charp_result_json(res.r, &text) : charp_result_human(res.r, &text);
    if (st != CHARP_OK) {
        std::cerr << "error: " << charp_last_error() << "\n";
        return status_to_exit(st);
    }
    os << text << "\n";
    charp_string_free(text);

    if (check_oracle) {
        if (p > 31) {
            std::cerr << "--check-oracle requires p <= 31\n";
            return 3;
        }
        int match = 0;
        st = charp_check_oracle(ctx.c, op.o, cmd.c_str(), res.r, &match);
        if (st == CHARP_OK && match) {
            os << "oracle: MATCH\n";
        } else if (st == CHARP_ERR_MISMATCH) {
            os << "oracle: MISMATCH\n";
            return 4;
        } else {
            std::cerr << "oracle error: " << charp_last_error() << "\n";
            return status_to_exit(st);
        }
    }
    return 0;
}

int run_bench(const std::string& cmd, const std::string& optext, const std::vector<unsigned>& sizes,
              const std::string& outpath) {
    RunFn fn = dispatch(cmd);
    if (!fn) {
        std::cerr << "unknown bench target: " << cmd << "\n";
        return 5;
    }
    std::ofstream file;
    std::ostream& os = open_out(file, outpath);
    os << "command,p,d,r,ms\n";
    for (unsigned p : sizes) {
        CtxGuard ctx;
        charp_status st = charp_ctx_new(p, &ctx.c);
        if (st != CHARP_OK) {
            std::cerr << "error at p=" << p << ": " << charp_last_error() << "\n";
            return status_to_exit(st);
        }
        OpGuard op;
        int err_pos = -1;
        st = charp_op_parse(ctx.c, optext.c_str(), &op.o, &err_pos);
        if (st != CHARP_OK) {
            std::cerr << "parse error: " << charp_last_error() << "\n";
            return status_to_exit(st);
        }
        auto t0 = std::chrono::steady_clock::now();
        ResGuard res;
        st = fn(ctx.c, op.o, &res.r);
        auto t1 = std::chrono::steady_clock::now();
        if (st != CHARP_OK) {
            std::cerr << "error at p=" << p << ": " << charp_last_error() << "\n";
            return status_to_exit(st);
        }
        double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        char row[256];
        std::snprintf(row, sizeof row, "%s,%u,%ld,%u,%.3f\n", cmd.c_str(), p,
                      charp_op_degree(op.o), charp_op_order(op.o), ms);
        os << row;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact differential operators over F_p(x): solution spaces and p-curvature"};
    app.require_subcommand(1);

    static const std::vector<std::string> kCommands = {
        "pcurv", "pcurv-naive", "katz-vector", "polsols", "exists", "ratdim", "trace", "nilpotent"};

    struct Common {
        unsigned p = 0;
        std::string op;
        bool json = false;
        bool check = false;
        std::string out;
    };
    std::vector<std::pair<CLI::App*, std::shared_ptr<Common>>> subs;
    for (const auto& name : kCommands) {
        auto* sub = app.add_subcommand(name);
        auto c = std::make_shared<Common>();
        sub->add_option("-p", c->p, "odd prime modulus < 2^31")->required();
        sub->add_option("operator", c->op, "operator text, e.g. \"(x^2+1)*D^2 + 3*x*D\"")->required();
        sub->add_flag("--json", c->json, "emit JSON");
        sub->add_flag("--check-oracle", c->check, "cross-check against the slow oracle (p <= 31)");
        sub->add_option("--out", c->out, "write output to a file");
        subs.emplace_back(sub, c);
    }

    auto* bench = app.add_subcommand("bench", "time a command at several primes, CSV output");
    std::string bench_cmd, bench_op, bench_sizes, bench_out;
    bench->add_option("command", bench_cmd, "command to time")->required();
    bench->add_option("operator", bench_op, "operator text")->required();
    bench->add_option("--bench-sizes", bench_sizes, "comma separated primes")->required();
    bench->add_option("--out", bench_out, "write CSV to a file");

    CLI11_PARSE(app, argc, argv);

    if (bench->parsed()) {
        std::vector<unsigned> sizes;
        std::stringstream ss(bench_sizes);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) sizes.push_back((unsigned)std::stoul(tok));
        }
        if (sizes.empty()) {
            std::cerr << "--bench-sizes: no primes given\n";
            return 5;
        }
        return run_bench(bench_cmd, bench_op, sizes, bench_out);
    }
    for (size_t i = 0; i < subs.size(); ++i) {
        if (subs[i].first->parsed()) {
            const auto& c = *subs[i].second;
            return run_command(kCommands[i], c.p, c.op, c.json, c.check, c.out);
        }
    }
    return 5;
}
