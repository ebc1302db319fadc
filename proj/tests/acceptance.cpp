// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit code = number of failed criteria.

#include "parab/verify.hpp"

#include <cstdio>
#include <iostream>

int main() {
    using namespace parab::verify;
    std::printf("building fixtures (chain, certified params, curve, machine)...\n");
    std::fflush(stdout);
    Context cx = Context::standard();
    int failed = 0;
    auto results = run_all(cx);
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %s  (%.2f s)\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.runtime_s);
        for (const auto& c : r.checks) {
            std::printf("        %s %s%s%s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(),
                        c.detail.empty() ? "" : ": ", c.detail.c_str());
        }
        if (!r.pass) ++failed;
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(results.size()) - failed, results.size());
    return failed;
}
