// Acceptance battery: one line per criterion, exit 0 iff everything passes.
#include <cstdio>

#include "f2lab/verify.hpp"

int main() {
    bool all = true;
    for (const f2lab::CheckResult& c : f2lab::run_acceptance()) {
        all = all && c.pass;
        std::printf("criterion %d: %s — %s — %s (%.2fs)\n", c.criterion,
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str(),
                    c.seconds);
        std::fflush(stdout);
    }
    std::printf(all ? "acceptance: all criteria passed\n"
                    : "acceptance: FAILURES present\n");
    return all ? 0 : 1;
}
