// Acceptance suite: runs every verification criterion with fixed seeds and
// prints one pass/fail line per criterion. Exit code 0 iff all criteria pass.

#include <cstdio>
#include <string>

#include "dicut/verify.hpp"

int main(int argc, char** argv) {
    dicut::VerifyOptions opts;
    if (argc > 1) opts.seed = std::stoull(argv[1]);

    const auto results = dicut::verify_all(opts);
    std::size_t criteria = 0, passed = 0;
    double total_seconds = 0.0;
    for (const auto& r : results) {
        const char* tag = r.informational ? "INFO" : (r.pass ? "PASS" : "FAIL");
        if (!r.informational) {
            criteria++;
            if (r.pass) passed++;
        }
        total_seconds += r.seconds;
        std::printf("[%s] %-16s %s\n       measured: %s  (%.2fs)\n", tag, r.id.c_str(),
                    r.description.c_str(), r.measured.c_str(), r.seconds);
    }
    std::printf("----\n%zu of %zu criteria passed in %.1fs\n", passed, criteria, total_seconds);
    return passed == criteria ? 0 : 1;
}
