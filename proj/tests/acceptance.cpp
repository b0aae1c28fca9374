// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.

#include "rpme/error.hpp"
#include "rpme/verify.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
    rpme::VerifyContext ctx;
    int failed = 0;
    // Optional list of criterion numbers; all twelve by default.
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty())
        for (int i = 1; i <= 12; ++i) ids.push_back(i);
    for (int id : ids) {
        rpme::CheckResult r;
        try {
            r = rpme::acceptance_criterion(id, ctx);
        } catch (const rpme::Error& e) {
            r.criterion = id;
            r.name = "error";
            r.detail = e.what();
        }
        std::printf("criterion %2d %s  %s: %s [%.1f s]\n", id, r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str(), r.seconds);
        std::fflush(stdout);
        if (!r.passed) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", int(ids.size()) - failed, ids.size());
    return failed == 0 ? 0 : 1;
}
