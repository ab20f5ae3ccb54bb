// Prints one PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
#include "szego/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv)
{
    szego::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--quick") {
            opts.quick = true;
        } else if (arg == "--seed" && i + 1 < argc) {
            opts.seed = std::strtoull(argv[++i], nullptr, 10);
        } else if (arg == "--jobs" && i + 1 < argc) {
            opts.jobs = static_cast<unsigned>(std::strtoul(argv[++i], nullptr, 10));
        } else {
            std::fprintf(stderr, "usage: %s [--quick] [--seed N] [--jobs N]\n", argv[0]);
            return 2;
        }
    }
    int failed = 0;
    for (const auto& r : szego::run_acceptance(opts)) {
        std::printf("%s\n", szego::format_line(r).c_str());
        failed += r.pass ? 0 : 1;
    }
    std::printf("%d/%d criteria passed\n", szego::kCriterionCount - failed, szego::kCriterionCount);
    return failed == 0 ? 0 : 1;
}
