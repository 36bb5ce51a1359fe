#include <cstdio>
#include <cstdlib>
#include <string>

#include "paoi/validate.hpp"

// Runs the validation matrix and prints one verdict line per criterion.
// With an argument, runs that single criterion. Exit 0 only if all ran green.
int main(int argc, char** argv) {
    paoi::validate::Settings settings;
    settings.packets = 1000000;
    settings.seed = 42;

    std::vector<paoi::validate::CheckResult> results;
    if (argc > 1) {
        const int id = std::atoi(argv[1]);
        if (id < 1 || id > 11) {
            std::fprintf(stderr, "usage: %s [criterion 1..11]\n", argv[0]);
            return 2;
        }
        results.push_back(paoi::validate::run_one(id, settings));
    } else {
        results = paoi::validate::run_all(settings);
    }

    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("%s criterion %d: %s -- %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}
