#include "retroalign/verify/acceptance.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    retroalign::verify::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) opts.criteria.push_back(std::atoi(argv[i]));
    bool ok = true;
    for (const auto& r : retroalign::verify::run_acceptance(opts)) {
        std::cout << retroalign::verify::format_line(r) << std::endl;
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}
