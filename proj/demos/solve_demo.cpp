// Finds the fixed point of cos and prints the error decay per iteration.
#include <iostream>

#include "secantx/secantx.hpp"

using namespace secantx;

int main() {
    const CorpusEntry& entry = corpus_lookup("dottie");
    SolverConfig config;
    config.k = entry.suggested_k;
    config.initial_points = entry.initial_points(kDefaultPrecision);

    SolveReport report = solve(entry.problem(kDefaultPrecision), config);
    for (const auto& r : report.records) {
        std::cout << "n=" << r.n << "  x=" << format(r.x, 30);
        if (r.error) std::cout << "  eps=" << format(*r.error, 4);
        std::cout << "\n";
    }
    std::cout << "termination: " << to_string(report.termination)
              << "  evaluations: " << report.evaluations << "\n";
    return 0;
}
