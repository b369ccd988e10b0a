// Evaluates the vacuum quasi-probability at the squeezed optimum and cross-checks it
// against the truncated-Fock reference.

#include <cstdio>

#include "lgi/fock_oracle.hpp"
#include "lgi/oscillator.hpp"

int main() {
    using namespace lgi;
    const OscillatorState vacuum{};
    const GaussianProjector proj{0.57, 0.31};
    const auto table = qp_table(vacuum, proj, 0.0, kPi);
    const auto oracle = fock::oracle_table(vacuum, proj, 0.0, kPi);
    for (const auto s : kAllOutcomePairs)
        std::printf("q_%s = % .12f   fock: % .12f\n", s.label().c_str(), table.at(s), oracle.q[s.index()]);
    std::printf("sum - 1 = %.2e, fock truncation %zu\n", table.sum_check, oracle.dim);
}
