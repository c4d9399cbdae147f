// Prints L-infinity errors of the first bundled problem for the classical
// (lambda = 1) and fractional (lambda = 1/2) bases side by side.

#include <cstdio>
#include <vector>

#include "muntz/muntz.hpp"

int main() {
    const muntz::VideProblem p = muntz::example_problem("5.1");
    const std::vector<int> ns{4, 6, 8, 10, 12};

    muntz::SweepConfig classical;
    classical.solver.lambda = 1.0;
    muntz::SweepConfig fractional;
    fractional.solver.lambda = 0.5;

    const auto a = muntz::convergence_sweep(p, classical, ns);
    const auto b = muntz::convergence_sweep(p, fractional, ns);

    std::printf("%4s  %14s  %14s\n", "N", "lambda=1", "lambda=1/2");
    for (std::size_t k = 0; k < ns.size(); ++k) {
        std::printf("%4d  %14.5e  %14.5e\n", ns[k], a.rows[k].linf_e, b.rows[k].linf_e);
    }
    std::printf("lambda=1:   %s\n", muntz::to_string(muntz::fit_rates(a).classification));
    std::printf("lambda=1/2: %s\n", muntz::to_string(muntz::fit_rates(b).classification));
    return 0;
}
