// SPDX-License-Identifier: Apache-2.0
//
// Compares the OpenMP kernels against the serial reference implementation
// on representative circuits and reports timings plus the max amplitude
// deviation between the two paths.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "qrisk/aops.hpp"
#include "qrisk/distributions.hpp"
#include "qrisk/simulate.hpp"

using namespace qrisk;
using clock_type = std::chrono::steady_clock;

namespace {

double run(const Circuit& c, Exec exec, double* ms) {
    QuantumState s(c.layout);
    const auto t0 = clock_type::now();
    apply_inplace(s, c, exec);
    const auto t1 = clock_type::now();
    *ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return probability_of(s, c.layout.total_qubits - 1, 1);
}

double max_deviation(const Circuit& c) {
    QuantumState a(c.layout), b(c.layout);
    apply_inplace(a, c, Exec::Serial);
    apply_inplace(b, c, Exec::Parallel);
    double dev = 0.0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
        dev = std::max(dev, std::abs(a.amplitudes[i] - b.amplitudes[i]));
    return dev;
}

} // namespace

int main() {
    std::printf("%-28s %8s %12s %12s %10s %12s\n", "circuit", "qubits", "serial_ms",
                "parallel_ms", "speedup", "max_dev");
    for (std::uint32_t n = 4; n <= 7; ++n) {
        const auto preset = find_preset("gamma-1-1");
        const auto dist = discretize(preset->spec, preset->sim_lo, preset->sim_hi, n);

        const AOperator cvar = cvar_a_operator(dist, dist.size() / 2, 0.3);
        Circuit deep = cvar.circuit;
        const Circuit q = grover_operator(cvar);
        for (int r = 0; r < 4; ++r) deep.append(q);

        double ms_s = 0.0, ms_p = 0.0;
        run(deep, Exec::Serial, &ms_s);
        run(deep, Exec::Parallel, &ms_p);
        std::printf("%-28s %8u %12.2f %12.2f %9.2fx %12.3e\n", "cvar+4 grover powers",
                    deep.layout.total_qubits, ms_s, ms_p, ms_s / ms_p,
                    max_deviation(deep));

        const AOperator rv = rvar_a_operator(dist, dist.size() - 2, dist.size() / 4, 0.3);
        double ms_s2 = 0.0, ms_p2 = 0.0;
        run(rv.circuit, Exec::Serial, &ms_s2);
        run(rv.circuit, Exec::Parallel, &ms_p2);
        std::printf("%-28s %8u %12.2f %12.2f %9.2fx %12.3e\n", "rvar A-operator",
                    rv.circuit.layout.total_qubits, ms_s2, ms_p2, ms_s2 / ms_p2,
                    max_deviation(rv.circuit));
    }
    return 0;
}
