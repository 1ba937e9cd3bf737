#include <benchmark/benchmark.h>

#include "blockade/hamiltonian.hpp"
#include "blockade/lindblad.hpp"
#include "blockade/rng.hpp"
#include "blockade/states.hpp"
#include "blockade/tomography.hpp"

using namespace blockade;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.14159265358979323846;

DeviceParams bench_device() {
    DeviceParams p;
    p.omega_q = kTwoPi * 4.99e9;
    p.omega_m = {kTwoPi * 6.223e9};
    p.chi_m = {kTwoPi * -1.136e6};
    p.kerr_m = {kTwoPi * -9e3};
    p.T1_q = 86e-6;
    p.T2_q = 58e-6;
    p.nth_q = 0.012;
    p.T1_m = {2e-3};
    p.T2_m = {3e-3};
    return p;
}

void bm_displacement_op(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    Complex alpha(0.8, -0.4);
    for (auto _ : state) benchmark::DoNotOptimize(displacement_op(dim, alpha));
}

void bm_evolve_master(benchmark::State& state) {
    DeviceParams dev = bench_device();
    SystemLayout layout(2, {static_cast<int>(state.range(0))});
    BlockadeSpec spec;
    spec.target_modes = {0};
    spec.blockade_photons = 2;
    spec.rabi = kTwoPi * 107e3;
    spec.detuning = blockade_detuning(dev.chi_m, 2, {0});
    DriftControls dc = build_multimode_blockade_hamiltonian(dev, layout, spec);
    PulseSequence pulse = PulseSequence::constant(1e-7, 20, {dc.controls[0].name},
                                                  {Complex(kTwoPi * 10e3, 0.0)});
    auto channels = standard_channels(dev, layout);
    ComplexMatrix rho0 = pure_density(fock_state(layout, 0, {0}));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            evolve_master(dc.drift, dc.controls, pulse, channels, rho0, {2e-6}));
}

void bm_wigner_row(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    std::vector<Complex> alphas = {Complex(0.9, 0.3)};
    std::vector<double> thetas = {kPi};
    for (auto _ : state)
        benchmark::DoNotOptimize(generalized_wigner_operator({dim}, alphas, thetas));
}

void bm_reconstruct(benchmark::State& state) {
    Rng rng(5);
    WignerPointSet ps;
    ps.op_dims = {16};
    ps.recon_dims = {4};
    for (int i = 0; i < 75; ++i)
        ps.settings.push_back(
            {{Complex(rng.uniform(-1.6, 1.6), rng.uniform(-1.6, 1.6))}, {kPi}});
    ComplexMatrix g(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = rng.normal_complex();
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    MeasurementRecord rec =
        simulate_measurements(restrict_modes({4}, {16}, rho), ps, 0.01, 7);
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct(ps, rec));
}

BENCHMARK(bm_displacement_op)->Arg(8)->Arg(32);
BENCHMARK(bm_evolve_master)->Arg(4)->Arg(8);
BENCHMARK(bm_wigner_row)->Arg(8)->Arg(32);
BENCHMARK(bm_reconstruct);

} // namespace

BENCHMARK_MAIN();
