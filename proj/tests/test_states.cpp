#include <doctest.h>

#include <cmath>

#include "blockade/rng.hpp"
#include "blockade/states.hpp"

using namespace blockade;

namespace {

ComplexMatrix random_density(int d, Rng& rng) {
    ComplexMatrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.normal_complex();
    ComplexMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

} // namespace

TEST_CASE("density checks accept physical states and flag defects") {
    Rng rng(1);
    ComplexMatrix rho = random_density(5, rng);
    CHECK(check_density(rho).physical());
    ComplexMatrix bad = rho;
    bad(0, 1) += Complex(0.0, 1e-3);
    CHECK_FALSE(check_density(bad).physical());
}

TEST_CASE("partial trace over the transmon preserves trace and cavity moments") {
    SystemLayout layout(2, {3, 2});
    Rng rng(2);
    ComplexMatrix rho = random_density(layout.total_dim(), rng);
    ComplexMatrix rc = trace_out_transmon(layout, rho);
    CHECK(rc.rows() == 6);
    CHECK(std::abs(rc.trace() - Complex(1.0)) < 1e-12);
    // <N_0> is the same computed either way
    double full = (mode_number(layout, 0) * rho).trace().real();
    SystemLayout cav(1, {3, 2});
    double red = (mode_number(cav, 0).block(0, 0, 6, 6) * rc).trace().real();
    CHECK(full == doctest::Approx(red).epsilon(1e-12));
}

TEST_CASE("restrict_modes shrinks and zero-pads consistently") {
    Rng rng(3);
    ComplexMatrix rho = random_density(3 * 3, rng);
    ComplexMatrix big = restrict_modes({3, 3}, {4, 4}, rho);
    CHECK(big.rows() == 16);
    CHECK(std::abs(big.trace() - rho.trace()) < 1e-12);
    ComplexMatrix back = restrict_modes({4, 4}, {3, 3}, big);
    CHECK((back - rho).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fidelity and distance measures agree on pure states") {
    Rng rng(4);
    const int d = 6;
    ComplexVector psi(d), phi(d);
    for (int i = 0; i < d; ++i) {
        psi(i) = rng.normal_complex();
        phi(i) = rng.normal_complex();
    }
    psi.normalize();
    phi.normalize();
    ComplexMatrix rp = pure_density(psi), rq = pure_density(phi);
    double overlap = std::norm(Complex(psi.dot(phi)));
    CHECK(state_fidelity(rq, psi) == doctest::Approx(overlap).epsilon(1e-10));
    CHECK(state_overlap(rp, rq) == doctest::Approx(overlap).epsilon(1e-10));
    CHECK(uhlmann_fidelity(rp, rq) == doctest::Approx(overlap).epsilon(1e-7));
    // pure-state trace distance is sqrt(1 - F)
    CHECK(trace_distance(rp, rq) == doctest::Approx(std::sqrt(1.0 - overlap)).epsilon(1e-7));
}

TEST_CASE("uhlmann fidelity is symmetric and 1 on identical mixed states") {
    Rng rng(5);
    ComplexMatrix a = random_density(5, rng), b = random_density(5, rng);
    CHECK(uhlmann_fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(uhlmann_fidelity(a, b) == doctest::Approx(uhlmann_fidelity(b, a)).epsilon(1e-8));
    CHECK(uhlmann_fidelity(a, b) >= 0.0);
    CHECK(uhlmann_fidelity(a, b) <= 1.0 + 1e-10);
}
