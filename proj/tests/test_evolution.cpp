#include <doctest.h>

#include <cmath>
#include <vector>

#include "oscnc/evolution.hpp"
#include "oscnc/ode_oracle.hpp"
#include "test_support.hpp"

using namespace oscnc;

TEST_SUITE("propagator_basis_entry") {
    TEST_CASE("orthonormal initial conditions at t = 0") {
        for (const double N : {0.06, 0.5, 2.0}) {
            for (int k = 0; k <= 5; ++k) {
                for (int n = 0; n <= 20; ++n) {
                    for (int n0 = 0; n0 <= 20; ++n0) {
                        const double v =
                            propagator_basis_entry(n, k, n0, 0.0, N);
                        if (n == n0) {
                            CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
                        } else {
                            CHECK(std::abs(v) <= 1e-13);
                        }
                    }
                }
            }
        }
    }

    TEST_CASE("equals the literal alternating triple sum") {
        double worst = 0.0;
        for (const double N : {0.06, 0.5, 2.0}) {
            for (const double gt : {0.1, 1.0}) {
                for (int k = 0; k <= 4; k += 2) {
                    for (int n = 0; n <= 12; n += 3) {
                        for (int n0 = 0; n0 <= 12; n0 += 3) {
                            const double lit = testing::basis_entry_literal(
                                n, k, n0, gt, N);
                            const double val =
                                propagator_basis_entry(n, k, n0, gt, N);
                            const double scale =
                                std::max(1e-30, std::abs(lit));
                            worst = std::max(worst,
                                             std::abs(val - lit) / scale);
                        }
                    }
                }
            }
        }
        CHECK(worst <= 1e-10);
    }

    TEST_CASE("matches direct integration of the diagonal system") {
        // C_{0,0}[n0=1, t] is the ground population of a decaying |1><1|.
        const FockDensityMatrix evolved =
            ode_oracle(fock_state(1, 2), BathParams(1.0, 0.5), 0.5, 40);
        const double closed = propagator_basis_entry(0, 0, 1, 0.5, 0.5);
        CHECK(std::abs(closed - evolved.population(0)) <= 1e-10);
    }

    TEST_CASE("domain errors") {
        CHECK_THROWS_AS(propagator_basis_entry(0, 0, 1, 0.5, 0.0),
                        ZeroTemperatureBranchError);
        CHECK_THROWS_AS(propagator_basis_entry(80, 30, 40, 0.5, 0.5),
                        CapacityError);
        CHECK_THROWS_AS(propagator_basis_entry(0, 0, 1, -0.5, 0.5),
                        ValidationError);
    }
}

TEST_SUITE("zero_temperature_populations") {
    TEST_CASE("pinned values") {
        const RealVector half = zero_temperature_populations(1, std::log(2.0));
        CHECK(half(0) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(half(1) == doctest::Approx(0.5).epsilon(1e-14));

        const RealVector vac = zero_temperature_populations(0, 2.7);
        CHECK(vac(0) == 1.0);

        const RealVector frozen = zero_temperature_populations(3, 0.0);
        CHECK(frozen(3) == 1.0);
        CHECK(frozen(0) == 0.0);
    }

    TEST_CASE("equals the literal alternating sum") {
        for (int n0 = 0; n0 <= 18; n0 += 3) {
            for (const double gt : {0.1, 0.7, 2.5}) {
                const RealVector P = zero_temperature_populations(n0, gt);
                for (int n = 0; n <= n0; ++n) {
                    const double lit =
                        testing::zero_temp_population_literal(n, n0, gt);
                    CHECK(P(n) == doctest::Approx(lit).epsilon(1e-9));
                }
            }
        }
    }

    TEST_CASE("normalization at any n0") {
        for (const int n0 : {5, 15, 60, 110}) {
            for (const double gt : {0.05, 0.5, 3.0}) {
                const RealVector P = zero_temperature_populations(n0, gt);
                CHECK(std::abs(P.sum() - 1.0) <= 1e-12);
                CHECK(P.minCoeff() >= 0.0);
            }
        }
    }
}

TEST_SUITE("zero_temperature_propagate") {
    TEST_CASE("decays to vacuum") {
        const FockDensityMatrix late =
            zero_temperature_propagate(fock_state(1, 4), 20.0);
        CHECK(late.population(0) == doctest::Approx(1.0).epsilon(1e-8));
    }

    TEST_CASE("single coherence decays at half the ground rate") {
        const FockDensityMatrix cat =
            superposition_family(SuperpositionFamily::Consecutive, 1, 4);
        for (const double gt : {0.1, 0.5, 2.0}) {
            const FockDensityMatrix evolved =
                zero_temperature_propagate(cat, gt);
            CHECK(evolved.entry(0, 1).real() ==
                  doctest::Approx(0.5 * std::exp(-gt / 2.0)).epsilon(1e-12));
        }
    }

    TEST_CASE("identity at t = 0") {
        const FockDensityMatrix rho =
            superposition_family(SuperpositionFamily::Geometric, 3, 12);
        const FockDensityMatrix same = zero_temperature_propagate(rho, 0.0);
        CHECK(testing::max_abs_diff(same.matrix(), rho.matrix()) <= 1e-12);
    }

    TEST_CASE("agrees with direct integration") {
        const FockDensityMatrix rho =
            superposition_family(SuperpositionFamily::Equal, 4, 6);
        const FockDensityMatrix closed =
            zero_temperature_propagate(rho.embedded(8), 0.4);
        const FockDensityMatrix direct =
            ode_oracle(rho, BathParams(1.0, 0.0), 0.4, 8);
        CHECK(testing::max_abs_diff(closed.matrix(), direct.matrix()) <=
              1e-10);
    }

    TEST_CASE("coherent amplitude decay") {
        const FockDensityMatrix initial = coherent_state(1.0, 30);
        const FockDensityMatrix evolved =
            zero_temperature_propagate(initial, 1.0);
        const FockDensityMatrix expected =
            coherent_state(std::exp(-0.5), 30);
        CHECK(testing::max_abs_diff(evolved.matrix(), expected.matrix()) <=
              1e-8);
    }
}

TEST_SUITE("propagate") {
    TEST_CASE("thermal steady state from any Fock level") {
        const FockDensityMatrix th = thermal_state(0.5, 60);
        for (const int n0 : {0, 3, 7}) {
            const FockDensityMatrix evolved = propagate(
                fock_state(n0, n0 + 1), BathParams(1.0, 0.5), 20.0, 60);
            CHECK(testing::max_abs_diff(evolved.matrix(), th.matrix()) <=
                  1e-6);
        }
    }

    TEST_CASE("matches the oracle at finite temperature") {
        const FockDensityMatrix evolved =
            propagate(fock_state(1, 2), BathParams(1.0, 0.06), 0.3, 30);
        const FockDensityMatrix direct =
            ode_oracle(fock_state(1, 2), BathParams(1.0, 0.06), 0.3, 30);
        CHECK(testing::max_abs_diff(evolved.matrix(), direct.matrix()) <=
              1e-8);
    }

    TEST_CASE("matches the oracle for a dense superposition") {
        const FockDensityMatrix rho =
            superposition_family(SuperpositionFamily::Geometric, 4, 8);
        const int trunc = suggested_evolution_trunc(rho, 0.5);
        const FockDensityMatrix evolved =
            propagate(rho, BathParams(1.0, 0.5), 0.7, trunc);
        const FockDensityMatrix direct =
            ode_oracle(rho, BathParams(1.0, 0.5), 0.7, trunc);
        CHECK(testing::max_abs_diff(evolved.matrix(), direct.matrix()) <=
              1e-8);
    }

    TEST_CASE("gamma scaling only enters through gamma*t") {
        const FockDensityMatrix a =
            propagate(fock_state(2, 3), BathParams(2.0, 0.2), 0.35, 30);
        const FockDensityMatrix b =
            propagate(fock_state(2, 3), BathParams(0.5, 0.2), 1.4, 30);
        CHECK(testing::max_abs_diff(a.matrix(), b.matrix()) <= 1e-14);
    }

    TEST_CASE("semigroup composition") {
        const FockDensityMatrix rho =
            superposition_family(SuperpositionFamily::Skip, 2, 4);
        const BathParams bath(1.0, 0.5);
        const FockDensityMatrix two_step = propagate(
            propagate(rho, bath, 0.3, 50), bath, 0.7, 50);
        const FockDensityMatrix one_step = propagate(rho, bath, 1.0, 50);
        CHECK(testing::max_abs_diff(two_step.matrix(), one_step.matrix()) <=
              1e-8);
    }

    TEST_CASE("diagonals evolve independently") {
        // consecutive occupies k in {0,1}; skip occupies k in {0,2}.
        const FockDensityMatrix a = propagate(
            superposition_family(SuperpositionFamily::Consecutive, 2, 4),
            BathParams(1.0, 0.5), 0.4, 30);
        for (int k = 2; k < 30; ++k) {
            for (int n = 0; n + k < 30; ++n) {
                CHECK(std::abs(a.entry(n, n + k)) <= 1e-12);
            }
        }
        const FockDensityMatrix b = propagate(
            superposition_family(SuperpositionFamily::Skip, 2, 5),
            BathParams(1.0, 0.5), 0.4, 30);
        for (int n = 0; n + 1 < 30; ++n) {
            CHECK(std::abs(b.entry(n, n + 1)) <= 1e-12);
            if (n + 3 < 30) CHECK(std::abs(b.entry(n, n + 3)) <= 1e-12);
        }
    }

    TEST_CASE("off-diagonal k decays at least as fast as e^(-k gamma t/2)") {
        const std::vector<FockDensityMatrix> states = {
            superposition_family(SuperpositionFamily::Consecutive, 3, 5),
            superposition_family(SuperpositionFamily::Skip, 2, 5),
            superposition_family(SuperpositionFamily::Geometric, 3, 12),
            coherent_state(1.0, 30),
        };
        for (const double N : {0.06, 0.5}) {
            for (const double gt : {0.5, 2.0}) {
                for (const FockDensityMatrix& rho : states) {
                    const int trunc = suggested_evolution_trunc(rho, N);
                    const FockDensityMatrix evolved =
                        propagate(rho, BathParams(1.0, N), gt, trunc);
                    const int d0 = rho.dim();
                    for (int k = 1; k < d0; ++k) {
                        double before = 0.0, after = 0.0;
                        for (int n = 0; n + k < d0; ++n) {
                            before = std::max(before,
                                              std::abs(rho.entry(n, n + k)));
                        }
                        for (int n = 0; n + k < trunc; ++n) {
                            after = std::max(
                                after, std::abs(evolved.entry(n, n + k)));
                        }
                        CHECK(after <=
                              before * std::exp(-0.5 * k * gt) + 1e-12);
                    }
                }
            }
        }
    }

    TEST_CASE("trace and Hermiticity preserved") {
        const FockDensityMatrix rho =
            superposition_family(SuperpositionFamily::Equal, 5, 8);
        for (const double N : {0.0, 0.06, 2.0}) {
            const int trunc = suggested_evolution_trunc(rho, N);
            const FockDensityMatrix evolved =
                propagate(rho, BathParams(1.0, N), 1.3, trunc);
            CHECK(evolved.trace_error() <= 1e-10);
            CHECK(evolved.hermiticity_error() <= 1e-12);
            CHECK_NOTHROW(evolved.validate_psd());
        }
    }

    TEST_CASE("tiny N routes to the zero-temperature branch") {
        const FockDensityMatrix a =
            propagate(fock_state(2, 3), BathParams(1.0, 1e-10), 0.8, 10);
        const FockDensityMatrix b =
            zero_temperature_propagate(fock_state(2, 3).embedded(10), 0.8);
        CHECK(testing::max_abs_diff(a.matrix(), b.matrix()) == 0.0);
    }

    TEST_CASE("diagnostics flag initial mass near the truncation edge") {
        PropagateDiagnostics diag;
        propagate(fock_state(9, 10), BathParams(1.0, 0.5), 0.1, 10, &diag);
        CHECK(diag.tail_warning);
        propagate(fock_state(1, 2), BathParams(1.0, 0.5), 0.1, 40, &diag);
        CHECK_FALSE(diag.tail_warning);
    }

    TEST_CASE("capacity guard") {
        CHECK_THROWS_AS(
            propagate(fock_state(30, 31), BathParams(1.0, 0.5), 0.1, 115),
            CapacityError);
    }
}

TEST_SUITE("ode_oracle") {
    TEST_CASE("vacuum is stationary at N = 0") {
        const FockDensityMatrix still =
            ode_oracle(fock_state(0, 2), BathParams(1.0, 0.0), 2.0, 6);
        CHECK(std::abs(still.population(0) - 1.0) <= 1e-12);
    }

    TEST_CASE("diagonal matches the zero-temperature closed form") {
        const FockDensityMatrix evolved =
            ode_oracle(fock_state(2, 3), BathParams(1.0, 0.0), 0.4, 8);
        const RealVector P = zero_temperature_populations(2, 0.4);
        for (int n = 0; n <= 2; ++n) {
            CHECK(std::abs(evolved.population(n) - P(n)) <= 1e-10);
        }
    }

    TEST_CASE("trace conserved along the trajectory") {
        const FockDensityMatrix rho =
            superposition_family(SuperpositionFamily::Consecutive, 2, 4);
        for (const double gt : {0.2, 0.6, 1.5, 4.0}) {
            const FockDensityMatrix evolved =
                ode_oracle(rho, BathParams(1.0, 0.5), gt, 40);
            CHECK(evolved.trace_error() <= 1e-10);
        }
    }

    TEST_CASE("undersized truncation rejected") {
        CHECK_THROWS_AS(
            ode_oracle(fock_state(5, 6), BathParams(1.0, 2.0), 3.0, 7),
            TruncationError);
    }
}
