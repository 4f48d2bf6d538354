// bath.hpp — Markovian bath parameters

#pragma once

#include "oscnc/errors.hpp"

namespace oscnc {

// Linear Markovian bath: coupling rate gamma (1/time) and mean thermal
// photon number N. All dynamics depend on time only through gamma*t.
struct BathParams {
    double gamma = 1.0;
    double N = 0.0;

    BathParams() = default;
    BathParams(double gamma_, double N_) : gamma(gamma_), N(N_) {
        if (!(gamma > 0.0)) {
            throw ValidationError("BathParams: gamma must be > 0");
        }
        if (!(N >= 0.0)) {
            throw ValidationError("BathParams: N must be >= 0");
        }
    }
};

}  // namespace oscnc
