#pragma once

#include <cmath>

#include "nanoradar/errors.hpp"

namespace nanoradar {

/// Background environment: real refractive index with eps = n^2 kept consistent.
struct Medium {
    double refractive_index = 1.0;
    double relative_permittivity = 1.0;

    static Medium from_index(double n) {
        if (!(n >= 1.0)) throw domain_error("Medium: refractive index must be >= 1");
        return Medium{n, n * n};
    }

    static Medium from_values(double n, double eps) {
        if (!(n >= 1.0)) throw domain_error("Medium: refractive index must be >= 1");
        if (std::abs(eps - n * n) > 1e-12 * std::max(1.0, n * n))
            throw validation_error("Medium: relative permittivity inconsistent with n^2");
        return Medium{n, eps};
    }
};

inline Medium air_medium() { return Medium::from_index(1.0); }

} // namespace nanoradar
