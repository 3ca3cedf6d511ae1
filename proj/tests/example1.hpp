#pragma once

#include "tracebound/matrix.hpp"

namespace test_support {

inline tracebound::ComplexMatrix<double> example1() {
    tracebound::ComplexMatrix<double> a(4, 4);
    a << 4, 0, 2, 3,
         0, 5, 0, 1,
         2, 0, 6, 0,
         3, 1, 0, 7;
    return a;
}

// Roots of x^4 - 22x^3 + 165x^2 - 481x + 410, from an independent root finder.
inline constexpr double kExample1Eigenvalues[4] = {1.4256870168886, 4.7753556024686, 6.4230186938833,
                                                   9.3759386867594};

} // namespace test_support
