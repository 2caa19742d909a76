#pragma once

#include "isq/core.hpp"

namespace isq {

struct SpecFunConfig {
    double series_tol = 1e-16;
    int max_terms = 5000;
};

cplx lgamma_complex(cplx z);
cplx gamma_complex(cplx z);
// 1/Gamma(z); zero at the poles instead of throwing.
cplx rgamma_complex(cplx z);

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, const SpecFunConfig& cfg = {});

}  // namespace isq
