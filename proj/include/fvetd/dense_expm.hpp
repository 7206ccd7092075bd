#pragma once

#include "fvetd/kernels.hpp"

namespace fvetd {

/// exp(A) by scaling and squaring with the degree-13 diagonal Pade kernel.
/// The squaring count comes from the 1-norm of A.
DenseMatrix expm(const DenseMatrix& a);

/// phi_1 ... phi_p of M applied to e_1, read off the top-right block of
/// exp([[M, e1, 0], [0, 0, I], [0, 0, 0]]). Column k-1 holds phi_k(M) e_1.
DenseMatrix phi_columns(const DenseMatrix& m, int p);

/// (e^z - 1)/z, with a Taylor expansion near zero.
double phi1_scalar(double z);

} // namespace fvetd
