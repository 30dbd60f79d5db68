#pragma once

#include <complex>

namespace twinwell {

// Exponential integral E1(z) = int_z^inf e^{-w}/w dw, principal branch
// (cut on the negative real axis).
std::complex<double> expint_e1(std::complex<double> z);

// e^{z} E1(z), finite where E1 itself would overflow or underflow.
std::complex<double> expint_e1_scaled(std::complex<double> z);

}  // namespace twinwell
