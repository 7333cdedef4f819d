#pragma once

#include "afb/numerics/grid.hpp"

namespace afb {

// Unitary 2-D DFT (1/sqrt(HW) scaling), FFT-native ordering (DC at (0,0)).
ComplexGrid fft2(ComplexGrid const &img);

// Exact inverse of fft2, same 1/sqrt(HW) scaling.
ComplexGrid ifft2(ComplexGrid const &ksp);

} // namespace afb
