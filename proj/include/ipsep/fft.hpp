#pragma once

#include "ipsep/grid.hpp"

namespace ipsep::fft {

// Unnormalized in-place DFT of `howmany` contiguous r x c blocks in natural
// (non-centered) layout. sign = -1 forward, +1 backward.
void dft2(cplx* data, int r, int c, int sign, int howmany = 1);

// Unitary centered transform of an n x n array in place.
void centered_forward(cvec& data, int n);
void centered_inverse(cvec& data, int n);

// Swap quadrants of an n x n array (fftshift for even n).
void shift(cvec& data, int n);

}  // namespace ipsep::fft
