#pragma once

// Random matrix draws: Haar unitaries (QR of a complex Gaussian with the
// R-diagonal phase fixed), even unitaries on a graded fiber, Hermitian
// directions, and unitary-geodesic perturbations of a given size.

#include "afb/cmatrix.hpp"
#include "afb/rng.hpp"

namespace afb {

CMatrix gaussian_matrix(Rng& rng, int rows, int cols);
CMatrix haar_unitary(Rng& rng, int n);

// Block-diagonal unitary respecting the canonical grading of w.
CMatrix haar_even_unitary(Rng& rng, const GradedSpace& w);

CMatrix gaussian_hermitian(Rng& rng, int n);

// exp(i H t) with H Hermitian even, scaled so the operator-norm distance
// from the identity is exactly `dist` (dist < 2).
CMatrix even_unitary_step(Rng& rng, const GradedSpace& w, double dist);

} // namespace afb
