#pragma once

// Diagonal decomposition of number-basis matrices and the per-diagonal
// restrictions of the sl(2) superoperators X1, X2, X3.

#include <vector>

#include "groenewold/types.hpp"

namespace groenewold {

// Entries along diagonal nu of an N x N matrix: coeffs[n] = G(n+nu, n) for
// nu >= 0 and G(n, n-nu) for nu < 0; length N - |nu|.
struct DiagonalBlock {
  int nu = 0;
  CVector coeffs;

  int dim() const { return static_cast<int>(coeffs.size()); }
};

DiagonalBlock extract_block(const CMatrix& g, int nu);
void insert_block(CMatrix& g, const DiagonalBlock& block);

// All diagonals, nu = -(N-1) .. N-1 in order.
std::vector<DiagonalBlock> decompose(const CMatrix& g);
CMatrix reassemble(const std::vector<DiagonalBlock>& blocks, int N);

struct XBlocks {
  RMatrix X1;
  RMatrix X2;
  RMatrix X3;
};

// X1 = diag(n + (|nu|+1)/2); X2 symmetric with off-diagonal
// sqrt((n+1)(n+|nu|+1))/2; X3 = [X2, X1].
XBlocks x_blocks(int nu, int N);

// P = X1 + X2
RMatrix p_block(int nu, int N);

// U = exp(log(7/3) X3 / 4), via the spectrum of the Hermitian i X3. The
// exponential is taken at size N + pad and cropped. Row n of the exact U
// spreads over O(n) columns, so the crop is only orthogonal well inside N.
RMatrix u_block(int nu, int N, int pad = 0);

// U S U^T for S = sextic_semiquantum_form. Since X1 X2 + X2 X1 equals
// (X+^2 - X-^2)/2, this is (sqrt(21)/2)(X1 X2 + X2 X1), tridiagonal with
// off-diagonal sqrt(21)(n + 1 + |nu|/2) sqrt((n+1)(n+|nu|+1)) / 2.
RMatrix qprime_block(int nu, int N);

// The often quoted closed form with 1/2 inside the square root instead of
// the overall 1/2. Larger than qprime_block by sqrt(2); kept for comparison.
RMatrix qprime_block_printed(int nu, int N);

// 3(X1 X2 + X2 X1)/2 - (X1 - X2)^2 computed at N + 2 and cropped so that the
// products are exact on all N rows.
RMatrix sextic_semiquantum_form(int nu, int N);

struct Sl2Blocks {
  int nu = 0;
  int dim = 0;
  RMatrix X1;
  RMatrix X2;
  RMatrix X3;
  RMatrix P;
  RMatrix U;
  RMatrix Qprime;
};

Sl2Blocks sl2_blocks(int nu, int N);

}  // namespace groenewold
