#include "groenewold/sl2.hpp"

#include <cmath>

#include "groenewold/error.hpp"
#include "groenewold/mathkit.hpp"

namespace groenewold {

DiagonalBlock extract_block(const CMatrix& g, int nu) {
  const int N = static_cast<int>(g.rows());
  if (g.cols() != N) throw InvalidArgument("extract_block: matrix is not square");
  if (std::abs(nu) >= N) throw InvalidArgument("extract_block: diagonal out of range");
  DiagonalBlock block{nu, CVector(N - std::abs(nu))};
  for (int n = 0; n < block.dim(); ++n) {
    block.coeffs[n] = nu >= 0 ? g(n + nu, n) : g(n, n - nu);
  }
  return block;
}

void insert_block(CMatrix& g, const DiagonalBlock& block) {
  const int N = static_cast<int>(g.rows());
  if (block.dim() != N - std::abs(block.nu)) {
    throw InvalidArgument("insert_block: block length does not match matrix");
  }
  for (int n = 0; n < block.dim(); ++n) {
    if (block.nu >= 0) {
      g(n + block.nu, n) = block.coeffs[n];
    } else {
      g(n, n - block.nu) = block.coeffs[n];
    }
  }
}

std::vector<DiagonalBlock> decompose(const CMatrix& g) {
  const int N = static_cast<int>(g.rows());
  std::vector<DiagonalBlock> blocks;
  blocks.reserve(2 * N - 1);
  for (int nu = -(N - 1); nu < N; ++nu) blocks.push_back(extract_block(g, nu));
  return blocks;
}

CMatrix reassemble(const std::vector<DiagonalBlock>& blocks, int N) {
  CMatrix g = CMatrix::Zero(N, N);
  for (const auto& block : blocks) insert_block(g, block);
  return g;
}

XBlocks x_blocks(int nu, int N) {
  if (N < 2) throw InvalidArgument("x_blocks: N must be at least 2");
  const double a = std::abs(nu);
  XBlocks x{RMatrix::Zero(N, N), RMatrix::Zero(N, N), RMatrix::Zero(N, N)};
  for (int n = 0; n < N; ++n) x.X1(n, n) = n + (a + 1.0) / 2.0;
  for (int n = 0; n + 1 < N; ++n) {
    const double off = std::sqrt((n + 1.0) * (n + a + 1.0)) / 2.0;
    x.X2(n, n + 1) = x.X2(n + 1, n) = off;
    x.X3(n, n + 1) = off;
    x.X3(n + 1, n) = -off;
  }
  return x;
}

RMatrix p_block(int nu, int N) {
  const auto x = x_blocks(nu, N);
  return x.X1 + x.X2;
}

RMatrix u_block(int nu, int N, int pad) {
  if (pad < 0) throw InvalidArgument("u_block: negative pad");
  const int M = N + pad;
  const auto x = x_blocks(nu, M);
  const CMatrix h = Complex(0.0, 1.0) * x.X3.cast<Complex>();
  const auto eig = mathkit::hermitian_eig(h);
  // exp(c X3) = exp(-i c (i X3))
  const double c = std::log(7.0 / 3.0) / 4.0;
  CVector phases(M);
  for (int i = 0; i < M; ++i) phases[i] = std::polar(1.0, -c * eig.values[i]);
  const CMatrix u = eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  return u.real().topLeftCorner(N, N);
}

namespace {

RMatrix qprime_with(int nu, int N, double inner_scale) {
  if (N < 2) throw InvalidArgument("qprime_block: N must be at least 2");
  const double a = std::abs(nu);
  RMatrix q = RMatrix::Zero(N, N);
  for (int n = 0; n + 1 < N; ++n) {
    const double v = std::sqrt(21.0) * (n + 1.0 + a / 2.0) *
                     std::sqrt((n + 1.0) * (n + a + 1.0) * inner_scale);
    q(n, n + 1) = q(n + 1, n) = v;
  }
  return q;
}

}  // namespace

RMatrix qprime_block(int nu, int N) { return qprime_with(nu, N, 0.25); }

RMatrix qprime_block_printed(int nu, int N) { return qprime_with(nu, N, 0.5); }

RMatrix sextic_semiquantum_form(int nu, int N) {
  const auto x = x_blocks(nu, N + 2);
  const RMatrix diff = x.X1 - x.X2;
  const RMatrix form = 1.5 * (x.X1 * x.X2 + x.X2 * x.X1) - diff * diff;
  return form.topLeftCorner(N, N);
}

Sl2Blocks sl2_blocks(int nu, int N) {
  auto x = x_blocks(nu, N);
  Sl2Blocks s;
  s.nu = nu;
  s.dim = N;
  s.P = x.X1 + x.X2;
  s.U = u_block(nu, N);
  s.Qprime = qprime_block(nu, N);
  s.X1 = std::move(x.X1);
  s.X2 = std::move(x.X2);
  s.X3 = std::move(x.X3);
  return s;
}

}  // namespace groenewold
