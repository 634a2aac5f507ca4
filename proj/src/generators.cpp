#include "groenewold/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

#include "groenewold/error.hpp"
#include "groenewold/mathkit.hpp"
#include "groenewold/sl2.hpp"

namespace groenewold {

namespace {

const Complex kI(0.0, 1.0);

double falling(int n, int k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return falling(n, k) / falling(k, k);
}

// (row, column) of the dyad spanning slot k of diagonal nu.
std::pair<int, int> dyad_of(int nu, int k) {
  return nu >= 0 ? std::pair{k + nu, k} : std::pair{k, k - nu};
}

}  // namespace

std::string Dynamics::name() const {
  switch (family) {
    case DynamicsFamily::Quantum:
      return "quantum";
    case DynamicsFamily::Classical:
      return "classical";
    case DynamicsFamily::Semiquantum:
      return "semiquantum" + std::to_string(order);
    case DynamicsFamily::Semiclassical:
      return "semiclassical" + std::to_string(order);
  }
  return "unknown";
}

Dynamics Dynamics::parse(const std::string& text) {
  if (text == "quantum") return quantum();
  if (text == "classical") return classical();
  for (const auto& [prefix, family] :
       {std::pair{std::string("semiquantum"), DynamicsFamily::Semiquantum},
        std::pair{std::string("semiclassical"), DynamicsFamily::Semiclassical}}) {
    if (text.rfind(prefix, 0) != 0) continue;
    const std::string digits = text.substr(prefix.size());
    if (digits.empty() || digits.size() > 2 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      break;
    }
    const int order = std::stoi(digits);
    if (order < 1) break;
    return {family, order};
  }
  throw InvalidArgument("unknown dynamics '" + text + "'");
}

double inverse_sine_coefficient(int j) {
  static const double s[] = {1.0,
                             1.0 / 6.0,
                             7.0 / 360.0,
                             31.0 / 15120.0,
                             127.0 / 604800.0,
                             73.0 / 3421440.0};
  if (j < 0 || j > 5) throw InvalidArgument("inverse_sine_coefficient: order out of range");
  return s[j];
}

Complex hilbert_coefficient(int j, double hbar) {
  return inverse_sine_coefficient(j) * std::pow(hbar / 2.0, 2 * j) / (kI * hbar);
}

Complex moyal_coefficient(int j, double hbar) {
  double factorial = 1.0;
  for (int i = 2; i <= 2 * j + 1; ++i) factorial *= i;
  return 1.0 / (std::pow(4.0, j) * factorial) / (kI * hbar);
}

int terminating_order(const ModelSpec& model) { return model.K - 1; }

int block_dim(int nu, int N) {
  if (std::abs(nu) >= N) throw InvalidArgument("generator: diagonal out of range");
  return N - std::abs(nu);
}

GeneratorBlock quantum_block(int nu, const ModelSpec& model, int N) {
  const int dim = block_dim(nu, N);
  const int a = std::abs(nu);
  CMatrix L = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    const double rate = eigenvalue_gap(model, n, a) / model.hbar;
    L(n, n) = nu >= 0 ? Complex(0.0, -rate) : Complex(0.0, rate);
  }
  return {nu, Dynamics::quantum(), std::move(L), GeneratorPath::Analytic, 0};
}

// ---------------------------------------------------------------------------
// Commutator path

namespace {

// Normal-ordered polynomial: (a, b) -> coefficient of adag^a a^b.
using NormalPoly = std::map<std::pair<int, int>, Complex>;

NormalPoly comm_a(const NormalPoly& x) {
  NormalPoly out;
  for (const auto& [ab, c] : x) {
    if (ab.first > 0) out[{ab.first - 1, ab.second}] += static_cast<double>(ab.first) * c;
  }
  return out;
}

NormalPoly comm_adag(const NormalPoly& x) {
  NormalPoly out;
  for (const auto& [ab, c] : x) {
    if (ab.second > 0) out[{ab.first, ab.second - 1}] -= static_cast<double>(ab.second) * c;
  }
  return out;
}

NormalPoly combine(const NormalPoly& x, Complex cx, const NormalPoly& y, Complex cy) {
  NormalPoly out;
  for (const auto& [ab, c] : x) out[ab] += cx * c;
  for (const auto& [ab, c] : y) out[ab] += cy * c;
  return out;
}

// Dense window of an operator whose support is far from the window edges
// (except possibly at Fock index 0, which is a true boundary).
// Square patch of an operator, rows from row_lo and columns from col_lo.
struct Window {
  int row_lo = 0;
  int col_lo = 0;
  CMatrix x;

  Complex at(int r, int c) const {
    const int n = static_cast<int>(x.rows());
    r -= row_lo;
    c -= col_lo;
    return (r < 0 || c < 0 || r >= n || c >= n) ? Complex(0.0) : x(r, c);
  }
};

Window window_comm_a(const Window& w) {
  const int n = static_cast<int>(w.x.rows());
  Window out{w.row_lo, w.col_lo, CMatrix::Zero(n, n)};
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      Complex v = 0.0;
      if (r + 1 < n) v += std::sqrt(w.row_lo + r + 1.0) * w.x(r + 1, c);
      if (c > 0) v -= w.x(r, c - 1) * std::sqrt(static_cast<double>(w.col_lo + c));
      out.x(r, c) = v;
    }
  }
  return out;
}

Window window_comm_adag(const Window& w) {
  const int n = static_cast<int>(w.x.rows());
  Window out{w.row_lo, w.col_lo, CMatrix::Zero(n, n)};
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      Complex v = 0.0;
      if (r > 0) v += std::sqrt(static_cast<double>(w.row_lo + r)) * w.x(r - 1, c);
      if (c + 1 < n) v -= w.x(r, c + 1) * std::sqrt(w.col_lo + c + 1.0);
      out.x(r, c) = v;
    }
  }
  return out;
}

}  // namespace

HilbertCorrections::HilbertCorrections(const ModelSpec& model, int size)
    : model_(model),
      size_(size),
      s_q_(std::sqrt(model.hbar / (2.0 * model.m * model.omega))),
      s_p_(std::sqrt(model.hbar * model.m * model.omega / 2.0)) {
  if (size < 2) throw InvalidArgument("HilbertCorrections: size must be at least 2");
  const int K = model.K;
  const int max_order = 2 * std::max(terminating_order(model), 1);

  // H = sum_j h_j n^j with n^j = sum_i S(j,i) adag^i a^i.
  std::vector<std::vector<double>> stirling(K + 1, std::vector<double>(K + 1, 0.0));
  stirling[0][0] = 1.0;
  for (int j = 1; j <= K; ++j) {
    for (int i = 1; i <= j; ++i) stirling[j][i] = i * stirling[j - 1][i] + stirling[j - 1][i - 1];
  }
  const auto h = number_polynomial(model);
  NormalPoly base;
  for (int j = 0; j <= K; ++j) {
    for (int i = 0; i <= j; ++i) {
      if (stirling[j][i] != 0.0) base[{i, i}] += h[j] * stirling[j][i];
    }
  }

  // X_p = [q, X]/(i hbar), X_q = [X, p]/(i hbar) with q = s_q (a + adag),
  // p = i s_p (adag - a).
  const Complex cp = s_q_ / (kI * model.hbar);
  const Complex cq = s_p_ / model.hbar;
  std::vector<std::vector<NormalPoly>> polys(max_order + 1,
                                             std::vector<NormalPoly>(max_order + 1));
  polys[0][0] = base;
  for (int nq = 0; nq <= max_order; ++nq) {
    if (nq > 0) {
      const auto& prev = polys[nq - 1][0];
      polys[nq][0] = combine(comm_a(prev), cq, comm_adag(prev), -cq);
    }
    for (int np = 1; nq + np <= max_order; ++np) {
      const auto& prev = polys[nq][np - 1];
      polys[nq][np] = combine(comm_a(prev), cp, comm_adag(prev), cp);
    }
  }

  bands_.assign(max_order + 1, std::vector<Band>(max_order + 1));
  for (int nq = 0; nq <= max_order; ++nq) {
    for (int np = 0; nq + np <= max_order; ++np) {
      Band& band = bands_[nq][np];
      const int order = nq + np;
      band.order = order;
      band.diags.assign(2 * order + 1, CVector::Zero(size));
      for (const auto& [ab, coeff] : polys[nq][np]) {
        if (coeff == 0.0) continue;
        const auto [a, b] = ab;
        const int d = b - a;  // <r| adag^a a^b |r + d>
        if (std::abs(d) > order) throw Error("HilbertCorrections: band overflow");
        for (int r = std::max(0, a); r < size; ++r) {
          const int c = r + d;
          if (c < 0 || c >= size) continue;
          const int j = r - a;
          double value = 1.0;
          for (int i = j + 1; i <= c; ++i) value *= i;
          for (int i = j + 1; i <= r; ++i) value *= i;
          band.diags[d + order][r] += coeff * std::sqrt(value);
        }
      }
    }
  }
}

const HilbertCorrections::Band& HilbertCorrections::derivative(int nq, int np) const {
  if (nq < 0 || np < 0 || nq >= static_cast<int>(bands_.size()) ||
      np >= static_cast<int>(bands_[nq].size()) || nq + np >= static_cast<int>(bands_.size())) {
    throw InvalidArgument("HilbertCorrections: derivative order out of range");
  }
  return bands_[nq][np];
}

CMatrix HilbertCorrections::term(int nu, int N, int j, int l) const {
  if (j < 1) throw InvalidArgument("hilbert correction: order must be at least 1");
  if (l < 0 || l > 2 * j) throw InvalidArgument("hilbert correction: term index out of range");
  const int dim = block_dim(nu, N);
  if (j > terminating_order(model_)) return CMatrix::Zero(dim, dim);
  return term_unchecked(nu, N, j, l);
}

CMatrix HilbertCorrections::term_unchecked(int nu, int N, int j, int l) const {
  const int dim = block_dim(nu, N);
  const int order = 2 * j;
  const Band& hband = derivative(order - l, l);  // H_{q^(2j-l) p^l}
  const int radius = 2 * order;
  const Complex cp = s_q_ / (kI * model_.hbar);
  const Complex cq = s_p_ / model_.hbar;

  CMatrix out = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const auto [row, col] = dyad_of(nu, k);
    if (std::max(row, col) + radius >= size_) {
      throw GuardInsufficient("hilbert correction: padding too small");
    }
    // repeated commutators move the dyad's support at most `order` steps
    const int row_lo = std::max(0, row - radius);
    const int col_lo = std::max(0, col - radius);
    Window g{row_lo, col_lo, CMatrix::Zero(2 * radius + 1, 2 * radius + 1)};
    g.x(row - row_lo, col - col_lo) = 1.0;
    // G_{p^(2j-l) q^l}
    for (int i = 0; i < l; ++i) {
      const Window a = window_comm_a(g);
      const Window b = window_comm_adag(g);
      g.x = cq * (a.x - b.x);
    }
    for (int i = 0; i < order - l; ++i) {
      const Window a = window_comm_a(g);
      const Window b = window_comm_adag(g);
      g.x = cp * (a.x + b.x);
    }
    // Entries of [H_D, G_D] on diagonal nu.
    const int hw = hband.order;
    auto h_at = [&](int r, int c) -> Complex {
      const int d = c - r;
      if (std::abs(d) > hw || r < 0 || c < 0 || r >= size_ || c >= size_) return 0.0;
      return hband.diags[d + hw][r];
    };
    for (int r = std::max(0, k - radius); r < std::min(dim, k + radius + 1); ++r) {
      const auto [ar, br] = dyad_of(nu, r);
      Complex v = 0.0;
      for (int m = ar - hw; m <= ar + hw; ++m) v += h_at(ar, m) * g.at(m, br);
      for (int m = br - hw; m <= br + hw; ++m) v -= g.at(ar, m) * h_at(m, br);
      out(r, k) = v;
    }
  }
  return out;
}

CMatrix HilbertCorrections::block(int nu, int N, int j) const {
  const int dim = block_dim(nu, N);
  CMatrix out = CMatrix::Zero(dim, dim);
  if (j < 1) throw InvalidArgument("hilbert correction: order must be at least 1");
  if (j > terminating_order(model_)) return out;
  for (int l = 0; l <= 2 * j; ++l) {
    const double weight = binomial(2 * j, l) * ((l % 2) ? -1.0 : 1.0);
    out += weight * term_unchecked(nu, N, j, l);
  }
  return out;
}

namespace {

int resolved_pad(const ModelSpec& model, const GeneratorOptions& options) {
  if (options.pad < 0) throw InvalidArgument("generator: negative pad");
  return options.pad > 0 ? options.pad : 8 * model.K;
}

double scale_of(const CMatrix& m) { return std::max(1.0, mathkit::max_abs(m)); }

void check_pad_agreement(const CMatrix& a, const CMatrix& b) {
  const double diff = mathkit::max_abs(a - b);
  if (diff > 1e-10 * scale_of(a)) {
    throw GuardInsufficient("hilbert correction: doubling the padding changed entries by " +
                            std::to_string(diff));
  }
}

}  // namespace

CMatrix hilbert_correction_block(int nu, const ModelSpec& model, int N, int j,
                                 const GeneratorOptions& options) {
  const int pad = resolved_pad(model, options);
  const CMatrix c = HilbertCorrections(model, N + pad).block(nu, N, j);
  if (options.check_pad) {
    check_pad_agreement(c, HilbertCorrections(model, N + 2 * pad).block(nu, N, j));
  }
  return c;
}

CMatrix hilbert_correction_term(int nu, const ModelSpec& model, int N, int j, int l,
                                const GeneratorOptions& options) {
  const int pad = resolved_pad(model, options);
  const CMatrix c = HilbertCorrections(model, N + pad).term(nu, N, j, l);
  if (options.check_pad) {
    check_pad_agreement(c, HilbertCorrections(model, N + 2 * pad).term(nu, N, j, l));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Moyal-Galerkin path

namespace {

using DyadCombo = std::map<std::pair<int, int>, double>;

// d/d alpha W(|a><b|) = sqrt(b) W(|a><b-1|) - sqrt(a+1) W(|a+1><b|)
DyadCombo d_alpha(const DyadCombo& in) {
  DyadCombo out;
  for (const auto& [ab, c] : in) {
    const auto [a, b] = ab;
    if (b > 0) out[{a, b - 1}] += c * std::sqrt(static_cast<double>(b));
    out[{a + 1, b}] -= c * std::sqrt(a + 1.0);
  }
  return out;
}

// d/d conj(alpha) W(|a><b|) = sqrt(a) W(|a-1><b|) - sqrt(b+1) W(|a><b+1|)
DyadCombo d_alphabar(const DyadCombo& in) {
  DyadCombo out;
  for (const auto& [ab, c] : in) {
    const auto [a, b] = ab;
    if (a > 0) out[{a - 1, b}] += c * std::sqrt(static_cast<double>(a));
    out[{a, b + 1}] -= c * std::sqrt(b + 1.0);
  }
  return out;
}

struct ComboTerm {
  int low;     // min(a, b)
  int spread;  // |a - b|
  double coeff;
};

RMatrix moyal_raw(int nu, const ModelSpec& model, int N, int j, int nodes,
                  double* magnitude = nullptr) {
  const int dim = block_dim(nu, N);
  const int order = 2 * j + 1;
  const auto& rule = mathkit::gauss_laguerre(nodes);

  // beta_k u^k with beta_k = E b_k mu^k
  std::vector<double> beta(model.K + 1);
  for (int k = 0; k <= model.K; ++k) beta[k] = model.E * model.b[k] * std::pow(model.mu, k);

  // Per slot k and term l: the derivative of the basis dyad as a list of
  // radial pieces; the Hamiltonian factor is d_alpha^(order-l) d_alphabar^l H.
  std::vector<std::vector<std::vector<ComboTerm>>> combos(
      dim, std::vector<std::vector<ComboTerm>>(order + 1));
  int max_low = 0;
  for (int k = 0; k < dim; ++k) {
    const auto [row, col] = dyad_of(nu, k);
    for (int l = 0; l <= order; ++l) {
      DyadCombo c{{{row, col}, 1.0}};
      for (int i = 0; i < order - l; ++i) c = d_alphabar(c);
      for (int i = 0; i < l; ++i) c = d_alpha(c);
      const double weight = binomial(order, l) * ((l % 2) ? -1.0 : 1.0);
      for (const auto& [ab, value] : c) {
        if (value == 0.0) continue;
        const int low = std::min(ab.first, ab.second);
        max_low = std::max(max_low, low);
        combos[k][l].push_back({low, std::abs(ab.first - ab.second), weight * value});
      }
    }
  }
  const int spread_max = std::abs(nu) + order;
  const int spread_min = std::max(0, std::abs(nu) - order);
  const int table_len = max_low + 1;

  RMatrix A = RMatrix::Zero(rule.order, dim);
  RMatrix B = RMatrix::Zero(rule.order, dim);
  RMatrix A_size = magnitude ? RMatrix::Zero(rule.order, dim) : RMatrix();
  std::vector<std::vector<double>> ell(spread_max + 1, std::vector<double>(table_len));
  std::vector<double> hfac(order + 1);
  for (int i = 0; i < rule.order; ++i) {
    const long double x = rule.nodes[i];
    const double s = std::sqrt(static_cast<double>(x)) / 2.0;
    // derivatives of a dyad on diagonal nu only reach spreads within order of |nu|
    for (int v = spread_min; v <= spread_max; ++v) mathkit::laguerre_functions(v, x, ell[v]);
    for (int l = 0; l <= order; ++l) {
      const int p = order - l;
      const int q = l;
      double sum = 0.0;
      for (int k = std::max(p, q); k <= model.K; ++k) {
        if (beta[k] == 0.0) continue;
        sum += beta[k] * falling(k, p) * falling(k, q) * std::pow(s, 2 * k - p - q);
      }
      hfac[l] = sum;
    }
    auto radial = [&](int low, int spread) {
      return 2.0 * ((low % 2) ? -1.0 : 1.0) * ell[spread][low];
    };
    const double w = rule.scaled_weights[i] / 4.0;
    for (int k = 0; k < dim; ++k) {
      double value = 0.0;
      double size = 0.0;
      for (int l = 0; l <= order; ++l) {
        if (hfac[l] == 0.0) continue;
        double part = 0.0;
        double part_size = 0.0;
        for (const auto& t : combos[k][l]) {
          const double term = t.coeff * radial(t.low, t.spread);
          part += term;
          part_size += std::abs(term);
        }
        value += hfac[l] * part;
        size += std::abs(hfac[l]) * part_size;
      }
      A(i, k) = value;
      if (magnitude) A_size(i, k) = size;
      const auto [row, col] = dyad_of(nu, k);
      B(i, k) = w * radial(std::min(row, col), std::abs(nu));
    }
  }
  // size of the terms before cancellation, the natural scale for roundoff
  if (magnitude) *magnitude = (B.cwiseAbs().transpose() * A_size).maxCoeff();
  return B.transpose() * A;
}

}  // namespace

CMatrix moyal_correction_block(int nu, const ModelSpec& model, int N, int j,
                               const GeneratorOptions& options) {
  if (j < 0) throw InvalidArgument("moyal correction: negative order");
  const int dim = block_dim(nu, N);
  if (j > terminating_order(model)) return CMatrix::Zero(dim, dim);
  if (options.nodes < 0) throw InvalidArgument("moyal correction: negative node count");
  const int nodes =
      options.nodes > 0 ? options.nodes : N + 4 * j + model.K + 8;  // exact for the polynomial integrand
  const RMatrix raw = moyal_raw(nu, model, N, j, nodes);
  if (options.check_nodes) {
    double magnitude = 0.0;
    const RMatrix doubled = moyal_raw(nu, model, N, j, 2 * nodes, &magnitude);
    const double diff = (raw - doubled).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, magnitude);
    if (diff > 1e-8 * scale) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "moyal correction: doubling nodes changed entries by %.2e (scale %.2e)", diff,
                    scale);
      throw QuadratureNotConverged(buf);
    }
  }
  return moyal_coefficient(j, model.hbar) * raw.cast<Complex>();
}

// ---------------------------------------------------------------------------
// Assembled generators

GeneratorFactory::GeneratorFactory(ModelSpec model, int N, GeneratorOptions options)
    : model_(std::move(model)),
      N_(N),
      options_(options),
      hilbert_(model_, N + resolved_pad(model_, options)),
      hilbert_check_(model_, options.check_pad ? N + 2 * resolved_pad(model_, options) : 2) {
  if (N < 2) throw InvalidArgument("generator: N must be at least 2");
}

CMatrix GeneratorFactory::hilbert_sum(int nu, int up_to) const {
  const int dim = block_dim(nu, N_);
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (int j = 1; j <= std::min(up_to, terminating_order(model_)); ++j) {
    const CMatrix c = hilbert_.block(nu, N_, j);
    if (options_.check_pad) check_pad_agreement(c, hilbert_check_.block(nu, N_, j));
    sum += hilbert_coefficient(j, model_.hbar) * c;
  }
  return sum;
}

GeneratorBlock GeneratorFactory::make(const Dynamics& dynamics, int nu) const {
  GeneratorBlock block = quantum_block(nu, model_, N_);
  block.dynamics = dynamics;
  block.guard = options_.guard;
  const int top = terminating_order(model_);
  if (nu == 0 && options_.structural_zero) {
    const bool corrected = dynamics.family == DynamicsFamily::Semiquantum ||
                           dynamics.family == DynamicsFamily::Semiclassical;
    if (corrected && dynamics.order < 1) throw InvalidArgument("correction order must be at least 1");
    block.L.setZero();
    if (dynamics.family == DynamicsFamily::Semiclassical) block.path = GeneratorPath::MoyalGalerkin;
    else if (dynamics.family != DynamicsFamily::Quantum) block.path = GeneratorPath::Commutator;
    return block;
  }
  switch (dynamics.family) {
    case DynamicsFamily::Quantum:
      break;
    case DynamicsFamily::Classical:
      block.L += hilbert_sum(nu, top);
      block.path = GeneratorPath::Commutator;
      break;
    case DynamicsFamily::Semiquantum:
      if (dynamics.order < 1) throw InvalidArgument("semiquantum order must be at least 1");
      block.L += hilbert_sum(nu, dynamics.order);
      block.path = GeneratorPath::Commutator;
      break;
    case DynamicsFamily::Semiclassical:
      if (dynamics.order < 1) throw InvalidArgument("semiclassical order must be at least 1");
      block.L += hilbert_sum(nu, top);
      for (int j = 1; j <= std::min(dynamics.order, top); ++j) {
        block.L += moyal_correction_block(nu, model_, N_, j, options_);
      }
      block.path = GeneratorPath::MoyalGalerkin;
      break;
  }
  return block;
}

GeneratorBlock make_generator(const Dynamics& dynamics, int nu, const ModelSpec& model, int N,
                              const GeneratorOptions& options) {
  return GeneratorFactory(model, N, options).make(dynamics, nu);
}

GeneratorBlock classical_block(int nu, const ModelSpec& model, int N,
                               const GeneratorOptions& options) {
  return make_generator(Dynamics::classical(), nu, model, N, options);
}

GeneratorBlock semiquantum_block(int nu, const ModelSpec& model, int N, int order,
                                 const GeneratorOptions& options) {
  return make_generator(Dynamics::semiquantum(order), nu, model, N, options);
}

GeneratorBlock semiclassical_block(int nu, const ModelSpec& model, int N, int order,
                                   const GeneratorOptions& options) {
  return make_generator(Dynamics::semiclassical(order), nu, model, N, options);
}

GeneratorBlock classical_block_analytic(int nu, const ModelSpec& model, int N) {
  const int dim = block_dim(nu, N);
  // Powers of the tridiagonal P spill one band per factor; build with room.
  const int extra = model.K;
  const RMatrix half_p = 0.5 * p_block(nu, dim + extra);
  RMatrix power = RMatrix::Identity(dim + extra, dim + extra);
  RMatrix sum = RMatrix::Zero(dim + extra, dim + extra);
  for (int k = 1; k <= model.K; ++k) {
    if (k > 1) power = power * half_p;
    sum += k * model.b[k] * std::pow(model.mu, k - 1) * power;
  }
  CMatrix L = Complex(0.0, -nu * model.omega) * sum.topLeftCorner(dim, dim).cast<Complex>();
  return {nu, Dynamics::classical(), std::move(L), GeneratorPath::Analytic, 0};
}

// ---------------------------------------------------------------------------
// Validation

double interior_residual(const CMatrix& a, const CMatrix& b, int guard) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("interior_residual: shape mismatch");
  }
  const int n = std::max<int>(0, static_cast<int>(a.rows()) - guard);
  if (n == 0) return 0.0;
  return mathkit::max_abs(a.topLeftCorner(n, n) - b.topLeftCorner(n, n));
}

bool ValidationReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.passed(); });
}

const ValidationRow* ValidationReport::worst() const {
  const ValidationRow* worst = nullptr;
  double ratio = -1.0;
  for (const auto& r : rows) {
    if (!r.gate) continue;
    const double q = r.tolerance > 0.0 ? r.residual / r.tolerance
                                       : std::numeric_limits<double>::infinity();
    if (q > ratio) {
      ratio = q;
      worst = &r;
    }
  }
  return worst;
}

void ValidationReport::require() const {
  if (passed()) return;
  const auto* w = worst();
  throw ValidationFailed(w->check + " (nu=" + std::to_string(w->nu) + ")", w->residual,
                         w->tolerance);
}

ValidationReport cross_validate(int nu, const ModelSpec& model, int N,
                                const GeneratorOptions& options) {
  ValidationReport report;
  const int guard = options.guard;
  auto add = [&](std::string check, double residual, double tolerance, bool gate = true) {
    report.rows.push_back({std::move(check), nu, residual, tolerance, gate});
  };

  GeneratorOptions raw = options;
  raw.structural_zero = false;
  GeneratorFactory factory(model, N, raw);
  const auto quantum = factory.make(Dynamics::quantum(), nu);
  const auto classical = factory.make(Dynamics::classical(), nu);
  const auto semiquantum1 = factory.make(Dynamics::semiquantum(1), nu);
  const auto semiclassical1 = factory.make(Dynamics::semiclassical(1), nu);
  const auto analytic = classical_block_analytic(nu, model, N);

  add("classical_commutator_vs_analytic", interior_residual(classical.L, analytic.L, guard),
      1e-8);

  CMatrix moyal_total = classical.L;
  for (int j = 1; j <= terminating_order(model); ++j) {
    moyal_total += moyal_correction_block(nu, model, N, j, options);
  }
  add("classical_plus_moyal_vs_quantum", interior_residual(moyal_total, quantum.L, guard), 1e-8);
  add("poisson_vs_commutator",
      interior_residual(moyal_correction_block(nu, model, N, 0, options), classical.L, guard),
      1e-8);

  // Both are relative: the correction sums cancel terms of size E_n / hbar.
  if (nu == 0) {
    double scale = 1.0;
    for (int n = 0; n < N; ++n) scale = std::max(scale, std::abs(eigenvalue(model, n)) / model.hbar);
    for (const auto* g : {&quantum, &classical, &semiquantum1, &semiclassical1}) {
      add(g->dynamics.name() + "_nu0_vanishes", mathkit::max_abs(g->L) / scale, 1e-12);
    }
  } else {
    for (const auto* g : {&quantum, &classical, &semiquantum1}) {
      const CMatrix h = Complex(0.0, 1.0) * g->L;
      const double scale = std::max(1.0, mathkit::max_abs(g->L));
      add(g->dynamics.name() + "_unitary", interior_residual(h, h.adjoint(), guard) / scale, 1e-10);
    }
  }

  const bool pure_power = [&] {
    for (int k = 1; k < model.K; ++k) {
      if (model.b[k] != 0.0) return false;
    }
    return true;
  }();
  if (pure_power && model.K == 2) {
    const CMatrix expected = Complex(0.0, -nu * model.mu * model.omega * model.b[2]) *
                             p_block(nu, block_dim(nu, N)).cast<Complex>();
    add("quartic_classical_P", interior_residual(classical.L, expected, guard), 1e-10);
  }
  if (pure_power && model.K == 3) {
    const int dim = block_dim(nu, N);
    const double scale = nu * model.mu * model.mu * model.omega * model.b[3];
    const CMatrix sq_form =
        Complex(0.0, -scale) * sextic_semiquantum_form(nu, dim).cast<Complex>();
    add("sextic_semiquantum1_closed_form", interior_residual(semiquantum1.L, sq_form, guard),
        1e-8);
    const RMatrix p = p_block(nu, dim + 1);
    const RMatrix p2 = (p * p).topLeftCorner(dim, dim);
    const CMatrix three_quarters = Complex(0.0, -0.75 * scale) * p2.cast<Complex>();
    const CMatrix unit = Complex(0.0, -scale) * p2.cast<Complex>();
    add("sextic_classical_three_quarters_P2", interior_residual(classical.L, three_quarters, guard),
        1e-8);
    add("sextic_classical_unit_P2", interior_residual(classical.L, unit, guard), 1e-8, false);
  }
  return report;
}

}  // namespace groenewold
