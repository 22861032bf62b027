#include "gaussmetro/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace gaussmetro::fock {

namespace {

using Index = Eigen::Index;

constexpr double kKrausWeightTolerance = 1e-12;
constexpr double kEigenFloor = 1e-12;
constexpr double kStep = 1e-3;
constexpr double kCompressFloor = 1e-14;

Index total_dimension(const std::vector<int>& dims) {
  Index n = 1;
  for (int d : dims) {
    if (d < 3) throw std::invalid_argument("Fock truncation needs at least 3 levels per mode");
    n *= d;
  }
  return n;
}

int level(Index i, int mode, const std::vector<int>& dims, const std::vector<Index>& stride) {
  return static_cast<int>((i / stride[mode]) % dims[mode]);
}

// Nonzero of an anti-Hermitian generator K; exp(K) = exp(-iH) with H = iK.
struct Entry {
  Index row;
  Index col;
  Complex value;
};

struct DisjointSets {
  std::vector<Index> parent;
  explicit DisjointSets(Index n) : parent(n) { std::iota(parent.begin(), parent.end(), Index{0}); }
  Index find(Index i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(Index a, Index b) { parent[find(a)] = find(b); }
};

// U = exp(K) for anti-Hermitian K = -iH, block by block.
FockUnitary exponentiate(const std::vector<Entry>& k, Index dimension) {
  DisjointSets sets(dimension);
  for (const auto& e : k) sets.unite(e.row, e.col);

  std::vector<Index> root(dimension);
  std::vector<Index> position(dimension);
  std::vector<std::vector<Index>> members;
  std::vector<Index> slot(dimension, -1);
  std::vector<char> touched(dimension, 0);
  for (const auto& e : k) touched[e.row] = touched[e.col] = 1;
  for (Index i = 0; i < dimension; ++i) {
    if (!touched[i]) continue;
    const Index r = sets.find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<Index>(members.size());
      members.emplace_back();
    }
    root[i] = slot[r];
    position[i] = static_cast<Index>(members[slot[r]].size());
    members[slot[r]].push_back(i);
  }

  std::vector<CMatrix> h(members.size());
  for (std::size_t b = 0; b < members.size(); ++b) {
    const auto m = static_cast<Index>(members[b].size());
    h[b] = CMatrix::Zero(m, m);
  }
  for (const auto& e : k) h[root[e.row]](position[e.row], position[e.col]) += kI * e.value;

  std::vector<FockUnitary::Block> blocks;
  blocks.reserve(members.size());
  for (std::size_t b = 0; b < members.size(); ++b) {
    CMatrix hb = 0.5 * (h[b] + h[b].adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hb);
    if (eig.info() != Eigen::Success) throw Error("Fock generator diagonalization failed");
    const CVector phases = (-kI * eig.eigenvalues().cast<Complex>()).array().exp();
    CMatrix u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
    blocks.push_back({std::move(members[b]), std::move(u)});
  }
  return FockUnitary(std::move(blocks), dimension);
}

// Row-wise ladder actions on a factor, truncated at the top level.
CMatrix lower(const CMatrix& x, const std::vector<int>& dims, int mode) {
  const auto stride = strides(dims);
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const int n = level(i, mode, dims, stride);
    if (n > 0) out.row(i - stride[mode]) = std::sqrt(static_cast<double>(n)) * x.row(i);
  }
  return out;
}

CMatrix raise(const CMatrix& x, const std::vector<int>& dims, int mode) {
  const auto stride = strides(dims);
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const int n = level(i, mode, dims, stride);
    if (n + 1 < dims[mode]) out.row(i + stride[mode]) = std::sqrt(static_cast<double>(n + 1)) * x.row(i);
  }
  return out;
}

// Component j of (a1, a1+, a2, a2+, ...).
CMatrix ladder(const CMatrix& x, const std::vector<int>& dims, int j) {
  return (j % 2 == 0) ? lower(x, dims, j / 2) : raise(x, dims, j / 2);
}

void check_gate(const FockDensityMatrix& rho, TruncationReport* report, const char* stage) {
  const TruncationReport now = truncation_report(rho);
  if (report) {
    report->tail_population = std::max(report->tail_population, now.tail_population);
    report->trace_deficit = std::max(report->trace_deficit, now.trace_deficit);
  }
  if (now.tail_population >= kTailTolerance || std::abs(now.trace_deficit) >= kTraceTolerance) {
    std::ostringstream msg;
    msg << "Fock truncation gate failed after " << stage << " (dims";
    for (int d : rho.dims()) msg << ' ' << d;
    msg << "): tail population " << now.tail_population << ", trace deficit " << now.trace_deficit;
    throw TruncationError(msg.str());
  }
}

double kraus_coefficient(int n, int m, double xi) {
  if (xi == 0.0) return (m == n) ? 1.0 : 0.0;
  if (xi == 1.0) return (m == 0) ? 1.0 : 0.0;
  const double log_binomial = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
  return std::exp(0.5 * (log_binomial + (n - m) * std::log(xi) + m * std::log1p(-xi)));
}

// Eigenpairs of Psi^+ Psi, descending. Columns of Psi V are orthogonal with
// squared norms lambda, the nonzero spectrum of rho.
struct GramSpectrum {
  RVector lambda;
  CMatrix v;
};

GramSpectrum gram_spectrum(const CMatrix& factor) {
  const CMatrix gram = factor.adjoint() * factor;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (gram + gram.adjoint()));
  if (eig.info() != Eigen::Success) throw Error("oracle Gram matrix diagonalization failed");
  const Index k = gram.rows();
  GramSpectrum out{RVector(k), CMatrix(k, k)};
  for (Index j = 0; j < k; ++j) {
    out.lambda(j) = eig.eigenvalues()(k - 1 - j);
    out.v.col(j) = eig.eigenvectors().col(k - 1 - j);
  }
  return out;
}

// Replaces Psi by Psi V_S over the Kraus directions with weight above
// kCompressFloor relative to the largest. The same right factor goes to every
// companion, so Psi Psi^+ and Psi' Psi^+ change only by the dropped weight.
void compress(CMatrix& factor, std::vector<CMatrix*> companions) {
  if (factor.cols() <= 1) return;
  const GramSpectrum g = gram_spectrum(factor);
  Index kept = 0;
  while (kept < g.lambda.size() && g.lambda(kept) > kCompressFloor * g.lambda(0)) ++kept;
  const CMatrix v = g.v.leftCols(std::max<Index>(kept, 1));
  factor = factor * v;
  for (CMatrix* c : companions) *c = *c * v;
}

CMatrix stack_loss(const CMatrix& x, const std::vector<int>& dims, int mode, double xi, int kraus_max) {
  const auto stride = strides(dims);
  const Index k = x.cols();
  CMatrix out = CMatrix::Zero(x.rows(), k * (kraus_max + 1));
  for (int m = 0; m <= kraus_max; ++m) {
    for (Index i = 0; i < x.rows(); ++i) {
      const int n = level(i, mode, dims, stride);
      if (n < m) continue;
      const double c = kraus_coefficient(n, m, xi);
      if (c == 0.0) continue;
      out.block(i - m * stride[mode], m * k, 1, k) = c * x.row(i);
    }
  }
  return out;
}

void check_loss_mode(const std::vector<int>& dims, int mode, double xi) {
  if (mode < 0 || mode >= static_cast<int>(dims.size())) throw std::invalid_argument("loss mode out of range");
  if (!(xi >= 0.0 && xi <= 1.0)) throw PhysicsError("transmissivity outside [0, 1]");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

FockUnitary unitary_for(const Element& element, const std::vector<int>& dims) {
  const int modes = static_cast<int>(dims.size());
  return std::visit(overloaded{
                        [&](const BeamSplitter&) { return beam_splitter(dims); },
                        [&](const PhaseShifter& p) { return phase_shift(dims, p.weights, p.phi); },
                        [&](const Opa& o) {
                          return modes == 1 ? single_mode_squeezer(dims, 0, o.g, o.sign)
                                            : two_mode_squeezer(dims, o.g, o.sign);
                        },
                        [&](const Loss&) -> FockUnitary { throw std::logic_error("loss is not unitary"); },
                    },
                    element);
}

// Applies an element to Psi and, linearly, to its derivative.
void step(const Element& element, FockDensityMatrix& rho, CMatrix* dfactor) {
  const auto& dims = rho.dims();
  if (const auto* loss = std::get_if<Loss>(&element)) {
    if (static_cast<int>(loss->transmissivity.size()) != rho.mode_count())
      throw std::invalid_argument("loss needs one transmissivity per mode");
    for (int mode = 0; mode < rho.mode_count(); ++mode) {
      const double xi = loss->transmissivity[mode];
      check_loss_mode(dims, mode, xi);
      if (xi == 1.0) continue;
      const int m = kraus_cutoff(rho.factor(), dims, mode, xi);
      rho.factor() = stack_loss(rho.factor(), dims, mode, xi, m);
      if (dfactor) *dfactor = stack_loss(*dfactor, dims, mode, xi, m);
      std::vector<CMatrix*> companions;
      if (dfactor) companions.push_back(dfactor);
      compress(rho.factor(), companions);
    }
    return;
  }
  const FockUnitary u = unitary_for(element, dims);
  u.apply(rho.factor());
  if (dfactor) u.apply(*dfactor);
}

const char* element_name(const Element& e) {
  return std::visit(overloaded{
                        [](const BeamSplitter&) { return "beam splitter"; },
                        [](const PhaseShifter&) { return "phase shift"; },
                        [](const Opa&) { return "amplifier"; },
                        [](const Loss&) { return "loss"; },
                    },
                    e);
}

}  // namespace

std::vector<Index> strides(const std::vector<int>& dims) {
  std::vector<Index> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
  return s;
}

FockDensityMatrix::FockDensityMatrix(std::vector<int> dims, CMatrix factor)
    : dims_(std::move(dims)), factor_(std::move(factor)) {
  if (factor_.rows() != total_dimension(dims_)) throw std::invalid_argument("factor rows do not match dims");
}

CMatrix FockDensityMatrix::density() const { return factor_ * factor_.adjoint(); }

double FockDensityMatrix::trace() const { return factor_.squaredNorm(); }

double FockDensityMatrix::purity() const {
  const CMatrix gram = factor_.adjoint() * factor_;
  return gram.squaredNorm();
}

TruncationReport truncation_report(const FockDensityMatrix& rho) {
  const auto& dims = rho.dims();
  const auto stride = strides(dims);
  TruncationReport r;
  for (Index i = 0; i < rho.dimension(); ++i) {
    bool top = false;
    for (int k = 0; k < rho.mode_count(); ++k) top = top || level(i, k, dims, stride) >= dims[k] - 2;
    if (top) r.tail_population += rho.factor().row(i).squaredNorm();
  }
  r.trace_deficit = 1.0 - rho.trace();
  return r;
}

FockUnitary::FockUnitary(std::vector<Block> blocks, Index dimension)
    : blocks_(std::move(blocks)), dimension_(dimension) {}

void FockUnitary::apply(CMatrix& factor) const {
  if (factor.rows() != dimension_) throw std::invalid_argument("unitary and state dimensions differ");
  for (const auto& b : blocks_) {
    const auto m = static_cast<Index>(b.index.size());
    if (m == 1) {
      factor.row(b.index[0]) *= b.u(0, 0);
      continue;
    }
    CMatrix gathered(m, factor.cols());
    for (Index r = 0; r < m; ++r) gathered.row(r) = factor.row(b.index[r]);
    gathered = (b.u * gathered).eval();
    for (Index r = 0; r < m; ++r) factor.row(b.index[r]) = gathered.row(r);
  }
}

CMatrix FockUnitary::dense() const {
  CMatrix u = CMatrix::Identity(dimension_, dimension_);
  apply(u);
  return u;
}

FockUnitary displacement(const std::vector<int>& dims, int mode, double alpha) {
  const auto stride = strides(dims);
  const Index n = total_dimension(dims);
  std::vector<Entry> k;
  for (Index i = 0; i < n; ++i) {
    const int lvl = level(i, mode, dims, stride);
    if (lvl + 1 < dims[mode]) {
      const double c = alpha * std::sqrt(lvl + 1.0);
      k.push_back({i + stride[mode], i, c});
      k.push_back({i, i + stride[mode], -c});
    }
  }
  return exponentiate(k, n);
}

FockUnitary single_mode_squeezer(const std::vector<int>& dims, int mode, double g, int sign) {
  const auto stride = strides(dims);
  const Index n = total_dimension(dims);
  std::vector<Entry> k;
  for (Index i = 0; i < n; ++i) {
    const int lvl = level(i, mode, dims, stride);
    if (lvl + 2 < dims[mode]) {
      const double c = 0.5 * sign * g * std::sqrt((lvl + 1.0) * (lvl + 2.0));
      k.push_back({i + 2 * stride[mode], i, c});
      k.push_back({i, i + 2 * stride[mode], -c});
    }
  }
  return exponentiate(k, n);
}

FockUnitary two_mode_squeezer(const std::vector<int>& dims, double g, int sign) {
  if (dims.size() != 2) throw std::invalid_argument("two-mode squeezer needs two modes");
  const auto stride = strides(dims);
  const Index n = total_dimension(dims);
  std::vector<Entry> k;
  for (Index i = 0; i < n; ++i) {
    const int n1 = level(i, 0, dims, stride);
    const int n2 = level(i, 1, dims, stride);
    if (n1 + 1 < dims[0] && n2 + 1 < dims[1]) {
      const double c = sign * g * std::sqrt((n1 + 1.0) * (n2 + 1.0));
      const Index j = i + stride[0] + stride[1];
      k.push_back({j, i, c});
      k.push_back({i, j, -c});
    }
  }
  return exponentiate(k, n);
}

FockUnitary beam_splitter(const std::vector<int>& dims) {
  if (dims.size() != 2) throw std::invalid_argument("beam splitter needs two modes");
  const auto stride = strides(dims);
  const Index n = total_dimension(dims);
  const double theta = 0.25 * std::numbers::pi;
  std::vector<Entry> k;
  // theta (a1+ a2 - a2+ a1): |n1, n2> -> |n1 + 1, n2 - 1> with sqrt((n1+1) n2).
  for (Index i = 0; i < n; ++i) {
    const int n1 = level(i, 0, dims, stride);
    const int n2 = level(i, 1, dims, stride);
    if (n1 + 1 < dims[0] && n2 > 0) {
      const double c = theta * std::sqrt((n1 + 1.0) * n2);
      const Index j = i + stride[0] - stride[1];
      k.push_back({j, i, c});
      k.push_back({i, j, -c});
    }
  }
  FockUnitary rotation = exponentiate(k, n);
  std::vector<FockUnitary::Block> blocks = rotation.blocks();
  std::vector<char> covered(n, 0);
  for (auto& b : blocks) {
    for (std::size_t r = 0; r < b.index.size(); ++r) {
      covered[b.index[r]] = 1;
      if (level(b.index[r], 1, dims, stride) % 2 == 1) b.u.row(static_cast<Index>(r)) *= -1.0;
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (!covered[i] && level(i, 1, dims, stride) % 2 == 1) blocks.push_back({{i}, CMatrix::Constant(1, 1, -1.0)});
  }
  return FockUnitary(std::move(blocks), n);
}

FockUnitary phase_shift(const std::vector<int>& dims, const std::vector<double>& weights, double phi) {
  if (weights.size() != dims.size()) throw std::invalid_argument("phase shift needs one weight per mode");
  const auto stride = strides(dims);
  const Index n = total_dimension(dims);
  std::vector<FockUnitary::Block> blocks;
  blocks.reserve(n);
  for (Index i = 0; i < n; ++i) {
    double theta = 0.0;
    for (std::size_t k = 0; k < dims.size(); ++k) theta += weights[k] * level(i, static_cast<int>(k), dims, stride);
    blocks.push_back({{i}, CMatrix::Constant(1, 1, std::exp(kI * theta * phi))});
  }
  return FockUnitary(std::move(blocks), n);
}

FockDensityMatrix build_state(const InputSpec& spec, const std::vector<int>& dims) {
  auto single = [](int d, double alpha, double r) {
    CMatrix psi = CMatrix::Zero(d, 1);
    psi(0, 0) = 1.0;
    single_mode_squeezer({d}, 0, r, +1).apply(psi);
    displacement({d}, 0, alpha).apply(psi);
    return psi;
  };
  CMatrix psi;
  if (dims.size() == 1) {
    psi = single(dims[0], spec.alpha, spec.r);
  } else if (dims.size() == 2) {
    const CMatrix coherent = single(dims[0], spec.alpha, 0.0);
    const CMatrix squeezed = single(dims[1], 0.0, spec.r);
    psi.resize(static_cast<Index>(dims[0]) * dims[1], 1);
    for (int n1 = 0; n1 < dims[0]; ++n1)
      for (int n2 = 0; n2 < dims[1]; ++n2) psi(static_cast<Index>(n1) * dims[1] + n2, 0) = coherent(n1, 0) * squeezed(n2, 0);
  } else {
    throw std::invalid_argument("Fock oracle supports one or two modes");
  }
  FockDensityMatrix rho(dims, std::move(psi));
  check_gate(rho, nullptr, "input preparation");
  return rho;
}

int kraus_cutoff(const CMatrix& factor, const std::vector<int>& dims, int mode, double xi) {
  check_loss_mode(dims, mode, xi);
  const auto stride = strides(dims);
  const int d = dims[mode];
  std::vector<double> population(d, 0.0);
  for (Index i = 0; i < factor.rows(); ++i) population[level(i, mode, dims, stride)] += factor.row(i).squaredNorm();
  std::vector<double> weight(d, 0.0);
  for (int m = 0; m < d; ++m) {
    for (int n = m; n < d; ++n) {
      const double c = kraus_coefficient(n, m, xi);
      weight[m] += c * c * population[n];
    }
  }
  double tail = 0.0;
  for (int m = d - 1; m > 0; --m) {
    tail += weight[m];
    if (tail >= kKrausWeightTolerance) return m;
  }
  return 0;
}

void apply_loss(CMatrix& factor, const std::vector<int>& dims, int mode, double xi, int kraus_max) {
  check_loss_mode(dims, mode, xi);
  if (kraus_max < 0 || kraus_max >= dims[mode]) throw std::invalid_argument("Kraus cutoff out of range");
  factor = stack_loss(factor, dims, mode, xi, kraus_max);
  compress(factor, {});
}

void apply(const Element& element, FockDensityMatrix& rho, TruncationReport* report) {
  step(element, rho, nullptr);
  check_gate(rho, report, element_name(element));
}

Evolution evolve(const Pipeline& pipeline, double phi, const std::vector<int>& dims) {
  if (static_cast<int>(dims.size()) != pipeline.mode_count())
    throw std::invalid_argument("one truncation per mode is required");
  Evolution ev{build_state(pipeline.input(), dims), CMatrix(), {}};
  check_gate(ev.rho, &ev.report, "input preparation");
  CMatrix* dfactor = nullptr;

  const auto& elements = pipeline.elements();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (i == pipeline.carrier()) {
      const auto& carrier = std::get<PhaseShifter>(elements[i]);
      const CMatrix before = ev.rho.factor();
      auto shifted = [&](double t) {
        CMatrix x = before;
        phase_shift(dims, carrier.weights, phi + t).apply(x);
        return x;
      };
      ev.dfactor = (8.0 * (shifted(kStep) - shifted(-kStep)) - (shifted(2.0 * kStep) - shifted(-2.0 * kStep))) /
                   (12.0 * kStep);
      ev.rho.factor() = shifted(0.0);
      dfactor = &ev.dfactor;
    } else {
      step(elements[i], ev.rho, dfactor);
    }
    check_gate(ev.rho, &ev.report, element_name(elements[i]));
  }
  return ev;
}

Evolution evolve(const Pipeline& pipeline, double phi, int dims) {
  return evolve(pipeline, phi, std::vector<int>(pipeline.mode_count(), dims));
}

double qfi_fock(const Evolution& ev) {
  const CMatrix& psi = ev.rho.factor();
  const CMatrix& dpsi = ev.dfactor;
  const GramSpectrum g = gram_spectrum(psi);
  Index kept = 0;
  while (kept < g.lambda.size() && g.lambda(kept) > kEigenFloor) ++kept;
  if (kept == 0) throw Error("oracle state has no support above the eigenvalue floor");

  const RVector lambda = g.lambda.head(kept);
  const RVector s = lambda.cwiseSqrt();
  const CMatrix vs = g.v.leftCols(kept);
  const CMatrix u = psi * vs * s.cwiseInverse().asDiagonal();
  // R = rho' U_S with rho' = Psi' Psi^+ + Psi Psi'^+ and Psi^+ U_S = V_S s_S.
  const CMatrix r = dpsi * (vs * s.asDiagonal()) + psi * (dpsi.adjoint() * u);
  const CMatrix inner = u.adjoint() * r;
  const CMatrix outer = r - u * inner;

  double f = 0.0;
  for (Index j = 0; j < kept; ++j) {
    for (Index k = 0; k < kept; ++k) f += 2.0 * std::norm(inner(k, j)) / (lambda(j) + lambda(k));
    // Pairs with one index outside the support appear twice.
    f += 4.0 * outer.col(j).squaredNorm() / lambda(j);
  }
  if (f < -1e-9 || !std::isfinite(f)) throw Error("oracle QFI is negative or not finite");
  return std::max(f, 0.0);
}

double qfi_fock(const Pipeline& pipeline, double phi, int dims) { return qfi_fock(evolve(pipeline, phi, dims)); }

CVector mean_vector(const FockDensityMatrix& rho) {
  const int modes = rho.mode_count();
  CVector v(2 * modes);
  for (int k = 0; k < modes; ++k) {
    const Complex a = (rho.factor().adjoint() * lower(rho.factor(), rho.dims(), k)).trace();
    v(2 * k) = a;
    v(2 * k + 1) = std::conj(a);
  }
  return v;
}

std::vector<double> photon_numbers(const FockDensityMatrix& rho) {
  const auto stride = strides(rho.dims());
  std::vector<double> n(rho.mode_count(), 0.0);
  for (Index i = 0; i < rho.dimension(); ++i) {
    const double p = rho.factor().row(i).squaredNorm();
    for (int k = 0; k < rho.mode_count(); ++k) n[k] += p * level(i, k, rho.dims(), stride);
  }
  return n;
}

namespace {

// (M - b0^T v) X with M = 1/2 a~^T A0 a~ + a~^T b0, a~ centred on v.
CMatrix apply_centred(const QuadraticDetector& det, const CVector& v, const std::vector<int>& dims, const CMatrix& x) {
  const Index dim = v.size();
  if (det.A0.rows() != dim || det.b0.size() != dim) throw std::invalid_argument("detector size does not match the state");
  std::vector<CMatrix> t(dim);
  for (Index j = 0; j < dim; ++j) t[j] = ladder(x, dims, static_cast<int>(j)) - v(j) * x;
  // a~_i acts on b0_i x + 1/2 sum_j A0_ij a~_j x.
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (Index i = 0; i < dim; ++i) {
    CMatrix s = det.b0(i) * x;
    for (Index j = 0; j < dim; ++j) {
      if (det.A0(i, j) != Complex(0.0)) s += 0.5 * det.A0(i, j) * t[j];
    }
    if (s.cwiseAbs().maxCoeff() == 0.0) continue;
    out += ladder(s, dims, static_cast<int>(i)) - v(i) * s;
  }
  return out;
}

}  // namespace

ObservableStats observable_stats(const QuadraticDetector& det, const FockDensityMatrix& rho) {
  const CVector v = mean_vector(rho);
  const CMatrix& psi = rho.factor();
  const CMatrix m1 = apply_centred(det, v, rho.dims(), psi);
  const CMatrix m2 = apply_centred(det, v, rho.dims(), m1);
  const double centred_mean = (psi.adjoint() * m1).trace().real();
  const double second = (psi.adjoint() * m2).trace().real();
  ObservableStats out;
  out.mean = centred_mean + (det.b0.transpose() * v)(0, 0).real();
  out.variance = second - centred_mean * centred_mean;
  return out;
}

double observable_slope(const QuadraticDetector& det, const Evolution& ev) {
  const CVector v = mean_vector(ev.rho);
  const CMatrix& psi = ev.rho.factor();
  const CMatrix& dpsi = ev.dfactor;
  const Complex t1 = (psi.adjoint() * apply_centred(det, v, ev.rho.dims(), dpsi)).trace();
  const Complex t2 = (dpsi.adjoint() * apply_centred(det, v, ev.rho.dims(), psi)).trace();
  const double dtrace = 2.0 * (dpsi.adjoint() * psi).trace().real();
  return (t1 + t2).real() + (det.b0.transpose() * v)(0, 0).real() * dtrace;
}

}  // namespace gaussmetro::fock
