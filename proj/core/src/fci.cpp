#include "qeomx/fci.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "qeomx/errors.hpp"

namespace qeomx {

namespace {

int spin_of(int so) { return (so % 2 == 0) ? +1 : -1; }

// #occupied strictly between a and b (exclusive), in mask m.
int count_between(std::uint64_t m, int a, int b) {
  if (a > b) std::swap(a, b);
  if (b - a < 2) return 0;
  std::uint64_t window = ((std::uint64_t{1} << b) - 1) & ~((std::uint64_t{1} << (a + 1)) - 1);
  return std::popcount(m & window);
}

std::vector<int> bits_of(std::uint64_t m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

}  // namespace

SectorBasis sector_basis(int n_so, int n_electrons, int sz2, std::optional<Irrep> irrep,
                         std::span<const Irrep> so_irrep) {
  if (n_electrons < 0 || n_electrons > n_so) {
    throw std::invalid_argument("electron count outside [0, n_so]");
  }
  if (static_cast<int>(so_irrep.size()) < n_so) {
    throw std::invalid_argument("so_irrep shorter than spin-orbital count");
  }
  SectorBasis basis;
  basis.n_so = n_so;
  basis.n_electrons = n_electrons;
  basis.sz2 = sz2;
  basis.irrep = irrep;
  if (n_electrons == 0) {
    if (sz2 == 0 && (!irrep || *irrep == kTotallySymmetric)) basis.dets.push_back(0);
    return basis;
  }
  // Enumerate n_electrons-subsets of [0, n_so) in ascending mask order.
  std::uint64_t det = (std::uint64_t{1} << n_electrons) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n_so;
  while (det < limit) {
    int sz = 0;
    for (int i : bits_of(det)) sz += spin_of(i);
    if (sz == sz2 && (!irrep || determinant_irrep(det, so_irrep) == *irrep)) {
      basis.dets.push_back(det);
    }
    // next subset with same popcount (Gosper's hack)
    std::uint64_t c = det & -det;
    std::uint64_t r = det + c;
    if (r >= limit) break;
    det = (((r ^ det) >> 2) / c) | r;
  }
  return basis;
}

double slater_condon(const MolecularHamiltonian& mh, std::uint64_t bra, std::uint64_t ket) {
  const std::uint64_t diff = bra ^ ket;
  const int ndiff = std::popcount(diff);
  if (ndiff == 0) {
    double e = mh.constant;
    auto occ = bits_of(ket);
    for (int p : occ) e += mh.h1(p, p);
    for (int p : occ)
      for (int q : occ) e += 0.5 * (mh.g2(p, p, q, q) - mh.g2(p, q, q, p));
    return e;
  }
  if (ndiff == 2) {
    const int p = std::countr_zero(diff & ket);  // occupied in ket only
    const int q = std::countr_zero(diff & bra);  // occupied in bra only
    const double sign = (count_between(ket, p, q) % 2 == 0) ? 1.0 : -1.0;
    double v = mh.h1(q, p);
    const std::uint64_t common = bra & ket;
    for (int r : bits_of(common)) {
      v += mh.g2(q, p, r, r) - mh.g2(q, r, r, p);
    }
    return sign * v;
  }
  if (ndiff == 4) {
    auto ket_only = bits_of(diff & ket);  // p1 < p2
    auto bra_only = bits_of(diff & bra);  // q1 < q2
    const int p1 = ket_only[0], p2 = ket_only[1];
    const int q1 = bra_only[0], q2 = bra_only[1];
    int par = count_between(ket, p1, q1);
    const std::uint64_t ket2 = ket ^ (std::uint64_t{1} << p1) ^ (std::uint64_t{1} << q1);
    par += count_between(ket2, p2, q2);
    const double sign = (par % 2 == 0) ? 1.0 : -1.0;
    // <q1 q2 || p1 p2> in chemists' notation
    return sign * (mh.g2(q1, p1, q2, p2) - mh.g2(q1, p2, q2, p1));
  }
  return 0.0;
}

namespace {

// Connected determinants (singles and doubles) of det within the sector,
// used by the iterative path's matvec.
void for_each_connected(const MolecularHamiltonian& mh, std::uint64_t det,
                        const std::function<void(std::uint64_t)>& fn) {
  auto occ = bits_of(det);
  std::vector<int> vir;
  for (int p = 0; p < mh.n_so; ++p) {
    if (!(det >> p & 1)) vir.push_back(p);
  }
  for (int i : occ) {
    for (int a : vir) {
      if (spin_of(i) != spin_of(a)) continue;
      fn(det ^ (std::uint64_t{1} << i) ^ (std::uint64_t{1} << a));
    }
  }
  for (std::size_t ii = 0; ii < occ.size(); ++ii) {
    for (std::size_t jj = ii + 1; jj < occ.size(); ++jj) {
      const int si = spin_of(occ[ii]) + spin_of(occ[jj]);
      for (std::size_t aa = 0; aa < vir.size(); ++aa) {
        for (std::size_t bb = aa + 1; bb < vir.size(); ++bb) {
          if (spin_of(vir[aa]) + spin_of(vir[bb]) != si) continue;
          fn(det ^ (std::uint64_t{1} << occ[ii]) ^ (std::uint64_t{1} << occ[jj]) ^
             (std::uint64_t{1} << vir[aa]) ^ (std::uint64_t{1} << vir[bb]));
        }
      }
    }
  }
}

FciResult solve_dense(const MolecularHamiltonian& mh, const SectorBasis& basis, int n_roots) {
  const std::size_t dim = basis.dim();
  Eigen::MatrixXd H(dim, dim);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      double v = slater_condon(mh, basis.dets[i], basis.dets[j]);
      H(static_cast<long>(i), static_cast<long>(j)) = v;
      H(static_cast<long>(j), static_cast<long>(i)) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  FciResult out;
  const int keep = std::min<int>(n_roots, static_cast<int>(dim));
  out.energies.assign(es.eigenvalues().data(), es.eigenvalues().data() + keep);
  out.vectors = RealMatrix(dim, static_cast<std::size_t>(keep));
  for (std::size_t i = 0; i < dim; ++i)
    for (int k = 0; k < keep; ++k) out.vectors(i, static_cast<std::size_t>(k)) = es.eigenvectors()(static_cast<long>(i), k);
  return out;
}

FciResult solve_lanczos(const MolecularHamiltonian& mh, const SectorBasis& basis, int n_roots) {
  const std::size_t dim = basis.dim();
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(dim * 2);
  for (std::size_t i = 0; i < dim; ++i) index.emplace(basis.dets[i], i);

  auto matvec = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<long>(dim));
#pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t i = 0; i < dim; ++i) {
      const std::uint64_t di = basis.dets[i];
      double acc = slater_condon(mh, di, di) * x(static_cast<long>(i));
      for_each_connected(mh, di, [&](std::uint64_t dj) {
        auto it = index.find(dj);
        if (it == index.end()) return;
        acc += slater_condon(mh, di, dj) * x(static_cast<long>(it->second));
      });
      y(static_cast<long>(i)) = acc;
    }
    return y;
  };

  const int max_iter = static_cast<int>(std::min<std::size_t>(dim, 400));
  std::vector<Eigen::VectorXd> V;
  V.reserve(static_cast<std::size_t>(max_iter));
  Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<long>(dim), 1.0);
  for (long i = 0; i < v.size(); ++i) v(i) += 0.1 * static_cast<double>(i % 7);  // deterministic, unstructured
  v.normalize();
  V.push_back(v);
  std::vector<double> alpha, beta;
  Eigen::VectorXd w;

  for (int it = 0; it < max_iter; ++it) {
    w = matvec(V.back());
    double a = V.back().dot(w);
    alpha.push_back(a);
    w -= a * V.back();
    if (!beta.empty()) w -= beta.back() * V[V.size() - 2];
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : V) w -= u.dot(w) * u;
    }
    double b = w.norm();

    const long m = static_cast<long>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (long k = 0; k < m; ++k) {
      T(k, k) = alpha[static_cast<std::size_t>(k)];
      if (k + 1 < m) T(k, k + 1) = T(k + 1, k) = beta[static_cast<std::size_t>(k)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const long keep = std::min<long>(m, n_roots);
    // Ritz residual estimate: |beta_m| * |last eigenvector component|.
    bool converged = m >= n_roots;
    for (long k = 0; k < keep && converged; ++k) {
      if (b * std::abs(es.eigenvectors()(m - 1, k)) > 1e-10) converged = false;
    }
    if (converged || b < 1e-12 || it == max_iter - 1 ||
        static_cast<std::size_t>(m) == dim) {
      FciResult out;
      out.energies.assign(es.eigenvalues().data(), es.eigenvalues().data() + keep);
      out.vectors = RealMatrix(dim, static_cast<std::size_t>(keep));
      for (long k = 0; k < keep; ++k) {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<long>(dim));
        for (long j = 0; j < m; ++j) full += es.eigenvectors()(j, k) * V[static_cast<std::size_t>(j)];
        full.normalize();
        for (std::size_t i = 0; i < dim; ++i) out.vectors(i, static_cast<std::size_t>(k)) = full(static_cast<long>(i));
      }
      return out;
    }
    beta.push_back(b);
    V.push_back(w / b);
  }
  throw ContractViolation("Lanczos did not converge");
}

}  // namespace

FciResult fci_solve(const MolecularHamiltonian& mh, const SectorBasis& basis, int n_roots,
                    FciMethod method) {
  const std::size_t dim = basis.dim();
  if (dim == 0) return {};
  if (dim > 200000) {
    throw std::invalid_argument("sector dimension " + std::to_string(dim) +
                                " exceeds the 2e5 guard");
  }
  if (n_roots < 1) throw std::invalid_argument("n_roots must be positive");
  if (method == FciMethod::Dense || (method == FciMethod::Auto && dim <= 5000)) {
    return solve_dense(mh, basis, n_roots);
  }
  return solve_lanczos(mh, basis, n_roots);
}

std::vector<double> fci_spectrum(const MolecularHamiltonian& mh, const SectorBasis& basis,
                                 int n_roots) {
  return fci_solve(mh, basis, n_roots).energies;
}

Statevector embed_fci_vector(const SectorBasis& basis, std::span<const double> column,
                             int n_qubits) {
  if (column.size() != basis.dim()) throw std::invalid_argument("column/basis size mismatch");
  Statevector psi(n_qubits);
  for (std::size_t i = 0; i < basis.dim(); ++i) psi[basis.dets[i]] += column[i];
  return psi;
}

}  // namespace qeomx
