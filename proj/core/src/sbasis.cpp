#include "qeomx/sbasis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qeomx/errors.hpp"

namespace qeomx {

namespace {

constexpr double kPi = std::numbers::pi;

double dist2(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

// Boys function F0(x) = 1/2 sqrt(pi/x) erf(sqrt(x)).
double boys_f0(double x) {
  if (x < 1e-12) return 1.0 - x / 3.0 + x * x / 10.0;
  double sx = std::sqrt(x);
  return 0.5 * std::sqrt(kPi / x) * std::erf(sx);
}

double prim_norm(double alpha) { return std::pow(2.0 * alpha / kPi, 0.75); }

struct Shell {
  std::array<double, 3> center;
  std::vector<double> alpha;
  std::vector<double> coeff;  // includes primitive norms, contraction renormalized
};

// Contraction coefficients are given w.r.t. normalized primitives; fold the
// primitive norms in and renormalize the contracted function.
Shell make_shell(const std::array<double, 3>& center, const std::vector<GaussianPrimitive>& prims) {
  if (prims.empty()) throw std::invalid_argument("contraction with no primitives");
  Shell sh;
  sh.center = center;
  for (const auto& p : prims) {
    if (p.exponent <= 0.0) throw std::invalid_argument("Gaussian exponent must be positive");
    sh.alpha.push_back(p.exponent);
    sh.coeff.push_back(p.coefficient * prim_norm(p.exponent));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < sh.alpha.size(); ++i) {
    for (std::size_t j = 0; j < sh.alpha.size(); ++j) {
      double p = sh.alpha[i] + sh.alpha[j];
      s += sh.coeff[i] * sh.coeff[j] * std::pow(kPi / p, 1.5);
    }
  }
  double inv = 1.0 / std::sqrt(s);
  for (auto& c : sh.coeff) c *= inv;
  return sh;
}

std::vector<Shell> make_shells(const SOrbitalBasis& basis) {
  std::vector<Shell> shells;
  for (const auto& atom : basis.atoms) {
    if (atom.contractions.empty()) {
      throw std::invalid_argument("atom without basis functions");
    }
    for (const auto& con : atom.contractions) shells.push_back(make_shell(atom.position, con));
  }
  return shells;
}

}  // namespace

std::size_t SOrbitalBasis::n_functions() const {
  std::size_t n = 0;
  for (const auto& a : atoms) n += a.contractions.size();
  return n;
}

int SOrbitalBasis::n_electrons() const {
  double z = 0.0;
  for (const auto& a : atoms) z += a.charge;
  return static_cast<int>(std::lround(z));
}

std::vector<GaussianPrimitive> default_hydrogen_contraction() {
  return {{4.50038, 0.07048}, {0.681277, 0.40789}, {0.151374, 0.64767}};
}

SOrbitalBasis h2_molecule(double r_bohr) {
  SOrbitalBasis b;
  auto con = default_hydrogen_contraction();
  b.atoms.push_back({1.0, {0.0, 0.0, -0.5 * r_bohr}, {con}});
  b.atoms.push_back({1.0, {0.0, 0.0, +0.5 * r_bohr}, {con}});
  return b;
}

SOrbitalBasis parse_layout(const std::string& text, double b,
                           const std::vector<GaussianPrimitive>& contraction) {
  SOrbitalBasis basis;
  std::istringstream iss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(iss, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    double z, x, y, zz;
    if (!(ls >> z)) continue;  // blank/comment line
    if (!(ls >> x >> y >> zz)) {
      throw ParseError("layout line " + std::to_string(line_no) + ": expected `Z x y z [dx dy dz]`");
    }
    double dx = 0, dy = 0, dz = 0;
    if (ls >> dx) {
      if (!(ls >> dy >> dz)) {
        throw ParseError("layout line " + std::to_string(line_no) + ": incomplete displacement");
      }
    }
    SOrbitalBasis::Atom atom;
    atom.charge = z;
    atom.position = {x + b * dx, y + b * dy, zz + b * dz};
    atom.contractions = {contraction};
    basis.atoms.push_back(atom);
  }
  if (basis.atoms.empty()) throw ParseError("layout file contains no atoms");
  return basis;
}

SOrbitalBasis load_layout_file(const std::string& path, double b,
                               const std::vector<GaussianPrimitive>& contraction) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open layout file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_layout(ss.str(), b, contraction);
}

double nuclear_repulsion(const SOrbitalBasis& basis) {
  double e = 0.0;
  for (std::size_t a = 0; a < basis.atoms.size(); ++a) {
    for (std::size_t c = a + 1; c < basis.atoms.size(); ++c) {
      double r2 = dist2(basis.atoms[a].position, basis.atoms[c].position);
      if (r2 < 1e-12) throw std::invalid_argument("coincident nuclei in geometry");
      e += basis.atoms[a].charge * basis.atoms[c].charge / std::sqrt(r2);
    }
  }
  return e;
}

AoIntegrals compute_ao_integrals(const SOrbitalBasis& basis) {
  if (basis.atoms.empty()) throw std::invalid_argument("empty geometry");
  AoIntegrals ao;
  ao.e_nuclear = nuclear_repulsion(basis);
  auto shells = make_shells(basis);
  const std::size_t n = shells.size();
  ao.n = n;
  ao.overlap = RealMatrix(n, n);
  ao.hcore = RealMatrix(n, n);
  ao.eri.assign(n * n * n * n, 0.0);

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      const auto& A = shells[a];
      const auto& B = shells[b];
      double r2 = dist2(A.center, B.center);
      double s = 0.0, t = 0.0, v = 0.0;
      for (std::size_t i = 0; i < A.alpha.size(); ++i) {
        for (std::size_t j = 0; j < B.alpha.size(); ++j) {
          double al = A.alpha[i], be = B.alpha[j];
          double p = al + be, mu = al * be / p;
          double pref = A.coeff[i] * B.coeff[j] * std::exp(-mu * r2);
          double s_ij = pref * std::pow(kPi / p, 1.5);
          s += s_ij;
          t += mu * (3.0 - 2.0 * mu * r2) * s_ij;
          std::array<double, 3> P{(al * A.center[0] + be * B.center[0]) / p,
                                  (al * A.center[1] + be * B.center[1]) / p,
                                  (al * A.center[2] + be * B.center[2]) / p};
          for (const auto& atom : basis.atoms) {
            double pc2 = dist2(P, atom.position);
            v -= atom.charge * pref * (2.0 * kPi / p) * boys_f0(p * pc2);
          }
        }
      }
      ao.overlap(a, b) = ao.overlap(b, a) = s;
      ao.hcore(a, b) = ao.hcore(b, a) = t + v;
    }
  }

  auto eri_at = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s) -> double& {
    return ao.eri[((p * n + q) * n + r) * n + s];
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b <= a; ++b)
      for (std::size_t c = 0; c <= a; ++c)
        for (std::size_t d = 0; d <= c; ++d) {
          if (a * n + b < c * n + d) continue;
          const auto& A = shells[a];
          const auto& B = shells[b];
          const auto& C = shells[c];
          const auto& D = shells[d];
          double rab2 = dist2(A.center, B.center);
          double rcd2 = dist2(C.center, D.center);
          double val = 0.0;
          for (std::size_t i = 0; i < A.alpha.size(); ++i)
            for (std::size_t j = 0; j < B.alpha.size(); ++j) {
              double al = A.alpha[i], be = B.alpha[j];
              double p = al + be;
              double kab = std::exp(-al * be / p * rab2);
              std::array<double, 3> P{(al * A.center[0] + be * B.center[0]) / p,
                                      (al * A.center[1] + be * B.center[1]) / p,
                                      (al * A.center[2] + be * B.center[2]) / p};
              double cij = A.coeff[i] * B.coeff[j];
              for (std::size_t k = 0; k < C.alpha.size(); ++k)
                for (std::size_t l = 0; l < D.alpha.size(); ++l) {
                  double ga = C.alpha[k], de = D.alpha[l];
                  double q = ga + de;
                  double kcd = std::exp(-ga * de / q * rcd2);
                  std::array<double, 3> Q{(ga * C.center[0] + de * D.center[0]) / q,
                                          (ga * C.center[1] + de * D.center[1]) / q,
                                          (ga * C.center[2] + de * D.center[2]) / q};
                  double pq2 = dist2(P, Q);
                  double pref = 2.0 * std::pow(kPi, 2.5) / (p * q * std::sqrt(p + q));
                  val += cij * C.coeff[k] * D.coeff[l] * pref * kab * kcd *
                         boys_f0(p * q / (p + q) * pq2);
                }
            }
          // chemists (ab|cd): all 8 permutations
          eri_at(a, b, c, d) = eri_at(b, a, c, d) = eri_at(a, b, d, c) = eri_at(b, a, d, c) = val;
          eri_at(c, d, a, b) = eri_at(d, c, a, b) = eri_at(c, d, b, a) = eri_at(d, c, b, a) = val;
        }
  return ao;
}

namespace {

Eigen::MatrixXd to_eigen(const RealMatrix& m) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(static_cast<long>(i), static_cast<long>(j)) = m(i, j);
  return out;
}

RealMatrix from_eigen(const Eigen::MatrixXd& m) {
  RealMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

Eigen::MatrixXd symmetric_orthogonalizer(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() < 1e-10) {
    throw ContractViolation("AO overlap matrix is numerically singular");
  }
  Eigen::VectorXd inv_sqrt = ev.array().rsqrt();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
}

// Four-index transform (pq|rs) -> MO basis, O(n^5).
std::vector<double> transform_eri(const std::vector<double>& eri, const Eigen::MatrixXd& C) {
  const std::size_t n = static_cast<std::size_t>(C.rows());
  std::vector<double> t1(n * n * n * n, 0.0), t2(n * n * n * n, 0.0);
  auto at = [n](std::vector<double>& v, std::size_t p, std::size_t q, std::size_t r,
                std::size_t s) -> double& { return v[((p * n + q) * n + r) * n + s]; };
  auto cat = [n](const std::vector<double>& v, std::size_t p, std::size_t q, std::size_t r,
                 std::size_t s) { return v[((p * n + q) * n + r) * n + s]; };
  // index 4
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t l = 0; l < n; ++l) {
          double acc = 0.0;
          for (std::size_t s = 0; s < n; ++s) acc += cat(eri, p, q, r, s) * C(static_cast<long>(s), static_cast<long>(l));
          at(t1, p, q, r, l) = acc;
        }
  // index 3
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          double acc = 0.0;
          for (std::size_t r = 0; r < n; ++r) acc += cat(t1, p, q, r, l) * C(static_cast<long>(r), static_cast<long>(k));
          at(t2, p, q, k, l) = acc;
        }
  std::fill(t1.begin(), t1.end(), 0.0);
  // index 2
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          double acc = 0.0;
          for (std::size_t q = 0; q < n; ++q) acc += cat(t2, p, q, k, l) * C(static_cast<long>(q), static_cast<long>(j));
          at(t1, p, j, k, l) = acc;
        }
  std::fill(t2.begin(), t2.end(), 0.0);
  // index 1
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          double acc = 0.0;
          for (std::size_t p = 0; p < n; ++p) acc += cat(t1, p, j, k, l) * C(static_cast<long>(p), static_cast<long>(i));
          at(t2, i, j, k, l) = acc;
        }
  return t2;
}

}  // namespace

IntegralSet build_s_integrals(const SOrbitalBasis& basis, std::optional<RealMatrix> rotation) {
  AoIntegrals ao = compute_ao_integrals(basis);
  Eigen::MatrixXd S = to_eigen(ao.overlap);
  Eigen::MatrixXd C;
  if (rotation) {
    C = to_eigen(*rotation);
    if (static_cast<std::size_t>(C.rows()) != ao.n) {
      throw std::invalid_argument("rotation matrix row count does not match basis size");
    }
    Eigen::MatrixXd ortho = C.transpose() * S * C;
    if ((ortho - Eigen::MatrixXd::Identity(C.cols(), C.cols())).cwiseAbs().maxCoeff() > 1e-8) {
      throw ContractViolation("supplied orbital rotation is not S-orthonormal");
    }
  } else {
    C = symmetric_orthogonalizer(S);
  }

  const std::size_t n = static_cast<std::size_t>(C.cols());
  IntegralSet ints(n, PointGroup::from_name("c1"));
  ints.n_electrons = basis.n_electrons();
  ints.e_nuclear = ao.e_nuclear;
  Eigen::MatrixXd h = C.transpose() * to_eigen(ao.hcore) * C;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) ints.h_core[p * n + q] = h(static_cast<long>(p), static_cast<long>(q));
  ints.eri = transform_eri(ao.eri, C);
  return ints;
}

ScfResult run_rhf(const SOrbitalBasis& basis, const ScfOptions& opt) {
  AoIntegrals ao = compute_ao_integrals(basis);
  const std::size_t n = ao.n;
  const int n_elec = basis.n_electrons();
  if (n_elec % 2 != 0) throw std::invalid_argument("closed-shell RHF requires an even electron count");
  const std::size_t n_occ = static_cast<std::size_t>(n_elec / 2);
  if (n_occ > n) throw std::invalid_argument("more electron pairs than basis functions");

  Eigen::MatrixXd S = to_eigen(ao.overlap);
  Eigen::MatrixXd H = to_eigen(ao.hcore);
  Eigen::MatrixXd X = symmetric_orthogonalizer(S);

  auto g_of = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return ao.eri[((p * n + q) * n + r) * n + s];
  };
  auto build_fock = [&](const Eigen::MatrixXd& D) {
    Eigen::MatrixXd F = H;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        double acc = 0.0;
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s)
            acc += D(static_cast<long>(r), static_cast<long>(s)) *
                   (g_of(p, q, r, s) - 0.5 * g_of(p, r, q, s));
        F(static_cast<long>(p), static_cast<long>(q)) += acc;
      }
    return F;
  };
  auto solve_fock = [&](const Eigen::MatrixXd& F, Eigen::VectorXd& eps) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.transpose() * F * X);
    eps = es.eigenvalues();
    return Eigen::MatrixXd(X * es.eigenvectors());
  };

  Eigen::VectorXd eps;
  Eigen::MatrixXd C = solve_fock(H, eps);
  Eigen::MatrixXd D = 2.0 * C.leftCols(static_cast<long>(n_occ)) *
                      C.leftCols(static_cast<long>(n_occ)).transpose();

  std::deque<Eigen::MatrixXd> diis_f, diis_e;
  ScfResult result;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Eigen::MatrixXd F = build_fock(D);

    Eigen::MatrixXd err = X.transpose() * (F * D * S - S * D * F) * X;
    diis_f.push_back(F);
    diis_e.push_back(err);
    if (diis_f.size() > opt.diis_depth) {
      diis_f.pop_front();
      diis_e.pop_front();
    }
    if (diis_f.size() > 1) {
      const long m = static_cast<long>(diis_f.size());
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m + 1, m + 1);
      for (long i = 0; i < m; ++i) {
        for (long j = 0; j < m; ++j)
          B(i, j) = (diis_e[static_cast<std::size_t>(i)].cwiseProduct(diis_e[static_cast<std::size_t>(j)])).sum();
        B(i, m) = B(m, i) = -1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
      rhs(m) = -1.0;
      Eigen::VectorXd c = B.fullPivLu().solve(rhs);
      if (c.allFinite()) {
        F.setZero();
        for (long i = 0; i < m; ++i) F += c(i) * diis_f[static_cast<std::size_t>(i)];
      }
    }

    C = solve_fock(F, eps);
    Eigen::MatrixXd D_new = 2.0 * C.leftCols(static_cast<long>(n_occ)) *
                            C.leftCols(static_cast<long>(n_occ)).transpose();
    double delta = (D_new - D).cwiseAbs().maxCoeff();
    D = D_new;
    result.iterations = it;
    if (delta < opt.density_tol) {
      result.converged = true;
      break;
    }
  }

  Eigen::MatrixXd F = build_fock(D);
  result.energy = 0.5 * (D.cwiseProduct(H + F)).sum() + ao.e_nuclear;
  result.mo_coeff = from_eigen(C);
  result.mo_energy.assign(eps.data(), eps.data() + eps.size());
  return result;
}

std::vector<Irrep> detect_orbital_irreps(const SOrbitalBasis& basis, const PointGroup& group,
                                         const RealMatrix& overlap, RealMatrix& mo_coeff,
                                         const std::vector<double>& mo_energy) {
  const std::size_t n_atoms = basis.atoms.size();
  // AO index of the first function on each atom (s functions only, so the
  // AO permutation under a symmetry operation follows the atom permutation).
  std::vector<std::size_t> first_ao(n_atoms);
  std::size_t n_ao = 0;
  for (std::size_t a = 0; a < n_atoms; ++a) {
    first_ao[a] = n_ao;
    n_ao += basis.atoms[a].contractions.size();
  }

  const auto& ops = group.operations();
  std::vector<std::vector<std::size_t>> ao_perm(ops.size(), std::vector<std::size_t>(n_ao));
  for (std::size_t o = 0; o < ops.size(); ++o) {
    for (std::size_t a = 0; a < n_atoms; ++a) {
      std::array<double, 3> img{ops[o][0] * basis.atoms[a].position[0],
                                ops[o][1] * basis.atoms[a].position[1],
                                ops[o][2] * basis.atoms[a].position[2]};
      std::size_t match = n_atoms;
      for (std::size_t b = 0; b < n_atoms; ++b) {
        if (std::abs(basis.atoms[b].charge - basis.atoms[a].charge) < 1e-12 &&
            dist2(img, basis.atoms[b].position) < 1e-12) {
          match = b;
          break;
        }
      }
      if (match == n_atoms) {
        throw std::invalid_argument("geometry is not symmetric under point group " + group.name());
      }
      if (basis.atoms[match].contractions.size() != basis.atoms[a].contractions.size()) {
        throw std::invalid_argument("symmetry-equivalent atoms carry different bases");
      }
      for (std::size_t k = 0; k < basis.atoms[a].contractions.size(); ++k) {
        ao_perm[o][first_ao[a] + k] = first_ao[match] + k;
      }
    }
  }

  Eigen::MatrixXd S = to_eigen(overlap);
  Eigen::MatrixXd C = to_eigen(mo_coeff);
  const std::size_t n_mo = static_cast<std::size_t>(C.cols());

  // Energy clusters of (near-)degenerate orbitals.
  std::vector<std::pair<std::size_t, std::size_t>> clusters;
  for (std::size_t i = 0; i < n_mo;) {
    std::size_t j = i + 1;
    while (j < n_mo && std::abs(mo_energy[j] - mo_energy[j - 1]) < 1e-7) ++j;
    clusters.emplace_back(i, j);
    i = j;
  }

  auto apply_perm = [&](std::size_t o, const Eigen::MatrixXd& block) {
    Eigen::MatrixXd out(block.rows(), block.cols());
    for (std::size_t a = 0; a < n_ao; ++a) out.row(static_cast<long>(ao_perm[o][a])) = block.row(static_cast<long>(a));
    return out;
  };

  std::vector<Irrep> labels(n_mo, kTotallySymmetric);
  for (auto [lo, hi] : clusters) {
    // Successively split the cluster by the +-1 eigenspaces of each
    // operation; operations commute, so the splits are compatible.
    std::vector<std::pair<std::size_t, std::size_t>> parts{{lo, hi}};
    for (std::size_t o = 1; o < ops.size(); ++o) {
      std::vector<std::pair<std::size_t, std::size_t>> next;
      for (auto [plo, phi] : parts) {
        const long w = static_cast<long>(phi - plo);
        if (w == 1) {
          next.emplace_back(plo, phi);
          continue;
        }
        Eigen::MatrixXd block = C.middleCols(static_cast<long>(plo), w);
        Eigen::MatrixXd B = block.transpose() * S * apply_perm(o, block);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()));
        C.middleCols(static_cast<long>(plo), w) = block * es.eigenvectors();
        std::size_t minus = 0;
        for (long k = 0; k < w; ++k) {
          double ev = es.eigenvalues()(k);
          if (std::abs(std::abs(ev) - 1.0) > 1e-6) {
            throw ContractViolation("orbital is not a symmetry eigenfunction of " + group.name());
          }
          if (ev < 0.0) ++minus;
        }
        // eigenvalues ascending: the -1 block comes first
        if (minus > 0) next.emplace_back(plo, plo + minus);
        if (minus < static_cast<std::size_t>(w)) next.emplace_back(plo + minus, phi);
      }
      parts = std::move(next);
    }
    for (std::size_t mo = lo; mo < hi; ++mo) {
      std::vector<int> chi(ops.size(), 1);
      for (std::size_t o = 1; o < ops.size(); ++o) {
        Eigen::VectorXd col = C.col(static_cast<long>(mo));
        Eigen::VectorXd img = apply_perm(o, col);
        double val = col.transpose() * S * img;
        if (std::abs(std::abs(val) - 1.0) > 1e-6) {
          throw ContractViolation("orbital is not a symmetry eigenfunction of " + group.name());
        }
        chi[o] = val > 0 ? 1 : -1;
      }
      bool found = false;
      for (Irrep lab = 0; lab < group.order(); ++lab) {
        bool match = true;
        for (std::size_t o = 0; o < ops.size(); ++o) {
          if (group.character(lab, o) != chi[o]) {
            match = false;
            break;
          }
        }
        if (match) {
          labels[mo] = lab;
          found = true;
          break;
        }
      }
      if (!found) throw ContractViolation("orbital characters match no irrep of " + group.name());
    }
  }

  // Deterministic sign convention: largest-|c| AO coefficient positive.
  for (std::size_t mo = 0; mo < n_mo; ++mo) {
    long imax = 0;
    C.col(static_cast<long>(mo)).cwiseAbs().maxCoeff(&imax);
    if (C(imax, static_cast<long>(mo)) < 0) C.col(static_cast<long>(mo)) *= -1.0;
  }
  mo_coeff = from_eigen(C);
  return labels;
}

ScfSystem scf_system(const SOrbitalBasis& basis, const PointGroup& group, const ScfOptions& opt) {
  ScfResult scf = run_rhf(basis, opt);
  if (!scf.converged) throw ContractViolation("RHF did not converge");
  AoIntegrals ao = compute_ao_integrals(basis);
  RealMatrix C = scf.mo_coeff;
  std::vector<Irrep> labels = detect_orbital_irreps(basis, group, ao.overlap, C, scf.mo_energy);

  ScfSystem sys;
  sys.ints = build_s_integrals(basis, C);
  sys.ints.group = group;
  sys.ints.orb_irrep = labels;
  sys.e_scf = scf.energy;
  sys.scf_converged = scf.converged;
  sys.mo_energy = scf.mo_energy;
  return sys;
}

}  // namespace qeomx
