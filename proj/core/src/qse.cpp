#include "qeomx/qse.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "qeomx/errors.hpp"

namespace qeomx {

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

double real_checked(std::complex<double> v, const char* what) {
  if (std::abs(v.imag()) > 1e-10) {
    throw ContractViolation(std::string(what) + ": imaginary residue");
  }
  return v.real();
}

template <typename ApplyH>
QseMatrices build_impl(const std::vector<Excitation>& basis, const ApplyH& apply_h,
                       const AdaptAnsatz& ansatz, ElementSet element_set) {
  const int n_qubits = ansatz.n_qubits;
  const std::size_t n = basis.size() + 1;  // ground state at row 0

  Statevector ground = AnsatzApplier(ansatz).ground_state();

  std::vector<Statevector> xi(n);
  xi[0] = ground;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 1; j < n; ++j) {
    CompiledFermionOp r(excitation_operator(basis[j - 1]), n_qubits);
    xi[j] = r.apply(ground);
  }

  QseMatrices out;
  out.S = RealMatrix(n, n);
  out.H = RealMatrix(n, n);

  std::vector<std::size_t> sd_rows, t_rows;
  sd_rows.push_back(0);
  for (std::size_t j = 1; j < n; ++j) {
    (basis[j - 1].rank() <= 2 ? sd_rows : t_rows).push_back(j);
  }

  if (element_set == ElementSet::All) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = 0; j < n; ++j) {
      Statevector hxi = apply_h(xi[j]);
      for (std::size_t i = 0; i < n; ++i) {
        out.S(i, j) = real_checked(Statevector::inner(xi[i], xi[j]), "S element");
        out.H(i, j) = real_checked(Statevector::inner(xi[i], hxi), "H element");
      }
    }
    out.measured_elements = n * n;
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t jj = 0; jj < sd_rows.size(); ++jj) {
      const std::size_t j = sd_rows[jj];
      Statevector hxi = apply_h(xi[j]);
      for (std::size_t i = 0; i < n; ++i) {
        double s = real_checked(Statevector::inner(xi[i], xi[j]), "S element");
        double h = real_checked(Statevector::inner(xi[i], hxi), "H element");
        out.S(i, j) = s;
        out.H(i, j) = h;
        if (i >= 1 && basis[i - 1].rank() == 3) {
          out.S(j, i) = s;
          out.H(j, i) = h;
        }
      }
    }
#pragma omp parallel for schedule(dynamic)
    for (std::size_t tt = 0; tt < t_rows.size(); ++tt) {
      const std::size_t i = t_rows[tt];
      Statevector hxi = apply_h(xi[i]);
      out.S(i, i) = real_checked(Statevector::inner(xi[i], xi[i]), "S element");
      out.H(i, i) = real_checked(Statevector::inner(xi[i], hxi), "H element");
    }
    out.measured_elements =
        sd_rows.size() * (sd_rows.size() + 1) / 2 + t_rows.size() * sd_rows.size() + t_rows.size();
  }
  return out;
}

}  // namespace

QseMatrices build_S_H(const std::vector<Excitation>& basis, const PauliSum& H,
                      const AdaptAnsatz& ansatz, ElementSet element_set) {
  return build_impl(
      basis, [&H](const Statevector& psi) { return apply_pauli_sum(H, psi); }, ansatz, element_set);
}

QseMatrices build_S_H(const std::vector<Excitation>& basis, const CompiledFermionOp& H,
                      const AdaptAnsatz& ansatz, ElementSet element_set) {
  return build_impl(
      basis, [&H](const Statevector& psi) { return H.apply(psi); }, ansatz, element_set);
}

GeneralizedSolve solve_generalized(const RealMatrix& H, const RealMatrix& S,
                                   double lindep_threshold) {
  if (H.rows != H.cols || S.rows != S.cols || H.rows != S.rows) {
    throw std::invalid_argument("H/S shape mismatch");
  }
  Eigen::MatrixXd s = to_eigen(S);
  Eigen::MatrixXd h = to_eigen(H);
  s = 0.5 * (s + s.transpose());
  h = 0.5 * (h + h.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ses(s);
  GeneralizedSolve out;
  out.overlap_spectrum.assign(ses.eigenvalues().data(),
                              ses.eigenvalues().data() + ses.eigenvalues().size());
  if (!out.overlap_spectrum.empty() && out.overlap_spectrum.front() < -1e-10) {
    throw ContractViolation("overlap matrix is not positive semidefinite");
  }

  std::vector<long> keep;
  for (long i = 0; i < ses.eigenvalues().size(); ++i) {
    if (ses.eigenvalues()(i) >= lindep_threshold) keep.push_back(i);
  }
  out.discarded = static_cast<std::size_t>(ses.eigenvalues().size()) - keep.size();
  if (keep.empty()) throw ContractViolation("all overlap directions fell below the threshold");

  Eigen::MatrixXd X(s.rows(), static_cast<long>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    X.col(static_cast<long>(k)) =
        ses.eigenvectors().col(keep[k]) / std::sqrt(ses.eigenvalues()(keep[k]));
  }
  Eigen::MatrixXd ht = X.transpose() * h * X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hes(0.5 * (ht + ht.transpose()));
  out.eigenvalues.assign(hes.eigenvalues().data(),
                         hes.eigenvalues().data() + hes.eigenvalues().size());
  out.eigenvectors = from_eigen(X * hes.eigenvectors());
  return out;
}

QseScreeningReport qse_importance(const RealMatrix& H, const RealMatrix& S,
                                  const std::vector<Excitation>& basis, int target_root,
                                  double lindep_threshold) {
  const std::size_t n = basis.size() + 1;
  if (H.rows != n || S.rows != n) throw std::invalid_argument("matrix/basis size mismatch");

  std::vector<std::size_t> sd_rows, t_rows;
  sd_rows.push_back(0);
  for (std::size_t j = 1; j < n; ++j) (basis[j - 1].rank() <= 2 ? sd_rows : t_rows).push_back(j);

  const std::size_t nsd = sd_rows.size();
  RealMatrix hsd(nsd, nsd), ssd(nsd, nsd);
  for (std::size_t a = 0; a < nsd; ++a)
    for (std::size_t b = 0; b < nsd; ++b) {
      hsd(a, b) = H(sd_rows[a], sd_rows[b]);
      ssd(a, b) = S(sd_rows[a], sd_rows[b]);
    }
  GeneralizedSolve sd = solve_generalized(hsd, ssd, lindep_threshold);
  if (target_root < 0 || target_root >= static_cast<int>(sd.eigenvalues.size())) {
    throw std::invalid_argument("target root outside the SD spectrum");
  }
  const double e_m = sd.eigenvalues[static_cast<std::size_t>(target_root)];
  std::vector<double> d_m(nsd);
  for (std::size_t a = 0; a < nsd; ++a) d_m[a] = sd.eigenvectors(a, static_cast<std::size_t>(target_root));

  QseScreeningReport report;
  report.target_root = target_root;
  report.e0_target = e_m;
  report.n_symmetry = t_rows.size();

  // C_mm = D_m† S D_m over the full basis (D_m vanishes on triples).
  double c_mm = 0.0;
  for (std::size_t a = 0; a < nsd; ++a)
    for (std::size_t b = 0; b < nsd; ++b) c_mm += d_m[a] * ssd(a, b) * d_m[b];
  report.c_mm = c_mm;

  // First-order shift from the explicit primed couplings (expected zero:
  // the primed matrices carry no SD-SD entries).
  {
    std::vector<double> d_full(n, 0.0);
    for (std::size_t a = 0; a < nsd; ++a) d_full[sd_rows[a]] = d_m[a];
    double hp = 0.0, sp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool it = i >= 1 && basis[i - 1].rank() == 3;
      for (std::size_t j = 0; j < n; ++j) {
        const bool jt = j >= 1 && basis[j - 1].rank() == 3;
        if (i == j || (!it && !jt)) continue;
        hp += d_full[i] * H(i, j) * d_full[j];
        sp += d_full[i] * S(i, j) * d_full[j];
      }
    }
    report.e1_target = (hp - e_m * sp) / c_mm;
    report.e1_violation = std::abs(report.e1_target) > 1e-10;
  }

  for (std::size_t row : t_rows) {
    const double s_ii = S(row, row);
    if (s_ii <= 0.0) throw ContractViolation("triple basis state has nonpositive norm");
    const double e_i = H(row, row) / s_ii;
    double a_mi = 0.0, b_mi = 0.0;
    for (std::size_t a = 0; a < nsd; ++a) {
      a_mi += d_m[a] * H(sd_rows[a], row);
      b_mi += d_m[a] * S(sd_rows[a], row);
    }
    a_mi /= std::sqrt(s_ii);
    b_mi /= std::sqrt(s_ii);

    const double numer = 2.0 * e_m * a_mi * b_mi - a_mi * a_mi - e_m * e_m * b_mi * b_mi;
    const double denom = e_i - e_m;
    WEntry entry;
    entry.excitation = basis[row - 1];
    entry.basis_index = row - 1;  // index into the excitation list
    if (std::abs(denom) < 1e-10) {
      entry.w_signed = 0.0;
      entry.w_abs = std::numeric_limits<double>::infinity();
      entry.degenerate = true;
    } else {
      entry.w_signed = numer / (c_mm * denom);
      entry.w_abs = std::abs(numer / denom);
    }
    if (!entry.degenerate) report.e2_target += entry.w_signed;
    report.a_mi.push_back(a_mi);
    report.b_mi.push_back(b_mi);
    report.entries.push_back(std::move(entry));
  }

  // keep the audit arrays aligned under the sort
  std::vector<std::size_t> order(report.entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return report.entries[a].w_abs > report.entries[b].w_abs;
  });
  std::vector<WEntry> entries;
  std::vector<double> as, bs;
  for (std::size_t i : order) {
    entries.push_back(report.entries[i]);
    as.push_back(report.a_mi[i]);
    bs.push_back(report.b_mi[i]);
  }
  report.entries = std::move(entries);
  report.a_mi = std::move(as);
  report.b_mi = std::move(bs);

  double total = 0.0;
  for (const auto& e : report.entries)
    if (!e.degenerate) total += e.w_abs;
  double cum = 0.0;
  report.coverage_curve.emplace_back(0, 0.0);
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    if (!report.entries[k].degenerate) cum += report.entries[k].w_abs;
    report.coverage_curve.emplace_back(k + 1, total > 0.0 ? cum / total : 1.0);
  }
  return report;
}

std::vector<std::size_t> screen_qse_triples(QseScreeningReport& report, const ScreenMode& mode) {
  std::vector<std::size_t> selected;
  switch (mode.kind) {
    case ScreenMode::Coverage: {
      if (!(mode.f > 0.0 && mode.f <= 1.0)) {
        throw std::invalid_argument("coverage fraction must lie in (0, 1]");
      }
      report.mode = "coverage";
      report.coverage_fraction = mode.f;
      if (mode.f >= 1.0) {
        for (const auto& e : report.entries) selected.push_back(e.basis_index);
        break;
      }
      double total = 0.0;
      for (const auto& e : report.entries)
        if (!e.degenerate) total += e.w_abs;
      const double target = mode.f * total;
      double cum = 0.0;
      for (const auto& e : report.entries) {
        if (e.degenerate) {
          selected.push_back(e.basis_index);
          continue;
        }
        if (total == 0.0 || cum >= target) break;
        selected.push_back(e.basis_index);
        cum += e.w_abs;
      }
      break;
    }
    case ScreenMode::Threshold: {
      report.mode = "threshold";
      report.threshold = mode.eps_t;
      for (const auto& e : report.entries) {
        if (e.w_abs > mode.eps_t) selected.push_back(e.basis_index);
      }
      break;
    }
    case ScreenMode::TopK: {
      report.mode = "top_k";
      report.top_k = mode.k;
      for (std::size_t i = 0; i < std::min(mode.k, report.entries.size()); ++i) {
        selected.push_back(report.entries[i].basis_index);
      }
      break;
    }
  }
  report.n_selected = selected.size();
  return selected;
}

double qse_correction(double e_prime, std::span<const double> discarded_signed) {
  double e = e_prime;
  for (double v : discarded_signed) e += v;
  return e;
}

Statevector qse_root_state(const AdaptAnsatz& ansatz, const std::vector<Excitation>& basis,
                           std::span<const double> d) {
  if (d.size() != basis.size() + 1) throw std::invalid_argument("coefficient/basis size mismatch");
  Statevector ground = AnsatzApplier(ansatz).ground_state();
  Statevector psi = ground;
  psi.scale(d[0]);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (d[i + 1] == 0.0) continue;
    CompiledFermionOp r(excitation_operator(basis[i]), ansatz.n_qubits);
    Statevector contrib = r.apply(ground);
    for (std::size_t k = 0; k < psi.dim(); ++k) psi[k] += d[i + 1] * contrib[k];
  }
  return psi;
}

std::string QseScreeningReport::to_json() const {
  nlohmann::json j;
  j["target_root"] = target_root;
  j["e0_target"] = e0_target;
  j["e1_target"] = e1_target;
  j["e1_violation"] = e1_violation;
  j["e2_target"] = e2_target;
  j["c_mm"] = c_mm;
  j["mode"] = mode;
  j["threshold"] = threshold;
  j["coverage_fraction"] = coverage_fraction;
  j["top_k"] = top_k;
  j["counts"] = {{"raw", n_raw}, {"sz", n_sz}, {"symmetry", n_symmetry}, {"selected", n_selected}};
  char buf[40];
  j["entries"] = nlohmann::json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    std::snprintf(buf, sizeof(buf), "%.12g", e.w_signed);
    j["entries"].push_back({{"excitation", e.excitation.to_string()},
                            {"basis_index", e.basis_index},
                            {"f_signed", std::string(buf)},
                            {"a_mi", a_mi[i]},
                            {"b_mi", b_mi[i]},
                            {"degenerate", e.degenerate}});
  }
  j["coverage_curve"] = nlohmann::json::array();
  for (const auto& [k, frac] : coverage_curve) j["coverage_curve"].push_back({k, frac});
  return j.dump(2);
}

std::string QseBlock::to_json() const {
  nlohmann::json j;
  j["irrep"] = irrep;
  j["lindep_threshold"] = lindep_threshold;
  j["discarded_directions"] = discarded_directions;
  j["overlap_spectrum"] = overlap_spectrum;
  j["measured_elements"] = measured_elements;
  j["basis"] = nlohmann::json::array();
  j["basis"].push_back("ground");
  for (const auto& exc : basis) j["basis"].push_back(exc.to_string());
  j["eigenvalues"] = eigenvalues;
  return j.dump(2);
}

}  // namespace qeomx
