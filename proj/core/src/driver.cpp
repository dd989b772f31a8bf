#include "qeomx/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <sstream>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "qeomx/errors.hpp"
#include "qeomx/fci.hpp"
#include "qeomx/sbasis.hpp"

namespace qeomx {

namespace {

using nlohmann::json;

// Regular octagon of H atoms, side 2 bohr, in the xy plane; b displaces the
// two x-aligned H2 edges outward along x. D2h for every b.
constexpr const char* kDefaultH8Layout = R"(# H8 distorted octagon, side 2 bohr
1  2.414213562373095  1.0 0.0    1 0 0
1  2.414213562373095 -1.0 0.0    1 0 0
1 -2.414213562373095  1.0 0.0   -1 0 0
1 -2.414213562373095 -1.0 0.0   -1 0 0
1  1.0  2.414213562373095 0.0    0 0 0
1 -1.0  2.414213562373095 0.0    0 0 0
1  1.0 -2.414213562373095 0.0    0 0 0
1 -1.0 -2.414213562373095 0.0    0 0 0
)";

struct PreparedSystem {
  MolecularHamiltonian mh;
  double e_hf = 0.0;
  double e_scf = 0.0;
  bool scf_used = false;
  std::string group_name;
};

PreparedSystem prepare_system(const RunConfig& config) {
  PreparedSystem sys;
  if (config.system == RunConfig::System::Fcidump) {
    std::optional<PointGroup> group;
    if (!config.point_group.empty()) group = PointGroup::from_name(config.point_group);
    IntegralSet ints = parse_fcidump_file(config.fcidump_path, group);
    sys.group_name = ints.group.name();
    sys.mh = assemble_hamiltonian(ints, config.frozen, config.active);
  } else {
    const std::string group_name = config.point_group.empty() ? "d2h" : config.point_group;
    PointGroup group = PointGroup::from_name(group_name);
    SOrbitalBasis basis;
    if (config.system == RunConfig::System::BuiltinH2) {
      basis = h2_molecule(config.h2_r);
    } else {
      auto contraction = default_hydrogen_contraction();
      basis = config.h8_layout.empty()
                  ? parse_layout(kDefaultH8Layout, config.h8_b, contraction)
                  : load_layout_file(config.h8_layout, config.h8_b, contraction);
    }
    ScfSystem scf = scf_system(basis, group);
    sys.e_scf = scf.e_scf;
    sys.scf_used = true;
    sys.group_name = group_name;
    sys.mh = assemble_hamiltonian(scf.ints, config.frozen, config.active);
  }
  sys.e_hf = hf_energy(sys.mh);
  return sys;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

json rank_counts(const MolecularHamiltonian& mh, const std::vector<Excitation>& block_basis,
                 const std::vector<int>& ranks) {
  const std::size_t o = static_cast<std::size_t>(mh.n_electrons);
  const std::size_t v = static_cast<std::size_t>(mh.n_so - mh.n_electrons);
  json out = json::array();
  for (int r : ranks) {
    std::size_t raw = binomial(o, static_cast<std::size_t>(r)) * binomial(v, static_cast<std::size_t>(r));
    std::size_t sz = enumerate_excitations(r, mh.n_electrons, mh.n_so - mh.n_electrons, {},
                                           mh.so_irrep)
                         .size();
    std::size_t sym = static_cast<std::size_t>(
        std::count_if(block_basis.begin(), block_basis.end(),
                      [r](const Excitation& e) { return e.rank() == r; }));
    out.push_back({{"rank", r}, {"raw", raw}, {"after_sz", sz}, {"after_symmetry", sym}});
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  return out;
}

std::vector<std::string> parse_str_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name);
  out << content;
}

double spin_expectation(const MolecularHamiltonian& mh, const Statevector& psi) {
  CompiledFermionOp s2(spin_squared_op(mh.n_so / 2), psi.n_qubits());
  return expectation(s2, psi);
}

struct VariantResult {
  double omega = 0.0;
  double energy = 0.0;  // absolute
  bool tracked_ambiguous = false;
  double s2 = 0.0;
};

// qEOM pipeline for one irrep block. Fills `blk` with serialized artifacts.
void run_qeom_block(const RunConfig& config, const MolecularHamiltonian& mh,
                    const CompiledFermionOp& ham, const AdaptAnsatz& ansatz, double e0,
                    Irrep op_irrep, json& blk, const std::string& file_tag) {
  const std::vector<int> all_ranks{1, 2, 3};
  std::vector<Excitation> sd_basis = build_basis(mh, op_irrep, {1, 2});
  if (sd_basis.empty()) throw std::invalid_argument("empty SD block for requested irrep");

  std::size_t measured_sd = 0;
  RealMatrix m_sd = build_M(sd_basis, ham, ansatz, e0, ElementSet::All, &measured_sd);
  auto [sd_evals, sd_vecs] = solve_block(m_sd);
  const int m0 = config.target_ordinal - 1;
  if (m0 < 0 || static_cast<std::size_t>(m0) >= sd_evals.size()) {
    throw std::invalid_argument("target ordinal outside the SD block");
  }
  std::vector<double> gamma_ref(sd_basis.size());
  for (std::size_t i = 0; i < sd_basis.size(); ++i) gamma_ref[i] = sd_vecs(i, static_cast<std::size_t>(m0));

  // root metadata for the SD block
  {
    json roots = json::array();
    for (std::size_t r = 0; r < std::min<std::size_t>(sd_evals.size(), 4); ++r) {
      std::vector<double> g(sd_basis.size());
      for (std::size_t i = 0; i < sd_basis.size(); ++i) g[i] = sd_vecs(i, r);
      Statevector psi = eom_root_state(ansatz, sd_basis, g);
      roots.push_back({{"omega", sd_evals[r]},
                       {"energy", e0 + sd_evals[r]},
                       {"s2", spin_expectation(mh, psi)}});
    }
    blk["sd_roots"] = roots;
  }

  auto needs = [&](const char* v) {
    return std::find(config.variants.begin(), config.variants.end(), v) != config.variants.end();
  };
  const bool want_sdt = needs("sdt");
  const bool want_screened = needs("sdt-screened") || needs("sd-paren-t");

  json variants;
  auto put_variant = [&](const std::string& name, const VariantResult& vr) {
    variants[name] = {{"omega", vr.omega},
                      {"omega_ev", vr.omega * kHartreeToEv},
                      {"energy", vr.energy},
                      {"s2", vr.s2},
                      {"ambiguous_root", vr.tracked_ambiguous}};
  };

  if (needs("sd")) {
    VariantResult vr;
    vr.omega = sd_evals[static_cast<std::size_t>(m0)];
    vr.energy = e0 + vr.omega;
    vr.s2 = spin_expectation(mh, eom_root_state(ansatz, sd_basis, gamma_ref));
    put_variant("sd", vr);
  }

  std::vector<Excitation> sdt_basis;
  if (want_sdt || want_screened) sdt_basis = build_basis(mh, op_irrep, all_ranks);

  auto track = [&](const EomBlock& block) {
    RootSelector sel;
    if (config.track_overlap) {
      sel.kind = RootSelector::Overlap;
      sel.reference = gamma_ref;
    } else {
      sel.kind = RootSelector::Ordinal;
      sel.ordinal = config.target_ordinal;
    }
    return target_root(block, sel);
  };

  if (want_sdt) {
    EomBlock block;
    block.irrep = op_irrep;
    block.basis = sdt_basis;
    block.e0 = e0;
    block.M = build_M(sdt_basis, ham, ansatz, e0, ElementSet::All, &block.measured_elements);
    auto [evals, evecs] = solve_block(block.M);
    block.eigenvalues = evals;
    block.eigenvectors = evecs;
    RootChoice root = track(block);
    VariantResult vr;
    vr.omega = evals[static_cast<std::size_t>(root.index)];
    vr.energy = e0 + vr.omega;
    vr.tracked_ambiguous = root.ambiguous;
    std::vector<double> g(sdt_basis.size());
    for (std::size_t i = 0; i < sdt_basis.size(); ++i) g[i] = evecs(i, static_cast<std::size_t>(root.index));
    vr.s2 = spin_expectation(mh, eom_root_state(ansatz, sdt_basis, g));
    put_variant("sdt", vr);
    blk["sdt_measured_elements"] = block.measured_elements;
  }

  if (want_screened) {
    std::size_t measured_subset = 0;
    RealMatrix m_subset =
        build_M(sdt_basis, ham, ansatz, e0, ElementSet::ScreeningSubset, &measured_subset);
    ImportanceMethod method = config.importance;
    ScreeningReport report = importance_indicators(m_subset, sdt_basis, m0, method);
    {
      const std::size_t o = static_cast<std::size_t>(mh.n_electrons);
      const std::size_t v = static_cast<std::size_t>(mh.n_so - mh.n_electrons);
      report.n_raw = binomial(o, 3) * binomial(v, 3);
      report.n_sz =
          enumerate_excitations(3, mh.n_electrons, mh.n_so - mh.n_electrons, {}, mh.so_irrep).size();
    }
    ScreenMode mode = config.screening;
    std::vector<std::size_t> selected = screen_triples(report, mode);

    std::sort(selected.begin(), selected.end());
    std::vector<Excitation> reduced = sd_basis;
    for (std::size_t idx : selected) reduced.push_back(sdt_basis[idx]);

    EomBlock block;
    block.irrep = op_irrep;
    block.basis = reduced;
    block.e0 = e0;
    block.M = build_M(reduced, ham, ansatz, e0, ElementSet::All, &block.measured_elements);
    auto [evals, evecs] = solve_block(block.M);
    block.eigenvalues = evals;
    block.eigenvectors = evecs;
    RootChoice root = track(block);
    const double omega_prime = evals[static_cast<std::size_t>(root.index)];

    std::vector<double> discarded;
    {
      std::vector<char> chosen(sdt_basis.size(), 0);
      for (std::size_t idx : selected) chosen[idx] = 1;
      for (const auto& e : report.entries) {
        if (!chosen[e.basis_index] && !e.degenerate) discarded.push_back(e.w_signed);
      }
    }
    const double omega_corrected = perturbative_correction(omega_prime, discarded);

    if (needs("sdt-screened")) {
      VariantResult vr;
      vr.omega = omega_prime;
      vr.energy = e0 + omega_prime;
      vr.tracked_ambiguous = root.ambiguous;
      std::vector<double> g(reduced.size());
      for (std::size_t i = 0; i < reduced.size(); ++i) g[i] = evecs(i, static_cast<std::size_t>(root.index));
      vr.s2 = spin_expectation(mh, eom_root_state(ansatz, reduced, g));
      put_variant("sdt-screened", vr);
    }
    if (needs("sd-paren-t")) {
      VariantResult vr;
      vr.omega = omega_corrected;
      vr.energy = e0 + omega_corrected;
      vr.tracked_ambiguous = root.ambiguous;
      put_variant("sd-paren-t", vr);
    }

    blk["screening"] = json::parse(report.to_json());
    blk["screening_measured_elements"] = measured_subset;
    blk["reduced_block_measured_elements"] = block.measured_elements;
    if (!config.output_dir.empty()) {
      std::string name = "screening_" + file_tag + ".json";
      write_file(config.output_dir, name, report.to_json());
      blk["screening_report_path"] = name;
    }
  }

  blk["counts"] = rank_counts(mh, want_sdt || want_screened ? sdt_basis : sd_basis,
                              want_sdt || want_screened ? std::vector<int>{1, 2, 3}
                                                        : std::vector<int>{1, 2});
  blk["sd_measured_elements"] = measured_sd;
  blk["variants"] = variants;
}

int qse_track(const GeneralizedSolve& solve, const RealMatrix& S,
              std::span<const double> d_ref_prefix, bool* ambiguous) {
  double best = -1.0;
  int best_idx = 0;
  const std::size_t n = S.rows;
  for (std::size_t r = 0; r < solve.eigenvalues.size(); ++r) {
    double ov = 0.0;
    for (std::size_t i = 0; i < d_ref_prefix.size(); ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += S(i, j) * solve.eigenvectors(j, r);
      ov += d_ref_prefix[i] * row;
    }
    ov = std::abs(ov);
    if (ov > best) {
      best = ov;
      best_idx = static_cast<int>(r);
    }
  }
  if (ambiguous) *ambiguous = best < 0.5;
  return best_idx;
}

void run_qse_block(const RunConfig& config, const MolecularHamiltonian& mh,
                   const CompiledFermionOp& ham, const AdaptAnsatz& ansatz, double e0,
                   Irrep op_irrep, json& blk, const std::string& file_tag) {
  std::vector<Excitation> sd_basis = build_basis(mh, op_irrep, {1, 2});
  if (sd_basis.empty()) throw std::invalid_argument("empty SD block for requested irrep");

  QseMatrices sd_mats = build_S_H(sd_basis, ham, ansatz, ElementSet::All);
  GeneralizedSolve sd = solve_generalized(sd_mats.H, sd_mats.S, config.lindep_threshold);
  const int m_row = config.target_ordinal;  // row 0 is the ground root
  if (m_row < 0 || static_cast<std::size_t>(m_row) >= sd.eigenvalues.size()) {
    throw std::invalid_argument("target ordinal outside the QSE SD block");
  }
  std::vector<double> d_ref(sd_basis.size() + 1);
  for (std::size_t i = 0; i < d_ref.size(); ++i) d_ref[i] = sd.eigenvectors(i, static_cast<std::size_t>(m_row));

  auto needs = [&](const char* v) {
    return std::find(config.variants.begin(), config.variants.end(), v) != config.variants.end();
  };

  json variants;
  auto put_variant = [&](const std::string& name, const VariantResult& vr, std::size_t discarded) {
    variants[name] = {{"omega", vr.omega},
                      {"omega_ev", vr.omega * kHartreeToEv},
                      {"energy", vr.energy},
                      {"s2", vr.s2},
                      {"ambiguous_root", vr.tracked_ambiguous},
                      {"discarded_overlap_directions", discarded}};
  };

  if (needs("sd")) {
    VariantResult vr;
    vr.energy = sd.eigenvalues[static_cast<std::size_t>(m_row)];
    vr.omega = vr.energy - sd.eigenvalues.front();
    Statevector psi = qse_root_state(ansatz, sd_basis, d_ref);
    psi.scale(1.0 / psi.norm());
    vr.s2 = spin_expectation(mh, psi);
    put_variant("sd", vr, sd.discarded);
  }
  blk["overlap_spectrum"] = sd.overlap_spectrum;

  const bool want_sdt = needs("sdt");
  const bool want_screened = needs("sdt-screened") || needs("sd-paren-t");
  std::vector<Excitation> sdt_basis;
  if (want_sdt || want_screened) sdt_basis = build_basis(mh, op_irrep, {1, 2, 3});

  if (want_sdt) {
    QseMatrices mats = build_S_H(sdt_basis, ham, ansatz, ElementSet::All);
    GeneralizedSolve full = solve_generalized(mats.H, mats.S, config.lindep_threshold);
    bool ambiguous = false;
    int root = config.track_overlap ? qse_track(full, mats.S, d_ref, &ambiguous) : m_row;
    VariantResult vr;
    vr.energy = full.eigenvalues[static_cast<std::size_t>(root)];
    vr.omega = vr.energy - full.eigenvalues.front();
    vr.tracked_ambiguous = ambiguous;
    std::vector<double> d(sdt_basis.size() + 1);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = full.eigenvectors(i, static_cast<std::size_t>(root));
    Statevector psi = qse_root_state(ansatz, sdt_basis, d);
    psi.scale(1.0 / psi.norm());
    vr.s2 = spin_expectation(mh, psi);
    put_variant("sdt", vr, full.discarded);
    blk["sdt_measured_elements"] = mats.measured_elements;
  }

  if (want_screened) {
    QseMatrices subset = build_S_H(sdt_basis, ham, ansatz, ElementSet::ScreeningSubset);
    QseScreeningReport report =
        qse_importance(subset.H, subset.S, sdt_basis, m_row, config.lindep_threshold);
    {
      const std::size_t o = static_cast<std::size_t>(mh.n_electrons);
      const std::size_t v = static_cast<std::size_t>(mh.n_so - mh.n_electrons);
      report.n_raw = binomial(o, 3) * binomial(v, 3);
      report.n_sz =
          enumerate_excitations(3, mh.n_electrons, mh.n_so - mh.n_electrons, {}, mh.so_irrep).size();
    }
    ScreenMode mode = config.screening;
    std::vector<std::size_t> selected = screen_qse_triples(report, mode);
    std::sort(selected.begin(), selected.end());
    std::vector<Excitation> reduced = sd_basis;
    for (std::size_t idx : selected) reduced.push_back(sdt_basis[idx]);

    QseMatrices mats = build_S_H(reduced, ham, ansatz, ElementSet::All);
    GeneralizedSolve solve = solve_generalized(mats.H, mats.S, config.lindep_threshold);
    bool ambiguous = false;
    int root = config.track_overlap ? qse_track(solve, mats.S, d_ref, &ambiguous) : m_row;
    const double e_prime = solve.eigenvalues[static_cast<std::size_t>(root)];
    const double e_ground = solve.eigenvalues.front();

    std::vector<double> discarded;
    {
      std::vector<char> chosen(sdt_basis.size(), 0);
      for (std::size_t idx : selected) chosen[idx] = 1;
      for (const auto& e : report.entries) {
        if (!chosen[e.basis_index] && !e.degenerate) discarded.push_back(e.w_signed);
      }
    }

    if (needs("sdt-screened")) {
      VariantResult vr;
      vr.energy = e_prime;
      vr.omega = e_prime - e_ground;
      vr.tracked_ambiguous = ambiguous;
      std::vector<double> d(reduced.size() + 1);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = solve.eigenvectors(i, static_cast<std::size_t>(root));
      Statevector psi = qse_root_state(ansatz, reduced, d);
      psi.scale(1.0 / psi.norm());
      vr.s2 = spin_expectation(mh, psi);
      put_variant("sdt-screened", vr, solve.discarded);
    }
    if (needs("sd-paren-t")) {
      VariantResult vr;
      vr.energy = qse_correction(e_prime, discarded);
      vr.omega = vr.energy - e_ground;
      vr.tracked_ambiguous = ambiguous;
      put_variant("sd-paren-t", vr, solve.discarded);
    }

    blk["screening"] = json::parse(report.to_json());
    blk["screening_measured_elements"] = subset.measured_elements;
    if (!config.output_dir.empty()) {
      std::string name = "screening_" + file_tag + ".json";
      write_file(config.output_dir, name, report.to_json());
      blk["screening_report_path"] = name;
    }
  }

  blk["counts"] = rank_counts(mh, want_sdt || want_screened ? sdt_basis : sd_basis,
                              want_sdt || want_screened ? std::vector<int>{1, 2, 3}
                                                        : std::vector<int>{1, 2});
  blk["sd_measured_elements"] = sd_mats.measured_elements;
  blk["variants"] = variants;
}

json run_single_json(const RunConfig& config) {
  config.validate();
#ifdef _OPENMP
  if (config.threads > 0) omp_set_num_threads(config.threads);
#endif
  const auto t0 = std::chrono::steady_clock::now();

  PreparedSystem sys = prepare_system(config);
  MolecularHamiltonian& mh = sys.mh;
  if (mh.n_so > 26) throw std::invalid_argument("system exceeds the 26-qubit ceiling");

  auto pool_raw = make_pool(config.pool, mh);
  auto pool = config.filter_pool
                  ? filter_pool_by_symmetry(pool_raw, mh.hf_irrep(), mh.so_irrep)
                  : pool_raw;
  if (pool.empty()) pool = pool_raw;  // fully symmetric systems keep everything anyway

  auto [ansatz, adapt_report] = run_adapt(mh, pool, config.adapt);
  adapt_report.pool_size_before_filter = pool_raw.size();
  adapt_report.pool_size_after_filter = pool.size();
  const double e0 = ansatz.energy;

  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);

  json record;
  record["schema_version"] = 1;
  {
    json s;
    s["kind"] = config.system == RunConfig::System::Fcidump
                    ? "fcidump"
                    : (config.system == RunConfig::System::BuiltinH8 ? "builtin-h8" : "builtin-h2");
    if (config.system == RunConfig::System::Fcidump) s["path"] = config.fcidump_path;
    if (config.system == RunConfig::System::BuiltinH8) s["b"] = config.h8_b;
    if (config.system == RunConfig::System::BuiltinH2) s["r"] = config.h2_r;
    s["point_group"] = sys.group_name;
    s["n_spin_orbitals"] = mh.n_so;
    s["n_electrons"] = mh.n_electrons;
    s["frozen"] = config.frozen;
    record["system"] = s;
  }
  record["e_hf"] = sys.e_hf;
  if (sys.scf_used) record["e_scf"] = sys.e_scf;
  record["e_vqe"] = e0;
  record["hf_irrep"] = std::string(mh.group.irrep_name(mh.hf_irrep()));
  record["adapt"] = json::parse(adapt_report.to_json());
  record["pool"] = {{"raw", pool_raw.size()}, {"after_symmetry", pool.size()}};
  record["method"] = config.method == RunConfig::Method::Qeom ? "qeom" : "qse";

  // FCI oracle
  const PointGroup& group = mh.group;
  const Irrep hf_irrep = mh.hf_irrep();
  bool fci_ok = false;
  double e_fci_ground = 0.0;
  if (config.with_fci) {
    try {
      SectorBasis ground_sector = sector_basis(mh.n_so, mh.n_electrons, 0, hf_irrep, mh.so_irrep);
      e_fci_ground = fci_spectrum(mh, ground_sector, 1).front();
      fci_ok = true;
      record["e_fci"] = e_fci_ground;
      record["e_vqe_error"] = e0 - e_fci_ground;
    } catch (const std::exception& e) {
      record["fci_skipped"] = e.what();
    }
  }
  record["fci_available"] = fci_ok;

  std::vector<std::string> irreps = config.target_irreps;
  if (irreps.empty()) irreps.push_back(std::string(group.irrep_name(hf_irrep)));
  if (config.ground_only) irreps.clear();

  record["blocks"] = json::array();
  for (const auto& irrep_name : irreps) {
    const Irrep state_irrep = group.irrep_by_name(irrep_name);
    const Irrep op_irrep = irrep_product(state_irrep, hf_irrep);
    json blk;
    blk["state_irrep"] = std::string(group.irrep_name(state_irrep));
    blk["operator_irrep"] = std::string(group.irrep_name(op_irrep));
    if (fci_ok) {
      try {
        SectorBasis target_sector = sector_basis(mh.n_so, mh.n_electrons, 0, state_irrep, mh.so_irrep);
        int want = (state_irrep == hf_irrep) ? config.target_ordinal + 1 : config.target_ordinal;
        auto energies = fci_spectrum(mh, target_sector, want + 2);
        blk["fci_sector_energies"] = energies;
      } catch (const std::exception& e) {
        blk["fci_sector_skipped"] = e.what();
      }
    }
    std::string tag = (config.method == RunConfig::Method::Qeom ? "qeom_" : "qse_") + irrep_name;
    if (config.method == RunConfig::Method::Qeom) {
      run_qeom_block(config, mh, ham, ansatz, e0, op_irrep, blk, tag);
    } else {
      run_qse_block(config, mh, ham, ansatz, e0, op_irrep, blk, tag);
    }
    record["blocks"].push_back(std::move(blk));
  }

  const auto t1 = std::chrono::steady_clock::now();
  record["wall_seconds"] = std::chrono::duration<double>(t1 - t0).count();

  if (!config.output_dir.empty()) {
    write_file(config.output_dir, "adapt_report.json", adapt_report.to_json());
    write_file(config.output_dir, "record.json", record.dump(2));
  }
  return record;
}

}  // namespace

void RunConfig::validate() const {
  if (system == System::Fcidump && fcidump_path.empty()) {
    throw std::invalid_argument("fcidump system requires fcidump.path");
  }
  const std::vector<std::string> known{"sd", "sdt", "sdt-screened", "sd-paren-t"};
  if (variants.empty()) throw std::invalid_argument("at least one variant required");
  for (const auto& v : variants) {
    if (std::find(known.begin(), known.end(), v) == known.end()) {
      throw std::invalid_argument("unknown variant: " + v);
    }
  }
  if (target_ordinal < 1) throw std::invalid_argument("target ordinal must be >= 1");
  if (screening.kind == ScreenMode::Coverage && !(screening.f > 0.0 && screening.f <= 1.0)) {
    throw std::invalid_argument("screening coverage fraction must lie in (0, 1]");
  }
  if (adapt.gradient_eps <= 0.0) throw std::invalid_argument("adapt.eps must be positive");
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto notspace = line.find_first_not_of(" \t\r\n");
    if (notspace == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_override(config, line);
  }
  return config;
}

void apply_override(RunConfig& config, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("override must be key=value");
  auto trim = [](std::string s) {
    auto a = s.find_first_not_of(" \t\r\n");
    auto b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));

  if (key == "system") {
    if (value == "fcidump") config.system = RunConfig::System::Fcidump;
    else if (value == "h8") config.system = RunConfig::System::BuiltinH8;
    else if (value == "h2") config.system = RunConfig::System::BuiltinH2;
    else throw std::invalid_argument("system must be fcidump|h8|h2");
  } else if (key == "fcidump.path") config.fcidump_path = value;
  else if (key == "h8.b") config.h8_b = std::stod(value);
  else if (key == "h8.layout") config.h8_layout = value;
  else if (key == "h2.r") config.h2_r = std::stod(value);
  else if (key == "point_group") config.point_group = value;
  else if (key == "frozen") config.frozen = parse_int_list(value);
  else if (key == "active") config.active = parse_int_list(value);
  else if (key == "method") {
    if (value == "qeom") config.method = RunConfig::Method::Qeom;
    else if (value == "qse") config.method = RunConfig::Method::Qse;
    else throw std::invalid_argument("method must be qeom|qse");
  } else if (key == "variant") config.variants = parse_str_list(value);
  else if (key == "target.irrep") config.target_irreps = parse_str_list(value);
  else if (key == "target.root") config.target_ordinal = std::stoi(value);
  else if (key == "target.track") config.track_overlap = (value == "overlap");
  else if (key == "screening.mode") {
    if (value == "coverage") config.screening.kind = ScreenMode::Coverage;
    else if (value == "threshold") config.screening.kind = ScreenMode::Threshold;
    else if (value == "top_k") config.screening.kind = ScreenMode::TopK;
    else throw std::invalid_argument("screening.mode must be coverage|threshold|top_k");
  } else if (key == "screening.f") config.screening.f = std::stod(value);
  else if (key == "screening.eps") config.screening.eps_t = std::stod(value);
  else if (key == "screening.k") config.screening.k = static_cast<std::size_t>(std::stoul(value));
  else if (key == "importance") {
    if (value == "rs") config.importance = ImportanceMethod::RayleighSchroedinger;
    else if (value == "closed-form") config.importance = ImportanceMethod::DiagonalClosedForm;
    else throw std::invalid_argument("importance must be rs|closed-form");
  } else if (key == "adapt.eps") config.adapt.gradient_eps = std::stod(value);
  else if (key == "adapt.max_iters") config.adapt.max_iterations = std::stoi(value);
  else if (key == "adapt.opt_tol") config.adapt.optimizer_tol = std::stod(value);
  else if (key == "adapt.pool") {
    if (value == "spin-adapted") config.pool = PoolKind::SpinAdapted;
    else if (value == "spin-orbital") config.pool = PoolKind::SpinOrbitalSD;
    else throw std::invalid_argument("adapt.pool must be spin-adapted|spin-orbital");
  } else if (key == "adapt.filter") config.filter_pool = (value == "on" || value == "true" || value == "1");
  else if (key == "fci") config.with_fci = (value == "on" || value == "true" || value == "1");
  else if (key == "lindep") config.lindep_threshold = std::stod(value);
  else if (key == "rediag_curve") config.rediag_curve = (value == "on" || value == "true" || value == "1");
  else if (key == "output.dir") config.output_dir = value;
  else if (key == "threads") config.threads = std::stoi(value);
  else throw std::invalid_argument("unknown config key: " + key);
}

std::string run_single(const RunConfig& config) { return run_single_json(config).dump(2); }

std::string run_scan(const RunConfig& config, const std::vector<double>& values) {
  if (config.system == RunConfig::System::Fcidump) {
    throw std::invalid_argument("scan varies h2.r or h8.b; use repeated runs for FCIDUMP input");
  }
  if (values.empty()) throw std::invalid_argument("scan needs at least one parameter value");

  json scan = json::array();
  std::ostringstream csv;
  csv << std::setprecision(15);
  csv << "parameter,e_hf,e_vqe,e_fci";
  for (const auto& v : config.variants) csv << ",omega_" << v << ",energy_" << v << ",err_" << v;
  csv << "\n";

  for (double value : values) {
    RunConfig point = config;
    point.output_dir.clear();  // per-point artifacts only for single runs
    if (config.system == RunConfig::System::BuiltinH2) point.h2_r = value;
    else point.h8_b = value;
    json rec;
    try {
      rec = run_single_json(point);
    } catch (const std::exception& e) {
      json fail;
      fail["parameter"] = value;
      fail["failed"] = e.what();
      scan.push_back(fail);
      csv << value << ",failed\n";
      continue;
    }
    rec["parameter"] = value;

    csv << value << "," << rec["e_hf"].get<double>() << "," << rec["e_vqe"].get<double>();
    bool fci_ok = rec["fci_available"].get<bool>();
    if (fci_ok) csv << "," << rec["e_fci"].get<double>();
    else csv << ",";
    const auto& blk = rec["blocks"][0];
    double omega_fci = 0.0;
    bool have_target_fci = false;
    if (fci_ok && blk.contains("fci_sector_energies")) {
      auto energies = blk["fci_sector_energies"].get<std::vector<double>>();
      // In the ground-state sector index 0 is the ground state itself, so
      // the ordinal counts from 1 there; other sectors start at 0.
      std::size_t idx = static_cast<std::size_t>(config.target_ordinal);
      if (blk["state_irrep"] != rec["hf_irrep"]) idx -= 1;
      if (energies.size() > idx) {
        omega_fci = energies[idx] - rec["e_fci"].get<double>();
        have_target_fci = true;
      }
    }
    for (const auto& v : config.variants) {
      if (blk["variants"].contains(v)) {
        double om = blk["variants"][v]["omega"].get<double>();
        double en = blk["variants"][v]["energy"].get<double>();
        csv << "," << om << "," << en;
        if (have_target_fci) csv << "," << (om - omega_fci);
        else csv << ",";
      } else {
        csv << ",,,";
      }
    }
    csv << "\n";
    scan.push_back(std::move(rec));
  }

  json out;
  out["schema_version"] = 1;
  out["points"] = scan;
  if (!config.output_dir.empty()) {
    write_file(config.output_dir, "scan.csv", csv.str());
    write_file(config.output_dir, "scan.json", out.dump(2));
  }
  out["csv"] = csv.str();
  return out.dump(2);
}

std::string screen_report(const RunConfig& config) {
  RunConfig cfg = config;
  cfg.variants = {"sdt-screened", "sd-paren-t"};
  config.validate();
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
  PreparedSystem sys = prepare_system(cfg);
  MolecularHamiltonian& mh = sys.mh;

  auto pool_raw = make_pool(cfg.pool, mh);
  auto pool = cfg.filter_pool ? filter_pool_by_symmetry(pool_raw, mh.hf_irrep(), mh.so_irrep)
                              : pool_raw;
  if (pool.empty()) pool = pool_raw;
  auto [ansatz, adapt_report] = run_adapt(mh, pool, cfg.adapt);
  const double e0 = ansatz.energy;
  CompiledFermionOp ham(to_fermion_sum(mh), mh.n_so);

  const PointGroup& group = mh.group;
  const Irrep hf_irrep = mh.hf_irrep();
  std::string irrep_name = cfg.target_irreps.empty() ? std::string(group.irrep_name(hf_irrep))
                                                     : cfg.target_irreps.front();
  const Irrep op_irrep = irrep_product(group.irrep_by_name(irrep_name), hf_irrep);

  std::vector<Excitation> sd_basis = build_basis(mh, op_irrep, {1, 2});
  std::vector<Excitation> sdt_basis = build_basis(mh, op_irrep, {1, 2, 3});
  const int m0 = cfg.target_ordinal - 1;

  json out;
  out["schema_version"] = 1;
  std::ostringstream csv;
  csv << std::setprecision(15);

  if (cfg.method == RunConfig::Method::Qeom) {
    RealMatrix m_subset = build_M(sdt_basis, ham, ansatz, e0, ElementSet::ScreeningSubset);
    ScreeningReport report = importance_indicators(m_subset, sdt_basis, m0, cfg.importance);
    out["report"] = json::parse(report.to_json());

    csv << "k,cumulative_w_fraction";
    std::vector<double> rediag;
    if (cfg.rediag_curve) {
      csv << ",omega_rediag";
      RealMatrix m_full = build_M(sdt_basis, ham, ansatz, e0, ElementSet::All);
      // prefix k of the ranked triples, re-diagonalized
      std::vector<double> gamma_ref;
      {
        auto [sd_evals, sd_vecs] = solve_block(build_M(sd_basis, ham, ansatz, e0));
        gamma_ref.resize(sd_basis.size());
        for (std::size_t i = 0; i < sd_basis.size(); ++i) gamma_ref[i] = sd_vecs(i, static_cast<std::size_t>(m0));
      }
      for (std::size_t k = 0; k <= report.entries.size(); ++k) {
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < sd_basis.size(); ++i) keep.push_back(i);
        std::vector<std::size_t> tsel;
        for (std::size_t i = 0; i < k; ++i) tsel.push_back(report.entries[i].basis_index);
        std::sort(tsel.begin(), tsel.end());
        keep.insert(keep.end(), tsel.begin(), tsel.end());
        RealMatrix sub(keep.size(), keep.size());
        std::vector<Excitation> sub_basis;
        for (std::size_t a = 0; a < keep.size(); ++a) {
          sub_basis.push_back(sdt_basis[keep[a]]);
          for (std::size_t b = 0; b < keep.size(); ++b) sub(a, b) = m_full(keep[a], keep[b]);
        }
        EomBlock blockk;
        blockk.irrep = op_irrep;
        blockk.basis = sub_basis;
        blockk.e0 = e0;
        auto [evals, evecs] = solve_block(sub);
        blockk.eigenvalues = evals;
        blockk.eigenvectors = evecs;
        RootSelector sel;
        sel.kind = RootSelector::Overlap;
        sel.reference = gamma_ref;
        RootChoice rc = target_root(blockk, sel);
        rediag.push_back(evals[static_cast<std::size_t>(rc.index)]);
      }
    }
    csv << "\n";
    for (std::size_t k = 0; k < report.coverage_curve.size(); ++k) {
      csv << report.coverage_curve[k].first << "," << report.coverage_curve[k].second;
      if (cfg.rediag_curve) csv << "," << rediag[k];
      csv << "\n";
    }
  } else {
    QseMatrices subset = build_S_H(sdt_basis, ham, ansatz, ElementSet::ScreeningSubset);
    QseScreeningReport report =
        qse_importance(subset.H, subset.S, sdt_basis, cfg.target_ordinal, cfg.lindep_threshold);
    out["report"] = json::parse(report.to_json());

    csv << "k,cumulative_w_fraction";
    std::vector<double> rediag;
    if (cfg.rediag_curve) {
      csv << ",omega_rediag";
      QseMatrices full = build_S_H(sdt_basis, ham, ansatz);
      // SD rows of the full matrices carry the tracking reference.
      std::vector<std::size_t> sd_rows{0};
      for (std::size_t j = 0; j < sdt_basis.size(); ++j) {
        if (sdt_basis[j].rank() <= 2) sd_rows.push_back(j + 1);
      }
      std::vector<double> d_ref;
      {
        RealMatrix hsd(sd_rows.size(), sd_rows.size()), ssd(sd_rows.size(), sd_rows.size());
        for (std::size_t a = 0; a < sd_rows.size(); ++a)
          for (std::size_t b = 0; b < sd_rows.size(); ++b) {
            hsd(a, b) = full.H(sd_rows[a], sd_rows[b]);
            ssd(a, b) = full.S(sd_rows[a], sd_rows[b]);
          }
        GeneralizedSolve sd_solve = solve_generalized(hsd, ssd, cfg.lindep_threshold);
        d_ref.resize(sd_rows.size());
        for (std::size_t i = 0; i < sd_rows.size(); ++i) {
          d_ref[i] = sd_solve.eigenvectors(i, static_cast<std::size_t>(cfg.target_ordinal));
        }
      }
      for (std::size_t k = 0; k <= report.entries.size(); ++k) {
        std::vector<std::size_t> rows = sd_rows;
        std::vector<std::size_t> tsel;
        for (std::size_t i = 0; i < k; ++i) tsel.push_back(report.entries[i].basis_index + 1);
        std::sort(tsel.begin(), tsel.end());
        rows.insert(rows.end(), tsel.begin(), tsel.end());
        RealMatrix hs(rows.size(), rows.size()), ss(rows.size(), rows.size());
        for (std::size_t a = 0; a < rows.size(); ++a)
          for (std::size_t b = 0; b < rows.size(); ++b) {
            hs(a, b) = full.H(rows[a], rows[b]);
            ss(a, b) = full.S(rows[a], rows[b]);
          }
        GeneralizedSolve g = solve_generalized(hs, ss, cfg.lindep_threshold);
        bool ambiguous = false;
        int root = qse_track(g, ss, d_ref, &ambiguous);
        rediag.push_back(g.eigenvalues[static_cast<std::size_t>(root)] - g.eigenvalues.front());
      }
    }
    csv << "\n";
    for (std::size_t k = 0; k < report.coverage_curve.size(); ++k) {
      csv << report.coverage_curve[k].first << "," << report.coverage_curve[k].second;
      if (cfg.rediag_curve) csv << "," << rediag[k];
      csv << "\n";
    }
  }

  out["csv"] = csv.str();
  if (!cfg.output_dir.empty()) {
    write_file(cfg.output_dir, "screen_report.json", out["report"].dump(2));
    write_file(cfg.output_dir, "screen_curve.csv", csv.str());
  }
  return out.dump(2);
}

std::string export_fcidump(const RunConfig& config) {
  if (config.system == RunConfig::System::Fcidump) {
    IntegralSet ints = parse_fcidump_file(config.fcidump_path,
                                          config.point_group.empty()
                                              ? std::nullopt
                                              : std::optional<PointGroup>(
                                                    PointGroup::from_name(config.point_group)));
    return emit_fcidump(ints);
  }
  const std::string group_name = config.point_group.empty() ? "d2h" : config.point_group;
  PointGroup group = PointGroup::from_name(group_name);
  SOrbitalBasis basis;
  if (config.system == RunConfig::System::BuiltinH2) {
    basis = h2_molecule(config.h2_r);
  } else {
    auto contraction = default_hydrogen_contraction();
    basis = config.h8_layout.empty() ? parse_layout(kDefaultH8Layout, config.h8_b, contraction)
                                     : load_layout_file(config.h8_layout, config.h8_b, contraction);
  }
  return emit_fcidump(scf_system(basis, group).ints);
}

std::string fcidump_info(const std::string& path, std::optional<std::string> group) {
  std::optional<PointGroup> pg;
  if (group) pg = PointGroup::from_name(*group);
  IntegralSet ints = parse_fcidump_file(path, pg);
  json j;
  j["n_spatial"] = ints.n_spatial;
  j["n_electrons"] = ints.n_electrons;
  j["ms2"] = ints.ms2;
  j["point_group"] = ints.group.name();
  j["e_nuclear"] = ints.e_nuclear;
  json syms = json::array();
  for (auto label : ints.orb_irrep) syms.push_back(std::string(ints.group.irrep_name(label)));
  j["orb_irrep"] = syms;
  std::size_t nnz = 0;
  for (double v : ints.eri)
    if (v != 0.0) ++nnz;
  j["eri_nonzero_slots"] = nnz;
  return j.dump(2);
}

}  // namespace qeomx
