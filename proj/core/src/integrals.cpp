#include "qeomx/integrals.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qeomx/errors.hpp"

namespace qeomx {

IntegralSet::IntegralSet(std::size_t n, const PointGroup& g)
    : n_spatial(n),
      group(g),
      orb_irrep(n, kTotallySymmetric),
      h_core(n * n, 0.0),
      eri(n * n * n * n, 0.0) {}

void IntegralSet::set_h(std::size_t p, std::size_t q, double v) {
  h_core[p * n_spatial + q] = v;
  h_core[q * n_spatial + p] = v;
}

void IntegralSet::set_g2(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double v) {
  const std::size_t n = n_spatial;
  auto put = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    eri[((a * n + b) * n + c) * n + d] = v;
  };
  put(p, q, r, s);
  put(q, p, r, s);
  put(p, q, s, r);
  put(q, p, s, r);
  put(r, s, p, q);
  put(s, r, p, q);
  put(r, s, q, p);
  put(s, r, q, p);
}

void IntegralSet::validate(double tol) const {
  const std::size_t n = n_spatial;
  if (orb_irrep.size() != n) throw ContractViolation("orb_irrep size mismatch");
  for (Irrep label : orb_irrep) {
    if (!group.valid_label(label)) throw ContractViolation("orbital irrep label not in group");
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q <= p; ++q) {
      if (std::abs(h(p, q) - h(q, p)) > tol) throw ContractViolation("h_core not symmetric");
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double v = g2(p, q, r, s);
          if (std::abs(v - g2(q, p, r, s)) > tol || std::abs(v - g2(p, q, s, r)) > tol ||
              std::abs(v - g2(r, s, p, q)) > tol) {
            throw ContractViolation("ERI 8-fold symmetry violated");
          }
        }
}

namespace {

PointGroup infer_group(int max_orbsym) {
  if (max_orbsym <= 1) return PointGroup::from_name("c1");
  if (max_orbsym <= 2) return PointGroup::from_name("c2");
  if (max_orbsym <= 4) return PointGroup::from_name("c2v");
  if (max_orbsym <= 8) return PointGroup::from_name("d2h");
  throw ParseError("ORBSYM value " + std::to_string(max_orbsym) + " exceeds Abelian group order 8");
}

// Fortran floats may use D exponents.
double parse_value(std::string tok, int line_no) {
  for (auto& c : tok) {
    if (c == 'D' || c == 'd') c = 'e';
  }
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad numeric value '" + tok + "'");
  }
}

struct Header {
  int norb = -1;
  int nelec = -1;
  int ms2 = 0;
  std::vector<int> orbsym;
  int header_end_line = 0;  // 1-based line index of &END (or /)
};

Header parse_header(const std::vector<std::string>& lines) {
  Header h;
  std::string blob;
  std::size_t li = 0;
  bool started = false, ended = false;
  for (; li < lines.size(); ++li) {
    std::string line = lines[li];
    if (!started) {
      auto pos = line.find("&FCI");
      if (pos == std::string::npos) {
        // Skip leading blank lines only; anything else is malformed.
        bool blank = std::all_of(line.begin(), line.end(),
                                 [](unsigned char c) { return std::isspace(c); });
        if (!blank) throw ParseError("line " + std::to_string(li + 1) + ": expected &FCI header");
        continue;
      }
      started = true;
      line = line.substr(pos + 4);
    }
    auto end = line.find("&END");
    std::size_t slash = line.find('/');
    if (end == std::string::npos && slash != std::string::npos) end = slash;
    if (end != std::string::npos) {
      blob += line.substr(0, end);
      ended = true;
      h.header_end_line = static_cast<int>(li + 1);
      break;
    }
    blob += line;
    blob += ' ';
  }
  if (!started) throw ParseError("no &FCI header found");
  if (!ended) throw ParseError("header not terminated by &END or /");

  for (auto& c : blob) {
    if (c == ',' || c == '\t') c = ' ';
  }
  std::istringstream iss(blob);
  std::string tok;
  std::string key;
  std::vector<std::string> pending;
  auto flush = [&]() {
    if (key.empty()) return;
    if (key == "NORB") {
      if (pending.size() != 1) throw ParseError("malformed NORB in header");
      h.norb = std::stoi(pending[0]);
    } else if (key == "NELEC") {
      if (pending.size() != 1) throw ParseError("malformed NELEC in header");
      h.nelec = std::stoi(pending[0]);
    } else if (key == "MS2") {
      if (pending.size() != 1) throw ParseError("malformed MS2 in header");
      h.ms2 = std::stoi(pending[0]);
    } else if (key == "ORBSYM") {
      for (const auto& p : pending) h.orbsym.push_back(std::stoi(p));
    }
    // ISYM and any other keys are accepted and ignored.
    key.clear();
    pending.clear();
  };
  while (iss >> tok) {
    auto eq = tok.find('=');
    if (eq != std::string::npos) {
      flush();
      key = tok.substr(0, eq);
      std::transform(key.begin(), key.end(), key.begin(),
                     [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
      std::string rest = tok.substr(eq + 1);
      if (!rest.empty()) pending.push_back(rest);
    } else if (!key.empty()) {
      pending.push_back(tok);
    } else {
      throw ParseError("unexpected token '" + tok + "' in header");
    }
  }
  flush();

  if (h.norb <= 0) throw ParseError("header missing NORB");
  if (h.nelec < 0) throw ParseError("header missing NELEC");
  if (h.orbsym.empty()) h.orbsym.assign(static_cast<std::size_t>(h.norb), 1);
  if (h.orbsym.size() != static_cast<std::size_t>(h.norb)) {
    throw ParseError("ORBSYM has " + std::to_string(h.orbsym.size()) + " entries, expected " +
                     std::to_string(h.norb));
  }
  return h;
}

}  // namespace

IntegralSet parse_fcidump(const std::string& text, std::optional<PointGroup> group) {
  std::vector<std::string> lines;
  {
    std::istringstream iss(text);
    std::string line;
    while (std::getline(iss, line)) lines.push_back(line);
  }
  Header hdr = parse_header(lines);

  PointGroup g = group ? *group : infer_group(*std::max_element(hdr.orbsym.begin(), hdr.orbsym.end()));

  IntegralSet ints(static_cast<std::size_t>(hdr.norb), g);
  ints.n_electrons = hdr.nelec;
  ints.ms2 = hdr.ms2;
  for (std::size_t p = 0; p < ints.n_spatial; ++p) {
    ints.orb_irrep[p] = g.irrep_from_molpro(hdr.orbsym[p]);
  }

  const std::size_t n = ints.n_spatial;
  std::vector<char> h_seen(n * n, 0);
  std::vector<char> g_seen(n * n * n * n, 0);
  bool nuc_seen = false;
  const double dup_tol = 1e-10;

  for (std::size_t li = static_cast<std::size_t>(hdr.header_end_line); li < lines.size(); ++li) {
    // &END may share its line with trailing content; records start after it.
    std::string line = lines[li];
    if (static_cast<int>(li + 1) == hdr.header_end_line) continue;
    std::istringstream iss(line);
    std::string vtok;
    if (!(iss >> vtok)) continue;  // blank line
    long p, q, r, s;
    if (!(iss >> p >> q >> r >> s)) {
      throw ParseError("line " + std::to_string(li + 1) + ": expected `value p q r s` record");
    }
    std::string extra;
    if (iss >> extra) {
      throw ParseError("line " + std::to_string(li + 1) + ": trailing content '" + extra + "'");
    }
    const double v = parse_value(vtok, static_cast<int>(li + 1));
    auto check_range = [&](long idx) {
      if (idx < 0 || idx > static_cast<long>(n)) {
        throw std::out_of_range("line " + std::to_string(li + 1) + ": orbital index " +
                                std::to_string(idx) + " outside [1, " + std::to_string(n) + "]");
      }
    };
    check_range(p);
    check_range(q);
    check_range(r);
    check_range(s);

    if (p == 0 && q == 0 && r == 0 && s == 0) {
      if (nuc_seen && std::abs(ints.e_nuclear - v) > dup_tol) {
        throw ContractViolation("line " + std::to_string(li + 1) +
                                ": conflicting core-energy records");
      }
      ints.e_nuclear = v;
      nuc_seen = true;
    } else if (r == 0 && s == 0) {
      if (p == 0 || q == 0) {
        throw ParseError("line " + std::to_string(li + 1) + ": malformed one-electron record");
      }
      std::size_t a = static_cast<std::size_t>(p - 1), b = static_cast<std::size_t>(q - 1);
      if (h_seen[a * n + b] && std::abs(ints.h(a, b) - v) > dup_tol) {
        throw ContractViolation("line " + std::to_string(li + 1) +
                                ": conflicting h(" + std::to_string(p) + "," + std::to_string(q) +
                                ") records");
      }
      ints.set_h(a, b, v);
      h_seen[a * n + b] = h_seen[b * n + a] = 1;
    } else {
      if (p == 0 || q == 0 || r == 0 || s == 0) {
        throw ParseError("line " + std::to_string(li + 1) + ": malformed two-electron record");
      }
      std::size_t a = static_cast<std::size_t>(p - 1), b = static_cast<std::size_t>(q - 1);
      std::size_t c = static_cast<std::size_t>(r - 1), d = static_cast<std::size_t>(s - 1);
      std::size_t slot = ((a * n + b) * n + c) * n + d;
      if (g_seen[slot] && std::abs(ints.g2(a, b, c, d) - v) > dup_tol) {
        throw ContractViolation("line " + std::to_string(li + 1) + ": conflicting ERI records");
      }
      ints.set_g2(a, b, c, d, v);
      const std::array<std::array<std::size_t, 4>, 8> perms{{{a, b, c, d},
                                                             {b, a, c, d},
                                                             {a, b, d, c},
                                                             {b, a, d, c},
                                                             {c, d, a, b},
                                                             {d, c, a, b},
                                                             {c, d, b, a},
                                                             {d, c, b, a}}};
      for (const auto& pm : perms) {
        g_seen[((pm[0] * n + pm[1]) * n + pm[2]) * n + pm[3]] = 1;
      }
    }
  }
  return ints;
}

IntegralSet parse_fcidump_file(const std::string& path, std::optional<PointGroup> group) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open FCIDUMP file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_fcidump(ss.str(), std::move(group));
}

std::string emit_fcidump(const IntegralSet& ints) {
  const std::size_t n = ints.n_spatial;
  std::ostringstream out;
  out << "&FCI NORB=" << n << ",NELEC=" << ints.n_electrons << ",MS2=" << ints.ms2 << ",\n";
  out << "  ORBSYM=";
  for (std::size_t p = 0; p < n; ++p) {
    out << ints.group.molpro_index(ints.orb_irrep[p]) << ",";
  }
  out << "\n  ISYM=1,\n &END\n";

  char buf[64];
  auto record = [&](double v, std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    std::snprintf(buf, sizeof(buf), "%.15G %zu %zu %zu %zu\n", v, p, q, r, s);
    out << buf;
  };

  // Unique (pq|rs) with p>=q, r>=s, (pq)>=(rs), nonzero only.
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r <= p; ++r)
        for (std::size_t s = 0; s <= r; ++s) {
          if (p * n + q < r * n + s) continue;
          double v = ints.g2(p, q, r, s);
          if (v != 0.0) record(v, p + 1, q + 1, r + 1, s + 1);
        }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      double v = ints.h(p, q);
      if (v != 0.0) record(v, p + 1, q + 1, 0, 0);
    }
  record(ints.e_nuclear, 0, 0, 0, 0);
  return out.str();
}

}  // namespace qeomx
