// Copyright 2026 The OE-VQE Authors
// SPDX-License-Identifier: Apache-2.0

#include "oevqe/integrals.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>

namespace oevqe {

EriTensor::EriTensor(int norb) : norb_(norb) {
  const std::size_t npair = static_cast<std::size_t>(norb) * (norb + 1) / 2;
  data_.assign(npair * (npair + 1) / 2, 0.0);
}

double EriTensor::get(int p, int q, int r, int s) const {
  for (int i : {p, q, r, s}) {
    if (i < 0 || i >= norb_) {
      throw InputError("eri index " + std::to_string(i) + " out of range [0, " +
                       std::to_string(norb_) + ")");
    }
  }
  return (*this)(p, q, r, s);
}

std::vector<double> EriTensor::to_dense() const {
  const std::size_t n = norb_;
  std::vector<double> out(n * n * n * n);
  for (int p = 0; p < norb_; ++p)
    for (int q = 0; q < norb_; ++q)
      for (int r = 0; r < norb_; ++r)
        for (int s = 0; s < norb_; ++s) out[((p * n + q) * n + r) * n + s] = (*this)(p, q, r, s);
  return out;
}

EriTensor EriTensor::from_dense(int norb, const std::vector<double>& dense, double* max_asym) {
  const std::size_t n = norb;
  if (dense.size() != n * n * n * n) throw InputError("EriTensor::from_dense: size mismatch");
  EriTensor t(norb);
  auto d = [&](int p, int q, int r, int s) { return dense[((p * n + q) * n + r) * n + s]; };
  double worst = 0.0;
  for (int p = 0; p < norb; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r < norb; ++r)
        for (int s = 0; s <= r; ++s) {
          if (pair(p, q) < pair(r, s)) continue;
          const double v[8] = {d(p, q, r, s), d(q, p, r, s), d(p, q, s, r), d(q, p, s, r),
                               d(r, s, p, q), d(s, r, p, q), d(r, s, q, p), d(s, r, q, p)};
          double mean = 0.0;
          for (double x : v) mean += x;
          mean /= 8.0;
          for (double x : v) worst = std::max(worst, std::abs(x - mean));
          t.at(p, q, r, s) = mean;
        }
  if (max_asym) *max_asym = worst;
  return t;
}

void IntegralSet::validate() const {
  if (norb <= 0) throw InputError("integral set has no orbitals");
  if (h1.rows() != norb || h1.cols() != norb) throw InputError("h1 dimension mismatch");
  if (eri.norb() != norb) throw InputError("eri dimension mismatch");
  const double scale = std::max(1.0, h1.cwiseAbs().maxCoeff());
  if (asymmetry(h1) > 1e-12 * scale) throw InputError("h1 is not symmetric");
  if (n_elec <= 0 || n_elec % 2 != 0 || n_elec > 2 * norb) {
    throw InputError("electron count " + std::to_string(n_elec) +
                     " must be even and within (0, 2*norb]");
  }
}

ParseError::ParseError(int line, const std::string& what)
    : InputError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

bool header_int(const std::string& header, const std::string& key, int* value) {
  const std::regex re("(^|[^A-Z0-9_])" + key + R"(\s*=\s*([-+]?[0-9]+))", std::regex::icase);
  std::smatch m;
  if (!std::regex_search(header, m, re)) return false;
  *value = std::stoi(m[2].str());
  return true;
}

}  // namespace

IntegralSet parse_fcidump(std::istream& in, const std::string& label) {
  std::string line;
  int lineno = 0;
  std::string header;
  bool begun = false;
  bool ended = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string upper = line;
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (!begun) {
      const auto pos = upper.find("&FCI");
      if (pos == std::string::npos) {
        if (upper.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError(lineno, "malformed header: expected &FCI");
      }
      begun = true;
      upper = upper.substr(pos + 4);
    }
    const auto end = upper.find("&END");
    const auto slash = upper.find('/');
    if (end != std::string::npos || slash != std::string::npos) {
      header += upper.substr(0, std::min(end, slash));
      ended = true;
      break;
    }
    header += upper + " ";
  }
  if (!begun) throw ParseError(lineno, "malformed header: missing &FCI");
  if (!ended) throw ParseError(lineno, "malformed header: missing &END");

  IntegralSet out;
  out.label = label;
  int ms2 = 0;
  if (!header_int(header, "NORB", &out.norb)) throw ParseError(lineno, "malformed header: NORB missing");
  if (!header_int(header, "NELEC", &out.n_elec)) throw ParseError(lineno, "malformed header: NELEC missing");
  if (header_int(header, "MS2", &ms2) && ms2 != 0) throw ParseError(lineno, "only MS2=0 is supported");
  if (out.norb <= 0) throw ParseError(lineno, "NORB must be positive");
  if (out.n_elec % 2 != 0) throw ParseError(lineno, "NELEC must be even");
  if (out.n_elec <= 0 || out.n_elec > 2 * out.norb) throw ParseError(lineno, "NELEC out of range");

  const int n = out.norb;
  out.h1 = Matrix::Zero(n, n);
  out.eri = EriTensor(n);
  std::map<std::size_t, double> seen_eri;
  std::map<std::size_t, double> seen_h1;
  bool seen_nuc = false;
  auto conflict = [](double a, double b) { return std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)); };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.find('(') != std::string::npos) throw ParseError(lineno, "complex integrals are not supported");
    std::istringstream ls(line);
    std::string vtok;
    int idx[4];
    ls >> vtok >> idx[0] >> idx[1] >> idx[2] >> idx[3];
    if (!ls) throw ParseError(lineno, "expected 'value p q r s'");
    std::string trailing;
    if (ls >> trailing) throw ParseError(lineno, "unexpected trailing token '" + trailing + "'");
    for (char& c : vtok) if (c == 'D' || c == 'd') c = 'e';
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(vtok, &used);
      if (used != vtok.size()) throw std::invalid_argument(vtok);
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad numeric value '" + vtok + "'");
    }
    if (!std::isfinite(v)) throw ParseError(lineno, "non-finite value");
    for (int i : idx)
      if (i < 0 || i > n) throw ParseError(lineno, "index out of range");
    const int p = idx[0] - 1, q = idx[1] - 1, r = idx[2] - 1, s = idx[3] - 1;
    if (idx[0] && idx[1] && idx[2] && idx[3]) {
      auto [it, fresh] = seen_eri.emplace(EriTensor::slot(p, q, r, s), v);
      if (!fresh && conflict(it->second, v)) throw ParseError(lineno, "duplicate conflicting entry");
      out.eri.at(p, q, r, s) = v;
    } else if (idx[0] && idx[1] && !idx[2] && !idx[3]) {
      auto [it, fresh] = seen_h1.emplace(EriTensor::pair(p, q), v);
      if (!fresh && conflict(it->second, v)) throw ParseError(lineno, "duplicate conflicting entry");
      out.h1(p, q) = v;
      out.h1(q, p) = v;
    } else if (!idx[0] && !idx[1] && !idx[2] && !idx[3]) {
      if (seen_nuc && conflict(out.e_nuc, v)) throw ParseError(lineno, "duplicate conflicting entry");
      seen_nuc = true;
      out.e_nuc = v;
    } else if (idx[0] && !idx[1] && !idx[2] && !idx[3]) {
      // orbital energy record; not needed
    } else {
      throw ParseError(lineno, "malformed index pattern");
    }
  }
  out.validate();
  return out;
}

IntegralSet read_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_fcidump(in, path);
}

void write_fcidump(std::ostream& out, const IntegralSet& ints, double cutoff) {
  const int n = ints.norb;
  out << " &FCI NORB=" << n << ",NELEC=" << ints.n_elec << ",MS2=0,\n  ORBSYM=";
  for (int i = 0; i < n; ++i) out << "1,";
  out << "\n  ISYM=1,\n &END\n";
  out << std::scientific << std::setprecision(17);
  auto emit = [&](double v, int p, int q, int r, int s) {
    out << std::setw(25) << v << ' ' << std::setw(4) << p << ' ' << std::setw(4) << q << ' '
        << std::setw(4) << r << ' ' << std::setw(4) << s << '\n';
  };
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s <= r; ++s) {
          if (EriTensor::pair(p, q) < EriTensor::pair(r, s)) continue;
          const double v = ints.eri(p, q, r, s);
          if (std::abs(v) > cutoff) emit(v, p + 1, q + 1, r + 1, s + 1);
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      if (std::abs(ints.h1(p, q)) > cutoff) emit(ints.h1(p, q), p + 1, q + 1, 0, 0);
  emit(ints.e_nuc, 0, 0, 0, 0);
}

void write_fcidump(const std::string& path, const IntegralSet& ints, double cutoff) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_fcidump(out, ints, cutoff);
}

double get_eri(const IntegralSet& ints, int p, int q, int r, int s) { return ints.eri.get(p, q, r, s); }

}  // namespace oevqe
