#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "chp/lp.hpp"

namespace chp::lp {

namespace {

std::string name_or_index(const std::vector<std::string>& labels, int i, char prefix) {
  if (i < static_cast<int>(labels.size()) && !labels[i].empty()) {
    std::string s = labels[i];
    for (char& c : s) {
      if (c == ' ' || c == '\t') c = '_';
    }
    return s;
  }
  return std::string(1, prefix) + std::to_string(i);
}

}  // namespace

void write_mps(const LinearProgram& lp, std::ostream& out, const std::string& name) {
  out << std::setprecision(17);
  out << "NAME " << name << "\n";
  out << "ROWS\n";
  out << " N obj\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const char tag = lp.rows[i].sense == Sense::kLessEqual ? 'L'
                     : lp.rows[i].sense == Sense::kGreaterEqual ? 'G' : 'E';
    out << ' ' << tag << ' ' << name_or_index(lp.row_labels, i, 'R') << "\n";
  }
  // Column-major listing of the coefficients.
  std::vector<std::vector<Term>> cols(lp.num_vars());
  for (int i = 0; i < lp.num_rows(); ++i) {
    for (const auto& t : lp.rows[i].terms) cols[t.var].push_back({i, t.coef});
  }
  out << "COLUMNS\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const std::string col = name_or_index(lp.var_labels, j, 'C');
    if (lp.objective[j] != 0.0) out << "    " << col << " obj " << lp.objective[j] << "\n";
    for (const auto& t : cols[j]) {
      out << "    " << col << ' ' << name_or_index(lp.row_labels, t.var, 'R') << ' ' << t.coef << "\n";
    }
    if (lp.objective[j] == 0.0 && cols[j].empty()) out << "    " << col << " obj 0\n";
  }
  out << "RHS\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (lp.rows[i].rhs != 0.0) {
      out << "    rhs " << name_or_index(lp.row_labels, i, 'R') << ' ' << lp.rows[i].rhs << "\n";
    }
  }
  out << "BOUNDS\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const std::string col = name_or_index(lp.var_labels, j, 'C');
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (lo == hi) {
      out << " FX bnd " << col << ' ' << lo << "\n";
      continue;
    }
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      out << " FR bnd " << col << "\n";
      continue;
    }
    if (!std::isfinite(lo)) {
      out << " MI bnd " << col << "\n";
    } else if (lo != 0.0) {
      out << " LO bnd " << col << ' ' << lo << "\n";
    }
    if (std::isfinite(hi)) out << " UP bnd " << col << ' ' << hi << "\n";
  }
  out << "ENDATA\n";
}

void dump_lp(const LinearProgram& lp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write LP dump " + path);
  write_mps(lp, out);
}

}  // namespace chp::lp
