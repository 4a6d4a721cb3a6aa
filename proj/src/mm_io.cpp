#include "mlk/mm_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace mlk {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

MmHeader parse_banner(const std::string& line, std::int64_t lineno) {
  std::istringstream ss(line);
  std::string tag, object, format, field, symmetry;
  ss >> tag >> object >> format >> field >> symmetry;
  if (lower(tag) != "%%matrixmarket") throw ParseError("bad banner tag", lineno);
  if (lower(object) != "matrix") throw ParseError("unsupported object '" + object + "'", lineno);
  MmHeader h;
  const std::string fmt = lower(format);
  if (fmt == "coordinate")
    h.format = MmFormat::coordinate;
  else if (fmt == "array")
    h.format = MmFormat::array;
  else
    throw ParseError("unknown format '" + format + "'", lineno);
  const std::string fld = lower(field);
  if (fld == "real")
    h.field = MmField::real;
  else if (fld == "complex")
    h.field = MmField::complex_;
  else if (fld == "integer")
    h.field = MmField::integer;
  else if (fld == "pattern")
    h.field = MmField::pattern;
  else
    throw ParseError("unknown field '" + field + "'", lineno);
  const std::string sym = lower(symmetry);
  if (sym == "general")
    h.symmetry = MmSymmetry::general;
  else if (sym == "symmetric")
    h.symmetry = MmSymmetry::symmetric;
  else if (sym == "skew-symmetric")
    h.symmetry = MmSymmetry::skew_symmetric;
  else if (sym == "hermitian")
    h.symmetry = MmSymmetry::hermitian;
  else
    throw ParseError("unknown symmetry '" + symmetry + "'", lineno);
  return h;
}

}  // namespace

MmData parse_matrix_market(std::istream& in) {
  std::string line;
  std::int64_t lineno = 0;

  if (!std::getline(in, line)) throw ParseError("empty stream, missing banner", 1);
  ++lineno;
  MmData data;
  data.header = parse_banner(line, lineno);

  // Skip comments and blank lines up to the size line.
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    break;
  }
  std::istringstream size_ss(line);
  std::int64_t declared_nnz = 0;
  if (data.header.format == MmFormat::coordinate) {
    if (!(size_ss >> data.nrows >> data.ncols >> declared_nnz))
      throw ParseError("bad coordinate size line", lineno);
  } else {
    if (!(size_ss >> data.nrows >> data.ncols))
      throw ParseError("bad array size line", lineno);
    if (data.header.field == MmField::pattern)
      throw ParseError("array format cannot be pattern", lineno);
    if (data.ncols != 1)
      throw ParseError("array format supported for N-by-1 objects only", lineno);
    declared_nnz = data.nrows * data.ncols;
  }
  if (data.nrows < 0 || data.ncols < 0) throw ParseError("negative dimensions", lineno);

  std::int64_t seen = 0;
  std::int64_t array_pos = 0;
  while (seen < declared_nnz && std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream ss(line);
    std::int64_t r, c;
    std::complex<double> v;
    if (data.header.format == MmFormat::coordinate) {
      if (!(ss >> r >> c)) throw ParseError("bad entry indices", lineno);
      switch (data.header.field) {
        case MmField::pattern:
          v = 1.0;
          break;
        case MmField::complex_: {
          double re, im;
          if (!(ss >> re >> im)) throw ParseError("bad complex entry", lineno);
          v = {re, im};
          break;
        }
        default: {
          double re;
          if (!(ss >> re)) throw ParseError("bad numeric entry", lineno);
          v = re;
          break;
        }
      }
      if (r < 1 || r > data.nrows || c < 1 || c > data.ncols)
        throw ParseError("index out of declared bounds", lineno);
      --r;
      --c;
    } else {
      r = array_pos++;
      c = 0;
      if (data.header.field == MmField::complex_) {
        double re, im;
        if (!(ss >> re >> im)) throw ParseError("bad complex entry", lineno);
        v = {re, im};
      } else {
        double re;
        if (!(ss >> re)) throw ParseError("bad numeric entry", lineno);
        v = re;
      }
    }
    ++seen;
    data.entries.emplace_back(r, c, v);
    // Symmetry expansion: mirror off-diagonal entries.
    switch (data.header.symmetry) {
      case MmSymmetry::general:
        break;
      case MmSymmetry::symmetric:
        if (r != c) data.entries.emplace_back(c, r, v);
        break;
      case MmSymmetry::hermitian:
        if (r != c) data.entries.emplace_back(c, r, std::conj(v));
        break;
      case MmSymmetry::skew_symmetric:
        if (r == c) throw ParseError("skew-symmetric diagonal entry", lineno);
        data.entries.emplace_back(c, r, -v);
        break;
    }
  }
  if (seen != declared_nnz)
    throw ParseError("entry count mismatch: declared " + std::to_string(declared_nnz) +
                         ", found " + std::to_string(seen),
                     lineno + 1);
  return data;
}

MmData parse_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const MmData& data) {
  const bool cplx = data.is_complex();
  out << "%%MatrixMarket matrix coordinate " << (cplx ? "complex" : "real")
      << " general\n";
  out << data.nrows << " " << data.ncols << " " << data.entries.size() << "\n";
  out << std::setprecision(17);
  for (const auto& [r, c, v] : data.entries) {
    out << (r + 1) << " " << (c + 1) << " " << v.real();
    if (cplx) out << " " << v.imag();
    out << "\n";
  }
}

}  // namespace mlk
