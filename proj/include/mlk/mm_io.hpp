#ifndef MLK_MM_IO_HPP
#define MLK_MM_IO_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlk/csr.hpp"
#include "mlk/dense.hpp"

namespace mlk {

/// Parse failure carrying the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::int64_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MmFormat { coordinate, array };
enum class MmField { real, complex_, integer, pattern };
enum class MmSymmetry { general, symmetric, skew_symmetric, hermitian };

struct MmHeader {
  MmFormat format = MmFormat::coordinate;
  MmField field = MmField::real;
  MmSymmetry symmetry = MmSymmetry::general;
};

/// Parsed Matrix Market content with symmetry already expanded to general
/// storage (entries are 0-based, values promoted to complex).
struct MmData {
  MmHeader header;
  std::int64_t nrows = 0;
  std::int64_t ncols = 0;
  std::vector<Triplet<std::complex<double>>> entries;

  bool is_complex() const { return header.field == MmField::complex_; }
  bool is_vector() const { return ncols == 1; }
};

MmData parse_matrix_market(std::istream& in);
MmData parse_matrix_market_file(const std::string& path);

/// Serialize as coordinate-format general storage (round-trip form).
void write_matrix_market(std::ostream& out, const MmData& data);

template <class S>
CsrMatrix<S> mm_to_csr(const MmData& data) {
  std::vector<Triplet<S>> t;
  t.reserve(data.entries.size());
  for (const auto& [r, c, v] : data.entries) {
    if constexpr (scalar_traits<S>::is_complex) {
      t.emplace_back(r, c, v);
    } else {
      if (v.imag() != 0.0)
        throw std::invalid_argument("mm_to_csr: complex data in real context");
      t.emplace_back(r, c, v.real());
    }
  }
  return csr_from_triplets<S>(data.nrows, data.ncols, std::move(t));
}

template <class S>
DenseVector<S> mm_to_vector(const MmData& data) {
  if (!data.is_vector())
    throw std::invalid_argument("mm_to_vector: object is not N-by-1");
  DenseVector<S> v(static_cast<std::size_t>(data.nrows), S{});
  for (const auto& [r, c, val] : data.entries) {
    (void)c;
    if constexpr (scalar_traits<S>::is_complex)
      v[r] = val;
    else
      v[r] = val.real();
  }
  return v;
}

/// The right-hand side for a run: the given file when present, else b = A*1.
template <class S>
DenseVector<S> load_rhs_or_default(const CsrMatrix<S>& A, const std::string& rhs_path) {
  if (rhs_path.empty()) {
    DenseVector<S> ones(static_cast<std::size_t>(A.ncols), S{1});
    return spmv(A, ones);
  }
  MmData data = parse_matrix_market_file(rhs_path);
  DenseVector<S> b = mm_to_vector<S>(data);
  if (static_cast<std::int64_t>(b.size()) != A.nrows)
    throw std::invalid_argument("load_rhs_or_default: rhs length mismatch");
  return b;
}

}  // namespace mlk

#endif  // MLK_MM_IO_HPP
