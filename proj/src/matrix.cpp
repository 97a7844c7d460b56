#include "mcond/matrix.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "mcond/errors.hpp"

namespace mcond {

namespace {

void check_dims(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
  if (rows > std::numeric_limits<std::size_t>::max() / cols) {
    throw std::length_error("matrix dimensions overflow");
  }
}

// Uniform in [-1, 1) from the top 53 bits; avoids the implementation-defined
// algorithm behind std::uniform_real_distribution.
double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

DenseMatrix uniform_matrix(std::size_t n, std::mt19937_64& rng) {
  DenseMatrix m(n, n);
  for (double& v : m.data()) v = uniform_pm1(rng);
  return m;
}

// Exponential-kernel correlation of random points in the unit square, then
// congruence-scaled by D so rows carry magnitudes near 1e-10 or near 2.
DenseMatrix scaled_correlation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::array<double, 2>> pts(n);
  for (auto& p : pts) p = {uniform01(rng), uniform01(rng)};
  std::vector<double> scale(n);
  for (double& d : scale) {
    const bool tiny = (rng() >> 63) != 0;
    const double u = uniform01(rng);
    d = tiny ? std::sqrt(1e-10 * (1.0 + u)) : std::sqrt(2.01 + 0.3 * u);
  }
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double dx = pts[i][0] - pts[j][0];
      const double dy = pts[i][1] - pts[j][1];
      double g = std::exp(-std::sqrt(dx * dx + dy * dy));
      if (i == j) g += 0.05;
      m(i, j) = scale[i] * g * scale[j];
      m(j, i) = m(i, j);
    }
  }
  return m;
}

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw FormatError(std::string("truncated header: missing ") + what);
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  check_dims(rows, cols);
  data_.assign(rows * cols, 0.0);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  check_dims(rows, cols);
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("matrix payload length does not match shape");
  }
  if (!std::all_of(data_.begin(), data_.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("matrix entries must be finite");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows ? rows.begin()->size() : 0;
  std::vector<double> values;
  values.reserve(n_rows * n_cols);
  for (const auto& r : rows) {
    if (r.size() != n_cols) throw std::invalid_argument("ragged rows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return DenseMatrix(n_rows, n_cols, std::move(values));
}

double DenseMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index");
  return (*this)(r, c);
}

bool bit_identical(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const auto x = a.data();
  const auto y = b.data();
  return std::memcmp(x.data(), y.data(), x.size_bytes()) == 0;
}

std::string_view to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::uniform_random: return "uniform-random";
    case MatrixKind::diagonally_dominant: return "diagonally-dominant";
    case MatrixKind::scaled_correlation: return "scaled-correlation";
    case MatrixKind::identity: return "identity";
    case MatrixKind::singular_planted: return "singular-planted";
  }
  return "unknown";
}

MatrixKind parse_matrix_kind(std::string_view name) {
  if (name == "uniform-random" || name == "uniform") {
    return MatrixKind::uniform_random;
  }
  if (name == "diagonally-dominant" || name == "diag-dominant") {
    return MatrixKind::diagonally_dominant;
  }
  if (name == "scaled-correlation" || name == "correlation") {
    return MatrixKind::scaled_correlation;
  }
  if (name == "identity") return MatrixKind::identity;
  if (name == "singular-planted" || name == "singular") {
    return MatrixKind::singular_planted;
  }
  throw InvalidSpec("unknown matrix kind: " + std::string(name));
}

DenseMatrix generate(const MatrixSpec& spec) {
  const std::size_t n = spec.size;
  if (n == 0) throw InvalidSpec("invalid size: matrix size must be >= 1");
  std::mt19937_64 rng(spec.seed);
  switch (spec.kind) {
    case MatrixKind::identity:
      return DenseMatrix::identity(n);
    case MatrixKind::uniform_random:
      return uniform_matrix(n, rng);
    case MatrixKind::diagonally_dominant: {
      DenseMatrix m = uniform_matrix(n, rng);
      for (std::size_t i = 0; i < n; ++i) m(i, i) += static_cast<double>(n);
      return m;
    }
    case MatrixKind::scaled_correlation:
      return scaled_correlation(n, rng);
    case MatrixKind::singular_planted: {
      if (n == 1) return DenseMatrix(1, 1);
      DenseMatrix m = uniform_matrix(n, rng);
      const std::size_t src = rng() % n;
      const std::size_t dst = (src + 1 + rng() % (n - 1)) % n;
      std::copy(m.row(src).begin(), m.row(src).end(), m.row(dst).begin());
      return m;
    }
  }
  throw InvalidSpec("unknown matrix kind");
}

int swap_columns(DenseMatrix& m, std::size_t j1, std::size_t j2) {
  if (j1 >= m.cols() || j2 >= m.cols()) {
    throw std::out_of_range("swap_columns: column index out of range");
  }
  if (j1 == j2) return 1;
  for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, j1), m(r, j2));
  return -1;
}

void write_matrix(const DenseMatrix& m, std::ostream& out) {
  out.write("MCND", 4);
  put_le<std::uint16_t>(out, kFormatVersion);
  put_le<std::uint64_t>(out, m.rows());
  put_le<std::uint64_t>(out, m.cols());
  for (double v : m.data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw FormatError("failed writing matrix payload");
}

DenseMatrix read_matrix(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || std::string_view(magic.data(), 4) != "MCND") {
    throw FormatError("bad magic: not an MCND matrix file");
  }
  const auto version = get_le<std::uint16_t>(in, "version");
  if (version != kFormatVersion) {
    throw FormatError("unsupported format version " + std::to_string(version));
  }
  const auto rows = get_le<std::uint64_t>(in, "row count");
  const auto cols = get_le<std::uint64_t>(in, "column count");
  if (rows == 0 || cols == 0) throw FormatError("zero matrix dimension");
  constexpr std::uint64_t max_entries =
      std::numeric_limits<std::uint64_t>::max() / sizeof(double);
  if (rows > max_entries / cols ||
      rows * cols > std::numeric_limits<std::size_t>::max() / sizeof(double)) {
    throw FormatError("dimension overflow: " + std::to_string(rows) + " x " +
                      std::to_string(cols));
  }
  const std::uint64_t count = rows * cols;
  std::vector<double> values;
  // Grow while reading so a lying header cannot force a huge allocation.
  values.reserve(std::min<std::uint64_t>(count, 1u << 20));
  std::array<unsigned char, 8> bytes{};
  for (std::uint64_t i = 0; i < count; ++i) {
    in.read(reinterpret_cast<char*>(bytes.data()), 8);
    if (in.gcount() != 8) {
      throw FormatError("truncated payload: expected " + std::to_string(count) +
                        " values, got " + std::to_string(i));
    }
    std::uint64_t raw = 0;
    for (std::size_t b = 0; b < 8; ++b) raw |= std::uint64_t{bytes[b]} << (8 * b);
    const double v = std::bit_cast<double>(raw);
    if (!std::isfinite(v)) {
      throw FormatError("non-finite value at payload index " + std::to_string(i));
    }
    values.push_back(v);
  }
  return DenseMatrix(rows, cols, std::move(values));
}

void write_matrix(const DenseMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_matrix(m, out);
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return read_matrix(in);
}

DenseMatrix parse_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.empty()) continue;
    std::size_t fields = 0;
    while (true) {
      const auto comma = line.find(',');
      const std::string_view cell = trim(line.substr(0, comma));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw FormatError("line " + std::to_string(line_no) + ": bad value '" +
                          std::string(cell) + "'");
      }
      values.push_back(v);
      ++fields;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(cols) + " values, got " +
                        std::to_string(fields));
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("empty CSV matrix");
  return DenseMatrix(rows, cols, std::move(values));
}

std::string to_csv(const DenseMatrix& m) {
  std::string out;
  std::array<char, 32> buf{};
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out.push_back(',');
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), m(r, c));
      out.append(buf.data(), res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

DenseMatrix read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_csv(path);
  return read_matrix(path);
}

}  // namespace mcond
