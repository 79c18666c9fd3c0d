#include "phasegbs/io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace phasegbs {

namespace {

std::string line_error(const std::string& what, std::size_t line) {
  return what + " (line " + std::to_string(line) + ")";
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    // stod rejects "nan"/"inf" spellings on some platforms; accept the ones we write.
    if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
    throw InputError(line_error("not a number: '" + s + "'", line));
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

TransmissionMatrix read_transmission_matrix(std::istream& in, bool declared_unitary) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    std::istringstream ss(line);
    long long r = 0;
    long long c = 0;
    std::string rest;
    if (!(ss >> r >> c) || (ss >> rest) || r <= 0 || c <= 0) {
      throw InputError(line_error("expected a header 'rows cols' with positive sizes", line_no));
    }
    rows = static_cast<std::size_t>(r);
    cols = static_cast<std::size_t>(c);
    break;
  }
  if (rows == 0) throw InputError("transmission matrix file is empty");

  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::size_t row = 0;
  while (row < rows && std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    std::istringstream ss(line);
    std::vector<double> values;
    std::string token;
    while (ss >> token) values.push_back(parse_double(token, line_no));
    if (values.size() != 2 * cols) {
      throw InputError(line_error("expected " + std::to_string(cols) + " 're im' pairs, got " +
                                      std::to_string(values.size()) + " numbers",
                                  line_no));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) =
          Complex(values[2 * c], values[2 * c + 1]);
    }
    ++row;
  }
  if (row != rows) {
    throw InputError("transmission matrix file has " + std::to_string(row) + " rows, header says " +
                     std::to_string(rows));
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!blank(line)) throw InputError(line_error("unexpected data after the last row", line_no));
  }
  return TransmissionMatrix(std::move(m), declared_unitary);
}

TransmissionMatrix load_transmission_matrix(const std::filesystem::path& path,
                                            bool declared_unitary) {
  auto in = open_input(path);
  try {
    return read_transmission_matrix(in, declared_unitary);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_transmission_matrix(std::ostream& out, const CMatrix& matrix) {
  out << matrix.rows() << ' ' << matrix.cols() << '\n';
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_number(matrix(i, j).real()) << ' ' << format_number(matrix(i, j).imag());
    }
    out << '\n';
  }
}

std::vector<double> read_squeezing_vector(std::istream& in) {
  std::vector<double> r;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string token;
    while (ss >> token) r.push_back(parse_double(token, line_no));
  }
  if (r.empty()) throw InputError("squeezing file contains no values");
  return r;
}

std::vector<double> load_squeezing_vector(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_squeezing_vector(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_distribution_csv(std::ostream& out, const GroupedDistribution& dist,
                            std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  const std::size_t d = dist.partition.group_count();
  for (std::size_t j = 0; j < d; ++j) out << "m_" << (j + 1) << ',';
  out << "probability,std_error,imag";
  if (dist.counts) out << ",count";
  out << '\n';
  for (std::size_t flat = 0; flat < dist.size(); ++flat) {
    for (std::size_t m : dist.multi_index(flat)) out << m << ',';
    out << format_number(dist.probability[flat]) << ',' << format_number(dist.std_error[flat])
        << ',' << format_number(dist.imag[flat]);
    if (dist.counts) out << ',' << format_number((*dist.counts)[flat]);
    out << '\n';
  }
}

GroupedDistribution read_distribution_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line) || line.rfind('#', 0) == 0) continue;
    header = split_csv(line);
    break;
  }
  if (header.empty()) throw InputError("distribution CSV has no header");
  std::size_t d = 0;
  while (d < header.size() && header[d] == "m_" + std::to_string(d + 1)) ++d;
  if (d == 0 || header.size() < d + 3 || header[d] != "probability" ||
      header[d + 1] != "std_error" || header[d + 2] != "imag") {
    throw InputError(line_error("unrecognised distribution CSV header", line_no));
  }
  const bool has_counts = header.size() == d + 4 && header[d + 3] == "count";
  if (header.size() != d + 3 && !has_counts) {
    throw InputError(line_error("unrecognised distribution CSV header", line_no));
  }

  struct Row {
    std::vector<std::size_t> m;
    double p, e, im, count;
  };
  std::vector<Row> rows;
  std::vector<std::size_t> sizes(d, 0);
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line) || line.rfind('#', 0) == 0) continue;
    const auto f = split_csv(line);
    if (f.size() != header.size()) throw InputError(line_error("wrong number of fields", line_no));
    Row row;
    for (std::size_t j = 0; j < d; ++j) {
      const double v = parse_double(f[j], line_no);
      if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
        throw InputError(line_error("click count must be a non-negative integer", line_no));
      }
      row.m.push_back(static_cast<std::size_t>(v));
      sizes[j] = std::max(sizes[j], row.m.back());
    }
    row.p = parse_double(f[d], line_no);
    row.e = parse_double(f[d + 1], line_no);
    row.im = parse_double(f[d + 2], line_no);
    row.count = has_counts ? parse_double(f[d + 3], line_no) : 0.0;
    rows.push_back(std::move(row));
  }
  std::size_t total = 0;
  for (std::size_t s : sizes) total += s;
  GroupedDistribution dist(GroupPartition::sequential(sizes, total));
  if (rows.size() != dist.size()) {
    throw InputError("distribution CSV has " + std::to_string(rows.size()) + " rows, expected " +
                     std::to_string(dist.size()));
  }
  if (has_counts) dist.counts = std::vector<double>(dist.size(), 0.0);
  for (const auto& row : rows) {
    const std::size_t flat = dist.flat_index(row.m);
    dist.probability[flat] = row.p;
    dist.std_error[flat] = row.e;
    dist.imag[flat] = row.im;
    if (has_counts) (*dist.counts)[flat] = row.count;
  }
  return dist;
}

void write_comparison_csv(std::ostream& out, const GroupPartition& partition,
                          const BinnedComparison& comparison, const ZScores& z,
                          std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  GroupedDistribution shape(partition);
  if (shape.size() != comparison.bins.size()) {
    throw InputError("comparison does not match the partition");
  }
  for (std::size_t j = 0; j < partition.group_count(); ++j) out << "m_" << (j + 1) << ',';
  out << "theory,theory_error,reference,reference_error,count,z,retained\n";
  for (std::size_t i = 0; i < comparison.bins.size(); ++i) {
    const auto& b = comparison.bins[i];
    for (std::size_t m : shape.multi_index(i)) out << m << ',';
    out << format_number(b.theory) << ',' << format_number(b.theory_error) << ','
        << format_number(b.reference) << ',' << format_number(b.reference_error) << ','
        << (b.count ? format_number(*b.count) : std::string()) << ',' << format_number(z.z[i])
        << ',' << (z.retained[i] ? 1 : 0) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace phasegbs
