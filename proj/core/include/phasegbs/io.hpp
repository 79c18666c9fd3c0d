#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "phasegbs/clicks.hpp"
#include "phasegbs/network.hpp"
#include "phasegbs/validation.hpp"

namespace phasegbs {

/// "%.17g": 17 significant digits, enough for any double to round-trip.
std::string format_number(double x);

/// Transmission matrix text format: first line "rows cols", then `rows` lines
/// of `cols` whitespace-separated "re im" pairs. Throws InputError naming the
/// offending line.
TransmissionMatrix read_transmission_matrix(std::istream& in, bool declared_unitary = false);
TransmissionMatrix load_transmission_matrix(const std::filesystem::path& path,
                                            bool declared_unitary = false);
void write_transmission_matrix(std::ostream& out, const CMatrix& matrix);

/// Whitespace-separated squeezing parameters r_j, one per input mode.
std::vector<double> read_squeezing_vector(std::istream& in);
std::vector<double> load_squeezing_vector(const std::filesystem::path& path);

/// Distribution CSV: optional "# " comment lines, a header
/// m_1,...,m_d,probability,std_error,imag[,count], then one row per
/// multi-index in row-major order.
void write_distribution_csv(std::ostream& out, const GroupedDistribution& dist,
                            std::span<const std::string> comments = {});

/// Reads a distribution CSV back. Group sizes are recovered from the largest
/// index in each m column, so the partition is sequential.
GroupedDistribution read_distribution_csv(std::istream& in);

/// Comparison CSV: m_1..m_d, theory, theory_error, reference, reference_error,
/// count, z, retained.
void write_comparison_csv(std::ostream& out, const GroupPartition& partition,
                          const BinnedComparison& comparison, const ZScores& z,
                          std::span<const std::string> comments = {});

/// Writes `text` to `path`, creating parent directories. Throws
/// std::runtime_error when the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace phasegbs
