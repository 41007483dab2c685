#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "earcp/core.hpp"
#include "earcp/stream.hpp"

namespace earcp {

/// Reads a long-format expert stream:
///
///   step,expert_id,p_0,...,p_{d-1}
///   1,0,0.7,0.3
///   1,1,0.2,0.8
///   1,target,1,0
///   2,0,...
///
/// Every step has one row per expert (ids 0..M-1, any order) and one row
/// whose second column is the literal `target`. Rows of a step are
/// contiguous and steps strictly increase. An optional second header line
/// `step,target,y_0,...,y_{d-1}` is accepted. In classification mode each
/// row must sum to 1 within 1e-6 and is renormalized if it is off by more
/// than 1e-9. Violations raise IngestError with the offending line.
class CsvStreamReader {
 public:
  CsvStreamReader(std::istream& in, TaskMode mode, std::size_t m, std::size_t d);

  std::optional<StreamStep> next();

 private:
  struct Row {
    std::size_t line = 0;
    std::uint64_t step = 0;
    std::optional<std::size_t> expert;  // nullopt for the target row
    std::vector<double> values;
  };

  std::optional<Row> read_row();
  Row parse_row(const std::string& text) const;

  std::istream& in_;
  TaskMode mode_;
  std::size_t m_;
  std::size_t d_;
  std::size_t line_ = 0;
  std::optional<Row> lookahead_;
  std::optional<std::uint64_t> last_step_;
};

/// Prediction dimension declared by a stream file's header line.
std::size_t csv_dimension(const std::string& header);

std::vector<StreamStep> ingest_csv(const std::filesystem::path& path, TaskMode mode,
                                   std::size_t m, std::size_t d);

/// Writes steps in the format CsvStreamReader reads (17 significant digits).
void write_stream_header(std::ostream& out, std::size_t d);
void write_stream_step(std::ostream& out, const StreamStep& step);
void write_stream_csv(std::ostream& out, std::span<const StreamStep> steps);

}  // namespace earcp
