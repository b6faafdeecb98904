#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "harqcc/effective_capacity.hpp"
#include "harqcc/monte_carlo.hpp"

namespace harqcc {

// Invalid or inconsistent configuration input. `line` is the 1-based
// source line when the problem is tied to one, otherwise 0.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                          msg
                                    : msg),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// One parsed scenario file. `sweep` is absent when the file has no
// [sweep] section; commands that need one reject the config themselves.
struct ScenarioConfig {
  ScenarioSpec scenario;
  QosSpec qos{1.0, 1.0};
  std::optional<SweepSpec> sweep;
  SimPlan plan;
  OutageScheme outage_scheme = OutageScheme::kArq;
  int outage_k1 = 1;
  int outage_k2 = 1;
  bool seed_given = false;  // [sim] seed appeared explicitly
  std::string out_path;
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

// Generic numeric table with key=value metadata; the CSV shape used by
// every command. Columns are named; every row holds one value per column.
struct DataTable {
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;
};

// Serialization: `#`-prefixed comment lines carry params/columns/notes,
// data rows are comma-separated with 15 significant digits, LF endings.
std::string render_table_csv(const DataTable& t);
DataTable parse_table_csv(const std::string& text);

DataTable to_table(const CurveTable& c);
CurveTable to_curve(const DataTable& t);

// Square-matrix dump: `L=<n>` header line, then row-major rows. When
// `column_sums` is set a diagnostic comment with per-column totals is
// appended (used by the theta = 0 stochasticity check).
std::string render_matrix_csv(const CompanionMatrix& a, bool column_sums);
CompanionMatrix parse_matrix_csv(const std::string& text);

}  // namespace harqcc
