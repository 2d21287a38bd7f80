// JSON/CSV serialization used by the CLI. Numeric output is fixed at 17
// significant digits so identical runs are byte-identical.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "icmkit/constructions.hpp"
#include "icmkit/criteria.hpp"
#include "icmkit/measurement.hpp"
#include "icmkit/tomography.hpp"
#include "icmkit/types.hpp"

namespace icmkit {

std::string format_double(double value);
std::string format_complex(Complex value);  // "re+imj" / "re-imj"
Complex parse_complex(const std::string& text);

// Matrix JSON: {"rows": r, "cols": c, "entries": [[re, im], ...]} row-major.
std::string matrix_json(const Matrix& a);
// CSV variant: one "re+imj" cell per entry.
std::string matrix_csv(const Matrix& a);

// POVM JSON: {"dim": n, "complete": bool, "effects": [matrix, ...]}.
std::string povm_json(const Povm& povm);

// BasisFamily JSON: {"dim": n, "bases": [[ket-entries, ...], ...]}.
std::string family_json(const BasisFamily& fam);

struct VerifyReport {
  IcReport ic;
  std::optional<double> frame_potential;  // absent when kets are not rank-one
  TraceBalanceReport balance;
  bool trace_optimal = false;
};
std::string verify_report_json(const VerifyReport& report);

std::string tomography_report_json(const TomographyReport& report);

// Distribution CSV: index, probability (exact) or frequency (sampled).
std::string distribution_csv(const OutcomeDistribution& dist);

struct SweepRow {
  Index n = 0;
  Index rank = 0;
  Index required = 0;
  bool is_ic = false;
  double seconds = 0.0;
};
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Survey CSV columns: n, scheme, seed, log10_volume, volume, operator_count.
std::string survey_csv(const std::vector<VolumeSurveyRow>& rows);

Matrix parse_matrix_json(const std::string& text);
Povm parse_povm_json(const std::string& text);
BasisFamily parse_family_json(const std::string& text);
// Dispatches on the presence of an "effects" or "bases" key.
std::variant<Povm, BasisFamily> parse_measurement_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace icmkit
