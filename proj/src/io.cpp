// io.cpp

#include "icmkit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace icmkit {

namespace {

using nlohmann::json;

json parse_or_throw(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw io_error(std::string("JSON parse error: ") + err.what());
  }
}

Matrix matrix_from_json(const json& node) {
  try {
    const Index rows = node.at("rows").get<Index>();
    const Index cols = node.at("cols").get<Index>();
    const auto& entries = node.at("entries");
    if (rows < 1 || cols < 1 || static_cast<Index>(entries.size()) != rows * cols) {
      throw io_error("matrix JSON: entry count does not match rows*cols");
    }
    Matrix a(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) {
        const auto& cell = entries.at(static_cast<std::size_t>(r * cols + c));
        a(r, c) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
      }
    }
    return a;
  } catch (const json::exception& err) {
    throw io_error(std::string("matrix JSON: ") + err.what());
  }
}

void append_entries(std::string& out, const Matrix& a) {
  out += '[';
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) {
      if (r != 0 || c != 0) {
        out += ',';
      }
      out += '[';
      out += format_double(a(r, c).real());
      out += ',';
      out += format_double(a(r, c).imag());
      out += ']';
    }
  }
  out += ']';
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string format_complex(Complex value) {
  std::string out = format_double(value.real());
  const double imag = value.imag();
  if (imag >= 0.0 || std::isnan(imag)) {
    out += '+';
    out += format_double(imag);
  } else {
    out += '-';
    out += format_double(-imag);
  }
  out += 'j';
  return out;
}

Complex parse_complex(const std::string& text) {
  const std::string trimmed = [&] {
    const auto first = text.find_first_not_of(" \t");
    const auto last = text.find_last_not_of(" \t");
    return first == std::string::npos ? std::string() : text.substr(first, last - first + 1);
  }();
  if (trimmed.empty()) {
    throw io_error("parse_complex: empty input");
  }
  std::size_t split = std::string::npos;
  for (std::size_t i = trimmed.size(); i-- > 1;) {
    const char c = trimmed[i];
    if ((c == '+' || c == '-') && trimmed[i - 1] != 'e' && trimmed[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const auto to_double = [](const std::string& part) {
    std::size_t used = 0;
    const double value = std::stod(part, &used);
    if (used != part.size()) {
      throw io_error("parse_complex: trailing characters in '" + part + "'");
    }
    return value;
  };
  try {
    if (trimmed.back() == 'j' || trimmed.back() == 'i') {
      const std::string body = trimmed.substr(0, trimmed.size() - 1);
      if (split == std::string::npos) {
        // Pure imaginary: "2j", "-j".
        if (body.empty() || body == "+" || body == "-") {
          return Complex(0.0, body == "-" ? -1.0 : 1.0);
        }
        return Complex(0.0, to_double(body));
      }
      const std::string imag_part = body.substr(split);
      const double imag = (imag_part == "+" || imag_part == "-")
                              ? (imag_part == "-" ? -1.0 : 1.0)
                              : to_double(imag_part);
      return Complex(to_double(body.substr(0, split)), imag);
    }
    return Complex(to_double(trimmed), 0.0);
  } catch (const std::exception& err) {
    throw io_error("parse_complex: cannot parse '" + text + "'");
  }
}

std::string matrix_json(const Matrix& a) {
  std::string out = "{\"rows\":" + std::to_string(a.rows()) +
                    ",\"cols\":" + std::to_string(a.cols()) + ",\"entries\":";
  append_entries(out, a);
  out += '}';
  return out;
}

std::string matrix_csv(const Matrix& a) {
  std::string out;
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) {
      if (c != 0) {
        out += ',';
      }
      out += format_complex(a(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string povm_json(const Povm& povm) {
  std::string out = "{\"dim\":" + std::to_string(povm.dim) +
                    ",\"complete\":" + (povm.complete ? "true" : "false") + ",\"effects\":[";
  for (std::size_t i = 0; i < povm.effects.size(); ++i) {
    if (i != 0) {
      out += ',';
    }
    out += matrix_json(povm.effects[i].matrix);
  }
  out += "]}";
  return out;
}

std::string family_json(const BasisFamily& fam) {
  std::string out = "{\"dim\":" + std::to_string(fam.dim) + ",\"bases\":[";
  for (std::size_t b = 0; b < fam.bases.size(); ++b) {
    if (b != 0) {
      out += ',';
    }
    out += '[';
    for (std::size_t k = 0; k < fam.bases[b].size(); ++k) {
      if (k != 0) {
        out += ',';
      }
      append_entries(out, fam.bases[b][k]);
    }
    out += ']';
  }
  out += "]}";
  return out;
}

std::string verify_report_json(const VerifyReport& report) {
  std::string out = "{\"rank\":" + std::to_string(report.ic.rank) +
                    ",\"required\":" + std::to_string(report.ic.required) +
                    ",\"is_ic\":" + (report.ic.is_ic ? "true" : "false") +
                    ",\"effect_count\":" + std::to_string(report.ic.effect_count) +
                    ",\"frame_potential\":";
  out += report.frame_potential ? format_double(*report.frame_potential) : "null";
  out += ",\"trace_averages\":[";
  for (std::size_t i = 0; i < report.balance.averages.size(); ++i) {
    if (i != 0) {
      out += ',';
    }
    out += format_double(report.balance.averages[i]);
  }
  out += "],\"trace_balanced\":";
  out += report.balance.balanced ? "true" : "false";
  out += ",\"trace_optimal\":";
  out += report.trace_optimal ? "true" : "false";
  out += '}';
  return out;
}

std::string tomography_report_json(const TomographyReport& report) {
  std::string out = "{\"hs_error\":" + format_double(report.hs_error) +
                    ",\"trace_error\":" + format_double(report.trace_error) +
                    ",\"residual\":" + format_double(report.residual) + ",\"shots\":";
  out += report.shots ? std::to_string(*report.shots) : "null";
  out += ",\"estimate\":" + matrix_json(report.estimate.matrix);
  out += '}';
  return out;
}

std::string distribution_csv(const OutcomeDistribution& dist) {
  std::string out = dist.shots ? "index,frequency\n" : "index,probability\n";
  for (Index i = 0; i < dist.probs.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(dist.probs(i));
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "n,rank,required,is_ic,seconds\n";
  for (const auto& row : rows) {
    out += std::to_string(row.n) + ',' + std::to_string(row.rank) + ',' +
           std::to_string(row.required) + ',' + (row.is_ic ? "true" : "false") + ',' +
           format_double(row.seconds) + '\n';
  }
  return out;
}

std::string survey_csv(const std::vector<VolumeSurveyRow>& rows) {
  std::string out = "n,scheme,seed,log10_volume,volume,operator_count\n";
  for (const auto& row : rows) {
    out += std::to_string(row.n) + ',' + row.scheme + ',';
    if (row.seed) {
      out += std::to_string(*row.seed);
    }
    out += ',' + format_double(row.report.log10_volume) + ',' + format_double(row.report.volume) +
           ',' + std::to_string(row.report.operator_count) + '\n';
  }
  return out;
}

Matrix parse_matrix_json(const std::string& text) {
  return matrix_from_json(parse_or_throw(text));
}

Povm parse_povm_json(const std::string& text) {
  const json node = parse_or_throw(text);
  try {
    Povm povm;
    povm.dim = node.at("dim").get<Index>();
    povm.complete = node.at("complete").get<bool>();
    for (const auto& effect : node.at("effects")) {
      povm.effects.push_back(Effect{matrix_from_json(effect)});
    }
    return povm;
  } catch (const json::exception& err) {
    throw io_error(std::string("POVM JSON: ") + err.what());
  }
}

BasisFamily parse_family_json(const std::string& text) {
  const json node = parse_or_throw(text);
  try {
    BasisFamily fam;
    fam.dim = node.at("dim").get<Index>();
    for (const auto& basis_node : node.at("bases")) {
      std::vector<Vector> basis;
      for (const auto& ket_node : basis_node) {
        Vector ket(static_cast<Index>(ket_node.size()));
        for (Index c = 0; c < ket.size(); ++c) {
          const auto& cell = ket_node.at(static_cast<std::size_t>(c));
          ket(c) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
        basis.push_back(std::move(ket));
      }
      fam.bases.push_back(std::move(basis));
    }
    return fam;
  } catch (const json::exception& err) {
    throw io_error(std::string("basis family JSON: ") + err.what());
  }
}

std::variant<Povm, BasisFamily> parse_measurement_json(const std::string& text) {
  const json node = parse_or_throw(text);
  if (node.contains("effects")) {
    return parse_povm_json(text);
  }
  if (node.contains("bases")) {
    return parse_family_json(text);
  }
  throw io_error("measurement JSON: expected an \"effects\" or \"bases\" key");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw io_error("cannot open " + path + " for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw io_error("failed while reading " + path);
  }
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw io_error("cannot open " + path + " for writing");
  }
  out << content;
  if (!out.good()) {
    throw io_error("failed while writing " + path);
  }
}

}  // namespace icmkit
