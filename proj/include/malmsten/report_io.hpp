#ifndef MALMSTEN_REPORT_IO_HPP
#define MALMSTEN_REPORT_IO_HPP

// JSON and CSV serialization of command output.
//
// JSON: one top-level object with keys in insertion order.  Floating-point values
// are written with 17 significant digits and always carry a decimal point or
// exponent, so they parse back as the same binary64 value.  Non-finite values are
// stored as the strings "NaN", "Infinity", "-Infinity" (see json_number).
//
// CSV: RFC 4180 -- comma separated, CRLF record terminator, fields containing a
// comma, double quote, CR or LF are enclosed in double quotes with embedded quotes
// doubled.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "malmsten/proofchain.hpp"
#include "malmsten/quad.hpp"

namespace malmsten::io {

using Json = nlohmann::ordered_json;

/// 17-significant-digit text for a finite double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

/// JSON value for a double; non-finite values become their string spelling.
inline Json json_number(double v) {
  if (!std::isfinite(v)) return format_double(v);
  return v;
}

namespace detail {

inline void emit(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        emit(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        emit(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : Json(format_double(v)).dump();
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Compact JSON text with %.17g floats.
inline std::string to_json_text(const Json& j) {
  std::string out;
  detail::emit(j, out);
  return out;
}

/// One command invocation: what was asked, what came back, how long it took.
struct OutputRecord {
  std::string command;
  Json parameters = Json::object();
  Json results = Json::object();
  double timing_ms = 0.0;

  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

inline std::string serialize_json(const OutputRecord& r) {
  Json j = Json::object();
  j["command"] = r.command;
  j["parameters"] = r.parameters;
  j["results"] = r.results;
  j["timing_ms"] = json_number(r.timing_ms);
  return to_json_text(j);
}

/// Inverse of serialize_json.  Throws std::invalid_argument on malformed text.
inline OutputRecord parse_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("command") || !j.contains("parameters") || !j.contains("results") ||
      !j.contains("timing_ms") || !j["command"].is_string() || !j["timing_ms"].is_number()) {
    throw std::invalid_argument("JSON is not an output record");
  }
  OutputRecord r;
  r.command = j["command"].get<std::string>();
  r.parameters = j["parameters"];
  r.results = j["results"];
  r.timing_ms = j["timing_ms"].get<double>();
  return r;
}

inline Json to_json(const quad::QuadratureResult& q) {
  Json j = Json::object();
  j["value"] = json_number(q.value);
  j["error_estimate"] = json_number(q.error_estimate);
  j["evaluations"] = q.evaluations;
  j["converged"] = q.converged;
  j["levels"] = q.levels;
  return j;
}

inline Json to_json(const proofchain::ParamList& params) {
  Json j = Json::object();
  for (const auto& [k, v] : params) j[k] = json_number(v);
  return j;
}

inline Json to_json(const proofchain::IdentityReport& r) {
  Json j = Json::object();
  j["name"] = r.name;
  j["params"] = to_json(r.params);
  j["lhs"] = json_number(r.lhs);
  j["rhs"] = json_number(r.rhs);
  j["abs_err"] = json_number(r.abs_err);
  j["rel_err"] = json_number(r.rel_err);
  j["tol"] = json_number(r.tol);
  j["converged"] = r.converged;
  j["pass"] = r.pass;
  j["evaluations"] = r.evaluations;
  j["note"] = r.note;
  if (!r.substeps.empty()) {
    Json subs = Json::array();
    for (const auto& s : r.substeps) subs.push_back(to_json(s));
    j["substeps"] = std::move(subs);
  }
  return j;
}

inline Json to_json(const proofchain::ChainReport& c) {
  Json j = Json::object();
  j["overall_pass"] = c.overall_pass;
  j["total_evaluations"] = c.total_evaluations;
  Json steps = Json::array();
  for (const auto& s : c.steps) steps.push_back(to_json(s));
  j["steps"] = std::move(steps);
  Json skipped = Json::array();
  for (const auto& s : c.skipped) {
    Json k = Json::object();
    k["name"] = s.name;
    k["params"] = to_json(s.params);
    k["reason"] = s.reason;
    skipped.push_back(std::move(k));
  }
  j["skipped"] = std::move(skipped);
  return j;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
  return out;
}

/// Parses RFC 4180 text (CRLF or bare LF terminators).  Throws std::invalid_argument
/// on an unterminated quoted field or stray quote.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
          if (i + 1 < text.size() && text[i + 1] != ',' && text[i + 1] != '\r' && text[i + 1] != '\n') {
            throw std::invalid_argument("CSV: unexpected character after closing quote");
          }
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      if (field_started) throw std::invalid_argument("CSV: quote inside unquoted field");
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_row();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) throw std::invalid_argument("CSV: unterminated quoted field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

inline std::string format_params(const proofchain::ParamList& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + "=" + format_double(v);
  }
  return out;
}

inline const std::vector<std::string>& report_csv_header() {
  static const std::vector<std::string> header = {"step", "params",    "lhs",  "rhs",         "abs_err", "rel_err",
                                                  "tol",  "converged", "pass", "evaluations", "note"};
  return header;
}

inline std::vector<std::string> report_csv_fields(const proofchain::IdentityReport& r, const std::string& prefix = {}) {
  return {prefix + r.name,
          format_params(r.params),
          format_double(r.lhs),
          format_double(r.rhs),
          format_double(r.abs_err),
          format_double(r.rel_err),
          format_double(r.tol),
          r.converged ? "true" : "false",
          r.pass ? "true" : "false",
          std::to_string(r.evaluations),
          r.note};
}

/// One row per step; sub-checks follow their parent as "parent.sub".
inline std::string chain_csv(const proofchain::ChainReport& c) {
  std::string out = csv_row(report_csv_header());
  for (const auto& s : c.steps) {
    out += csv_row(report_csv_fields(s));
    for (const auto& sub : s.substeps) out += csv_row(report_csv_fields(sub, s.name + "."));
  }
  return out;
}

}  // namespace malmsten::io

#endif  // MALMSTEN_REPORT_IO_HPP
