#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "zebra/detail/format.hpp"
#include "zebra/types.hpp"

namespace zebra {

// Selected by explicit flag only; file contents are never sniffed.
enum class ScoreFileFormat { LabeledTsv, SplitPair };

inline std::optional<ScoreFileFormat> score_file_format_from_string(
    std::string_view s) {
  if (s == "labeled-tsv") return ScoreFileFormat::LabeledTsv;
  if (s == "split-pair") return ScoreFileFormat::SplitPair;
  return std::nullopt;
}

enum class ReportFormat { Json, Text };

namespace detail {

// Calls fn(line_number, line) for every physical line; 1-based numbering,
// trailing '\r' stripped so CRLF input behaves like LF.
template <typename F>
inline void for_each_line(std::string_view text, F&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    pos = end + 1;
  }
}

inline bool is_space(char c) { return c == ' ' || c == '\t'; }

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

// from_chars reports result_out_of_range for overflow and underflow alike;
// tell them apart from the token itself. Underflow rounds to zero, overflow
// becomes +-inf so the ScoreSet validator can point at the offending entry.
inline double resolve_out_of_range(std::string_view field) {
  const bool negative = field.front() == '-';
  if (negative) field.remove_prefix(1);
  bool small = false;
  const std::size_t exp_pos = field.find_first_of("eE");
  if (exp_pos != std::string_view::npos) {
    small = exp_pos + 1 < field.size() && field[exp_pos + 1] == '-';
  } else {
    // no exponent: tiny iff every digit before the decimal point is zero
    const std::size_t point = field.find('.');
    small = field.find_first_of("123456789") > point;
  }
  const double magnitude = small ? 0.0 : HUGE_VAL;
  return negative ? -magnitude : magnitude;
}

// Locale-independent score parse.
inline bool parse_score(std::string_view field, double& out) {
  if (!field.empty() && field.front() == '+') {
    field.remove_prefix(1);
    if (field.empty() || field.front() == '+' || field.front() == '-') return false;
  }
  if (field.empty()) return false;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ptr != last) return false;
  if (ec == std::errc::result_out_of_range) {
    out = resolve_out_of_range(field);
    return true;
  }
  return ec == std::errc();
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline bool skippable(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && is_space(line[i])) ++i;
  return i == line.size() || line[i] == '#';
}

inline std::string format_2dp(double v) { return format_fixed(v, 2); }

}  // namespace detail

// `<label> <score>` per line, label in {mated, nonmated} (case-insensitive),
// separated by tabs or spaces; blank lines and lines starting with '#' are
// ignored.
inline ScoreSet parse_labeled_tsv(std::string_view text, std::string source_id) {
  std::vector<double> mated;
  std::vector<double> nonmated;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (detail::skippable(line)) return;
    const auto fields = detail::split_fields(line);
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected '<label> <score>', got " +
                                    std::to_string(fields.size()) + " field(s)");
    }
    const std::string label = detail::lower(fields[0]);
    double score = 0.0;
    if (!detail::parse_score(fields[1], score)) {
      throw ParseError(line_no, "invalid score '" + std::string(fields[1]) + "'");
    }
    if (label == "mated") {
      mated.push_back(score);
    } else if (label == "nonmated") {
      nonmated.push_back(score);
    } else {
      throw ParseError(line_no, "unknown label '" + std::string(fields[0]) +
                                    "' (want mated or nonmated)");
    }
  });
  return ScoreSet(std::move(mated), std::move(nonmated), std::move(source_id));
}

// Two plain score files, one value per line; same comment and blank rules.
inline ScoreSet parse_split_pair(std::string_view mated_text,
                                 std::string_view nonmated_text,
                                 std::string source_id) {
  const auto parse_column = [](std::string_view text, const char* which) {
    std::vector<double> scores;
    detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
      if (detail::skippable(line)) return;
      const auto fields = detail::split_fields(line);
      if (fields.size() != 1) {
        throw ParseError(line_no, std::string("expected one score per line in ") +
                                      which + " file");
      }
      double score = 0.0;
      if (!detail::parse_score(fields[0], score)) {
        throw ParseError(line_no, "invalid score '" + std::string(fields[0]) + "'");
      }
      scores.push_back(score);
    });
    return scores;
  };
  return ScoreSet(parse_column(mated_text, "mated"),
                  parse_column(nonmated_text, "nonmated"),
                  std::move(source_id));
}

inline std::string write_labeled_tsv(const ScoreSet& scores) {
  std::string out;
  for (double s : scores.mated()) {
    out += "mated\t";
    out += detail::format_17g(s);
    out += '\n';
  }
  for (double s : scores.nonmated()) {
    out += "nonmated\t";
    out += detail::format_17g(s);
    out += '\n';
  }
  return out;
}

// JSON carries full-precision values plus a two-decimal display block; the
// text form is the one-line tuple rendering.
inline std::string write_report(const ZebraReport& report, ReportFormat format) {
  if (format == ReportFormat::Text) {
    std::string out = report.source_id + ": (D_ECE=" +
                      detail::format_2dp(report.d_ece) + ", log10(l)=" +
                      detail::format_2dp(report.log10_l) +
                      ", tag=" + to_string(report.tag) + ")";
    if (report.cllr.has_value()) {
      out += " [baselines: Cllr=" + detail::format_2dp(*report.cllr) + " bits";
      if (report.eer.has_value()) {
        out += ", EER=" + detail::format_2dp(*report.eer * 100.0) + "%";
      }
      out += "]";
    }
    out += '\n';
    return out;
  }

  nlohmann::ordered_json j;
  j["source_id"] = report.source_id;
  j["d_ece"] = report.d_ece;
  j["log10_l"] = report.log10_l;
  j["tag"] = to_string(report.tag);
  if (report.cllr.has_value()) j["cllr"] = *report.cllr;
  if (report.eer.has_value()) j["eer"] = *report.eer;
  j["display"] = {{"d_ece_2dp", detail::format_2dp(report.d_ece)},
                  {"log10_l_2dp", detail::format_2dp(report.log10_l)}};
  return j.dump(2) + "\n";
}

inline ZebraReport parse_report_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report JSON: ") + e.what());
  }
  ZebraReport report;
  try {
    report.source_id = j.at("source_id").get<std::string>();
    report.d_ece = j.at("d_ece").get<double>();
    report.log10_l = j.at("log10_l").get<double>();
    const auto tag = tag_from_string(j.at("tag").get<std::string>());
    if (!tag.has_value()) {
      throw Error("unknown tag '" + j.at("tag").get<std::string>() + "'");
    }
    report.tag = *tag;
    if (j.contains("cllr")) report.cllr = j.at("cllr").get<double>();
    if (j.contains("eer")) report.eer = j.at("eer").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report JSON missing fields: ") + e.what());
  }
  return report;
}

}  // namespace zebra
