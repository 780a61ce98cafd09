#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zebra {

// Base class of every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScoreClass { Mated, Nonmated };

inline const char* to_string(ScoreClass c) {
  return c == ScoreClass::Mated ? "mated" : "nonmated";
}

class EmptyClassError : public Error {
 public:
  explicit EmptyClassError(ScoreClass which)
      : Error(std::string("score set has no ") + to_string(which) + " scores"),
        which_(which) {}
  ScoreClass which() const noexcept { return which_; }

 private:
  ScoreClass which_;
};

class NonFiniteScoreError : public Error {
 public:
  NonFiniteScoreError(ScoreClass which, std::size_t index)
      : Error(std::string("non-finite ") + to_string(which) + " score at index " +
              std::to_string(index)),
        which_(which),
        index_(index) {}
  ScoreClass which() const noexcept { return which_; }
  std::size_t index() const noexcept { return index_; }

 private:
  ScoreClass which_;
  std::size_t index_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;  // 1-based physical line
};

class InvalidGridError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class TooLargeError : public Error {
 public:
  using Error::Error;
};

class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

class NegativeMagnitudeError : public Error {
 public:
  using Error::Error;
};

// Labeled raw classifier scores, split into the mated (same identity) and
// non-mated (different identities) pools. Duplicate scores are kept; the
// construction order of each pool is preserved. Immutable once built, so
// instances can be shared freely across threads.
class ScoreSet {
 public:
  ScoreSet(std::vector<double> mated, std::vector<double> nonmated,
           std::string source_id)
      : mated_(std::move(mated)),
        nonmated_(std::move(nonmated)),
        source_id_(std::move(source_id)) {
    if (mated_.empty()) throw EmptyClassError(ScoreClass::Mated);
    if (nonmated_.empty()) throw EmptyClassError(ScoreClass::Nonmated);
    check_finite(mated_, ScoreClass::Mated);
    check_finite(nonmated_, ScoreClass::Nonmated);
  }

  const std::vector<double>& mated() const noexcept { return mated_; }
  const std::vector<double>& nonmated() const noexcept { return nonmated_; }
  const std::string& source_id() const noexcept { return source_id_; }

 private:
  static void check_finite(const std::vector<double>& scores, ScoreClass which) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (!std::isfinite(scores[i])) throw NonFiniteScoreError(which, i);
    }
  }

  std::vector<double> mated_;
  std::vector<double> nonmated_;
  std::string source_id_;
};

inline ScoreSet validate_score_set(std::vector<double> mated,
                                   std::vector<double> nonmated,
                                   std::string source_id) {
  return ScoreSet(std::move(mated), std::move(nonmated), std::move(source_id));
}

// Oracle-calibrated natural-log likelihood ratios, one per original score and
// in the order the scores were given. All values are finite; sorting the
// originating scores ascending sorts these non-decreasing.
struct CalibratedLLRs {
  std::vector<double> mated_llr;
  std::vector<double> nonmated_llr;
  std::size_t n_mated = 0;     // original (pre-augmentation) counts
  std::size_t n_nonmated = 0;
};

// Sampled cross-entropy curves over a grid of prior log10-odds.
struct EceProfile {
  std::vector<double> grid;                 // strictly increasing log10(pi/(1-pi))
  std::vector<double> ece;                  // bits
  std::vector<double> perfect_privacy_ece;  // bits, zero-evidence reference
};

// Categorical bands for the worst-case disclosure magnitude log10(l).
// Lower bounds are inclusive, upper bounds exclusive; tag 0 is reserved for
// an exact zero (every LR equal to one).
enum class Tag { Zero, A, B, C, D, E, F };

inline const char* to_string(Tag tag) {
  switch (tag) {
    case Tag::Zero: return "0";
    case Tag::A: return "A";
    case Tag::B: return "B";
    case Tag::C: return "C";
    case Tag::D: return "D";
    case Tag::E: return "E";
    case Tag::F: return "F";
  }
  return "?";
}

inline std::optional<Tag> tag_from_string(const std::string& s) {
  if (s == "0") return Tag::Zero;
  if (s == "A") return Tag::A;
  if (s == "B") return Tag::B;
  if (s == "C") return Tag::C;
  if (s == "D") return Tag::D;
  if (s == "E") return Tag::E;
  if (s == "F") return Tag::F;
  return std::nullopt;
}

// Result tuple of a privacy assessment: expected disclosure in bits,
// worst-case disclosure magnitude, and its categorical tag. Cllr and EER are
// contrast baselines, attached only on request.
struct ZebraReport {
  std::string source_id;
  double d_ece = 0.0;
  double log10_l = 0.0;
  Tag tag = Tag::Zero;
  std::optional<double> cllr;  // bits
  std::optional<double> eer;   // fraction in [0, 1]
};

}  // namespace zebra
