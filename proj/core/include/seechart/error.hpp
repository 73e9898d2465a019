#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seechart {

enum class ErrorCode {
  ParseError,
  InvalidChart,
  NoChartFound,
  UnreadableAxis,
  InconsistentSeries,
  UnsupportedMark,
  MissingData,
  ScaleMismatch,
  TooFewPoints,
  KTooLarge,
  CategoryMismatch,
  UnknownChartType,
  EmptyPlan,
  MissingIntro,
  MissingTemplate,
  UnboundSlot,
  InvalidTemplates,
  IndexOutOfBounds,
  EmptySelection,
  InvalidSelection,
  LabelNotFound,
};

/// Stable upper-snake identifier used in CLI output and HTTP error bodies.
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// JSON/schema failure; `path()` is a JSONPath-like pointer such as `$.series[0].points`.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& message)
      : Error(ErrorCode::ParseError, path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace seechart
