#include "seechart/error.hpp"

namespace seechart {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::InvalidChart: return "INVALID_CHART";
    case ErrorCode::NoChartFound: return "NO_CHART_FOUND";
    case ErrorCode::UnreadableAxis: return "UNREADABLE_AXIS";
    case ErrorCode::InconsistentSeries: return "INCONSISTENT_SERIES";
    case ErrorCode::UnsupportedMark: return "UNSUPPORTED_MARK";
    case ErrorCode::MissingData: return "MISSING_DATA";
    case ErrorCode::ScaleMismatch: return "SCALE_MISMATCH";
    case ErrorCode::TooFewPoints: return "TOO_FEW_POINTS";
    case ErrorCode::KTooLarge: return "K_TOO_LARGE";
    case ErrorCode::CategoryMismatch: return "CATEGORY_MISMATCH";
    case ErrorCode::UnknownChartType: return "UNKNOWN_CHART_TYPE";
    case ErrorCode::EmptyPlan: return "EMPTY_PLAN";
    case ErrorCode::MissingIntro: return "MISSING_INTRO";
    case ErrorCode::MissingTemplate: return "MISSING_TEMPLATE";
    case ErrorCode::UnboundSlot: return "UNBOUND_SLOT";
    case ErrorCode::InvalidTemplates: return "INVALID_TEMPLATES";
    case ErrorCode::IndexOutOfBounds: return "INDEX_OUT_OF_BOUNDS";
    case ErrorCode::EmptySelection: return "EMPTY_SELECTION";
    case ErrorCode::InvalidSelection: return "INVALID_SELECTION";
    case ErrorCode::LabelNotFound: return "LABEL_NOT_FOUND";
  }
  return "UNKNOWN";
}

}  // namespace seechart
