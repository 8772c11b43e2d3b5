#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "satd/eval.hpp"
#include "satd/matchers.hpp"

namespace satd {

enum class OutputFormat { json, text, csv };
OutputFormat output_format_from_string(std::string_view s);

// All rendering is deterministic: fixed key order, no timestamps, floats in
// JSON at full round-trip precision, text and CSV tables at three decimals
// ("-" marks an undefined score).
std::string render(const EvaluationReport& report, OutputFormat format);
std::string render(const OtoReport& report, OutputFormat format);
std::string render(const std::vector<ApproachComparison>& comparisons,
                   OutputFormat format);
std::string render(const OverlapReport& report, OutputFormat format);

// Predictions: JSON is one object per line (ids, verdict, evidence when
// SATD); text is one human-readable line per comment; CSV has a header row.
std::string render_predictions(const std::vector<Prediction>& predictions,
                               OutputFormat format);

}  // namespace satd
