#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "commands.hpp"
#include "kkle/estimator.hpp"
#include "kkle/fairness.hpp"
#include "kkle/mine.hpp"

namespace kkle::cli {

inline constexpr int kSchemaVersion = 1;

/// Reported values are nats; --bits divides by log 2 for display.
double display_value(double nats, bool bits);
const char* unit_name(bool bits);

nlohmann::json estimate_json(const EstimateResult& r, const EstimatorFlags& flags, bool bits);
nlohmann::json estimate_json(const MineResult& r, bool bits);
nlohmann::json fairness_json(const FairnessReport& r, bool bits);

/// One "key = value" line per scalar field of a flat JSON object.
std::string text_lines(const nlohmann::json& doc);

/// Writes to path, or stdout when path is empty.
void write_output(const std::string& path, const std::string& content);

}  // namespace kkle::cli
