#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopfkit/averaging.hpp"
#include "hopfkit/canonical.hpp"
#include "hopfkit/classify.hpp"
#include "hopfkit/verify.hpp"

namespace hopfkit {

inline constexpr const char* kReportSchema = "hopfkit.report/1";

// Provenance labels carried by every numeric block of a report.
inline constexpr const char* kFromInput = "input";
inline constexpr const char* kFromPipeline = "paper-pipeline";
inline constexpr const char* kFromOde = "ode-empirical";

nlohmann::json to_json(const JacobianSummary& js);
nlohmann::json to_json(const CycleRecord& c);
nlohmann::json to_json(const HopfFit& f);
nlohmann::json to_json(const CoefficientScaling& s);
nlohmann::json to_json(const CyclePrediction& p);
nlohmann::json to_json(const SufficientCondition& s);
nlohmann::json to_json(const Classification& c);
nlohmann::json to_json(const SweepReport& r);

/// Comparison of the averaging pipeline with the measured discriminant:
/// "pipeline/empirical ratio 0.5" when p3 is half of c3 within 5%, the
/// ratio itself when it is off 1 by more than 5%, and sign disagreements.
std::vector<std::string> pipeline_warnings(const DiscriminantSeries& ds, const HopfFit& fit,
                                           bool c3_significant);

struct AnalyzeOptions {
  double r_min = 1e-4;  // cycle search range
  double r_max = 1.5;
  VerifyOptions verify;
  ClassifyOptions discriminant;
};

/// Single-parameter report: Jacobian, canonical form, pipeline
/// coefficients, measured discriminant, predictions, detected cycles.
nlohmann::json analyze_report(const ParamField& vf, double a, const AnalyzeOptions& opt = {});

/// Wraps a command payload with the schema version and input echo.
nlohmann::json envelope(const std::string& command, const nlohmann::json& input,
                        const nlohmann::json& payload);

/// Deterministic text form (sorted keys, 2-space indent, trailing newline).
std::string dump(const nlohmann::json& j);

/// Two-column text files with '#' headers: tau vs radius and their logs.
void write_sweep_plot_data(const std::filesystem::path& dir, const SweepReport& r);
/// Measured discriminant samples and fitted coefficients per tau.
void write_classify_plot_data(const std::filesystem::path& dir, const Classification& c);
/// Measured discriminant samples of an analyze report.
void write_analyze_plot_data(const std::filesystem::path& dir, const nlohmann::json& report);

}  // namespace hopfkit
