#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptlindblad/perturbation.hpp"
#include "ptlindblad/spectral.hpp"
#include "ptlindblad/symmetry.hpp"
#include "ptlindblad/threshold.hpp"

namespace ptlindblad {

enum class ModelKind { XXZ, SingleQubit, Custom };

struct CustomModelSpec {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> lindblads;
  /// Optional parity pair rho -> A rho B used by `check`.
  std::optional<std::pair<ComplexMatrix, ComplexMatrix>> parity;
};

/// Model configuration.  Keys:
///   model   "xxz" | "single_qubit" | "custom"        (required)
///   gamma   >= 0                                      (required)
///   n, delta, mu                                      (xxz, required)
///   omega   qubit frequency, default 1                (single_qubit)
///   sector  "full" | "dmz0", default "full"
///   custom  {"hamiltonian": M, "lindblads": [M...], "parity": {"left": M, "right": M}}
/// with M a list of rows whose entries are numbers or [re, im] pairs.
struct ModelConfig {
  ModelKind model = ModelKind::XXZ;
  int n = 2;
  double delta = 0.0;
  double mu = 0.0;
  double gamma = 0.0;
  double omega = 1.0;
  Sector sector = Sector::Full;
  std::optional<CustomModelSpec> custom;
  nlohmann::json source;  ///< the parsed document, echoed into reports
};

/// Validates against the schema.  Throws SchemaError whose message starts with
/// the key path, e.g. "gamma: missing".
ModelConfig parse_config(const nlohmann::json& doc);
ModelConfig parse_config_string(const std::string& text);
/// Throws ParseError when the file cannot be read or is not JSON.
ModelConfig parse_config_file(const std::string& path);

XXZParams xxz_params(const ModelConfig& cfg);
LindbladModel config_model(const ModelConfig& cfg);
std::vector<BasisPair> config_sector(const ModelConfig& cfg);
/// Liouvillian restricted to the configured sector.
SuperOperator config_liouvillian(const ModelConfig& cfg);
std::optional<ParitySuperOp> config_parity(const ModelConfig& cfg);
/// Total magnetization for spin-chain models, used to block-resolve degeneracies.
std::optional<ComplexMatrix> config_conserved(const ModelConfig& cfg);

/// 17 significant digits, exponent without '+' or leading zeros ("1.5000000000000000e-1").
std::string format_double(double x);

std::string format_spectrum_csv(const std::vector<Complex>& values);
std::string format_spectrum_csv(const SpectralDecomposition& dec);
/// Header "re,im", one row per eigenvalue in decomposition order, LF endings.
/// Throws InvalidArgument on an empty decomposition and IoError on write failure.
void write_spectrum_csv(const SpectralDecomposition& dec, const std::string& path);
std::vector<Complex> parse_spectrum_csv(const std::string& text);
std::vector<Complex> read_spectrum_csv(const std::string& path);

std::string format_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text);

nlohmann::json complex_json(Complex z);
nlohmann::json complex_json(const ComplexVector& v);
nlohmann::json real_json(double x);  ///< null for non-finite values

nlohmann::json to_json(const SymmetryReport& r);
nlohmann::json to_json(const D2Report& r);
nlohmann::json to_json(const CrossClassification& c);
nlohmann::json to_json(const PartnerReport& r);
nlohmann::json to_json(const ThresholdResult& r);
nlohmann::json to_json(const DegeneracyReport& r);
nlohmann::json to_json(const ScalingResult& r);

/// {"error": kind, "message": what}
nlohmann::json error_json(const std::string& kind, const std::string& message);

}  // namespace ptlindblad
