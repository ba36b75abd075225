#include "ptlindblad/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "ptlindblad/errors.hpp"

namespace ptlindblad {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& msg) {
  throw SchemaError(path + ": " + msg);
}

double get_number(const json& doc, const std::string& key) {
  if (!doc.contains(key)) schema_fail(key, "missing");
  const json& v = doc.at(key);
  if (!v.is_number()) schema_fail(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_fail(key, "not finite");
  return x;
}

Complex parse_entry(const json& e, const std::string& path) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  schema_fail(path, "expected a number or [re, im]");
}

ComplexMatrix parse_matrix(const json& m, const std::string& path) {
  if (!m.is_array() || m.empty()) schema_fail(path, "expected a non-empty list of rows");
  const std::size_t rows = m.size();
  ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!m[i].is_array() || m[i].size() != rows) schema_fail(rp, "matrix must be square");
    for (std::size_t j = 0; j < rows; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_entry(m[i][j], rp + "[" + std::to_string(j) + "]");
    }
  }
  if (!all_finite(out)) schema_fail(path, "not finite");
  return out;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) schema_fail(prefix + it.key(), "unknown key");
  }
}

CustomModelSpec parse_custom(const json& c) {
  if (!c.is_object()) schema_fail("custom", "expected an object");
  check_keys(c, {"hamiltonian", "lindblads", "parity"}, "custom.");
  if (!c.contains("hamiltonian")) schema_fail("custom.hamiltonian", "missing");
  if (!c.contains("lindblads")) schema_fail("custom.lindblads", "missing");
  CustomModelSpec spec;
  spec.hamiltonian = parse_matrix(c.at("hamiltonian"), "custom.hamiltonian");
  const auto n = spec.hamiltonian.rows();
  if (!is_hermitian(spec.hamiltonian, 1e-12 * std::max(1.0, spec.hamiltonian.norm()))) {
    schema_fail("custom.hamiltonian", "not Hermitian");
  }
  const json& ls = c.at("lindblads");
  if (!ls.is_array()) schema_fail("custom.lindblads", "expected a list of matrices");
  for (std::size_t m = 0; m < ls.size(); ++m) {
    const std::string p = "custom.lindblads[" + std::to_string(m) + "]";
    spec.lindblads.push_back(parse_matrix(ls[m], p));
    if (spec.lindblads.back().rows() != n) schema_fail(p, "size differs from the Hamiltonian");
  }
  if (spec.lindblads.size() > static_cast<std::size_t>(n * n - 1)) {
    schema_fail("custom.lindblads", "more than N^2 - 1 operators");
  }
  if (c.contains("parity")) {
    const json& p = c.at("parity");
    if (!p.is_object()) schema_fail("custom.parity", "expected an object");
    check_keys(p, {"left", "right"}, "custom.parity.");
    if (!p.contains("left")) schema_fail("custom.parity.left", "missing");
    if (!p.contains("right")) schema_fail("custom.parity.right", "missing");
    ComplexMatrix a = parse_matrix(p.at("left"), "custom.parity.left");
    ComplexMatrix b = parse_matrix(p.at("right"), "custom.parity.right");
    if (a.rows() != n) schema_fail("custom.parity.left", "size differs from the Hamiltonian");
    if (b.rows() != n) schema_fail("custom.parity.right", "size differs from the Hamiltonian");
    spec.parity = std::make_pair(std::move(a), std::move(b));
  }
  return spec;
}

bool is_power_of_two(Eigen::Index n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace

ModelConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw SchemaError("<root>: expected an object");
  if (!doc.contains("model")) schema_fail("model", "missing");
  if (!doc.at("model").is_string()) schema_fail("model", "expected a string");
  const std::string model = doc.at("model").get<std::string>();

  ModelConfig cfg;
  cfg.source = doc;
  if (model == "xxz") {
    cfg.model = ModelKind::XXZ;
    check_keys(doc, {"model", "n", "delta", "mu", "gamma", "sector"}, "");
    const json& n = doc.contains("n") ? doc.at("n") : json();
    if (n.is_null()) schema_fail("n", "missing");
    if (!n.is_number_integer()) schema_fail("n", "expected an integer");
    cfg.n = n.get<int>();
    if (cfg.n < 2 || cfg.n > 7) schema_fail("n", "must be in 2..7");
    cfg.delta = get_number(doc, "delta");
    cfg.mu = get_number(doc, "mu");
    if (cfg.mu < -1.0 || cfg.mu > 1.0) schema_fail("mu", "must be in [-1, 1]");
  } else if (model == "single_qubit") {
    cfg.model = ModelKind::SingleQubit;
    check_keys(doc, {"model", "omega", "gamma", "sector"}, "");
    cfg.n = 1;
    if (doc.contains("omega")) cfg.omega = get_number(doc, "omega");
  } else if (model == "custom") {
    cfg.model = ModelKind::Custom;
    check_keys(doc, {"model", "gamma", "sector", "custom"}, "");
    if (!doc.contains("custom")) schema_fail("custom", "missing");
    cfg.custom = parse_custom(doc.at("custom"));
    cfg.n = 0;
  } else {
    schema_fail("model", "expected \"xxz\", \"single_qubit\" or \"custom\"");
  }

  cfg.gamma = get_number(doc, "gamma");
  if (cfg.gamma < 0.0) schema_fail("gamma", "must be >= 0");

  if (doc.contains("sector")) {
    const json& s = doc.at("sector");
    if (!s.is_string()) schema_fail("sector", "expected a string");
    const std::string v = s.get<std::string>();
    if (v == "full") {
      cfg.sector = Sector::Full;
    } else if (v == "dmz0") {
      cfg.sector = Sector::DMz0;
      if (cfg.model == ModelKind::Custom && !is_power_of_two(cfg.custom->hamiltonian.rows())) {
        schema_fail("sector", "dmz0 needs a spin-chain Hilbert space (dimension 2^n)");
      }
    } else {
      schema_fail("sector", "expected \"full\" or \"dmz0\"");
    }
  }
  return cfg;
}

ModelConfig parse_config_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ModelConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str());
}

XXZParams xxz_params(const ModelConfig& cfg) {
  if (cfg.model != ModelKind::XXZ) throw InvalidArgument("this command needs an xxz model");
  return XXZParams{cfg.n, cfg.delta, cfg.mu, cfg.gamma};
}

LindbladModel config_model(const ModelConfig& cfg) {
  switch (cfg.model) {
    case ModelKind::XXZ:
      return xxz_model(xxz_params(cfg));
    case ModelKind::SingleQubit: {
      LindbladModel m;
      m.hamiltonian = 0.5 * cfg.omega * pauli(Pauli::Z);
      m.lindblads = {pauli(Pauli::Minus)};
      m.gamma = cfg.gamma;
      return m;
    }
    case ModelKind::Custom: {
      LindbladModel m;
      m.hamiltonian = cfg.custom->hamiltonian;
      m.lindblads = cfg.custom->lindblads;
      m.gamma = cfg.gamma;
      m.validate();
      return m;
    }
  }
  throw InvalidArgument("unknown model kind");
}

namespace {
int chain_length(const ModelConfig& cfg) {
  if (cfg.model == ModelKind::XXZ) return cfg.n;
  const auto dim = cfg.model == ModelKind::SingleQubit ? 2 : cfg.custom->hamiltonian.rows();
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}
}  // namespace

std::vector<BasisPair> config_sector(const ModelConfig& cfg) {
  if (cfg.sector == Sector::Full) return {};
  return sector_basis(chain_length(cfg), 0);
}

SuperOperator config_liouvillian(const ModelConfig& cfg) {
  SuperOperator l = build_superoperator(config_model(cfg));
  const auto labels = config_sector(cfg);
  return labels.empty() ? l : sector_restrict(l, labels);
}

std::optional<ParitySuperOp> config_parity(const ModelConfig& cfg) {
  if (cfg.model == ModelKind::XXZ) return xxz_parity(cfg.n);
  if (cfg.model == ModelKind::Custom && cfg.custom->parity) {
    return parity_from_pair(cfg.custom->parity->first, cfg.custom->parity->second);
  }
  return std::nullopt;
}

std::optional<ComplexMatrix> config_conserved(const ModelConfig& cfg) {
  if (cfg.model == ModelKind::XXZ) return total_magnetization(cfg.n);
  if (cfg.model == ModelKind::SingleQubit) return pauli(Pauli::Z);
  return std::nullopt;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  std::string s(buf);
  const auto e = s.find('e');
  std::string mant = s.substr(0, e);
  std::string exp = s.substr(e + 1);
  std::string sign;
  if (exp[0] == '+' || exp[0] == '-') {
    if (exp[0] == '-') sign = "-";
    exp.erase(0, 1);
  }
  const auto nz = exp.find_first_not_of('0');
  exp = nz == std::string::npos ? "0" : exp.substr(nz);
  if (exp == "0") sign.clear();
  return mant + "e" + sign + exp;
}

std::string format_spectrum_csv(const std::vector<Complex>& values) {
  if (values.empty()) throw InvalidArgument("spectrum is empty");
  std::string out = "re,im\n";
  for (const Complex& z : values) out += format_double(z.real()) + "," + format_double(z.imag()) + "\n";
  return out;
}

std::string format_spectrum_csv(const SpectralDecomposition& dec) {
  std::vector<Complex> v(dec.eigenvalues.data(), dec.eigenvalues.data() + dec.eigenvalues.size());
  return format_spectrum_csv(v);
}

void write_spectrum_csv(const SpectralDecomposition& dec, const std::string& path) {
  write_text(path, format_spectrum_csv(dec));
}

std::vector<Complex> parse_spectrum_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "re,im") throw ParseError("spectrum CSV: expected header 're,im'");
  std::vector<Complex> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("spectrum CSV line " + std::to_string(lineno) + ": no comma");
    const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
    char* end = nullptr;
    const double re = std::strtod(a.c_str(), &end);
    if (a.empty() || *end) throw ParseError("spectrum CSV line " + std::to_string(lineno) + ": bad number");
    const double im = std::strtod(b.c_str(), &end);
    if (b.empty() || *end) throw ParseError("spectrum CSV line " + std::to_string(lineno) + ": bad number");
    out.emplace_back(re, im);
  }
  return out;
}

std::vector<Complex> read_spectrum_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spectrum_csv(ss.str());
}

std::string format_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw DimensionMismatch("CSV row width differs from header");
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
    out += "\n";
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write to '" + path + "' failed");
}

json complex_json(Complex z) { return json::array({real_json(z.real()), real_json(z.imag())}); }

json complex_json(const ComplexVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
  return a;
}

json real_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const SymmetryReport& r) {
  return {{"pt_residual", r.pt_residual},
          {"pt_residual_abs", r.pt_residual_abs},
          {"involution_residual", r.involution_residual},
          {"unitarity_residual", r.unitarity_residual},
          {"gamma_bar", r.gamma_bar}};
}

json to_json(const D2Report& r) {
  return {{"max_v_error", r.max_v_error},
          {"max_h_error", r.max_h_error},
          {"scale", r.scale},
          {"v_pairing", r.v_pairing},
          {"h_pairing", r.h_pairing}};
}

json to_json(const CrossClassification& c) {
  return {{"on_h", c.on_h.size()},   {"on_v", c.on_v.size()}, {"off_cross", c.off_cross.size()},
          {"tau", c.tau},            {"stable", c.stable},    {"off_cross_indices", c.off_cross},
          {"unbroken", c.off_cross.empty()}};
}

json to_json(const PartnerReport& r) {
  return {{"max_v_vector_error", r.max_v_vector_error},
          {"max_h_vector_error", r.max_h_vector_error},
          {"checked_v", r.checked_v},
          {"checked_h", r.checked_h},
          {"skipped", r.skipped.size()}};
}

json to_json(const ThresholdResult& r) {
  json evals = json::array();
  for (const auto& e : r.evaluations) {
    evals.push_back({{"gamma", e.gamma},
                     {"off_cross", e.off_cross},
                     {"max_cross_distance", e.max_cross_distance},
                     {"unbroken", e.unbroken}});
  }
  return {{"gamma_pt", r.gamma_pt},
          {"gamma_low", r.gamma_low},
          {"gamma_high", r.gamma_high},
          {"tau_rel", r.tau_rel},
          {"evaluations", evals}};
}

json to_json(const DegeneracyReport& r) {
  json e = json::array();
  for (Eigen::Index i = 0; i < r.energies.size(); ++i) e.push_back(r.energies(i));
  json pairs = json::array();
  for (const auto& p : r.degenerate_energies) pairs.push_back({p.first, p.second});
  json gaps = json::array();
  for (const auto& g : r.degenerate_gaps) gaps.push_back({g[0], g[1], g[2], g[3]});
  return {{"energies", e},
          {"tol", r.tol},
          {"degenerate_energies", pairs},
          {"degenerate_gaps", gaps},
          {"degenerate_gap_count", r.degenerate_gaps.size()}};
}

json to_json(const ScalingResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"status", row.status},
                    {"gamma_pt", real_json(row.gamma_pt)},
                    {"gamma_low", row.gamma_low},
                    {"gamma_high", row.gamma_high},
                    {"heuristic", real_json(row.heuristic)},
                    {"evaluations", row.evaluations}});
  }
  return {{"rows", rows},
          {"slope", real_json(r.slope)},
          {"intercept", real_json(r.intercept)},
          {"fitted_points", r.fitted_points},
          {"reference_slope", std::log(0.25)}};
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"error", kind}, {"message", message}};
}

}  // namespace ptlindblad
