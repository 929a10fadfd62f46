#include "garchvb/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "garchvb/errors.hpp"

namespace garchvb {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double* out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') return false;
  *out = v;
  return true;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  return out;
}

json state_to_json(const VariationalState& s) {
  const int d = s.dim();
  json chol = json::array();
  for (int i = 0; i < d; ++i) {
    json row = json::array();
    for (int jj = 0; jj < d; ++jj) row.push_back(s.chol(i, jj));
    chol.push_back(std::move(row));
  }
  return json{{"mu", std::vector<double>(s.mu.begin(), s.mu.end())},
              {"chol", std::move(chol)},
              {"factorization", to_string(s.factorization)},
              {"diag_param", to_string(s.diag_param)}};
}

VariationalState state_from_json(const json& j) {
  VariationalState s;
  const auto mu = j.at("mu").get<std::vector<double>>();
  const int d = static_cast<int>(mu.size());
  s.mu = Eigen::Map<const Eigen::VectorXd>(mu.data(), d);
  const auto& chol = j.at("chol");
  if (static_cast<int>(chol.size()) != d) throw ParseError("chol does not match mu length");
  s.chol.resize(d, d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(chol[i].size()) != d) throw ParseError("chol row has wrong length");
    for (int jj = 0; jj < d; ++jj) s.chol(i, jj) = chol[i][jj].get<double>();
  }
  const std::string fac = j.at("factorization").get<std::string>();
  if (fac == "precision") s.factorization = Factorization::Precision;
  else if (fac == "covariance") s.factorization = Factorization::Covariance;
  else throw ParseError("unknown factorization '" + fac + "'");
  const std::string dp = j.at("diag_param").get<std::string>();
  if (dp == "log_scale") s.diag_param = DiagParam::LogScale;
  else if (dp == "free") s.diag_param = DiagParam::Free;
  else throw ParseError("unknown diag_param '" + dp + "'");
  s.validate();
  return s;
}

}  // namespace

ReturnSeries load_returns(const std::string& path, const LoadOptions& opt) {
  std::ifstream in = open_for_read(path);
  std::vector<double> values;
  std::string line;
  int row = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++row;
    const std::string cell = strip(line);
    if (cell.empty()) continue;
    double v;
    if (!parse_double(cell, &v)) {
      if (first_content) {  // header label
        first_content = false;
        continue;
      }
      throw ParseError(path + ": row " + std::to_string(row) + " is not a number: '" + cell + "'");
    }
    if (!std::isfinite(v))
      throw ParseError(path + ": row " + std::to_string(row) + " is not finite");
    if (opt.prices && !(v > 0.0))
      throw ParseError(path + ": row " + std::to_string(row) + " holds a non-positive price");
    first_content = false;
    values.push_back(v);
  }
  ReturnSeries series;
  series.from_prices = opt.prices;
  if (opt.prices) {
    if (values.size() < 2) throw DegenerateSeries(path + ": need at least 2 prices");
    const double scale = opt.scale_percent ? 100.0 : 1.0;
    series.values.resize(values.size() - 1);
    for (std::size_t i = 1; i < values.size(); ++i)
      series.values[i - 1] = scale * (std::log(values[i]) - std::log(values[i - 1]));
  } else {
    if (values.empty()) throw DegenerateSeries(path + ": no observations");
    series.values = std::move(values);
  }
  return series;
}

void save_returns_csv(const std::string& path, std::span<const double> values) {
  std::ofstream out = open_for_write(path);
  out << "return\n";
  for (double v : values) out << format_double(v) << "\n";
}

void save_samples_csv(const std::string& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& names) {
  if (static_cast<Eigen::Index>(names.size()) != values.cols())
    throw DimensionMismatch("column names do not match matrix width");
  std::ofstream out = open_for_write(path);
  for (std::size_t j = 0; j < names.size(); ++j)
    out << names[j] << (j + 1 < names.size() ? "," : "\n");
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      out << format_double(values(i, j)) << (j + 1 < values.cols() ? "," : "\n");
}

Eigen::MatrixXd load_samples_csv(const std::string& path, std::vector<std::string>* names) {
  std::ifstream in = open_for_read(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  std::vector<std::string> header;
  {
    std::stringstream ss(strip(line));
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(strip(cell));
  }
  if (header.empty()) throw ParseError(path + ": missing header");
  std::vector<double> data;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string content = strip(line);
    if (content.empty()) continue;
    std::stringstream ss(content);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      double v;
      if (!parse_double(strip(cell), &v))
        throw ParseError(path + ": row " + std::to_string(row) + " is not numeric");
      data.push_back(v);
      ++col;
    }
    if (col != header.size())
      throw ParseError(path + ": row " + std::to_string(row) + " has " + std::to_string(col) +
                       " columns, expected " + std::to_string(header.size()));
  }
  const auto rows = static_cast<Eigen::Index>(data.size() / header.size());
  Eigen::MatrixXd m(rows, header.size());
  for (Eigen::Index i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < header.size(); ++j) m(i, j) = data[i * header.size() + j];
  if (names) *names = header;
  return m;
}

FitDocument make_fit_document(const FitResult& fit, InnovationKind kind, Method method,
                              std::uint64_t seed) {
  FitDocument doc;
  doc.kind = kind;
  doc.method = method;
  doc.seed = seed;
  doc.state = fit.state;
  doc.elbo_trace = fit.elbo_trace;
  doc.iterations = fit.iterations;
  doc.stopped_by = fit.stopped_by;
  doc.final_window_elbo = fit.final_window_elbo;
  return doc;
}

void save_fit_document(const std::string& path, const FitDocument& doc) {
  json j{{"schema_version", doc.schema_version},
         {"model", to_string(doc.kind)},
         {"method", to_string(doc.method)},
         {"seed", doc.seed},
         {"state", state_to_json(doc.state)},
         {"iterations", doc.iterations},
         {"stopped_by", to_string(doc.stopped_by)},
         {"final_window_elbo", doc.final_window_elbo},
         {"elbo_trace", doc.elbo_trace}};
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << "\n";
}

FitDocument load_fit_document(const std::string& path) {
  std::ifstream in = open_for_read(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    FitDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    if (doc.schema_version != 1)
      throw ParseError(path + ": unsupported schema version " +
                       std::to_string(doc.schema_version));
    doc.kind = innovation_kind_from_string(j.at("model").get<std::string>());
    doc.method = method_from_string(j.at("method").get<std::string>());
    doc.seed = j.at("seed").get<std::uint64_t>();
    doc.state = state_from_json(j.at("state"));
    doc.iterations = j.at("iterations").get<int>();
    const std::string stop = j.at("stopped_by").get<std::string>();
    if (stop == "patience") doc.stopped_by = StopReason::Patience;
    else if (stop == "max_iterations") doc.stopped_by = StopReason::MaxIterations;
    else throw ParseError(path + ": unknown stop reason '" + stop + "'");
    doc.final_window_elbo = j.at("final_window_elbo").get<double>();
    doc.elbo_trace = j.at("elbo_trace").get<std::vector<double>>();
    if (doc.state.dim() != param_count(doc.kind))
      throw ParseError(path + ": state dimension does not match model");
    return doc;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string to_string(StopReason reason) {
  return reason == StopReason::Patience ? "patience" : "max_iterations";
}

std::string to_string(Factorization f) {
  return f == Factorization::Precision ? "precision" : "covariance";
}

std::string to_string(DiagParam p) { return p == DiagParam::LogScale ? "log_scale" : "free"; }

}  // namespace garchvb
