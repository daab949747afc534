#include "specfact/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "specfact/errors.hpp"

namespace specfact {

namespace {

Json real(double x) {
  if (std::isfinite(x)) return x;
  return "inf";
}

std::string path_of(const std::string& context, const char* name) {
  return context.empty() ? name : context + "." + name;
}

[[noreturn]] void parse_error(const std::string& context, const std::string& what) {
  throw Error(ErrorKind::Parse, "field '" + context + "': " + what);
}

const Json& field(const Json& j, const char* name, const std::string& context) {
  if (!j.is_object()) parse_error(context, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) parse_error(path_of(context, name), "missing");
  return *it;
}

int int_field(const Json& j, const char* name, const std::string& context) {
  const auto& v = field(j, name, context);
  if (!v.is_number_integer()) parse_error(path_of(context, name), "expected an integer");
  return v.get<int>();
}

std::vector<double> number_array(const Json& j, const char* name, const std::string& context) {
  const auto& v = field(j, name, context);
  const std::string where = path_of(context, name);
  if (!v.is_array()) parse_error(where, "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) parse_error(where, "expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

FourierSeries series_from_json(const Json& j, const std::string& context) {
  const int lo = int_field(j, "lo", context);
  const auto re = number_array(j, "re", context);
  const auto im = number_array(j, "im", context);
  if (re.size() != im.size()) parse_error(path_of(context, "im"), "length differs from re");
  if (re.empty()) parse_error(path_of(context, "re"), "empty coefficient array");
  std::vector<Complex> c(re.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = {re[i], im[i]};
  return FourierSeries(lo, std::move(c));
}

Json stage_to_json(const StageReport& s) {
  Json j;
  j["m"] = s.m;
  j["N"] = s.order;
  j["attempts"] = s.attempts;
  j["residual"] = real(s.residual);
  j["droppedTail"] = real(s.dropped_tail);
  j["rankGap"] = real(s.rank_gap);
  j["gramDeviation"] = real(s.gram_deviation);
  return j;
}

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Json to_json(const FourierSeries& s) {
  Json j;
  j["lo"] = s.lo();
  Json re = Json::array();
  Json im = Json::array();
  for (const auto& c : s.coeffs()) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

Json to_json(const MatrixSeries& s) {
  Json j;
  j["r"] = s.dim();
  j["lo"] = s.lo();
  Json entries = Json::array();
  for (int i = 0; i < s.dim(); ++i) {
    for (int k = 0; k < s.dim(); ++k) entries.push_back(to_json(s.entry(i, k)));
  }
  j["entries"] = std::move(entries);
  return j;
}

Json to_json(const GridMatrixFunction& f) {
  Json j;
  j["r"] = f.dim();
  j["K"] = f.grid_size();
  Json samples = Json::array();
  for (const auto& s : f.samples()) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index k = 0; k < s.cols(); ++k) {
        samples.push_back(s(i, k).real());
        samples.push_back(s(i, k).imag());
      }
    }
  }
  j["samples"] = std::move(samples);
  return j;
}

Json to_json(const FactorizationResult& result) {
  Json j = to_json(result.chi_plus);
  Json d;
  d["K"] = result.grid_size;
  d["residual"] = real(result.residual);
  d["negEnergy"] = real(result.neg_energy);
  d["outerDefect"] = real(result.outer_defect);
  d["valueAtZero"] = matrix_to_json(result.value_at_zero);
  Json stages = Json::array();
  for (const auto& s : result.stages) stages.push_back(stage_to_json(s));
  d["stages"] = std::move(stages);
  j["diagnostics"] = std::move(d);
  return j;
}

Json to_json(const VerificationReport& report) {
  Json j;
  j["residual"] = real(report.residual);
  j["negEnergy"] = real(report.neg_energy);
  j["outerDefect"] = real(report.outer_defect);
  j["canonicalPin"] = report.canonical_pin;
  j["logDetDiag"] = real(report.log_det.mean_abs_log);
  j["logDetFloored"] = report.log_det.floored;
  Json stages = Json::array();
  for (const auto& s : report.stages) stages.push_back(stage_to_json(s));
  j["stages"] = std::move(stages);
  return j;
}

Json to_json(const EquivalenceReport& report) {
  Json j;
  j["U"] = matrix_to_json(report.u);
  j["unitarityDefect"] = real(report.unitarity_defect);
  j["matchDefect"] = real(report.match_defect);
  return j;
}

Json to_json(const FactorizationConfig& config) {
  Json j;
  j["K"] = config.grid_size;
  j["tauTotal"] = config.tau_total;
  j["tauAnalytic"] = config.tau_analytic;
  j["N0"] = config.n0;
  j["Nmax"] = config.n_max;
  j["seed"] = config.seed;
  return j;
}

Json to_json(const CompletionSystem& system) {
  Json j;
  j["m"] = system.m;
  j["N"] = system.order;
  j["rows"] = system.matrix.rows();
  j["cols"] = system.matrix.cols();
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < system.matrix.rows(); ++i) {
    for (Eigen::Index k = 0; k < system.matrix.cols(); ++k) {
      re.push_back(system.matrix(i, k).real());
      im.push_back(system.matrix(i, k).imag());
    }
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

FourierSeries series_from_json(const Json& j) { return series_from_json(j, ""); }

MatrixSeries matrix_series_from_json(const Json& j) {
  const int r = int_field(j, "r", "");
  if (r < 1) parse_error("r", "must be positive");
  const auto& entries = field(j, "entries", "");
  if (!entries.is_array()) parse_error("entries", "expected an array");
  if (entries.size() != static_cast<std::size_t>(r) * static_cast<std::size_t>(r)) {
    parse_error("entries", "expected " + std::to_string(r * r) + " series");
  }
  std::vector<FourierSeries> series;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    series.push_back(series_from_json(entries[i], "entries[" + std::to_string(i) + "]"));
  }
  return MatrixSeries::from_entries(r, series);
}

GridMatrixFunction grid_function_from_json(const Json& j) {
  const int r = int_field(j, "r", "");
  const int k = int_field(j, "K", "");
  if (r < 1) parse_error("r", "must be positive");
  if (k < 2 || !is_power_of_two(k)) parse_error("K", "must be a power of two >= 2");
  const auto flat = number_array(j, "samples", "");
  const std::size_t per = 2 * static_cast<std::size_t>(r) * static_cast<std::size_t>(r);
  if (flat.size() != per * static_cast<std::size_t>(k)) {
    parse_error("samples", "expected " + std::to_string(per * static_cast<std::size_t>(k)) + " numbers, got " +
                               std::to_string(flat.size()));
  }
  std::vector<CMatrix> samples(static_cast<std::size_t>(k), CMatrix(r, r));
  std::size_t pos = 0;
  for (auto& s : samples) {
    for (int i = 0; i < r; ++i) {
      for (int c = 0; c < r; ++c, pos += 2) s(i, c) = {flat[pos], flat[pos + 1]};
    }
  }
  return GridMatrixFunction(r, std::move(samples));
}

FactorizationConfig config_from_json(const Json& j, FactorizationConfig base) {
  if (!j.is_object()) parse_error("config", "expected an object");
  auto number = [&](const char* name, auto& dst) {
    auto it = j.find(name);
    if (it == j.end()) return;
    if (!it->is_number()) parse_error(name, "expected a number");
    dst = it->get<std::decay_t<decltype(dst)>>();
  };
  number("K", base.grid_size);
  number("tauTotal", base.tau_total);
  number("tauAnalytic", base.tau_analytic);
  number("N0", base.n0);
  number("Nmax", base.n_max);
  number("seed", base.seed);
  return base;
}

bool is_grid_function(const Json& j) { return j.is_object() && j.contains("samples"); }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << j.dump(1) << '\n';
}

}  // namespace specfact
