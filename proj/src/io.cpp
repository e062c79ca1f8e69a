#include "varorder/io.hpp"

#include <fstream>
#include <sstream>

#include "varorder/error.hpp"

namespace varorder::io {

namespace {

std::size_t dim_field(const Json& j) {
  if (!j.is_object() || !j.contains("dim")) throw InputError("missing \"dim\" field");
  const Json& d = j.at("dim");
  if (!d.is_number_integer() || d.get<long long>() <= 0) {
    throw InputError("\"dim\" must be a positive integer");
  }
  return static_cast<std::size_t>(d.get<long long>());
}

double real_from_json(const Json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InputError("complex entry must be a number or an [re, im] pair");
}

ComplexMatrix matrix_from_json(const Json& j, std::size_t dim) {
  if (!j.is_array()) throw InputError("matrix must be an array");
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix m(n, n);
  const bool nested = j.size() == dim && j[0].is_array() && j[0].size() == dim;
  if (nested) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const Json& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || row.size() != dim) throw InputError("matrix row has wrong length");
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
  } else {
    if (j.size() != dim * dim) throw InputError("matrix has wrong number of entries");
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        m(r, c) = complex_from_json(j[static_cast<std::size_t>(r * n + c)]);
      }
    }
  }
  return m;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

HermitianObservable observable_from_json(const Json& j) {
  const std::size_t dim = dim_field(j);
  if (!j.contains("matrix")) throw InputError("missing \"matrix\" field");
  return HermitianObservable(matrix_from_json(j.at("matrix"), dim));
}

Json observable_to_json(const HermitianObservable& a) {
  Json out;
  out["dim"] = a.dim();
  out["matrix"] = matrix_to_json(a.matrix());
  return out;
}

UnitaryMap unitary_from_json(const Json& j, bool antiunitary) {
  const std::size_t dim = dim_field(j);
  if (!j.contains("matrix")) throw InputError("missing \"matrix\" field");
  return UnitaryMap(matrix_from_json(j.at("matrix"), dim), antiunitary);
}

State state_from_json(const Json& j) {
  const std::size_t dim = dim_field(j);
  if (j.contains("vector")) {
    const Json& v = j.at("vector");
    if (!v.is_array() || v.size() != dim) throw InputError("state vector has wrong length");
    ComplexVector x(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) x(static_cast<Eigen::Index>(i)) = complex_from_json(v[i]);
    return PureState(std::move(x));
  }
  if (j.contains("density")) return DensityState(matrix_from_json(j.at("density"), dim));
  throw InputError("state needs a \"vector\" or \"density\" field");
}

std::vector<double> spectrum_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("spectrum must be a flat array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(real_from_json(v, "spectrum entry"));
  return out;
}

std::vector<double> spectrum_from_text(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("cannot parse spectrum entry '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw InputError("cannot parse spectrum entry '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

QMatrix qmatrix_from_json(const Json& j) {
  if (j.is_object() && !j.contains("q")) throw InputError("missing \"q\" field");
  const Json& rows = j.is_object() ? j.at("q") : j;
  if (!rows.is_array() || rows.empty()) throw InputError("q-matrix must be a nested array");
  const std::size_t n = rows.size();
  QMatrix q{Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  for (std::size_t r = 0; r < n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n) throw InputError("q-matrix must be square");
    for (std::size_t c = 0; c < n; ++c) {
      q.q(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          real_from_json(rows[r][c], "q-matrix entry");
    }
  }
  return q;
}

Json qmatrix_to_json(const QMatrix& q) {
  Json out;
  out["n"] = q.n();
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < q.q.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < q.q.cols(); ++c) row.push_back(q.q(r, c));
    rows.push_back(std::move(row));
  }
  out["q"] = std::move(rows);
  Json pairs = Json::array();
  for (Eigen::Index j = 0; j < q.q.rows(); ++j) {
    for (Eigen::Index k = j + 1; k < q.q.cols(); ++k) {
      pairs.push_back(Json{{"j", j + 1}, {"k", k + 1}, {"q", q.q(j, k)}});
    }
  }
  out["pairs"] = std::move(pairs);
  return out;
}

Json table_to_json(const FunctionTable& f) {
  Json out = Json::array();
  for (const auto& p : f.points()) out.push_back(Json::array({p.x, p.value}));
  return out;
}

FunctionTable table_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("function table must be an array of [x, f(x)] pairs");
  std::vector<TablePoint> pts;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw InputError("table entry must be an [x, f(x)] pair");
    pts.push_back({real_from_json(p[0], "table abscissa"), real_from_json(p[1], "table value")});
  }
  return FunctionTable(std::move(pts));
}

Json measure_to_json(const BornMeasure& mu) {
  Json out = Json::array();
  for (const auto& a : mu.atoms()) out.push_back(Json::array({a.location, a.mass}));
  return out;
}

Json verdict_to_json(const OrderVerdict& v) {
  Json out;
  out["holds"] = v.holds;
  out["certificate"] = v.certificate ? table_to_json(*v.certificate) : Json(nullptr);
  out["witness"] = v.witness ? vector_to_json(v.witness->vector()) : Json(nullptr);
  out["margin"] = v.margin;
  out["violation"] = v.violation ? Json(to_string(*v.violation)) : Json(nullptr);
  out["violating_eigenvalues"] = v.violating_eigenvalues;
  out["tolerances"] = Json{{"decision", v.tol}, {"fail_margin", kFailMarginTol}};
  return out;
}

Json oracle_to_json(const OracleResult& r, const OracleConfig& cfg) {
  Json out;
  out["restarts"] = cfg.restarts;
  out["steps"] = cfg.steps;
  out["seed"] = cfg.seed;
  out["best_value"] = r.best_value;
  out["best_restart"] = r.best_restart;
  out["best_state"] = vector_to_json(r.best_state.vector());
  return out;
}

Json families_to_json(const std::vector<TwoPointFamily>& families) {
  Json out = Json::array();
  for (const auto& f : families) {
    Json item;
    item["subset"] = f.subset;
    item["threshold"] = f.threshold;
    item["projector"] = matrix_to_json(f.projector);
    out.push_back(std::move(item));
  }
  return out;
}

Json reconstruction_to_json(const MetricReconstruction& r) {
  Json out;
  out["max_pairs"] = r.max_pairs;
  out["spectrum"] = r.spectrum;
  out["positions"] = r.positions;
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < r.distances.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < r.distances.cols(); ++k) row.push_back(r.distances(i, k));
    rows.push_back(std::move(row));
  }
  out["distances"] = std::move(rows);
  return out;
}

Json automorphism_report_to_json(const AutomorphismReport& r) {
  Json out;
  out["passed"] = r.passed;
  out["trials"] = r.trials;
  if (r.counterexample) {
    const auto& c = *r.counterexample;
    Json ce;
    ce["trial"] = c.trial;
    ce["relation"] = c.reversed ? "B <= A" : "A <= B";
    ce["before"] = c.before;
    ce["after"] = c.after;
    ce["A"] = observable_to_json(c.first);
    ce["B"] = observable_to_json(c.second);
    out["counterexample"] = std::move(ce);
  } else {
    out["counterexample"] = nullptr;
  }
  return out;
}

Json with_header(const Json& payload) {
  Json out;
  out["tool"] = kToolName;
  out["version"] = kToolVersion;
  for (auto it = payload.begin(); it != payload.end(); ++it) out[it.key()] = it.value();
  return out;
}

}  // namespace varorder::io
