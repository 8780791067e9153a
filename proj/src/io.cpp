#include "qgv/io.hpp"

#include <fstream>
#include <sstream>

#include "qgv/error.hpp"

namespace qgv::io {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) throw ValidationError("matrix JSON must be a list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError("matrix JSON rows have different lengths");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const Json& e = row[static_cast<std::size_t>(k)];
      if (e.is_number()) {
        m(i, k) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ValidationError("matrix JSON entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

Json strategy_to_json(const Strategy& s, const Json& metadata) {
  Json j;
  j["d"] = s.d;
  j["target"] = matrix_to_json(s.target);
  j["pairs"] = Json::array();
  for (const auto& pr : s.pairs) {
    j["pairs"].push_back({{"p", pr.probability}, {"rho", matrix_to_json(pr.input_state)}, {"effect", matrix_to_json(pr.effect)}});
  }
  if (!metadata.empty()) j["metadata"] = metadata;
  return j;
}

Strategy strategy_from_json(const Json& j) {
  try {
    Strategy s;
    s.d = j.at("d").get<int>();
    s.target = matrix_from_json(j.at("target"));
    for (const auto& pj : j.at("pairs")) {
      s.pairs.push_back({matrix_from_json(pj.at("rho")), matrix_from_json(pj.at("effect")), pj.at("p").get<double>()});
    }
    s.validate();
    return s;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("strategy JSON: ") + e.what());
  }
}

Json noise_model_to_json(const NoiseModel& model) {
  Json j;
  j["kind"] = to_string(model.kind);
  if (model.kind == NoiseKind::composed) {
    j["stages"] = Json::array();
    for (const auto& st : model.stages) j["stages"].push_back(noise_model_to_json(st));
  } else if (model.kind == NoiseKind::unitary_rotation_error) {
    j["params"] = {{"theta", model.strength}};
  } else {
    j["params"] = {{"p", model.strength}};
  }
  return j;
}

NoiseModel noise_model_from_json(const Json& j) {
  try {
    NoiseModel m;
    m.kind = noise_kind_from_string(j.at("kind").get<std::string>());
    if (m.kind == NoiseKind::composed) {
      for (const auto& st : j.at("stages")) m.stages.push_back(noise_model_from_json(st));
    } else {
      const Json& params = j.at("params");
      m.strength = params.at(m.kind == NoiseKind::unitary_rotation_error ? "theta" : "p").get<double>();
    }
    return m;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("channel JSON: ") + e.what());
  }
}

KrausChannel channel_from_json(const Json& j) {
  try {
    const int d = j.at("d").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ideal") return KrausChannel{d, {identity(d)}};
    if (kind == "kraus") {
      KrausChannel ch{d, {}};
      for (const auto& op : j.at("ops")) ch.kraus_ops.push_back(matrix_from_json(op));
      ch.validate();
      return ch;
    }
    return make_noise(noise_model_from_json(j), d);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("channel JSON: ") + e.what());
  }
}

Json channel_to_json(const KrausChannel& ch) {
  Json j{{"kind", "kraus"}, {"d", ch.d}, {"ops", Json::array()}};
  for (const auto& k : ch.kraus_ops) j["ops"].push_back(matrix_to_json(k));
  return j;
}

Json channel_to_json(const NoiseModel& model, int d) {
  Json j = noise_model_to_json(model);
  j["d"] = d;
  return j;
}

Json run_summary_json(const VerificationRun& run, const Verdict& v, double epsilon, double delta) {
  return Json{{"seed", run.seed},
              {"N", run.N},
              {"failures", run.failures},
              {"pass_rate", run.empirical_pass_rate},
              {"all_passed", run.all_passed},
              {"epsilon", epsilon},
              {"delta", delta},
              {"required_rounds", v.required_rounds},
              {"verdict", to_string(v.status)},
              {"statement", v.statement}};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw ValidationError("write failed for " + path.string());
}

}  // namespace qgv::io
