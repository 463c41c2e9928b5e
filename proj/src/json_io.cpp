#include "freeproj/json_io.hpp"

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace freeproj {

namespace {

using nlohmann::json;

json complex_entry(std::complex<double> z, bool real_field) {
  if (real_field) return json(z.real());
  return json::array({z.real(), z.imag()});
}

std::complex<double> complex_from(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw std::invalid_argument(std::string(what) + " entries must be numbers or [re, im] pairs");
}

const json& require(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing key '") + key + "'");
  return *it;
}

}  // namespace

nlohmann::json to_json(const Subspace& s) {
  const bool real_field = (s.field == Field::Real);
  json basis = json::array();
  for (Eigen::Index r = 0; r < s.basis.rows(); ++r) {
    for (Eigen::Index c = 0; c < s.basis.cols(); ++c) {
      basis.push_back(complex_entry(s.basis(r, c), real_field));
    }
  }
  return json{{"n", s.ambient}, {"k", s.dim}, {"field", field_name(s.field)}, {"basis", basis}};
}

Subspace subspace_from_json(const nlohmann::json& j) {
  const int n = require(j, "n").get<int>();
  const int k = require(j, "k").get<int>();
  const Field field = field_from_name(require(j, "field").get<std::string>());
  const json& basis = require(j, "basis");
  if (!basis.is_array()) throw std::invalid_argument("basis must be an array");
  if (n < 0 || k < 0 || basis.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(k)) {
    throw std::invalid_argument("basis length must equal n * k");
  }
  Eigen::MatrixXcd m(n, k);
  std::size_t idx = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < k; ++c) {
      m(r, c) = complex_from(basis[idx++], "basis");
    }
  }
  return Subspace::from_basis(m, field);
}

nlohmann::json to_json(const PrincipalAngleSpectrum& s) {
  return json{{"angles", s.angles},
              {"tol_zero", s.tol_zero},
              {"dim_intersection", s.dim_intersection},
              {"dim_right", s.dim_right},
              {"k", s.k},
              {"l", s.l},
              {"n", s.n}};
}

PrincipalAngleSpectrum angle_spectrum_from_json(const nlohmann::json& j) {
  PrincipalAngleSpectrum s;
  s.angles = require(j, "angles").get<std::vector<double>>();
  s.tol_zero = j.value("tol_zero", kDefaultAngleTol);
  s.dim_intersection = j.value("dim_intersection", 0);
  s.dim_right = j.value("dim_right", 0);
  s.k = j.value("k", 0);
  s.l = j.value("l", 0);
  s.n = j.value("n", 0);
  return s;
}

nlohmann::json to_json(const NCPolynomial& p) {
  json out = json::object();
  for (const auto& [word, coeff] : p.terms()) {
    const std::string key = word.empty() ? "1" : word;
    out[key] = json::array({coeff.real(), coeff.imag()});
  }
  return out;
}

NCPolynomial ncpoly_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("a polynomial must be a JSON object");
  NCPolynomial p;
  for (const auto& [key, value] : j.items()) {
    const std::string word = (key == "1") ? std::string() : key;
    p.add_term(word, complex_from(value, "coefficient"));
  }
  return p;
}

nlohmann::json to_json(const SpectrumWithMultiplicity& s) {
  json out = json::array();
  for (const auto& [value, mult] : s.entries) {
    out.push_back(json::array({value, mult}));
  }
  return out;
}

nlohmann::json to_json(const SpectralLaw& law) {
  json atoms = json::array();
  for (const Atom& a : law.atoms) atoms.push_back(json::array({a.location, a.mass}));
  json pieces = json::array();
  for (const ACPiece& p : law.pieces) {
    json params = json::object();
    for (const auto& [key, value] : p.params) params[key] = value;
    pieces.push_back(json{{"a", p.lo}, {"b", p.hi}, {"mass", p.mass}, {"kind", p.kind},
                          {"params", params}});
  }
  return json{{"atoms", atoms}, {"pieces", pieces}};
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("the configuration must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "n") {
      c.n = value.get<int>();
    } else if (key == "k") {
      c.k = value.get<int>();
    } else if (key == "l") {
      c.l = value.get<int>();
    } else if (key == "trials") {
      c.trials = value.get<long long>();
    } else if (key == "seed") {
      c.seed = value.get<std::uint64_t>();
    } else if (key == "field") {
      c.field = field_from_name(value.get<std::string>());
    } else if (key == "target") {
      c.target = value.get<std::string>();
    } else if (key == "poly") {
      if (value.is_string()) {
        c.poly = parse_ncpoly(value.get<std::string>());
      } else {
        c.poly = ncpoly_from_json(value);
      }
    } else if (key == "path") {
      c.path = path_from_name(value.get<std::string>());
    } else if (key == "tol_zero") {
      c.tol_zero = value.get<double>();
    } else if (key == "threads") {
      c.threads = value.get<int>();
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  return c;
}

}  // namespace freeproj
