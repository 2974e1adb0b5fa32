#pragma once

// JSON forms:
//   Frame       {"dim": d, "vectors": [[[re, im], ... d], ... n]}
//   Certificate {"A", "B", "witness_lower", "witness_upper", "checked", ...}
//   Record      {"theorem", "lambda", "sigma", "terms", "residual", "slack", "pass"}
// Partition masks are written as the integer whose bit i marks index i.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wfl/error.hpp"
#include "wfl/frames.hpp"
#include "wfl/identities.hpp"
#include "wfl/weaving.hpp"

namespace wfl {

using Json = nlohmann::ordered_json;

inline Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::BadInput, "complex entry must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json frame_to_json(const FrameFamily& frame) {
  Json vectors = Json::array();
  for (std::size_t i = 0; i < frame.size(); ++i) {
    Json v = Json::array();
    for (std::size_t j = 0; j < frame.dim(); ++j) {
      v.push_back(complex_to_json(frame.matrix()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))));
    }
    vectors.push_back(std::move(v));
  }
  return Json{{"dim", frame.dim()}, {"vectors", std::move(vectors)}};
}

inline FrameFamily frame_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("vectors")) {
    throw Error(ErrorCode::BadInput, "frame JSON needs \"dim\" and \"vectors\"");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
    throw Error(ErrorCode::BadInput, "\"dim\" must be a positive integer");
  }
  const auto dim = j["dim"].get<std::size_t>();
  const Json& vectors = j["vectors"];
  if (!vectors.is_array()) throw Error(ErrorCode::BadInput, "\"vectors\" must be an array");
  ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const Json& v = vectors[i];
    if (!v.is_array() || v.size() != dim) {
      throw Error(ErrorCode::DimMismatch, "vector " + std::to_string(i) + " does not have dim entries");
    }
    for (std::size_t r = 0; r < dim; ++r) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = complex_from_json(v[r]);
    }
  }
  return FrameFamily(std::move(m));
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadInput, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::BadInput, path + ": " + e.what());
  }
}

inline FrameFamily read_frame_file(const std::string& path) { return frame_from_json(read_json_file(path)); }

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::BadInput, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::BadInput, "write failed for " + path);
}

inline void write_frame_file(const std::string& path, const FrameFamily& frame) {
  write_text_file(path, frame_to_json(frame).dump(2) + "\n");
}

inline Json certificate_to_json(const WovenCertificate& cert) {
  return Json{{"A", cert.lower},
              {"B", cert.upper},
              {"witness_lower", cert.witness_lower.bits()},
              {"witness_upper", cert.witness_upper.bits()},
              {"checked", cert.partitions_checked},
              {"n", cert.n},
              {"complete", cert.complete()},
              {"borderline", cert.borderline}};
}

inline Json optional_to_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json record_to_json(const IdentityRecord& rec) {
  Json terms = Json::object();
  for (const auto& t : rec.terms) {
    terms[std::string(t.name)] = t.complex_valued ? complex_to_json(t.value) : Json(t.value.real());
  }
  return Json{{"theorem", std::string(rec.theorem)},
              {"lambda", optional_to_json(rec.lambda)},
              {"sigma", rec.sigma ? Json(rec.sigma->bits()) : Json(nullptr)},
              {"terms", std::move(terms)},
              {"residual", optional_to_json(rec.residual)},
              {"slack", optional_to_json(rec.slack)},
              {"scale", rec.scale},
              {"pass", rec.pass}};
}

}  // namespace wfl
