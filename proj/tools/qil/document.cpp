#include "qil/document.hpp"

#include <cmath>
#include <cstdio>

namespace qil::cli {

using nlohmann::json;

MatrixDocument document_from_json(const json& j) {
  if (!j.is_object()) throw DocumentError("matrix document must be an object");
  if (!j.contains("dim") || !j.at("dim").is_number_integer()) {
    throw DocumentError("matrix document needs an integer 'dim'");
  }
  const auto dim = j.at("dim").get<std::int64_t>();
  if (dim < 1) throw DocumentError("'dim' must be positive");
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    throw DocumentError("matrix document needs an 'entries' array");
  }
  const json& entries = j.at("entries");
  if (static_cast<std::int64_t>(entries.size()) != dim * dim) {
    throw DocumentError("'entries' has " + std::to_string(entries.size()) + " elements, expected dim^2 = " +
                        std::to_string(dim * dim));
  }
  DenseMatrix a(dim, dim);
  for (std::int64_t idx = 0; idx < dim * dim; ++idx) {
    const json& e = entries.at(static_cast<std::size_t>(idx));
    if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number()) {
      throw DocumentError("entry " + std::to_string(idx) + " is not a [re, im] pair");
    }
    const double re = e.at(0).get<double>();
    const double im = e.at(1).get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw DocumentError("entry " + std::to_string(idx) + " is not finite");
    }
    a(idx / dim, idx % dim) = Complex(re, im);
  }
  MatrixDocument doc;
  doc.matrix = OperatorMatrix(std::move(a));
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw DocumentError("'name' must be a string");
    doc.name = j.at("name").get<std::string>();
  }
  if (j.contains("source")) {
    if (!j.at("source").is_string()) throw DocumentError("'source' must be a string");
    doc.source = j.at("source").get<std::string>();
  }
  return doc;
}

json document_to_json(const MatrixDocument& doc) {
  json entries = json::array();
  const DenseMatrix& a = doc.matrix.dense();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) entries.push_back({a(i, k).real(), a(i, k).imag()});
  }
  json j = {{"dim", doc.dim()}, {"entries", std::move(entries)}};
  if (doc.name) j["name"] = *doc.name;
  if (doc.source) j["source"] = *doc.source;
  return j;
}

std::vector<MatrixDocument> parse_documents(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw DocumentError(std::string("invalid JSON: ") + e.what());
  }
  std::vector<MatrixDocument> docs;
  try {
    if (root.is_array()) {
      if (root.empty()) throw DocumentError("empty document list");
      for (const auto& item : root) docs.push_back(document_from_json(item));
    } else {
      docs.push_back(document_from_json(root));
    }
  } catch (const json::exception& e) {
    throw DocumentError(std::string("malformed document: ") + e.what());
  }
  return docs;
}

std::string serialize_documents(const std::vector<MatrixDocument>& docs) {
  if (docs.size() == 1) return document_to_json(docs.front()).dump(2);
  json arr = json::array();
  for (const auto& d : docs) arr.push_back(document_to_json(d));
  return arr.dump(2);
}

std::string inputs_digest(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qil::cli
