#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qil/matrix.hpp"

namespace qil::cli {

/// Malformed or inconsistent matrix file.
class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {dim, entries: [[re, im], ...] row-major, name?, source?}
struct MatrixDocument {
  OperatorMatrix matrix;
  std::optional<std::string> name;
  std::optional<std::string> source;

  std::size_t dim() const noexcept { return matrix.dim(); }
};

MatrixDocument document_from_json(const nlohmann::json& j);
nlohmann::json document_to_json(const MatrixDocument& doc);

/// Accepts a single document object or an array of them.
std::vector<MatrixDocument> parse_documents(std::string_view text);

/// Single object for one document, array otherwise.
std::string serialize_documents(const std::vector<MatrixDocument>& docs);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string inputs_digest(std::string_view bytes);

}  // namespace qil::cli
