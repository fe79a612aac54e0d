#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "chp/model.hpp"

namespace chp {

// Malformed instance document; the message names the line or field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Document parsed but failed validation; carries every diagnostic.
class InstanceError : public std::runtime_error {
 public:
  explicit InstanceError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct LoadOptions {
  int default_pieces = 10;  // tangent count when a quadratic omits "pieces"
  bool require_valid = true;
};

struct LoadResult {
  SystemInstance instance;
  std::vector<Diagnostic> diagnostics;  // warnings (and errors if not required valid)
};

// Parses the JSON instance schema. Quadratic costs become tangent pieces and
// dominated pieces are dropped with a warning.
LoadResult parse_instance(const std::string& text, const LoadOptions& options = {});
LoadResult load_instance_file(const std::string& path, const LoadOptions& options = {});

// Convenience: validated instance or throw.
SystemInstance load_instance(const std::string& path, const LoadOptions& options = {});

std::string instance_to_json(const SystemInstance& instance);
void save_instance(const SystemInstance& instance, const std::string& path);

}  // namespace chp
