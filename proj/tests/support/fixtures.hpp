#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ftr/dsl.hpp"

#ifndef FTR_MODELS_DIR
#error "FTR_MODELS_DIR must point at the bundled models"
#endif

namespace ftr::testing {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string model_path(const std::string& file) { return std::string(FTR_MODELS_DIR) + "/" + file; }

inline SystemModel bundled(const std::string& file) {
  auto doc = parse_model(read_text(model_path(file)));
  if (!doc.ok()) throw std::runtime_error(file + ": " + format_diagnostic(doc.diagnostics.front()));
  return *doc.model;
}

inline SystemModel model_from(std::string_view text) {
  auto doc = parse_model(text);
  if (!doc.ok()) throw std::runtime_error(format_diagnostic(doc.diagnostics.front()));
  return *doc.model;
}

}  // namespace ftr::testing
