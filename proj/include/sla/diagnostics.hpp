#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sla {

enum class Severity { error, warning };

std::string to_string(Severity s);

// One finding from a validator. `doc` and `path` locate the finding; either
// may be empty when the finding concerns the whole model.
struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string doc;
  std::string path;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

class ValidationReport {
 public:
  void add(std::string code, std::string doc, std::string path, std::string message,
           Severity severity = Severity::error);
  void append(const ValidationReport& other);

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  bool has_errors() const;
  bool contains(const std::string& code) const;
  std::size_t count(const std::string& code) const;

  const std::vector<Diagnostic>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool operator==(const ValidationReport&) const = default;

 private:
  std::vector<Diagnostic> items_;
};

// `SEVERITY CODE doc:path message`
std::string format_diagnostic(const Diagnostic& d);

// Operation failure carrying a stable machine-readable code such as
// LOCATOR_INVALID or OVERLAP_FORBIDDEN.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message);

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// INVALID_MODEL, with the diagnostics that caused the rejection.
class ModelError : public Error {
 public:
  explicit ModelError(ValidationReport report);

  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

// Parse failures carry the byte offset where the problem was detected.
class ParseError : public Error {
 public:
  ParseError(std::string code, std::size_t offset, const std::string& message);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace sla
