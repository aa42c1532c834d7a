#include "sla/diagnostics.hpp"

#include <algorithm>

namespace sla {

std::string to_string(Severity s) { return s == Severity::error ? "ERROR" : "WARNING"; }

void ValidationReport::add(std::string code, std::string doc, std::string path, std::string message,
                           Severity severity) {
  items_.push_back({severity, std::move(code), std::move(doc), std::move(path), std::move(message)});
}

void ValidationReport::append(const ValidationReport& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

bool ValidationReport::has_errors() const {
  return std::any_of(items_.begin(), items_.end(), [](const Diagnostic& d) { return d.severity == Severity::error; });
}

bool ValidationReport::contains(const std::string& code) const { return count(code) > 0; }

std::size_t ValidationReport::count(const std::string& code) const {
  return static_cast<std::size_t>(
      std::count_if(items_.begin(), items_.end(), [&](const Diagnostic& d) { return d.code == code; }));
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = to_string(d.severity);
  out += ' ';
  out += d.code;
  out += ' ';
  out += d.doc.empty() ? "-" : d.doc;
  out += ':';
  out += d.path.empty() ? "/" : d.path;
  if (!d.message.empty()) {
    out += ' ';
    out += d.message;
  }
  return out;
}

Error::Error(std::string code, const std::string& message)
    : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

namespace {
std::string summarize(const ValidationReport& r) {
  std::string s = std::to_string(r.size()) + " diagnostic(s)";
  if (!r.empty()) s += ", first: " + format_diagnostic(r.items().front());
  return s;
}
}  // namespace

ModelError::ModelError(ValidationReport report) : Error("INVALID_MODEL", summarize(report)), report_(std::move(report)) {}

ParseError::ParseError(std::string code, std::size_t offset, const std::string& message)
    : Error(std::move(code), "at byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

}  // namespace sla
