#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gfc {

// All failures carry a short machine-readable code (e.g. "DegenerateForm",
// "NotTransverse") and optionally the tag of the invariant they violate
// (e.g. "lemma:bound.critical-set"), which the CLI echoes in reports.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg, std::string tag = "")
      : std::runtime_error(code + ": " + msg),
        code_(std::move(code)),
        tag_(std::move(tag)) {}

  const std::string& code() const { return code_; }
  const std::string& tag() const { return tag_; }

  // Input/environment errors exit with code 3, invariant violations with 2.
  bool is_input_error() const {
    return code_ == "FileNotFound" || code_ == "SchemaError" ||
           code_ == "IoError" || code_ == "ParseError";
  }

 private:
  std::string code_;
  std::string tag_;
};

[[noreturn]] inline void raise(const std::string& code, const std::string& msg,
                               const std::string& tag = "") {
  throw Error(code, msg, tag);
}

inline void require(bool cond, const std::string& code, const std::string& msg,
                    const std::string& tag = "") {
  if (!cond) raise(code, msg, tag);
}

}  // namespace gfc
