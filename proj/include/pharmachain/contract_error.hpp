#pragma once

#include <stdexcept>
#include <string>

namespace pharmachain {

// Raised inside contract execution. The enclosing transaction is recorded as
// failed with (code, detail) and no state change.
class ContractError : public std::runtime_error {
 public:
  ContractError(std::string code, std::string detail = {})
      : std::runtime_error(detail.empty() ? code : code + ": " + detail),
        code_(std::move(code)),
        detail_(std::move(detail)) {}

  const std::string& code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string code_;
  std::string detail_;
};

}  // namespace pharmachain
