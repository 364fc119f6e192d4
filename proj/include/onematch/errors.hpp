#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace onematch {

// Domain error with a module-qualified code, e.g. "model:DuplicateId".
// what() is a single line suitable for machine parsing: "module:Code: detail".
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string code, const std::string& detail)
        : std::runtime_error(module + ":" + code + (detail.empty() ? "" : ": " + detail)),
          module_(std::move(module)),
          code_(std::move(code)) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& code() const noexcept { return code_; }

private:
    std::string module_;
    std::string code_;
};

}  // namespace onematch
