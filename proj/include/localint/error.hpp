#pragma once

#include <stdexcept>
#include <string>

namespace localint {

// Error taxonomy shared across the library. The CLI maps these onto exit
// codes: schema/validation problems exit 1, estimation problems exit 2.

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error("schema: " + msg) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error("validation: " + msg) {}
};

struct OverlapError : std::runtime_error {
    explicit OverlapError(const std::string& msg) : std::runtime_error("overlap: " + msg) {}
};

struct EstimationError : std::runtime_error {
    explicit EstimationError(const std::string& msg) : std::runtime_error("estimation: " + msg) {}
};

}  // namespace localint
