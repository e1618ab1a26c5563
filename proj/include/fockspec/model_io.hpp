#ifndef FOCKSPEC_MODEL_IO_HPP
#define FOCKSPEC_MODEL_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "fockspec/model.hpp"

namespace fockspec {

struct ModelParseError : std::runtime_error {
    explicit ModelParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Sectioned plain-text model format; see the repository README for the
/// grammar. All coefficients are decimal floats.
ModelSpec parse_model(std::istream& in);
ModelSpec load_model(const std::string& path);

void write_model(const ModelSpec& spec, std::ostream& out);
void save_model(const ModelSpec& spec, const std::string& path);

}  // namespace fockspec

#endif
