#ifndef MCLN_ERRORS_HPP
#define MCLN_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcln {

// Failure categories. The CLI maps each one onto a distinct exit status.
enum class ErrorKind {
    invalid_spec,
    invalid_frequency,
    invalid_signal,
    dimension,
    numeric,
    degenerate_network,
    resonance_degeneracy,
    out_of_band,
    infeasible_coupling,
    design,
    config,
    io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace mcln

#endif
