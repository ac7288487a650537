#include "mcln/errors.hpp"

namespace mcln {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_spec: return "invalid_spec";
    case ErrorKind::invalid_frequency: return "invalid_frequency";
    case ErrorKind::invalid_signal: return "invalid_signal";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::degenerate_network: return "degenerate_network";
    case ErrorKind::resonance_degeneracy: return "resonance_degeneracy";
    case ErrorKind::out_of_band: return "out_of_band";
    case ErrorKind::infeasible_coupling: return "infeasible_coupling";
    case ErrorKind::design: return "design";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

} // namespace mcln
