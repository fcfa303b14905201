#ifndef MWS_SCENARIO_IO_HPP
#define MWS_SCENARIO_IO_HPP

#include <string>

#include "mws/scenario.hpp"

namespace mws {

/// Parses the flat key-value scenario format (see README for the
/// grammar): one "dotted.key = value [unit]" per line, '#' comments.
/// Values carry explicit unit suffixes (um, ms, mm/s, Er, Hz, tr, ...);
/// a bare number means the SI base unit of the key's dimension. The
/// result is validated; all errors are collected into a ValidationError
/// with line numbers.
Scenario parse_scenario(const std::string& text);

Scenario load_scenario(const std::string& path);

/// Canonical serialization: fixed key order, %.12g values and canonical
/// units. serialize(parse(serialize(s))) == serialize(s) byte for byte.
std::string serialize_scenario(const Scenario& scn);

void save_scenario(const Scenario& scn, const std::string& path);

/// Applies one "key=value" override (same grammar as a file line).
void apply_override(Scenario& scn, const std::string& assignment);

}  // namespace mws

#endif
