#ifndef FRENGATE_IO_HPP
#define FRENGATE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "frengate/coupling.hpp"
#include "frengate/field.hpp"

namespace frengate {

// 17 significant digits: enough to round-trip any double exactly.
std::string format_double(double value);

// CSV "omega,omega_prime,re,im" plus a JSON sidecar with grid, channel and params.
void save_field_csv(const BiphotonField& field, const std::filesystem::path& csv_path);
void save_field_sidecar(const BiphotonField& field, const PhysicalParams& params,
                        const std::filesystem::path& json_path);

// ModeProfile as CSV "omega,u".
void save_mode_profile_csv(const ModeProfile& profile, const std::filesystem::path& path);
ModeProfile load_mode_profile_csv(const std::filesystem::path& path,
                                  ModeProfile::Kind kind);

// FNV-1a 64-bit checksum of a file's bytes, as a fixed-width hex string.
std::string file_checksum(const std::filesystem::path& path);

// Structured config: JSON or a TOML subset (tables, scalars, arrays, comments),
// autodetected by extension and normalized to a JSON object.
nlohmann::json load_config(const std::filesystem::path& path);

// Reject keys outside the allowed set (dotted paths for nested tables).
void reject_unknown_keys(const nlohmann::json& config,
                         const std::vector<std::string>& allowed, const std::string& where);

// Effective parallelism cap: FRENGATE_THREADS if set, otherwise hardware.
int thread_cap();

}  // namespace frengate

#endif
