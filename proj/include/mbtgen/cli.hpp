#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mbtgen/session_service.hpp"

namespace mbtgen::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitIo = 3;

/// Hosts the session service until SIGINT/SIGTERM, then flushes any active
/// session to disk.
int cmd_serve(const ServiceConfig& config, std::ostream& out, std::ostream& err);

int cmd_convert(const std::filesystem::path& input, const std::filesystem::path& output, Millis timeout,
                std::ostream& out, std::ostream& err);

int cmd_validate(const std::filesystem::path& input, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace mbtgen::cli
