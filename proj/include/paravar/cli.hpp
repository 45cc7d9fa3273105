#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "paravar/family.hpp"

namespace paravar {

/// Text file holding a scale family, one `component <i> <n values>` line per
/// scale after `key value` header lines. A plain signal is stored as a raw
/// family with the single scale 0.
struct SignalFile {
  ScaleFamily family;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> generator;
};

inline constexpr std::string_view kSignalFileMagic = "paravar-signal 1";

void write_signal_file(std::ostream& out, const SignalFile& file);
/// Throws std::invalid_argument on malformed input or when the family fails
/// its flavor's validation (Haar round trip, band limits).
SignalFile read_signal_file(std::istream& in);

void save_signal_file(const std::string& path, const SignalFile& file);
SignalFile load_signal_file(const std::string& path);

/// A single-scale raw family is read as a plain signal.
DyadicSignal as_signal(const SignalFile& file);

namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitSuiteFailure = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cli

}  // namespace paravar
