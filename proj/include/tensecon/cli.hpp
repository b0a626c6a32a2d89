#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tensecon {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

/// Runs one subcommand. `args` excludes the program name. Data goes to
/// `out` (or the --out file), diagnostics to `err`.
///
///   ingest    --transactions <csv> --taxonomy <json> --out <json>
///   decompose --tensor <json> [--max-iters N] [--tol X] [--pretty]
///   simulate  --scenario <file> [--seed N] [--out <csv>]
///   serve     [--port P] [--host H] [--allow-origin O] [--scenario-dir D]
///
/// Output files are written to a temporary sibling and renamed into place,
/// so a failing command never leaves a partial file behind.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a whole file; throws IoError naming the path.
std::string read_file(const std::string& path);

/// Writes via temp file + rename; throws IoError naming the path.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace tensecon
