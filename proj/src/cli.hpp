#pragma once

namespace spduff {

/// Full command-line entry point (check / simulate / energy / constants /
/// sweep / phase-portrait). Returns the process exit code: 0 success,
/// 1 certificate or runtime failure, 2 usage error.
int run_main(int argc, const char* const* argv);

}  // namespace spduff
