#pragma once

namespace slicesim {

// slicesim gen-traffic|cluster|simulate|report. Exit codes: 0 success,
// 2 usage/validation error, 1 runtime failure.
int cli_main(int argc, const char* const* argv);

}  // namespace slicesim
