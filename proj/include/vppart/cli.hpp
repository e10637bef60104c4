#pragma once

namespace vppart {

// Entry point of the `vppart` tool. Returns 0 on success, 1 on a usage or
// config error, 2 when every requested cell was infeasible.
int run_cli(int argc, char** argv);

}  // namespace vppart
