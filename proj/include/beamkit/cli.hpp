// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

namespace beamkit {

// Entry point of the `beamkit` tool. Returns the process exit status;
// diagnostics go to stderr.
int RunCli(int argc, char** argv);

}  // namespace beamkit
