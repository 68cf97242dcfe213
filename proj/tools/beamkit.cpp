// Copyright 2026 The beamkit Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamkit/cli.hpp"

int main(int argc, char** argv) { return beamkit::RunCli(argc, argv); }
