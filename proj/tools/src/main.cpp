// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "vad/tools/cli.hpp"

int main(int argc, char** argv) {
  return vad::tools::cli_main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
