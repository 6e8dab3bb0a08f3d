// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "qdissect/app/cli.hpp"

int main(int argc, char** argv) { return qdissect::app::run_cli(argc, argv, std::cout, std::cerr); }
