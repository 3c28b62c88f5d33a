// SPDX-License-Identifier: Apache-2.0
#include "isvd_cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return isvd::cli::run_main(argc, argv, std::cout, std::cerr); }
