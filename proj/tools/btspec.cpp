// SPDX-License-Identifier: Apache-2.0
#include "btspec/cli.hpp"

int main(int argc, char** argv) { return btspec::run_cli(argc, argv); }
