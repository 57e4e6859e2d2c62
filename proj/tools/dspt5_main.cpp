// SPDX-License-Identifier: Apache-2.0
#include "dspt5/runconfig.hpp"

int main(int argc, char** argv) { return dspt5::cli::run(argc, argv); }
