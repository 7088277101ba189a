/* SPDX-License-Identifier: Apache-2.0 */

#include <iostream>

#include "ltecatch/cli.hpp"

int main(int argc, char** argv) {
  return ltecatch::cli::main(argc, argv, std::cout, std::cerr);
}
