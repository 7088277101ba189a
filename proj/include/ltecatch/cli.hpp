/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <iosfwd>
#include <string>

#include "ltecatch/identity_codec.hpp"

namespace ltecatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitInvalid = 2;

/// Entry point shared by the binary and the tests.
///   run <scenario> [--out DIR] [--quiet]
///   validate <scenario>
///   explain-trace <file> [--full]
int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

/// Keeps the last five digits, masks the rest.
std::string redact_imsi(const Imsi& imsi);

/// One-line rendering of a decoded message, e.g.
/// "ATTACH_REJECT cause=3 (Illegal UE)".
std::string describe(const EmmMessage& msg, bool full_imsi);

}  // namespace ltecatch::cli
