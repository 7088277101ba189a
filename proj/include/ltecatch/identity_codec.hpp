/* SPDX-License-Identifier: Apache-2.0 */

// Subscriber/network identifiers and the plain (unprotected) EMM message
// subset exchanged before NAS security activation.
//
// Mobile identity layout (BCD):
//   IMSI  octet 1 = digit1 << 4 | odd << 3 | 0b001, then two digits per
//         octet low nibble first, 0xF filler when the digit count is even.
//   GUTI  octet 1 = 0xF6, PLMN (3), MME group (2, BE), MME code (1),
//         M-TMSI (4, BE).
// EMM frame: 0x07, message type, then fields in declaration order.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ltecatch {

using Octets = std::vector<std::uint8_t>;

class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedIdentity : public CodecError {
 public:
  using CodecError::CodecError;
};

class MalformedPlmn : public CodecError {
 public:
  using CodecError::CodecError;
};

class MalformedEmm : public CodecError {
 public:
  using CodecError::CodecError;
};

/// MCC (3 digits) + MNC (2 or 3 digits). Text form is "242-01".
class Plmn {
 public:
  /// Throws std::invalid_argument when a field is not a valid digit string.
  Plmn(std::string mcc, std::string mnc);

  /// Parses "MCC-MNC".
  static Plmn parse(std::string_view text);

  const std::string& mcc() const noexcept { return mcc_; }
  const std::string& mnc() const noexcept { return mnc_; }
  std::string digits() const { return mcc_ + mnc_; }
  std::string to_string() const { return mcc_ + "-" + mnc_; }

  auto operator<=>(const Plmn&) const = default;

 private:
  std::string mcc_;
  std::string mnc_;
};

/// 6 to 15 decimal digits.
class Imsi {
 public:
  explicit Imsi(std::string digits);

  const std::string& digits() const noexcept { return digits_; }
  bool belongs_to(const Plmn& plmn) const;

  auto operator<=>(const Imsi&) const = default;

 private:
  std::string digits_;
};

struct Guti {
  Plmn plmn;
  std::uint16_t mme_group = 0;
  std::uint8_t mme_code = 0;
  std::uint32_t m_tmsi = 0;

  auto operator<=>(const Guti&) const = default;
};

std::string to_string(const Guti& guti);

using MobileIdentity = std::variant<Imsi, Guti>;

struct EmmCause {
  static constexpr std::uint8_t kIllegalUe = 3;

  std::uint8_t value = 0;

  bool operator==(const EmmCause&) const = default;
};

/// Human label for the causes this tool cares to name, "unknown" otherwise.
std::string_view cause_label(EmmCause cause);

enum class IdentityKind : std::uint8_t { kImsi = 0x01 };

namespace emm {

struct AttachRequest {
  MobileIdentity identity;
  bool operator==(const AttachRequest&) const = default;
};
struct AttachAccept {
  Guti guti;
  std::uint16_t tac = 0;
  bool operator==(const AttachAccept&) const = default;
};
struct AttachReject {
  EmmCause cause;
  bool operator==(const AttachReject&) const = default;
};
struct TauRequest {
  Guti guti;
  std::uint16_t last_tac = 0;
  bool operator==(const TauRequest&) const = default;
};
struct TauAccept {
  bool operator==(const TauAccept&) const = default;
};
struct TauReject {
  EmmCause cause;
  bool operator==(const TauReject&) const = default;
};
struct IdentityRequest {
  IdentityKind requested = IdentityKind::kImsi;
  bool operator==(const IdentityRequest&) const = default;
};
struct IdentityResponse {
  Imsi imsi;
  bool operator==(const IdentityResponse&) const = default;
};

inline constexpr std::uint8_t kProtocolDiscriminator = 0x07;

inline constexpr std::uint8_t kAttachRequest = 0x41;
inline constexpr std::uint8_t kAttachAccept = 0x42;
inline constexpr std::uint8_t kAttachReject = 0x44;
inline constexpr std::uint8_t kTauRequest = 0x48;
inline constexpr std::uint8_t kTauAccept = 0x49;
inline constexpr std::uint8_t kTauReject = 0x4B;
inline constexpr std::uint8_t kIdentityRequest = 0x55;
inline constexpr std::uint8_t kIdentityResponse = 0x56;

}  // namespace emm

using EmmMessage =
    std::variant<emm::AttachRequest, emm::AttachAccept, emm::AttachReject,
                 emm::TauRequest, emm::TauAccept, emm::TauReject,
                 emm::IdentityRequest, emm::IdentityResponse>;

/// Upper-case message name as it appears in traces, e.g. "ATTACH_REJECT".
std::string_view message_name(const EmmMessage& msg);
std::uint8_t message_type(const EmmMessage& msg);

/// True for messages a UE sends (requests and identity responses).
bool is_ue_originated(const EmmMessage& msg);

/// The IMSI carried in clear by the message, if any.
const Imsi* carried_imsi(const EmmMessage& msg);

Octets encode_mobile_identity(const MobileIdentity& identity);
MobileIdentity decode_mobile_identity(std::span<const std::uint8_t> octets);

std::array<std::uint8_t, 3> encode_plmn(const Plmn& plmn);
Plmn decode_plmn(std::span<const std::uint8_t> octets);

Octets encode_emm(const EmmMessage& msg);
EmmMessage decode_emm(std::span<const std::uint8_t> octets);

/// Lowercase, no separators.
std::string to_hex(std::span<const std::uint8_t> octets);
/// Accepts upper or lower case; throws CodecError on odd length or bad digit.
Octets from_hex(std::string_view text);

}  // namespace ltecatch
