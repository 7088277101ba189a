/* SPDX-License-Identifier: Apache-2.0 */

#include "ltecatch/identity_codec.hpp"

#include <algorithm>
#include <cstdio>
#include <type_traits>

namespace ltecatch {

namespace {

bool all_digits(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

std::uint8_t digit_at(const std::string& s, std::size_t i) {
  return static_cast<std::uint8_t>(s[i] - '0');
}

char digit_char(std::uint8_t nibble) { return static_cast<char>('0' + nibble); }

constexpr std::uint8_t kTypeImsi = 0b001;
constexpr std::uint8_t kTypeGuti = 0b110;
constexpr std::uint8_t kGutiFirstOctet = 0xF0 | kTypeGuti;
constexpr std::size_t kGutiLength = 11;

// Cursor over an EMM frame; every read failure is a truncation.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8(const char* what) {
    need(1, what);
    return data_[pos_++];
  }

  std::uint16_t u16(const char* what) {
    need(2, what);
    auto v = static_cast<std::uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }

  std::span<const std::uint8_t> lv(const char* what) {
    std::size_t len = u8(what);
    need(len, what);
    auto out = data_.subspan(pos_, len);
    pos_ += len;
    return out;
  }

  void finish() const {
    if (pos_ != data_.size()) {
      throw MalformedEmm("trailing garbage: " +
                         std::to_string(data_.size() - pos_) + " octet(s)");
    }
  }

 private:
  void need(std::size_t n, const char* what) const {
    if (data_.size() - pos_ < n) {
      throw MalformedEmm(std::string("truncated ") + what);
    }
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

MobileIdentity identity_field(std::span<const std::uint8_t> octets,
                              const char* what) {
  try {
    return decode_mobile_identity(octets);
  } catch (const MalformedIdentity& e) {
    throw MalformedEmm(std::string(what) + ": " + e.what());
  }
}

Guti guti_field(std::span<const std::uint8_t> octets, const char* what) {
  auto id = identity_field(octets, what);
  if (!std::holds_alternative<Guti>(id)) {
    throw MalformedEmm(std::string(what) + ": expected GUTI");
  }
  return std::get<Guti>(std::move(id));
}

Imsi imsi_field(std::span<const std::uint8_t> octets, const char* what) {
  auto id = identity_field(octets, what);
  if (!std::holds_alternative<Imsi>(id)) {
    throw MalformedEmm(std::string(what) + ": expected IMSI");
  }
  return std::get<Imsi>(std::move(id));
}

void put_u16(Octets& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_lv(Octets& out, const Octets& value) {
  out.push_back(static_cast<std::uint8_t>(value.size()));
  out.insert(out.end(), value.begin(), value.end());
}

}  // namespace

Plmn::Plmn(std::string mcc, std::string mnc)
    : mcc_(std::move(mcc)), mnc_(std::move(mnc)) {
  if (mcc_.size() != 3 || !all_digits(mcc_)) {
    throw std::invalid_argument("MCC must be exactly 3 digits: '" + mcc_ + "'");
  }
  if ((mnc_.size() != 2 && mnc_.size() != 3) || !all_digits(mnc_)) {
    throw std::invalid_argument("MNC must be 2 or 3 digits: '" + mnc_ + "'");
  }
}

Plmn Plmn::parse(std::string_view text) {
  auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    throw std::invalid_argument("PLMN must be written MCC-MNC: '" +
                                std::string(text) + "'");
  }
  return Plmn(std::string(text.substr(0, dash)),
              std::string(text.substr(dash + 1)));
}

Imsi::Imsi(std::string digits) : digits_(std::move(digits)) {
  if (digits_.size() < 6 || digits_.size() > 15 || !all_digits(digits_)) {
    throw std::invalid_argument("IMSI must be 6-15 digits: '" + digits_ + "'");
  }
}

bool Imsi::belongs_to(const Plmn& plmn) const {
  return digits_.starts_with(plmn.digits());
}

std::string to_string(const Guti& guti) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04x-%02x-%08x", guti.mme_group,
                guti.mme_code, guti.m_tmsi);
  return guti.plmn.to_string() + "-" + buf;
}

std::string_view cause_label(EmmCause cause) {
  switch (cause.value) {
    case 2: return "IMSI unknown in HSS";
    case 3: return "Illegal UE";
    case 6: return "Illegal ME";
    case 7: return "EPS services not allowed";
    case 11: return "PLMN not allowed";
    case 12: return "Tracking area not allowed";
    case 13: return "Roaming not allowed in this tracking area";
    case 15: return "No suitable cells in tracking area";
    default: return "unknown";
  }
}

std::string_view message_name(const EmmMessage& msg) {
  static constexpr std::string_view kNames[] = {
      "ATTACH_REQUEST", "ATTACH_ACCEPT",    "ATTACH_REJECT",
      "TAU_REQUEST",    "TAU_ACCEPT",       "TAU_REJECT",
      "IDENTITY_REQUEST", "IDENTITY_RESPONSE"};
  return kNames[msg.index()];
}

std::uint8_t message_type(const EmmMessage& msg) {
  static constexpr std::uint8_t kTypes[] = {
      emm::kAttachRequest, emm::kAttachAccept,    emm::kAttachReject,
      emm::kTauRequest,    emm::kTauAccept,       emm::kTauReject,
      emm::kIdentityRequest, emm::kIdentityResponse};
  return kTypes[msg.index()];
}

bool is_ue_originated(const EmmMessage& msg) {
  return std::holds_alternative<emm::AttachRequest>(msg) ||
         std::holds_alternative<emm::TauRequest>(msg) ||
         std::holds_alternative<emm::IdentityResponse>(msg);
}

const Imsi* carried_imsi(const EmmMessage& msg) {
  if (auto* req = std::get_if<emm::AttachRequest>(&msg)) {
    return std::get_if<Imsi>(&req->identity);
  }
  if (auto* rsp = std::get_if<emm::IdentityResponse>(&msg)) {
    return &rsp->imsi;
  }
  return nullptr;
}

Octets encode_mobile_identity(const MobileIdentity& identity) {
  Octets out;
  if (const auto* imsi = std::get_if<Imsi>(&identity)) {
    const std::string& d = imsi->digits();
    const std::size_t n = d.size();
    const std::uint8_t odd = n % 2;
    out.push_back(static_cast<std::uint8_t>(digit_at(d, 0) << 4 | odd << 3 |
                                            kTypeImsi));
    for (std::size_t i = 1; i < n; i += 2) {
      std::uint8_t high = i + 1 < n ? digit_at(d, i + 1) : 0x0F;
      out.push_back(static_cast<std::uint8_t>(high << 4 | digit_at(d, i)));
    }
    return out;
  }

  const auto& guti = std::get<Guti>(identity);
  out.reserve(kGutiLength);
  out.push_back(kGutiFirstOctet);
  auto plmn = encode_plmn(guti.plmn);
  out.insert(out.end(), plmn.begin(), plmn.end());
  put_u16(out, guti.mme_group);
  out.push_back(guti.mme_code);
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(guti.m_tmsi >> shift));
  }
  return out;
}

MobileIdentity decode_mobile_identity(std::span<const std::uint8_t> octets) {
  if (octets.empty()) {
    throw MalformedIdentity("empty mobile identity");
  }
  const std::uint8_t first = octets[0];
  const std::uint8_t type = first & 0x07;

  if (type == kTypeImsi) {
    const bool odd = (first >> 3) & 0x01;
    std::string digits;
    auto push = [&](std::uint8_t nibble) {
      if (nibble > 9) {
        throw MalformedIdentity("non-decimal IMSI digit nibble");
      }
      digits.push_back(digit_char(nibble));
    };
    push(first >> 4);
    for (std::size_t k = 1; k < octets.size(); ++k) {
      push(octets[k] & 0x0F);
      const std::uint8_t high = octets[k] >> 4;
      const bool last = k + 1 == octets.size();
      if (last && !odd) {
        if (high != 0x0F) {
          throw MalformedIdentity("even IMSI without 0xF filler");
        }
      } else {
        push(high);
      }
    }
    if (digits.size() < 6 || digits.size() > 15) {
      throw MalformedIdentity("IMSI length " + std::to_string(digits.size()) +
                              " outside 6-15");
    }
    return Imsi(std::move(digits));
  }

  if (type == kTypeGuti) {
    if (first != kGutiFirstOctet) {
      throw MalformedIdentity("GUTI first octet must be 0xf6");
    }
    if (octets.size() != kGutiLength) {
      throw MalformedIdentity("GUTI must be 11 octets, got " +
                              std::to_string(octets.size()));
    }
    Plmn plmn = [&] {
      try {
        return decode_plmn(octets.subspan(1, 3));
      } catch (const MalformedPlmn& e) {
        throw MalformedIdentity(std::string("GUTI PLMN: ") + e.what());
      }
    }();
    Guti guti{std::move(plmn)};
    guti.mme_group = static_cast<std::uint16_t>(octets[4] << 8 | octets[5]);
    guti.mme_code = octets[6];
    guti.m_tmsi = static_cast<std::uint32_t>(octets[7]) << 24 |
                  static_cast<std::uint32_t>(octets[8]) << 16 |
                  static_cast<std::uint32_t>(octets[9]) << 8 | octets[10];
    return guti;
  }

  throw MalformedIdentity("unknown identity type bits " +
                          std::to_string(static_cast<int>(type)));
}

std::array<std::uint8_t, 3> encode_plmn(const Plmn& plmn) {
  const auto& mcc = plmn.mcc();
  const auto& mnc = plmn.mnc();
  const std::uint8_t mnc3 = mnc.size() == 3 ? digit_at(mnc, 2) : 0x0F;
  return {static_cast<std::uint8_t>(digit_at(mcc, 1) << 4 | digit_at(mcc, 0)),
          static_cast<std::uint8_t>(mnc3 << 4 | digit_at(mcc, 2)),
          static_cast<std::uint8_t>(digit_at(mnc, 1) << 4 | digit_at(mnc, 0))};
}

Plmn decode_plmn(std::span<const std::uint8_t> octets) {
  if (octets.size() != 3) {
    throw MalformedPlmn("PLMN must be 3 octets, got " +
                        std::to_string(octets.size()));
  }
  const std::uint8_t nibbles[] = {
      static_cast<std::uint8_t>(octets[0] & 0x0F),  // mcc1
      static_cast<std::uint8_t>(octets[0] >> 4),    // mcc2
      static_cast<std::uint8_t>(octets[1] & 0x0F),  // mcc3
      static_cast<std::uint8_t>(octets[2] & 0x0F),  // mnc1
      static_cast<std::uint8_t>(octets[2] >> 4),    // mnc2
  };
  std::string mcc, mnc;
  for (int i = 0; i < 5; ++i) {
    if (nibbles[i] > 9) {
      throw MalformedPlmn("non-decimal PLMN digit nibble");
    }
    (i < 3 ? mcc : mnc).push_back(digit_char(nibbles[i]));
  }
  const std::uint8_t mnc3 = octets[1] >> 4;
  if (mnc3 != 0x0F) {
    if (mnc3 > 9) {
      throw MalformedPlmn("non-decimal MNC digit 3");
    }
    mnc.push_back(digit_char(mnc3));
  }
  return Plmn(std::move(mcc), std::move(mnc));
}

Octets encode_emm(const EmmMessage& msg) {
  Octets out{emm::kProtocolDiscriminator, message_type(msg)};
  std::visit(
      [&out](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, emm::AttachRequest>) {
          put_lv(out, encode_mobile_identity(m.identity));
        } else if constexpr (std::is_same_v<T, emm::AttachAccept>) {
          put_lv(out, encode_mobile_identity(m.guti));
          put_u16(out, m.tac);
        } else if constexpr (std::is_same_v<T, emm::AttachReject> ||
                             std::is_same_v<T, emm::TauReject>) {
          out.push_back(m.cause.value);
        } else if constexpr (std::is_same_v<T, emm::TauRequest>) {
          put_lv(out, encode_mobile_identity(m.guti));
          put_u16(out, m.last_tac);
        } else if constexpr (std::is_same_v<T, emm::IdentityRequest>) {
          out.push_back(static_cast<std::uint8_t>(m.requested));
        } else if constexpr (std::is_same_v<T, emm::IdentityResponse>) {
          put_lv(out, encode_mobile_identity(m.imsi));
        }
      },
      msg);
  return out;
}

EmmMessage decode_emm(std::span<const std::uint8_t> octets) {
  if (octets.size() < 2) {
    throw MalformedEmm("EMM frame shorter than 2 octets");
  }
  if (octets[0] != emm::kProtocolDiscriminator) {
    throw MalformedEmm("bad protocol discriminator / security header");
  }
  Reader r(octets.subspan(2));
  EmmMessage msg = [&]() -> EmmMessage {
    switch (octets[1]) {
      case emm::kAttachRequest:
        return emm::AttachRequest{identity_field(r.lv("identity"), "identity")};
      case emm::kAttachAccept: {
        Guti guti = guti_field(r.lv("GUTI"), "GUTI");
        return emm::AttachAccept{std::move(guti), r.u16("TAC")};
      }
      case emm::kAttachReject:
        return emm::AttachReject{EmmCause{r.u8("cause")}};
      case emm::kTauRequest: {
        Guti guti = guti_field(r.lv("GUTI"), "GUTI");
        return emm::TauRequest{std::move(guti), r.u16("last TAC")};
      }
      case emm::kTauAccept:
        return emm::TauAccept{};
      case emm::kTauReject:
        return emm::TauReject{EmmCause{r.u8("cause")}};
      case emm::kIdentityRequest: {
        const std::uint8_t kind = r.u8("identity type");
        if (kind != static_cast<std::uint8_t>(IdentityKind::kImsi)) {
          throw MalformedEmm("unsupported requested identity type " +
                             std::to_string(kind));
        }
        return emm::IdentityRequest{IdentityKind::kImsi};
      }
      case emm::kIdentityResponse:
        return emm::IdentityResponse{imsi_field(r.lv("identity"), "identity")};
      default:
        throw MalformedEmm("unknown message type " +
                           std::to_string(static_cast<int>(octets[1])));
    }
  }();
  r.finish();
  return msg;
}

std::string to_hex(std::span<const std::uint8_t> octets) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(octets.size() * 2);
  for (std::uint8_t b : octets) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

Octets from_hex(std::string_view text) {
  if (text.size() % 2 != 0) {
    throw CodecError("hex string has odd length");
  }
  auto value = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Octets out;
  out.reserve(text.size() / 2);
  for (std::size_t i = 0; i < text.size(); i += 2) {
    int hi = value(text[i]);
    int lo = value(text[i + 1]);
    if (hi < 0 || lo < 0) {
      throw CodecError("invalid hex digit");
    }
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

}  // namespace ltecatch
