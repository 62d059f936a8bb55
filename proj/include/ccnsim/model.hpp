#ifndef CCNSIM_MODEL_HPP
#define CCNSIM_MODEL_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ccnsim {

/// Router identity. On the wire a router ID is a 4-byte integer.
struct RouterId {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const RouterId&) const = default;
};

/// Face marker for the co-located consumer application.
inline constexpr RouterId kLocalFace{0xFFFFFFFFu};

/// A content name rendered as `prefix/seq`.
struct ContentName {
  std::string prefix;
  std::uint32_t seq = 0;

  std::string to_string() const;
  /// Parses `prefix/seq`; returns nullopt when the seq part is missing or not a number.
  static std::optional<ContentName> parse(const std::string& text);

  auto operator<=>(const ContentName&) const = default;
};

struct ContentNameHash {
  std::size_t operator()(const ContentName& name) const noexcept {
    return std::hash<std::string>{}(name.prefix) * 1000003u ^ name.seq;
  }
};

namespace wire {
inline constexpr std::size_t kName = 2;
inline constexpr std::size_t kSelector = 2;
inline constexpr std::size_t kNonce = 1;
inline constexpr std::size_t kSignature = 2;
inline constexpr std::size_t kSignedInfo = 1;
inline constexpr std::size_t kProbe = 2;
inline constexpr std::size_t kRouterId = 4;
inline constexpr std::size_t kProbeResponseSlots = 5;
inline constexpr std::size_t kProbeResponse = kRouterId * kProbeResponseSlots;
/// Extra bytes carried by a packet that has a probe attached.
inline constexpr std::size_t kProbeOverhead = kProbe + kProbeResponse;
/// 1 kbit of content.
inline constexpr std::uint32_t kDefaultPayload = 128;
}  // namespace wire

/// Ordered, duplicate-free list of routers that reported holding the probed content.
/// First-come wins: once full, later responders are ignored.
class ProbeResponse {
 public:
  static constexpr std::size_t kCapacity = wire::kProbeResponseSlots;

  /// Returns false if the list is full or already holds `id`.
  bool add(RouterId id);
  bool contains(RouterId id) const;

  std::span<const RouterId> providers() const { return {slots_.data(), size_}; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool full() const { return size_ == kCapacity; }

  bool operator==(const ProbeResponse& other) const;

 private:
  std::array<RouterId, kCapacity> slots_{};
  std::size_t size_ = 0;
};

struct InterestPacket {
  ContentName name;
  std::uint16_t selector = 0;
  /// Accounting-only 1-byte nonce; loop detection uses `token`.
  std::uint8_t nonce = 0;
  std::optional<ContentName> probe;
  ProbeResponse probe_response;

  // Simulator-side fields, not part of the wire size.
  std::uint64_t token = 0;
  std::uint64_t request_id = 0;
  std::uint32_t hop_count = 0;
  double issue_time = 0.0;
};

struct DataPacket {
  ContentName name;
  std::uint16_t signature = 0;
  std::uint8_t signed_info = 0;
  std::uint32_t payload_size = wire::kDefaultPayload;
  std::optional<ContentName> probe;
  ProbeResponse probe_response;
  RouterId provider_id{};

  std::uint32_t hop_count = 0;
};

std::size_t wire_size(const InterestPacket& interest);
std::size_t wire_size(const DataPacket& data);

/// Every producer publishes `per_producer` names `prefix/0 .. prefix/(per_producer-1)`.
std::vector<ContentName> content_catalog(std::span<const std::string> producer_prefixes,
                                         std::uint32_t per_producer);

}  // namespace ccnsim

#endif  // CCNSIM_MODEL_HPP
