#include "ccnsim/model.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace ccnsim {

std::string ContentName::to_string() const {
  return prefix + "/" + std::to_string(seq);
}

std::optional<ContentName> ContentName::parse(const std::string& text) {
  const auto slash = text.rfind('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == text.size()) {
    return std::nullopt;
  }
  std::uint32_t seq = 0;
  const char* first = text.data() + slash + 1;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, seq);
  if (ec != std::errc{} || ptr != last) {
    return std::nullopt;
  }
  return ContentName{text.substr(0, slash), seq};
}

bool ProbeResponse::add(RouterId id) {
  if (full() || contains(id)) {
    return false;
  }
  slots_[size_++] = id;
  return true;
}

bool ProbeResponse::contains(RouterId id) const {
  const auto used = providers();
  return std::find(used.begin(), used.end(), id) != used.end();
}

bool ProbeResponse::operator==(const ProbeResponse& other) const {
  const auto a = providers();
  const auto b = other.providers();
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

std::size_t wire_size(const InterestPacket& interest) {
  std::size_t bytes = wire::kName + wire::kSelector + wire::kNonce;
  if (interest.probe) {
    bytes += wire::kProbeOverhead;
  }
  return bytes;
}

std::size_t wire_size(const DataPacket& data) {
  std::size_t bytes = wire::kName + wire::kSignature + wire::kSignedInfo + data.payload_size;
  if (data.probe) {
    bytes += wire::kProbeOverhead;
  }
  return bytes;
}

std::vector<ContentName> content_catalog(std::span<const std::string> producer_prefixes,
                                         std::uint32_t per_producer) {
  if (per_producer == 0) {
    throw std::invalid_argument("content_catalog: per_producer must be at least 1");
  }
  std::vector<ContentName> catalog;
  catalog.reserve(producer_prefixes.size() * per_producer);
  for (const auto& prefix : producer_prefixes) {
    for (std::uint32_t seq = 0; seq < per_producer; ++seq) {
      catalog.push_back(ContentName{prefix, seq});
    }
  }
  return catalog;
}

}  // namespace ccnsim
