#ifndef CCNSIM_METRICS_HPP
#define CCNSIM_METRICS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccnsim {

/// Raised when run accounting breaks an invariant (CLI exit code 3).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct PacketCounters {
  std::uint64_t sent = 0;
  std::uint64_t received = 0;
  std::uint64_t dropped_queue = 0;
  std::uint64_t dropped_failure = 0;
  std::uint64_t dropped_no_route = 0;
  std::uint64_t in_flight_at_end = 0;
};

struct MetricsReport {
  double duration_s = 0.0;

  std::uint64_t issued_interests = 0;
  std::uint64_t satisfied_count = 0;
  std::uint64_t unsatisfied_count = 0;
  std::uint64_t pending_at_end = 0;
  std::uint64_t local_hits = 0;

  /// Router-to-router interest transmissions, retransmissions included.
  std::uint64_t forwarded_interests = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t timeout_count = 0;

  PacketCounters interest_packets;
  PacketCounters data_packets;
  std::uint64_t data_created = 0;

  std::uint64_t expected_provider_hits = 0;
  std::uint64_t expected_provider_total = 0;
  /// Hops travelled by data that satisfied an I router, one count per delivery.
  std::uint64_t hop_count_sum = 0;
  std::uint64_t local_deliveries = 0;
  /// Deliveries at I routers of data that crossed at least one link.
  std::uint64_t network_deliveries = 0;
  std::uint64_t probed_interests = 0;
  std::uint64_t failed_routers = 0;

  std::vector<double> response_time_samples;

  // Derived by finalize().
  double throughput_pkt_s = 0.0;
  double packet_loss_pct = 0.0;
  double avg_response_time_s = 0.0;
  double avg_delay_ms = 0.0;
  double jitter_ms = 0.0;
  double accuracy_pct = 0.0;
  /// Expected-provider hits over every network delivery, broadcasts included.
  double delivery_accuracy_pct = 0.0;
  double mean_hops = 0.0;
  bool delay_warning = false;
  bool jitter_warning = false;

  std::uint64_t sent_packets() const { return interest_packets.sent + data_packets.sent; }
  std::uint64_t received_packets() const { return interest_packets.received + data_packets.received; }
  std::vector<double> delay_samples_ms() const;

  /// Computes the derived fields. Throws InvariantViolation on broken accounting.
  void finalize();
  /// Conservation and per-class packet checks; throws InvariantViolation.
  void audit() const;
};

/// (sent - received) / sent * 100; 0 when nothing was sent.
double packet_loss(std::uint64_t sent, std::uint64_t received);

struct MeanResult {
  double value = 0.0;
  bool warning = false;
};
MeanResult average_delay(const std::vector<double>& samples_ms);
/// Sample standard deviation of the delays (n - 1 denominator).
MeanResult jitter(const std::vector<double>& samples_ms);
double throughput(std::uint64_t received_total, double duration_s);
double provider_accuracy(std::uint64_t hits, std::uint64_t total);

enum class QosCategory { Good, Bad };
const char* to_string(QosCategory category);

struct QosInput {
  double throughput_pkt_s = 0.0;
  double packet_loss_pct = 0.0;
  double delay_ms = 0.0;
  double jitter_ms = 0.0;
};

struct QosClass {
  QosCategory throughput;
  QosCategory packet_loss;
  QosCategory delay;
  QosCategory jitter;
};

namespace qos {
inline constexpr double kGoodThroughputAbove = 75.0;
inline constexpr double kGoodLossBelowPct = 15.0;
inline constexpr double kBadDelayAboveMs = 125.0;
inline constexpr double kGoodJitterBelowMs = 125.0;
}  // namespace qos

QosClass classify_qos(const QosInput& values);
QosClass classify_qos(const MetricsReport& report);

}  // namespace ccnsim

#endif  // CCNSIM_METRICS_HPP
