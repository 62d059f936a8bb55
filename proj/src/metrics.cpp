#include "ccnsim/metrics.hpp"

#include <cmath>
#include <string>

namespace ccnsim {

double packet_loss(std::uint64_t sent, std::uint64_t received) {
  if (received > sent) {
    throw InvariantViolation("packet_loss: received " + std::to_string(received) + " exceeds sent " +
                             std::to_string(sent));
  }
  if (sent == 0) {
    return 0.0;
  }
  return static_cast<double>(sent - received) / static_cast<double>(sent) * 100.0;
}

MeanResult average_delay(const std::vector<double>& samples_ms) {
  if (samples_ms.empty()) {
    return {0.0, true};
  }
  // Kahan summation keeps long runs stable.
  double sum = 0.0;
  double carry = 0.0;
  for (double d : samples_ms) {
    const double y = d - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return {sum / static_cast<double>(samples_ms.size()), false};
}

MeanResult jitter(const std::vector<double>& samples_ms) {
  if (samples_ms.size() < 2) {
    return {0.0, true};
  }
  const double mean = average_delay(samples_ms).value;
  double sq = 0.0;
  for (double d : samples_ms) {
    sq += (d - mean) * (d - mean);
  }
  return {std::sqrt(sq / static_cast<double>(samples_ms.size() - 1)), false};
}

double throughput(std::uint64_t received_total, double duration_s) {
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("throughput: duration must be positive");
  }
  return static_cast<double>(received_total) / duration_s;
}

double provider_accuracy(std::uint64_t hits, std::uint64_t total) {
  if (total == 0) {
    return 0.0;
  }
  return static_cast<double>(hits) / static_cast<double>(total) * 100.0;
}

const char* to_string(QosCategory category) { return category == QosCategory::Good ? "Good" : "Bad"; }

QosClass classify_qos(const QosInput& v) {
  return QosClass{
      v.throughput_pkt_s > qos::kGoodThroughputAbove ? QosCategory::Good : QosCategory::Bad,
      v.packet_loss_pct < qos::kGoodLossBelowPct ? QosCategory::Good : QosCategory::Bad,
      v.delay_ms > qos::kBadDelayAboveMs ? QosCategory::Bad : QosCategory::Good,
      v.jitter_ms < qos::kGoodJitterBelowMs ? QosCategory::Good : QosCategory::Bad,
  };
}

QosClass classify_qos(const MetricsReport& report) {
  return classify_qos(QosInput{report.throughput_pkt_s, report.packet_loss_pct, report.avg_delay_ms, report.jitter_ms});
}

std::vector<double> MetricsReport::delay_samples_ms() const {
  std::vector<double> out;
  out.reserve(response_time_samples.size());
  for (double s : response_time_samples) {
    out.push_back(s * 1000.0);
  }
  return out;
}

void MetricsReport::audit() const {
  if (issued_interests != satisfied_count + unsatisfied_count + pending_at_end) {
    throw InvariantViolation("conservation: issued " + std::to_string(issued_interests) + " != satisfied " +
                             std::to_string(satisfied_count) + " + unsatisfied " +
                             std::to_string(unsatisfied_count) + " + pending " + std::to_string(pending_at_end));
  }
  if (response_time_samples.size() != satisfied_count) {
    throw InvariantViolation("conservation: response samples do not match satisfied requests");
  }
  for (const auto* c : {&interest_packets, &data_packets}) {
    if (c->received + c->in_flight_at_end > c->sent) {
      throw InvariantViolation("packet accounting: received exceeds sent");
    }
    if (c->received + c->dropped_queue + c->dropped_failure + c->dropped_no_route + c->in_flight_at_end != c->sent) {
      throw InvariantViolation("packet accounting: sent != received + dropped + in flight");
    }
  }
  if (expected_provider_hits > expected_provider_total) {
    throw InvariantViolation("accuracy: hits exceed total");
  }
}

void MetricsReport::finalize() {
  audit();
  // Packets still on the wire at the end have no outcome yet.
  const auto settled_sent = sent_packets() - interest_packets.in_flight_at_end - data_packets.in_flight_at_end;
  packet_loss_pct = packet_loss(settled_sent, received_packets());
  throughput_pkt_s = duration_s > 0.0 ? throughput(received_packets(), duration_s) : 0.0;
  const auto delays = delay_samples_ms();
  const auto mean = average_delay(delays);
  avg_delay_ms = mean.value;
  delay_warning = mean.warning;
  avg_response_time_s = mean.value / 1000.0;
  const auto spread = jitter(delays);
  jitter_ms = spread.value;
  jitter_warning = spread.warning;
  accuracy_pct = provider_accuracy(expected_provider_hits, expected_provider_total);
  delivery_accuracy_pct = provider_accuracy(expected_provider_hits, network_deliveries);
  mean_hops = local_deliveries == 0 ? 0.0
                                    : static_cast<double>(hop_count_sum) / static_cast<double>(local_deliveries);
}

}  // namespace ccnsim
