#include "wsnids/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "wsnids/error.hpp"

namespace wsnids {

std::string to_string(AttackKind k) {
  switch (k) {
    case AttackKind::PacketDrop: return "drop";
    case AttackKind::Flood: return "flood";
    case AttackKind::Replay: return "replay";
    case AttackKind::KnownSignature: return "signature";
  }
  return "?";
}

std::string to_string(const BehaviorTag& tag) {
  switch (tag.behavior) {
    case Behavior::Normal: return "Normal";
    case Behavior::Drop: return "Drop";
    case Behavior::Flood: return "Flood";
    case Behavior::Replay: return "Replay";
    case Behavior::KnownSignature: return "Sig:" + tag.signature;
  }
  return "?";
}

std::string format_tags(const std::vector<BehaviorTag>& tags) {
  if (tags.empty()) return "Normal";
  std::string out;
  for (const auto& t : tags) {
    if (!out.empty()) out += '|';
    out += to_string(t);
  }
  return out;
}

std::vector<BehaviorTag> parse_tags(const std::string& text) {
  std::vector<BehaviorTag> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto bar = text.find('|', pos);
    std::string item = text.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos);
    if (item == "Drop") {
      out.push_back({Behavior::Drop, {}});
    } else if (item == "Flood") {
      out.push_back({Behavior::Flood, {}});
    } else if (item == "Replay") {
      out.push_back({Behavior::Replay, {}});
    } else if (item.rfind("Sig:", 0) == 0) {
      out.push_back({Behavior::KnownSignature, item.substr(4)});
    } else if (item != "Normal" && !item.empty()) {
      throw Error("unknown behavior tag '" + item + "'");
    }
    if (bar == std::string::npos) break;
    pos = bar + 1;
  }
  return out;
}

PoissonTable::PoissonTable(double mean) : mean_(mean) {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw SpecError("traffic mean must be > 0");
  }
  // Recurrence in log space keeps large means from underflowing.
  double log_p = -mean;
  double acc = 0.0;
  for (std::uint32_t k = 0;; ++k) {
    if (k > 0) log_p += std::log(mean) - std::log(static_cast<double>(k));
    acc += std::exp(log_p);
    cdf_.push_back(std::min(acc, 1.0));
    if (static_cast<double>(k) > mean && 1.0 - acc < 1e-15) break;
    if (k > 100000) break;
  }
  cdf_.back() = 1.0;
}

std::uint32_t PoissonTable::sample(double u) const {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<std::uint32_t>(it - cdf_.begin());
}

SensorTrafficSource::SensorTrafficSource(RngSeed seed, NodeId sensor,
                                         double mean)
    : table_(mean),
      stream_(derive_seed(seed.value, sensor.value, kBaselineSalt)) {}

TrafficRecord shape_record(NodeId src, NodeId dst, std::uint32_t baseline,
                           const AttackSpec* attack, Stream& attack_stream) {
  TrafficRecord r{src, dst, baseline, baseline, 0, 0, {}};
  if (!attack) return r;
  switch (attack->kind) {
    case AttackKind::PacketDrop: {
      std::uint32_t dropped = 0;
      for (std::uint32_t i = 0; i < r.obligations; ++i) {
        if (attack->drop_rate >= 1.0 ||
            attack_stream.uniform() < attack->drop_rate) {
          ++dropped;
        }
      }
      r.dropped = dropped;
      r.tags.push_back({Behavior::Drop, {}});
      break;
    }
    case AttackKind::Flood:
      r.pkts = baseline * attack->multiplier;
      r.obligations = r.pkts;
      r.tags.push_back({Behavior::Flood, {}});
      break;
    case AttackKind::Replay:
      r.dups = std::max<std::uint32_t>(1, baseline);
      r.tags.push_back({Behavior::Replay, {}});
      break;
    case AttackKind::KnownSignature:
      r.tags.push_back({Behavior::KnownSignature, attack->signature});
      break;
  }
  return r;
}

}  // namespace wsnids
