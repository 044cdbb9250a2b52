#include "wsnids/ida.hpp"

#include <cmath>
#include <map>

#include "wsnids/error.hpp"

namespace wsnids {

std::string_view to_string(Feature f) {
  switch (f) {
    case Feature::PktRate: return "pkt_rate";
    case Feature::DropRatio: return "drop_ratio";
    case Feature::FwdRatio: return "fwd_ratio";
    case Feature::DupCount: return "dup_count";
  }
  return "?";
}

std::optional<Feature> parse_feature(std::string_view name) {
  for (Feature f : kFeatureOrder) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::string_view to_string(AlertKind k) {
  switch (k) {
    case AlertKind::Misuse: return "Misuse";
    case AlertKind::Anomaly: return "Anomaly";
    case AlertKind::RedAlert: return "RedAlert";
  }
  return "?";
}

double StimulusVector::feature(Feature f) const {
  switch (f) {
    case Feature::PktRate: return pkt_rate;
    case Feature::DropRatio: return drop_ratio;
    case Feature::FwdRatio: return fwd_ratio;
    case Feature::DupCount: return static_cast<double>(dup_count);
  }
  return 0.0;
}

bool FeatureBound::holds(const StimulusVector& v) const {
  double x = v.feature(feature);
  switch (op) {
    case Comparison::Less: return x < value;
    case Comparison::LessEqual: return x <= value;
    case Comparison::Greater: return x > value;
    case Comparison::GreaterEqual: return x >= value;
  }
  return false;
}

bool SignaturePredicate::matches(const StimulusVector& v) const {
  if (tag && v.sig_tags.count(*tag) == 0) return false;
  for (const auto& b : bounds) {
    if (!b.holds(v)) return false;
  }
  return tag.has_value() || !bounds.empty();
}

std::vector<StimulusVector> preprocess(std::span<const TrafficRecord> window,
                                       Tick window_end, Tick window_length) {
  struct Acc {
    std::uint64_t sent = 0;
    std::uint64_t obligations = 0;
    std::uint64_t dropped = 0;
    std::uint64_t dups = 0;
    std::map<SignatureId, std::uint32_t> tags;
  };
  std::map<NodeId, Acc> per_sensor;
  for (const auto& r : window) {
    auto& a = per_sensor[r.src];
    a.sent += r.sent();
    a.obligations += r.obligations;
    a.dropped += r.dropped;
    a.dups += r.dups;
    for (const auto& t : r.tags) {
      if (t.behavior == Behavior::KnownSignature) ++a.tags[t.signature];
    }
  }
  std::vector<StimulusVector> out;
  out.reserve(per_sensor.size());
  const double w = static_cast<double>(window_length);
  for (auto& [node, a] : per_sensor) {
    StimulusVector v;
    v.node = node;
    v.window_end = window_end;
    v.pkt_rate = static_cast<double>(a.sent) / w;
    v.drop_ratio = a.obligations == 0 ? 0.0
                                      : static_cast<double>(a.dropped) /
                                            static_cast<double>(a.obligations);
    v.fwd_ratio = 1.0 - v.drop_ratio;
    v.dup_count = a.dups;
    v.sig_tags = std::move(a.tags);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<SignatureId> signature_match(
    const StimulusVector& v, std::span<const SignatureRecord> db) {
  for (const auto& rec : db) {
    if (rec.predicate.matches(v)) return rec.id;
  }
  return std::nullopt;
}

AnomalyScores anomaly_score(const StimulusVector& v, const NormalProfile& p) {
  AnomalyScores out;
  for (Feature f : kFeatureOrder) {
    auto it = p.features.find(f);
    if (it == p.features.end()) {
      throw ProfileMissing("no profile entry for " + std::string(to_string(f)));
    }
    out[f] = std::fabs(v.feature(f) - it->second.mean) / it->second.stdev;
  }
  return out;
}

std::optional<FeatureScore> detect_anomaly(const AnomalyScores& scores,
                                           const NormalProfile& p) {
  std::optional<FeatureScore> best;
  for (Feature f : kFeatureOrder) {
    auto it = scores.find(f);
    if (it == scores.end() || !(it->second > p.anomaly_threshold)) continue;
    if (!best || it->second > best->score) best = FeatureScore{f, it->second};
  }
  return best;
}

DetectionOutcome detect(std::span<const StimulusVector> vectors,
                        std::span<const SignatureRecord> db,
                        const NormalProfile* profile, OpCounter& ops) {
  DetectionOutcome out;
  for (const auto& v : vectors) {
    ++ops.signature;
    if (auto sig = signature_match(v, db)) {
      out.findings.push_back({v.node, MisuseFinding{*sig}});
      continue;
    }
    if (profile) {
      ++ops.anomaly;
      if (auto hit = detect_anomaly(anomaly_score(v, *profile), *profile)) {
        out.findings.push_back({v.node, AnomalyFinding{hit->feature, hit->score}});
        continue;
      }
    }
    out.clean.push_back(v);
  }
  return out;
}

PostprocessOutput postprocess(const PostprocessInput& in) {
  PostprocessOutput out;
  for (const auto& f : in.findings) {
    Alert a;
    a.origin_agent = in.agent;
    a.subject = f.subject;
    a.at = in.now;
    if (const auto* m = std::get_if<MisuseFinding>(&f.what)) {
      a.kind = AlertKind::Misuse;
      a.signature = m->signature;
    } else {
      const auto& an = std::get<AnomalyFinding>(f.what);
      a.kind = AlertKind::Anomaly;
      a.feature = an.feature;
      a.score = an.score;
    }
    out.alerts.push_back(std::move(a));
  }
  for (NodeId n : in.entered_suspect) {
    Alert a;
    a.kind = AlertKind::RedAlert;
    a.origin_agent = in.agent;
    a.subject = n;
    a.at = in.now;
    out.red_alerts.push_back(a);
  }
  return out;
}

}  // namespace wsnids
