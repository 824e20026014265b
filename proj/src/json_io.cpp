#include "redlight/json_io.hpp"

#include <cmath>
#include <cstdio>

namespace redlight {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known)
      throw SchemaError("unknown field: " + (path.empty() ? it.key() : path + "." + it.key()));
  }
}

double require_number(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key))
    throw SchemaError("missing field: " + (path.empty() ? key : path + "." + key));
  const auto& v = j.at(key);
  if (!v.is_number())
    throw SchemaError("not a number: " + (path.empty() ? key : path + "." + key));
  return v.get<double>();
}

std::string require_string(const json& j, const std::string& path,
                           const char* key) {
  if (!j.contains(key))
    throw SchemaError("missing field: " + (path.empty() ? key : path + "." + key));
  const auto& v = j.at(key);
  if (!v.is_string())
    throw SchemaError("not a string: " + (path.empty() ? key : path + "." + key));
  return v.get<std::string>();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ProblemSpec problem_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("problem: expected an object");
  reject_unknown(j, "", {"alpha", "beta", "v_max", "v0", "d", "L", "dist"});
  if (!j.contains("dist") || !j.at("dist").is_object())
    throw SchemaError("missing field: dist");
  const json& dj = j.at("dist");
  const std::string kind = require_string(dj, "dist", "kind");

  GreenDistribution dist = GreenDistribution::uniform(1.0);
  if (kind == "uniform") {
    reject_unknown(dj, "dist", {"kind", "q"});
    dist = GreenDistribution::uniform(require_number(dj, "dist", "q"));
  } else if (kind == "exponential") {
    reject_unknown(dj, "dist", {"kind", "lambda"});
    dist = GreenDistribution::exponential(require_number(dj, "dist", "lambda"));
  } else if (kind == "excess") {
    reject_unknown(dj, "dist", {"kind", "cdf_knots", "mean"});
    if (!dj.contains("cdf_knots") || !dj.at("cdf_knots").is_array())
      throw SchemaError("missing field: dist.cdf_knots");
    std::vector<std::pair<double, double>> knots;
    for (const auto& kn : dj.at("cdf_knots")) {
      if (!kn.is_array() || kn.size() != 2 || !kn[0].is_number() ||
          !kn[1].is_number())
        throw SchemaError("dist.cdf_knots: expected [x, Theta] pairs");
      knots.emplace_back(kn[0].get<double>(), kn[1].get<double>());
    }
    dist = GreenDistribution::excess_of_renewal(
        knots, require_number(dj, "dist", "mean"));
  } else {
    throw SchemaError("dist.kind: expected uniform|exponential|excess");
  }

  return ProblemSpec{
      .alpha = require_number(j, "", "alpha"),
      .beta = require_number(j, "", "beta"),
      .v_max = require_number(j, "", "v_max"),
      .v0 = require_number(j, "", "v0"),
      .d = require_number(j, "", "d"),
      .L = require_number(j, "", "L"),
      .dist = std::move(dist),
  };
}

json problem_to_json(const ProblemSpec& p) {
  json dj;
  switch (p.dist.kind()) {
    case GreenDistribution::Kind::Uniform:
      dj = {{"kind", "uniform"}, {"q", p.dist.q_support()}};
      break;
    case GreenDistribution::Kind::Exponential:
      dj = {{"kind", "exponential"}, {"lambda", p.dist.lambda()}};
      break;
    case GreenDistribution::Kind::Excess:
      // Re-emitting the source table is not supported; excess inputs come
      // from files and flow one way.
      dj = {{"kind", "excess"}};
      break;
  }
  return json{{"alpha", p.alpha}, {"beta", p.beta}, {"v_max", p.v_max},
              {"v0", p.v0},       {"d", p.d},       {"L", p.L},
              {"dist", dj}};
}

namespace {

const char* kind_name(SegmentKind k) {
  switch (k) {
    case SegmentKind::Alpha: return "alpha";
    case SegmentKind::Beta: return "beta";
    case SegmentKind::VMaxHold: return "vmax";
    case SegmentKind::ZeroHold: return "zero";
    case SegmentKind::EulerLagrange: return "el";
  }
  return "?";
}

SegmentKind kind_from_name(const std::string& s) {
  if (s == "alpha") return SegmentKind::Alpha;
  if (s == "beta") return SegmentKind::Beta;
  if (s == "vmax") return SegmentKind::VMaxHold;
  if (s == "zero") return SegmentKind::ZeroHold;
  if (s == "el") return SegmentKind::EulerLagrange;
  throw SchemaError("segments.kind: expected alpha|beta|vmax|zero|el");
}

}  // namespace

Trajectory trajectory_from_json(const json& j, const ProblemSpec& p) {
  if (!j.is_object()) throw SchemaError("trajectory: expected an object");
  reject_unknown(j, "", {"segments"});
  if (!j.contains("segments") || !j.at("segments").is_array())
    throw SchemaError("missing field: segments");
  std::vector<Segment> segs;
  for (const auto& sj : j.at("segments")) {
    reject_unknown(sj, "segments[]", {"kind", "t_start", "duration", "v_start"});
    Segment s;
    s.kind = kind_from_name(require_string(sj, "segments[]", "kind"));
    s.t_start = require_number(sj, "segments[]", "t_start");
    s.v_start = require_number(sj, "segments[]", "v_start");
    if (sj.contains("duration") && sj.at("duration").is_string()) {
      if (sj.at("duration").get<std::string>() != "inf")
        throw SchemaError("segments[].duration: number or \"inf\"");
      s.duration = std::numeric_limits<double>::infinity();
    } else {
      s.duration = require_number(sj, "segments[]", "duration");
    }
    segs.push_back(s);
  }
  return Trajectory(std::move(segs), p);
}

json trajectory_to_json(const Trajectory& t) {
  json arr = json::array();
  for (const auto& s : t.segments()) {
    json sj{{"kind", kind_name(s.kind)},
            {"t_start", s.t_start},
            {"v_start", s.v_start}};
    if (s.infinite())
      sj["duration"] = "inf";
    else
      sj["duration"] = s.duration;
    arr.push_back(sj);
  }
  return json{{"segments", arr}};
}

json report_to_json(const SolveReport& r) {
  json transitions = json::array();
  for (const auto& tr : r.transitions)
    transitions.push_back(
        {{"t", tr.t}, {"v", tr.v}, {"into", kind_name(tr.into)}});
  json out{{"pattern", r.pattern.name()},
           {"expected_arrival", r.expected_arrival_time},
           {"transitions", transitions},
           {"trajectory", trajectory_to_json(r.trajectory)},
           {"diagnostics",
            {{"distance_residual", r.distance_residual},
             {"lipschitz_violation", r.lipschitz_violation}}}};
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) out[key] = *v;
  };
  put("v_c_star", r.v_c_star);
  put("v_beta", r.v_beta_value);
  put("A", r.el_asymptote);
  put("peak_velocity", r.peak_velocity);
  put("t_el_start", r.t_el_start);
  put("t_brake", r.t_brake);
  put("root_residual", r.root_residual);
  put("fill_level", r.fill_level);
  if (r.v_c_star) out["vc_exceeds_vmax"] = r.vc_exceeds_vmax;
  return out;
}

json validation_to_json(const ValidationResult& r) {
  return json{
      {"feasible", r.feasible}, {"trivial", r.trivial}, {"reasons", r.reasons}};
}

}  // namespace redlight
