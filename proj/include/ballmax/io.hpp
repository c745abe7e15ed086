#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "ballmax/classify.hpp"
#include "ballmax/estimator.hpp"
#include "ballmax/oracle2d.hpp"
#include "ballmax/solver.hpp"
#include "ballmax/ssp.hpp"
#include "ballmax/types.hpp"

namespace ballmax {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace io_detail {

inline Point point_from_json(const Json& j, int dim, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ParseError(what + ": expected array of length " + std::to_string(dim));
  Point p(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number())
      throw ParseError(what + ": non-numeric entry");
    p[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  if (!p.allFinite()) throw ParseError(what + ": non-finite entry");
  return p;
}

inline Json point_to_json(const Point& p) {
  Json j = Json::array();
  for (int i = 0; i < p.size(); ++i) j.push_back(p[i]);
  return j;
}

}  // namespace io_detail

// Instance schema:
// {"dim": n, "lambda": l, "c0": [..], "balls": [{"center": [..], "radius": r}, ..]}
inline Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("instance: expected an object");
  for (const char* key : {"dim", "lambda", "c0", "balls"})
    if (!j.contains(key)) throw ParseError(std::string("instance: missing field '") + key + "'");
  Instance inst;
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
    throw ParseError("instance: dim must be a positive integer");
  inst.q.dim = j["dim"].get<int>();
  if (!j["lambda"].is_number()) throw ParseError("instance: lambda must be a number");
  inst.lambda = j["lambda"].get<double>();
  inst.c0 = io_detail::point_from_json(j["c0"], inst.q.dim, "c0");
  if (!j["balls"].is_array() || j["balls"].empty())
    throw ParseError("instance: balls must be a nonempty array");
  for (const auto& jb : j["balls"]) {
    Ball b;
    if (!jb.contains("center") || !jb.contains("radius"))
      throw ParseError("ball: missing center or radius");
    b.center = io_detail::point_from_json(jb["center"], inst.q.dim, "ball center");
    if (!jb["radius"].is_number()) throw ParseError("ball: radius must be a number");
    b.radius = jb["radius"].get<double>();
    if (!std::isfinite(b.radius) || b.radius <= 0.0)
      throw ParseError("ball: radius must be finite and strictly positive");
    inst.q.balls.push_back(std::move(b));
  }
  try {
    validate(inst);
  } catch (const std::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  return inst;
}

inline Json instance_to_json(const Instance& inst) {
  Json j;
  j["dim"] = inst.q.dim;
  j["lambda"] = inst.lambda;
  j["c0"] = io_detail::point_to_json(inst.c0);
  j["balls"] = Json::array();
  for (const Ball& b : inst.q.balls) {
    Json jb;
    jb["center"] = io_detail::point_to_json(b.center);
    jb["radius"] = b.radius;
    j["balls"].push_back(std::move(jb));
  }
  return j;
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(j);
}

inline Json solution_to_json(const DcSolution& sol) {
  Json j;
  j["y_star"] = io_detail::point_to_json(sol.y_star);
  j["value"] = sol.value;
  j["r_lower"] = sol.r_lower;
  j["h_at_y"] = sol.h_at_y;
  j["iterations"] = sol.iterations;
  j["residual"] = sol.residual;
  j["converged"] = sol.converged;
  return j;
}

inline Json classification_to_json(const Classification& c) {
  Json j;
  j["case"] = to_string(c.which);
  j["r_lower"] = c.r_lower;
  if (c.r_upper)
    j["r_upper"] = *c.r_upper;
  else
    j["r_upper"] = nullptr;
  j["y_star"] = io_detail::point_to_json(c.y_star);
  j["h_at_y"] = c.h_at_y;
  return j;
}

inline Json hit_stats_to_json(const HitStats& s) {
  Json j;
  j["samples"] = s.samples;
  j["hits"] = s.hits;
  j["ratio"] = s.ratio;
  j["wilson_low"] = s.wilson_low;
  j["wilson_high"] = s.wilson_high;
  return j;
}

inline Json estimate_to_json(const EstimateReport& rep) {
  Json j;
  j["r_hat"] = rep.r_hat;
  j["bracket"] = Json::array({rep.r_low, rep.r_high});
  j["method"] = rep.method == EstimateMethod::ProcedureB ? "ProcedureB" : "VolumeBisection";
  j["i_used"] = rep.i_used;
  if (rep.p_used)
    j["p_used"] = *rep.p_used;
  else
    j["p_used"] = nullptr;
  j["seed"] = rep.seed.seed;
  j["workers"] = rep.workers;
  Json trace = Json::array();
  for (const auto& [r, st] : rep.stats_trace) {
    Json e;
    e["r"] = r;
    e["stats"] = hit_stats_to_json(st);
    trace.push_back(std::move(e));
  }
  j["stats_trace"] = trace;
  if (rep.classification) j["classification"] = classification_to_json(*rep.classification);
  return j;
}

inline Json oracle_to_json(const OracleResult& res) {
  Json j;
  j["r0"] = res.r0;
  j["maximizers"] = Json::array();
  for (const Point& p : res.maximizers) j["maximizers"].push_back(io_detail::point_to_json(p));
  j["certificates"] = res.certificates;
  return j;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

inline std::string stats_trace_csv(const EstimateReport& rep) {
  std::string csv = "r,samples,hits,ratio,wilson_low,wilson_high\n";
  char buf[256];
  for (const auto& [r, st] : rep.stats_trace) {
    std::snprintf(buf, sizeof(buf), "%.17g,%lld,%lld,%.17g,%.17g,%.17g\n", r,
                  static_cast<long long>(st.samples), static_cast<long long>(st.hits),
                  st.ratio, st.wilson_low, st.wilson_high);
    csv += buf;
  }
  return csv;
}

}  // namespace ballmax
