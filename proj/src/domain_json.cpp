#include "greenfn/domain_json.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace greenfn {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("domain json: " + msg); }

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& ctx) {
  if (!j.is_object()) fail(ctx + " must be an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) fail("unknown field \"" + item.key() + "\" in " + ctx);
  // all allowed keys are mandatory in this schema
  for (const auto& k : allowed)
    if (!j.contains(k)) fail("missing field \"" + k + "\" in " + ctx);
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail("field \"" + field + "\" must be a number");
  return j.get<double>();
}

Point2 get_point2(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) fail("field \"" + field + "\" must be [x, y]");
  return {get_number(j[0], field), get_number(j[1], field)};
}

Point3 get_point3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) fail("field \"" + field + "\" must be [x, y, z]");
  return {get_number(j[0], field), get_number(j[1], field), get_number(j[2], field)};
}

json encode_point2(Point2 p) { return json::array({p.real(), p.imag()}); }
json encode_point3(Point3 p) { return json::array({p.x, p.y, p.z}); }

json encode_curve(const BoundaryCurve& c) {
  json j;
  if (const auto* ci = std::get_if<Circle>(&c)) {
    j["type"] = "circle";
    j["center"] = encode_point2(ci->center);
    j["radius"] = ci->radius;
  } else {
    const auto& t = std::get<TrigCurve>(c);
    j["type"] = "trig";
    j["center"] = encode_point2(t.center);
    j["cos"] = t.cos_coef;
    j["sin"] = t.sin_coef;
  }
  return j;
}

BoundaryCurve decode_curve(const json& j, const std::string& ctx) {
  if (!j.is_object() || !j.contains("type")) fail(ctx + " curve needs a \"type\" field");
  std::string type = j["type"].get<std::string>();
  if (type == "circle") {
    require_keys(j, {"type", "center", "radius"}, ctx + " circle");
    return Circle{get_point2(j["center"], "center"), get_number(j["radius"], "radius")};
  }
  if (type == "trig") {
    require_keys(j, {"type", "center", "cos", "sin"}, ctx + " trig");
    TrigCurve t;
    t.center = get_point2(j["center"], "center");
    if (!j["cos"].is_array() || j["cos"].empty()) fail("field \"cos\" must be a nonempty array");
    if (!j["sin"].is_array()) fail("field \"sin\" must be an array");
    t.cos_coef.clear();
    for (const auto& v : j["cos"]) t.cos_coef.push_back(get_number(v, "cos"));
    for (const auto& v : j["sin"]) t.sin_coef.push_back(get_number(v, "sin"));
    return t;
  }
  fail("unknown curve type \"" + type + "\" in " + ctx);
}

json encode_domain(const DomainSpec& d) {
  json j;
  if (const auto* disk = std::get_if<Disk>(&d)) {
    j["type"] = "disk";
    j["center"] = encode_point2(disk->center);
    j["radius"] = disk->radius;
  } else if (const auto* ann = std::get_if<Annulus>(&d)) {
    j["type"] = "annulus";
    j["center"] = encode_point2(ann->center);
    j["r_inner"] = ann->r_inner;
    j["r_outer"] = ann->r_outer;
  } else if (const auto* cd = std::get_if<CircleDomain>(&d)) {
    j["type"] = "circle_domain";
    j["outer"] = encode_curve(cd->outer);
    j["holes"] = json::array();
    for (const auto& h : cd->holes) j["holes"].push_back(encode_curve(h));
  } else if (const auto* sd = std::get_if<SlitDomain>(&d)) {
    j["type"] = "slit_domain";
    j["ambient"] = json{{"center", encode_point2(sd->ambient.center)},
                        {"radius", sd->ambient.radius}};
    j["segments"] = json::array();
    for (const auto& s : sd->segments)
      j["segments"].push_back(json::array({encode_point2(s.a), encode_point2(s.b)}));
  } else if (const auto* ball = std::get_if<Ball3>(&d)) {
    j["type"] = "ball3";
    j["center"] = encode_point3(ball->center);
    j["radius"] = ball->radius;
  } else {
    const auto& t = std::get<TubeDomain3>(d);
    j["type"] = "tube3";
    j["ambient"] =
        json{{"center", encode_point3(t.ambient.center)}, {"radius", t.ambient.radius}};
    j["polyline"] = json::array();
    for (const auto& p : t.polyline) j["polyline"].push_back(encode_point3(p));
    j["tube_radius"] = t.tube_radius;
  }
  return j;
}

DomainSpec decode_domain(const json& j) {
  if (!j.is_object() || !j.contains("type")) fail("domain needs a \"type\" field");
  std::string type = j["type"].get<std::string>();
  DomainSpec d;
  if (type == "disk") {
    require_keys(j, {"type", "center", "radius"}, "disk");
    d = Disk{get_point2(j["center"], "center"), get_number(j["radius"], "radius")};
  } else if (type == "annulus") {
    require_keys(j, {"type", "center", "r_inner", "r_outer"}, "annulus");
    d = Annulus{get_point2(j["center"], "center"), get_number(j["r_inner"], "r_inner"),
                get_number(j["r_outer"], "r_outer")};
  } else if (type == "circle_domain") {
    require_keys(j, {"type", "outer", "holes"}, "circle_domain");
    CircleDomain cd;
    cd.outer = decode_curve(j["outer"], "outer");
    if (!j["holes"].is_array()) fail("field \"holes\" must be an array");
    for (const auto& h : j["holes"]) cd.holes.push_back(decode_curve(h, "holes"));
    d = std::move(cd);
  } else if (type == "slit_domain") {
    require_keys(j, {"type", "ambient", "segments"}, "slit_domain");
    SlitDomain sd;
    require_keys(j["ambient"], {"center", "radius"}, "ambient");
    sd.ambient = Disk{get_point2(j["ambient"]["center"], "center"),
                      get_number(j["ambient"]["radius"], "radius")};
    if (!j["segments"].is_array()) fail("field \"segments\" must be an array");
    for (const auto& s : j["segments"]) {
      if (!s.is_array() || s.size() != 2) fail("each segment must be [[ax,ay],[bx,by]]");
      sd.segments.push_back(Segment2{get_point2(s[0], "segments"), get_point2(s[1], "segments")});
    }
    d = std::move(sd);
  } else if (type == "ball3") {
    require_keys(j, {"type", "center", "radius"}, "ball3");
    d = Ball3{get_point3(j["center"], "center"), get_number(j["radius"], "radius")};
  } else if (type == "tube3") {
    require_keys(j, {"type", "ambient", "polyline", "tube_radius"}, "tube3");
    TubeDomain3 t;
    require_keys(j["ambient"], {"center", "radius"}, "ambient");
    t.ambient = Ball3{get_point3(j["ambient"]["center"], "center"),
                      get_number(j["ambient"]["radius"], "radius")};
    if (!j["polyline"].is_array()) fail("field \"polyline\" must be an array");
    for (const auto& p : j["polyline"]) t.polyline.push_back(get_point3(p, "polyline"));
    t.tube_radius = get_number(j["tube_radius"], "tube_radius");
    d = std::move(t);
  } else {
    fail("unknown domain type \"" + type + "\"");
  }
  validate(d);
  return d;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail("malformed JSON");
  return j;
}

}  // namespace

std::string domain_to_json(const DomainSpec& d) { return encode_domain(d).dump(2) + "\n"; }

DomainSpec domain_from_json(const std::string& text) { return decode_domain(parse(text)); }

DomainSpec load_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return domain_from_json(ss.str());
}

DomainSequence sequence_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object()) fail("sequence must be an object");
  bool three_d = false;
  if (j.contains("pole3")) three_d = true;
  std::set<std::string> allowed = {"limit", "domains", three_d ? "pole3" : "pole"};
  require_keys(j, allowed, "sequence");

  DomainSequence seq;
  seq.limit = decode_domain(j["limit"]);
  seq.three_d = three_d;
  if (three_d)
    seq.pole3 = get_point3(j["pole3"], "pole3");
  else
    seq.pole = get_point2(j["pole"], "pole");

  if (!j["domains"].is_array() || j["domains"].empty())
    fail("field \"domains\" must be a nonempty array");
  auto table = std::make_shared<std::map<long, DomainSpec>>();
  long prev = 0;
  for (const auto& item : j["domains"]) {
    require_keys(item, {"n", "domain"}, "domains entry");
    if (!item["n"].is_number_integer()) fail("field \"n\" must be an integer");
    long n = item["n"].get<long>();
    if (n <= prev) fail("field \"n\" values must be strictly increasing and positive");
    prev = n;
    seq.n_values.push_back(n);
    table->emplace(n, decode_domain(item["domain"]));
  }
  seq.domain_for = [table](long n) {
    auto it = table->find(n);
    if (it == table->end()) throw std::runtime_error("domain json: no domain for n");
    return it->second;
  };
  return seq;
}

DomainSequence load_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return sequence_from_json(ss.str());
}

}  // namespace greenfn
