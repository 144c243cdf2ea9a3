#include "burster/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace burster {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const KeyValues& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError("missing config key: " + key);
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("bad numeric value for key '" + key + "': " + it->second);
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Node parse_node(const std::string& key, const std::string& v) {
  if (v == "V_dc") return Node::vdc;
  if (v == "V_out") return Node::vout;
  if (v == "internal") return Node::internal;
  throw ConfigError("bad node name for key '" + key + "': " + v +
                    " (expected V_dc, V_out, or internal)");
}

std::string node_name(Node n) {
  switch (n) {
    case Node::vdc: return "V_dc";
    case Node::vout: return "V_out";
    default: return "internal";
  }
}

}  // namespace

KeyValues parse_config_text(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = val;
  }
  return kv;
}

KeyValues load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

InapIkIkmParams model_from_config(const KeyValues& kv) {
  static const std::set<std::string> known = {
      "C",  "E_L",       "E_Na",     "E_K",      "g_L", "g_Na", "g_K", "g_M",
      "V_half_Na", "V_half_K", "V_half_M", "k_Na", "k_K",  "k_M", "tau", "tau_M", "I"};
  for (auto& [k, v] : kv)
    if (!known.count(k)) throw ConfigError("unknown model config key: " + k);
  InapIkIkmParams p;
  p.C = to_double(kv, "C");
  p.E_L = to_double(kv, "E_L");
  p.E_Na = to_double(kv, "E_Na");
  p.E_K = to_double(kv, "E_K");
  p.g_L = to_double(kv, "g_L");
  p.g_Na = to_double(kv, "g_Na");
  p.g_K = to_double(kv, "g_K");
  p.g_M = to_double(kv, "g_M");
  p.m_inf = {to_double(kv, "V_half_Na"), to_double(kv, "k_Na")};
  p.n_inf = {to_double(kv, "V_half_K"), to_double(kv, "k_K")};
  p.n_inf_M = {to_double(kv, "V_half_M"), to_double(kv, "k_M")};
  p.tau = to_double(kv, "tau");
  p.tau_M = to_double(kv, "tau_M");
  p.I = to_double(kv, "I");
  if (p.tau_M <= p.tau) throw ConfigError("tau_M must exceed tau (slow/fast separation)");
  return p;
}

KeyValues model_to_config(const InapIkIkmParams& p) {
  KeyValues kv;
  kv["C"] = fmt(p.C);
  kv["E_L"] = fmt(p.E_L);
  kv["E_Na"] = fmt(p.E_Na);
  kv["E_K"] = fmt(p.E_K);
  kv["g_L"] = fmt(p.g_L);
  kv["g_Na"] = fmt(p.g_Na);
  kv["g_K"] = fmt(p.g_K);
  kv["g_M"] = fmt(p.g_M);
  kv["V_half_Na"] = fmt(p.m_inf.v_half);
  kv["k_Na"] = fmt(p.m_inf.k);
  kv["V_half_K"] = fmt(p.n_inf.v_half);
  kv["k_K"] = fmt(p.n_inf.k);
  kv["V_half_M"] = fmt(p.n_inf_M.v_half);
  kv["k_M"] = fmt(p.n_inf_M.k);
  kv["tau"] = fmt(p.tau);
  kv["tau_M"] = fmt(p.tau_M);
  kv["I"] = fmt(p.I);
  return kv;
}

CircuitParams circuit_from_config(const KeyValues& kv) {
  static const std::set<std::string> known = {
      "C1", "C2", "C3", "R1", "R2", "R3", "V_dc", "I", "half_factor",
      "q1.K", "q1.Vt0", "q1.lambda", "q2.K", "q2.Vt0", "q2.lambda",
      "q3.K", "q3.Vt0", "q3.lambda", "q4.K", "q4.Vt0", "q4.lambda",
      "q2.drain", "q2.source", "q2.gate", "q3.drain", "q3.source", "q3.gate"};
  for (auto& [k, v] : kv)
    if (!known.count(k)) throw ConfigError("unknown circuit config key: " + k);
  CircuitParams p;
  p.C1 = to_double(kv, "C1");
  p.C2 = to_double(kv, "C2");
  p.C3 = to_double(kv, "C3");
  p.R1 = to_double(kv, "R1");
  p.R2 = to_double(kv, "R2");
  if (kv.count("R3")) p.R3 = to_double(kv, "R3");
  p.v_dc = to_double(kv, "V_dc");
  p.I = to_double(kv, "I");
  bool half = true;
  if (auto it = kv.find("half_factor"); it != kv.end()) {
    if (it->second == "true") half = true;
    else if (it->second == "false") half = false;
    else throw ConfigError("half_factor must be true or false");
  }
  auto dev = [&](const std::string& n, Polarity pol) {
    MosfetParams m;
    m.polarity = pol;
    m.K = to_double(kv, n + ".K");
    m.V_t0 = to_double(kv, n + ".Vt0");
    m.lambda = to_double(kv, n + ".lambda");
    m.half_factor = half;
    return m;
  };
  p.q1 = dev("q1", Polarity::NMOS);
  p.q4 = dev("q4", Polarity::NMOS);
  p.nndr.q2 = dev("q2", Polarity::PMOS);
  p.nndr.q3 = dev("q3", Polarity::NMOS);
  p.nndr.v_dc = p.v_dc;
  auto wire = [&](const std::string& n, const DeviceWiring& dflt) {
    DeviceWiring w = dflt;
    if (auto it = kv.find(n + ".drain"); it != kv.end()) w.drain = parse_node(n + ".drain", it->second);
    if (auto it = kv.find(n + ".source"); it != kv.end()) w.source = parse_node(n + ".source", it->second);
    if (auto it = kv.find(n + ".gate"); it != kv.end()) w.gate = parse_node(n + ".gate", it->second);
    return w;
  };
  p.nndr.w2 = wire("q2", p.nndr.w2);
  p.nndr.w3 = wire("q3", p.nndr.w3);
  return p;
}

KeyValues circuit_to_config(const CircuitParams& p) {
  KeyValues kv;
  kv["C1"] = fmt(p.C1);
  kv["C2"] = fmt(p.C2);
  kv["C3"] = fmt(p.C3);
  kv["R1"] = fmt(p.R1);
  kv["R2"] = fmt(p.R2);
  if (p.R3) kv["R3"] = fmt(*p.R3);
  kv["V_dc"] = fmt(p.v_dc);
  kv["I"] = fmt(p.I);
  kv["half_factor"] = p.q1.half_factor ? "true" : "false";
  auto dev = [&](const std::string& n, const MosfetParams& m) {
    kv[n + ".K"] = fmt(m.K);
    kv[n + ".Vt0"] = fmt(m.V_t0);
    kv[n + ".lambda"] = fmt(m.lambda);
  };
  dev("q1", p.q1);
  dev("q2", p.nndr.q2);
  dev("q3", p.nndr.q3);
  dev("q4", p.q4);
  kv["q2.drain"] = node_name(p.nndr.w2.drain);
  kv["q2.source"] = node_name(p.nndr.w2.source);
  kv["q2.gate"] = node_name(p.nndr.w2.gate);
  kv["q3.drain"] = node_name(p.nndr.w3.drain);
  kv["q3.source"] = node_name(p.nndr.w3.source);
  kv["q3.gate"] = node_name(p.nndr.w3.gate);
  return kv;
}

}  // namespace burster
