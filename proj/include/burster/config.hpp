#pragma once
// Flat `key = value` config parsing ('#' comments) and the model/circuit
// parameter bindings with strict unknown-key rejection.
#include <map>
#include <string>

#include "burster/circuit.hpp"
#include "burster/neuron.hpp"

namespace burster {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_config_text(const std::string& text);
KeyValues load_config(const std::string& path);

InapIkIkmParams model_from_config(const KeyValues& kv);
KeyValues model_to_config(const InapIkIkmParams& p);

CircuitParams circuit_from_config(const KeyValues& kv);
KeyValues circuit_to_config(const CircuitParams& p);

}  // namespace burster
