#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "momentous/classify.hpp"
#include "momentous/error.hpp"
#include "momentous/dynamics.hpp"
#include "momentous/integrator.hpp"
#include "momentous/packet.hpp"

namespace momentous {

/// Raised for malformed or invalid run configurations; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct PacketSpec {
  double q0 = -3.0;
  /// Exactly one of p0 / energy is set. With `energy`, p0 = +sqrt(2m (E - V(q0))).
  std::optional<double> p0;
  std::optional<double> energy;
  double sigma0 = 0.5;
  ThirdMomentConvention third_moment_convention = ThirdMomentConvention::Paper;

  friend bool operator==(const PacketSpec&, const PacketSpec&) = default;
};

struct SweepSpec {
  std::string parameter = "q0";  // q0 | p0 | sigma0
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  /// Value of the i-th point; start when count == 1.
  double value(int i) const;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  double value(int i) const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct SurfaceSpec {
  GridSpec q{-3.0, 3.0, 121};
  GridSpec t{0.0, 4.0, 41};

  friend bool operator==(const SurfaceSpec&, const SurfaceSpec&) = default;
};

struct RunConfig {
  ModelConfig model;
  PacketSpec packet;
  IntegratorConfig integrator;
  std::optional<double> margin;  // defaults to 0.05 a
  std::optional<SweepSpec> sweep;
  std::optional<SurfaceSpec> surface;
  std::string output_path;
  std::string output_format = "csv";

  double effective_margin() const;
  /// Initial momentum implied by the packet spec.
  double initial_momentum() const;
  /// Energy used for turning points and classification: the configured energy, or the
  /// classical energy p0^2/2m + V(q0) when p0 is given.
  double classification_energy() const;
  GaussianPacket gaussian_packet() const;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

bool operator==(const IntegratorConfig& a, const IntegratorConfig& b);
bool operator==(const ModelConfig& a, const ModelConfig& b);
bool operator==(const RunConfig& a, const RunConfig& b);

/// Parses a configuration object; absent fields keep their defaults. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Full configuration with every default spelled out.
nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace momentous
