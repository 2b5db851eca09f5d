#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfsim/rc.hpp"

namespace pfsim {

struct SnapshotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary layout, little endian:
//   "PFSIM1" | u16 version | u16 q | f64 beta | u8 kind | i32 n | i32 m |
//   u8 bc kind | i32 bc h | u64 seed | u64 sweep | u32 #colors | u32 #edge bits |
//   colors (1 byte per interior site) | edge bits packed LSB first
struct Snapshot {
  static constexpr char kTag[7] = "PFSIM1";
  static constexpr std::uint16_t kVersion = 1;

  std::uint16_t version = kVersion;
  int q = 2;
  double beta = 0.0;
  DomainKind kind = DomainKind::floor_box;
  int n = 0, m = 0;
  BoundaryCondition bc;
  std::uint64_t seed = 0;
  std::uint64_t sweep = 0;
  std::vector<Color> colors;
  std::optional<std::vector<std::uint8_t>> edges;  // one entry per edge, 0/1

  static Snapshot capture(const SpinConfig& sigma, const ModelParams& params, std::uint64_t seed,
                          std::uint64_t sweep, const EdgeConfig* omega = nullptr);

  ModelParams params() const { return ModelParams(q, beta); }
  LatticePtr make_lattice() const { return Lattice::make(kind, n, m, bc); }
  // Throws SnapshotError when the lattice does not match the header.
  SpinConfig spins(const LatticePtr& lattice) const;
  EdgeConfig edge_config(const LatticePtr& lattice) const;
  // Same model, domain and boundary condition.
  bool same_setup(const Snapshot& o) const;

  std::vector<std::uint8_t> to_bytes() const;
  static Snapshot from_bytes(const std::vector<std::uint8_t>& bytes);
  void write(const std::filesystem::path& path) const;
  static Snapshot read(const std::filesystem::path& path);

  bool operator==(const Snapshot&) const = default;
};

}  // namespace pfsim
