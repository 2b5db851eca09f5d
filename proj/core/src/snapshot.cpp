#include "pfsim/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace pfsim {

namespace {

class Writer {
 public:
  std::vector<std::uint8_t> buf;
  template <class T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    buf.insert(buf.end(), raw, raw + sizeof(T));
  }
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}
  template <class T>
  T get() {
    need(sizeof(T));
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, b_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    pos_ += sizeof(T);
    T v;
    std::memcpy(&v, raw, sizeof(T));
    return v;
  }
  const std::uint8_t* take(std::size_t k) {
    need(k);
    const std::uint8_t* p = b_.data() + pos_;
    pos_ += k;
    return p;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t k) const {
    if (pos_ + k > b_.size()) throw SnapshotError("snapshot: truncated data");
  }
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

}  // namespace

Snapshot Snapshot::capture(const SpinConfig& sigma, const ModelParams& params, std::uint64_t seed,
                           std::uint64_t sweep, const EdgeConfig* omega) {
  Snapshot s;
  const Lattice& lat = sigma.lattice();
  s.q = params.q;
  s.beta = params.beta;
  s.kind = lat.domain().kind();
  s.n = lat.domain().n();
  s.m = lat.domain().m();
  s.bc = lat.bc();
  s.seed = seed;
  s.sweep = sweep;
  s.colors.assign(sigma.interior().begin(), sigma.interior().end());
  if (omega) s.edges = omega->bits();
  return s;
}

SpinConfig Snapshot::spins(const LatticePtr& lattice) const {
  if (lattice->num_sites() != static_cast<int>(colors.size()) || lattice->bc() != bc ||
      lattice->domain().kind() != kind || lattice->domain().n() != n || lattice->domain().m() != m)
    throw SnapshotError("snapshot: lattice does not match the header");
  SpinConfig sigma(lattice, kBlue);
  for (int v = 0; v < lattice->num_sites(); ++v) sigma.set(v, colors[v]);
  return sigma;
}

EdgeConfig Snapshot::edge_config(const LatticePtr& lattice) const {
  if (!edges) throw SnapshotError("snapshot: no edge payload");
  if (lattice->domain().num_edges() != static_cast<int>(edges->size()))
    throw SnapshotError("snapshot: edge count does not match the lattice");
  EdgeConfig w(lattice, false);
  for (int e = 0; e < w.size(); ++e) w.set(e, (*edges)[e] != 0);
  return w;
}

bool Snapshot::same_setup(const Snapshot& o) const {
  return q == o.q && beta == o.beta && kind == o.kind && n == o.n && m == o.m && bc == o.bc;
}

std::vector<std::uint8_t> Snapshot::to_bytes() const {
  Writer w;
  for (int i = 0; i < 6; ++i) w.put<char>(kTag[i]);
  w.put<std::uint16_t>(version);
  w.put<std::uint16_t>(static_cast<std::uint16_t>(q));
  w.put<double>(beta);
  w.put<std::uint8_t>(kind == DomainKind::floor_box ? 0 : 1);
  w.put<std::int32_t>(n);
  w.put<std::int32_t>(m);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(bc.kind));
  w.put<std::int32_t>(bc.h);
  w.put<std::uint64_t>(seed);
  w.put<std::uint64_t>(sweep);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(colors.size()));
  w.put<std::uint32_t>(edges ? static_cast<std::uint32_t>(edges->size()) : 0u);
  w.buf.insert(w.buf.end(), colors.begin(), colors.end());
  if (edges) {
    std::vector<std::uint8_t> packed((edges->size() + 7) / 8, 0);
    for (std::size_t e = 0; e < edges->size(); ++e)
      if ((*edges)[e]) packed[e / 8] |= std::uint8_t(1u << (e % 8));
    w.buf.insert(w.buf.end(), packed.begin(), packed.end());
  }
  return w.buf;
}

Snapshot Snapshot::from_bytes(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  const std::uint8_t* tag = r.take(6);
  if (std::memcmp(tag, kTag, 6) != 0) throw SnapshotError("snapshot: bad format tag");
  Snapshot s;
  s.version = r.get<std::uint16_t>();
  if (s.version != kVersion) throw SnapshotError("snapshot: unsupported version " + std::to_string(s.version));
  s.q = r.get<std::uint16_t>();
  s.beta = r.get<double>();
  const auto kind = r.get<std::uint8_t>();
  if (kind > 1) throw SnapshotError("snapshot: bad domain kind");
  s.kind = kind == 0 ? DomainKind::floor_box : DomainKind::slab_box;
  s.n = r.get<std::int32_t>();
  s.m = r.get<std::int32_t>();
  const auto bk = r.get<std::uint8_t>();
  if (bk > 2) throw SnapshotError("snapshot: bad boundary kind");
  s.bc.kind = static_cast<BoundaryCondition::Kind>(bk);
  s.bc.h = r.get<std::int32_t>();
  s.seed = r.get<std::uint64_t>();
  s.sweep = r.get<std::uint64_t>();
  const auto nc = r.get<std::uint32_t>();
  const auto ne = r.get<std::uint32_t>();
  const std::uint8_t* c = r.take(nc);
  s.colors.assign(c, c + nc);
  if (ne > 0) {
    const std::uint8_t* p = r.take((ne + 7) / 8);
    std::vector<std::uint8_t> e(ne);
    for (std::uint32_t i = 0; i < ne; ++i) e[i] = (p[i / 8] >> (i % 8)) & 1;
    s.edges = std::move(e);
  }
  if (!r.done()) throw SnapshotError("snapshot: trailing bytes");
  return s;
}

void Snapshot::write(const std::filesystem::path& path) const {
  auto bytes = to_bytes();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SnapshotError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw SnapshotError("write failed: " + path.string());
}

Snapshot Snapshot::read(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SnapshotError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return from_bytes(bytes);
  } catch (const SnapshotError& e) {
    throw SnapshotError(path.string() + ": " + e.what());
  }
}

}  // namespace pfsim
