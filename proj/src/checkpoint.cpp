#include <cstring>
#include <fstream>

#include "mdlab/md_state.hpp"

namespace mdlab {

namespace {

constexpr char magic[8] = {'M', 'D', 'L', 'A', 'B', 'C', 'K', 'P'};

// FNV-1a over the payload bytes.
struct Checksum {
  std::uint64_t h = 1469598103934665603ull;
  void add(const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  }
};

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open checkpoint for writing: " + path.string());
  }
  template <class T>
  void pod(const T& v) { bytes(&v, sizeof(T)); }
  void bytes(const void* data, std::size_t n) {
    sum_.add(data, n);
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  template <int C>
  void field(const Field<C>& f) {
    const auto d = f.data();
    bytes(d.data(), d.size_bytes());
  }
  void finish(const std::filesystem::path& path) {
    const std::uint64_t h = sum_.h;
    out_.write(reinterpret_cast<const char*>(&h), sizeof h);
    out_.flush();
    if (!out_) throw IoError("failed writing checkpoint: " + path.string());
  }

 private:
  std::ofstream out_;
  Checksum sum_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw IoError("cannot open checkpoint: " + path.string());
  }
  template <class T>
  T pod() {
    T v;
    bytes(&v, sizeof(T));
    return v;
  }
  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (!in_) throw IoError("truncated checkpoint: " + path_.string());
    sum_.add(data, n);
  }
  template <int C>
  void field(Field<C>& f) {
    auto d = f.data();
    bytes(d.data(), d.size_bytes());
  }
  void finish() {
    std::uint64_t h = 0;
    in_.read(reinterpret_cast<char*>(&h), sizeof h);
    if (!in_) throw IoError("truncated checkpoint: " + path_.string());
    if (h != sum_.h) throw IoError("checkpoint checksum mismatch: " + path_.string());
  }

 private:
  std::ifstream in_;
  std::filesystem::path path_;
  Checksum sum_;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const MDState& s, std::uint64_t step) {
  for (int mu = 0; mu < 4; ++mu) {
    s.A[mu].require(Side::fourier, "save_checkpoint");
    s.Adot[mu].require(Side::fourier, "save_checkpoint");
  }
  s.psi.require(Side::fourier, "save_checkpoint");
  const FourierGrid& g = *s.grid();
  Writer w(path);
  w.bytes(magic, sizeof magic);
  w.pod(checkpoint_version);
  w.pod(static_cast<std::int32_t>(g.n()));
  w.pod(g.length());
  w.pod(g.mass());
  w.pod(step);
  w.pod(s.t);
  w.field(s.psi);
  for (int mu = 0; mu < 4; ++mu) w.field(s.A[mu]);
  for (int mu = 0; mu < 4; ++mu) w.field(s.Adot[mu]);
  const ZeroModes z = zero_modes(s);
  w.bytes(z.a.data(), sizeof z.a);
  w.bytes(z.adot.data(), sizeof z.adot);
  w.finish(path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path, GridPtr grid) {
  Reader r(path);
  char m[8];
  r.bytes(m, sizeof m);
  if (std::memcmp(m, magic, sizeof m) != 0) throw IoError("not a checkpoint file: " + path.string());
  const auto version = r.pod<std::uint32_t>();
  if (version != checkpoint_version) {
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  }
  const int n = r.pod<std::int32_t>();
  const double length = r.pod<double>();
  const double mass = r.pod<double>();
  if (grid) {
    if (grid->n() != n || grid->length() != length || grid->mass() != mass) {
      throw IoError("checkpoint grid does not match the configured grid");
    }
  } else {
    grid = FourierGrid::create(n, length, mass);
  }
  Checkpoint c;
  c.step = r.pod<std::uint64_t>();
  c.state = MDState::vacuum(grid);
  c.state.t = r.pod<double>();
  r.field(c.state.psi);
  for (int mu = 0; mu < 4; ++mu) r.field(c.state.A[mu]);
  for (int mu = 0; mu < 4; ++mu) r.field(c.state.Adot[mu]);
  ZeroModes z;
  r.bytes(z.a.data(), sizeof z.a);
  r.bytes(z.adot.data(), sizeof z.adot);
  r.finish();
  for (int mu = 0; mu < 4; ++mu) {
    if (z.a[mu] != c.state.A[mu](0) || z.adot[mu] != c.state.Adot[mu](0)) {
      throw IoError("checkpoint zero-mode registers are inconsistent");
    }
  }
  return c;
}

}  // namespace mdlab
