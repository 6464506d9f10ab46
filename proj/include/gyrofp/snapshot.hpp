#pragma once
// Binary snapshot container.
//
// Layout (all little-endian):
//   8 bytes   magic "GYROFP1\0"
//   uint64    K, N_u
//   float64   u_max, T, nu, beta, t
//   complex   (re, im) float64 pairs in row-major (k1, k2, j) order,
//             k1 and k2 running from -K to K
// The velocity grid is rebuilt from (N_u, u_max).

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "gyrofp/errors.hpp"
#include "gyrofp/solver.hpp"

namespace gyrofp {

inline constexpr std::array<char, 8> kSnapshotMagic{'G', 'Y', 'R', 'O', 'F', 'P', '1', '\0'};
inline constexpr std::size_t kSnapshotHeaderBytes = 8 + 2 * 8 + 5 * 8;

namespace detail {

inline void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

inline void put_f64(std::vector<unsigned char>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return v;
}

inline double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

}  // namespace detail

inline std::vector<unsigned char> encode_snapshot(const SolverState& state) {
  const GyroDistribution& f = state.f;
  const int K = f.truncation();
  std::vector<unsigned char> out;
  out.reserve(kSnapshotHeaderBytes + f.data().size() * 16);
  out.insert(out.end(), kSnapshotMagic.begin(), kSnapshotMagic.end());
  detail::put_u64(out, static_cast<std::uint64_t>(K));
  detail::put_u64(out, static_cast<std::uint64_t>(f.nu()));
  detail::put_f64(out, f.grid().u_max());
  detail::put_f64(out, state.params.T);
  detail::put_f64(out, state.params.nu);
  detail::put_f64(out, state.params.beta);
  detail::put_f64(out, state.time);
  for (int k1 = -K; k1 <= K; ++k1) {
    for (int k2 = -K; k2 <= K; ++k2) {
      for (std::size_t j = 0; j < f.nu(); ++j) {
        detail::put_f64(out, f(k1, k2, j).real());
        detail::put_f64(out, f(k1, k2, j).imag());
      }
    }
  }
  return out;
}

inline SolverState decode_snapshot(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kSnapshotMagic.size()) throw FormatError("snapshot: file shorter than the magic string");
  if (std::memcmp(bytes.data(), kSnapshotMagic.data(), 6) != 0) {
    throw FormatError("snapshot: bad magic, not a GYROFP snapshot");
  }
  if (std::memcmp(bytes.data(), kSnapshotMagic.data(), kSnapshotMagic.size()) != 0) {
    throw FormatError("snapshot: unsupported format version");
  }
  if (bytes.size() < kSnapshotHeaderBytes) throw FormatError("snapshot: truncated header");
  const unsigned char* p = bytes.data() + 8;
  const std::uint64_t K = detail::get_u64(p);
  const std::uint64_t nu_count = detail::get_u64(p + 8);
  if (K < 1 || K > 4096 || nu_count < 3 || nu_count > (1u << 20)) {
    throw FormatError("snapshot: implausible dimensions K = " + std::to_string(K) +
                      ", N_u = " + std::to_string(nu_count));
  }
  PhysicalParams params;
  params.K = static_cast<int>(K);
  params.N_u = static_cast<std::size_t>(nu_count);
  params.u_max = detail::get_f64(p + 16);
  params.T = detail::get_f64(p + 24);
  params.nu = detail::get_f64(p + 32);
  params.beta = detail::get_f64(p + 40);
  const double t = detail::get_f64(p + 48);
  try {
    params.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("snapshot: invalid header: ") + e.what());
  }
  const std::size_t side = 2 * K + 1;
  const std::size_t expected = kSnapshotHeaderBytes + side * side * nu_count * 16;
  if (bytes.size() < expected) throw FormatError("snapshot: truncated data block");
  if (bytes.size() > expected) throw FormatError("snapshot: trailing bytes after data block");

  SolverState state = make_state(params);
  state.time = t;
  const unsigned char* d = bytes.data() + kSnapshotHeaderBytes;
  const int k = params.K;
  for (int k1 = -k; k1 <= k; ++k1) {
    for (int k2 = -k; k2 <= k; ++k2) {
      for (std::size_t j = 0; j < params.N_u; ++j) {
        state.f(k1, k2, j) = Complex{detail::get_f64(d), detail::get_f64(d + 8)};
        d += 16;
      }
    }
  }
  return state;
}

inline void write_snapshot(const SolverState& state, const std::string& path) {
  const auto bytes = encode_snapshot(state);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("snapshot: cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("snapshot: write failed for " + path);
}

inline SolverState read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("snapshot: cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

/// read_snapshot that also requires the stored dimensions to match.
inline SolverState read_snapshot(const std::string& path, int K, std::size_t N_u, double u_max) {
  SolverState s = read_snapshot(path);
  if (s.params.K != K || s.params.N_u != N_u || s.params.u_max != u_max) {
    throw FormatError("snapshot: dimension mismatch in " + path + " (K = " + std::to_string(s.params.K) +
                      ", N_u = " + std::to_string(s.params.N_u) + ", expected K = " + std::to_string(K) +
                      ", N_u = " + std::to_string(N_u) + ")");
  }
  return s;
}

}  // namespace gyrofp
