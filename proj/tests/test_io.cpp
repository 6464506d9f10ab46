#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "gyrofp/config.hpp"
#include "gyrofp/csv.hpp"
#include "gyrofp/snapshot.hpp"

using namespace gyrofp;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gyrofp_test_io";
  fs::create_directories(dir);
  return dir / name;
}

SolverState sample_state() {
  PhysicalParams p;
  p.K = 3;
  p.N_u = 7;
  p.u_max = 5.5;
  p.T = 0.8;
  p.nu = 0.02;
  p.beta = 0.15;
  SolverState s = make_state(p);
  fill_perturbed_maxwellian(s.f, 1.0, {{1, 2, 0.3, 0.1}, {3, -1, 0.2, 2.0}});
  s.f(2, 2, 3) += Complex{1e-300, -3.5e-17};
  s.time = 1.234567890123;
  return s;
}

void append_u64(std::vector<unsigned char>& v, std::uint64_t x) {
  for (int b = 0; b < 8; ++b) v.push_back(static_cast<unsigned char>((x >> (8 * b)) & 0xff));
}
void append_f64(std::vector<unsigned char>& v, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, 8);
  append_u64(v, bits);
}

}  // namespace

TEST_CASE("snapshot round trip is bit exact") {
  const SolverState s = sample_state();
  const fs::path path = scratch("roundtrip.gfp");
  write_snapshot(s, path.string());
  const SolverState back = read_snapshot(path.string());
  CHECK(back.params == s.params);
  CHECK(back.time == s.time);
  REQUIRE(back.f.data().size() == s.f.data().size());
  CHECK(std::memcmp(back.f.data().data(), s.f.data().data(), s.f.data().size_bytes()) == 0);
  CHECK(fs::file_size(path) == kSnapshotHeaderBytes + 49 * 7 * 16);
}

TEST_CASE("snapshot header layout matches a hand-written fixture") {
  std::vector<unsigned char> bytes{'G', 'Y', 'R', 'O', 'F', 'P', '1', 0};
  append_u64(bytes, 1);     // K
  append_u64(bytes, 3);     // N_u
  append_f64(bytes, 6.0);   // u_max
  append_f64(bytes, 1.0);   // T
  append_f64(bytes, 0.01);  // nu
  append_f64(bytes, 0.1);   // beta
  append_f64(bytes, 2.5);   // t
  REQUIRE(bytes.size() == 64);
  int counter = 0;
  for (int k1 = -1; k1 <= 1; ++k1) {
    for (int k2 = -1; k2 <= 1; ++k2) {
      for (int j = 0; j < 3; ++j) {
        append_f64(bytes, 100.0 * k1 + 10.0 * k2 + j);
        append_f64(bytes, static_cast<double>(counter++));
      }
    }
  }
  const SolverState s = decode_snapshot(bytes);
  CHECK(s.params.K == 1);
  CHECK(s.params.N_u == 3);
  CHECK(s.params.u_max == 6.0);
  CHECK(s.params.nu == 0.01);
  CHECK(s.params.beta == 0.1);
  CHECK(s.time == 2.5);
  CHECK(s.f(-1, 1, 2) == Complex{-100.0 + 10.0 + 2.0, 8.0});
  CHECK(s.f(1, -1, 0) == Complex{90.0, 18.0});
  CHECK(encode_snapshot(s) == bytes);
}

TEST_CASE("snapshot errors") {
  auto bytes = encode_snapshot(sample_state());

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_WITH(decode_snapshot(bad_magic), ContainsSubstring("magic"));

  auto bad_version = bytes;
  bad_version[6] = '2';
  CHECK_THROWS_WITH(decode_snapshot(bad_version), ContainsSubstring("version"));

  auto truncated = bytes;
  truncated.resize(truncated.size() - 5);
  CHECK_THROWS_WITH(decode_snapshot(truncated), ContainsSubstring("truncated"));
  CHECK_THROWS_AS(decode_snapshot(std::vector<unsigned char>(bytes.begin(), bytes.begin() + 30)), FormatError);

  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_snapshot(trailing), FormatError);

  const fs::path path = scratch("dims.gfp");
  write_snapshot(sample_state(), path.string());
  CHECK_THROWS_WITH(read_snapshot(path.string(), 4, 7, 5.5), ContainsSubstring("dimension mismatch"));
  CHECK_NOTHROW(read_snapshot(path.string(), 3, 7, 5.5));
  CHECK_THROWS_AS(read_snapshot(scratch("missing.gfp").string()), FormatError);
}

TEST_CASE("CSV series round trip is exact") {
  std::vector<DiagnosticsRecord> s;
  for (int n = 0; n < 4; ++n) {
    DiagnosticsRecord r;
    r.t = 0.1 * n;
    r.mass = 1.0 / 3.0;
    r.norm_2u = std::sqrt(2.0) + n;
    r.norm_2m = std::exp(1.0) * n;
    r.norm_l2m_l4 = 1e-300;
    r.grad_norm_2m = 12345.678901234567;
    r.rho_h_half = 0.0;
    r.phi_h1 = -0.0;
    r.min_f = -2.5e-7;
    r.boundary_mass_fraction = 4.9e-324;
    s.push_back(r);
  }
  std::stringstream buf;
  write_series(buf, s);
  std::string header;
  std::getline(std::stringstream(buf.str()), header);
  CHECK(header == "t,mass,norm_2u,norm_2m,norm_l2m_l4,grad_norm_2m,rho_h_half,phi_h1,min_f,boundary_mass_fraction");
  const auto back = read_series(buf);
  REQUIRE(back.size() == s.size());
  for (std::size_t n = 0; n < s.size(); ++n) {
    const auto a = s[n].values();
    const auto b = back[n].values();
    CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
  }
}

TEST_CASE("CSV reader rejects malformed input") {
  std::stringstream bad_header("t,mass\n0,1\n");
  CHECK_THROWS_AS(read_series(bad_header), FormatError);
  std::stringstream short_row(std::string(kSeriesHeader) + "\n0,1,2\n");
  CHECK_THROWS_AS(read_series(short_row), FormatError);
  std::stringstream not_number(std::string(kSeriesHeader) + "\n0,1,2,3,4,5,6,7,8,x\n");
  CHECK_THROWS_AS(read_series(not_number), FormatError);
  std::stringstream backwards(std::string(kSeriesHeader) + "\n1,1,1,1,1,1,1,1,1,1\n0,1,1,1,1,1,1,1,1,1\n");
  CHECK_THROWS_WITH(read_series(backwards), ContainsSubstring("increasing"));
  std::stringstream empty(std::string(kSeriesHeader) + "\n");
  CHECK_THROWS_AS(read_series(empty), FormatError);
}

TEST_CASE("config defaults") {
  const RunConfig c = parse_config_text("");
  CHECK(c.params.nu == 0.01);
  CHECK(c.params.beta == 0.1);
  CHECK(c.params.T == 1.0);
  CHECK(c.params.K == 32);
  CHECK(c.params.N_u == 32);
  CHECK(c.params.u_max == 6.0);
  CHECK(c.monitor_slack == 1e-6);
  CHECK(c.mode == RunMode::nonlinear);
  CHECK(c.deltas == std::vector<double>{1e-2, 1e-3, 1e-4});
}

TEST_CASE("config parsing") {
  const RunConfig c = parse_config_text(
      "[physics]\nnu = 0.02\nbeta = 0\n[grid]\nK = 8\nN_u = 12\n[time]\nt_end = 0\n"
      "[initial]\ntype = perturbed_maxwellian\nmodes = 1 0 0.3 0; 2 -1 0.1 1.5\n"
      "[run]\nmode = frozen_phi\nseed = 9\n[frozen]\nsource = modes\nmodes = 1 1 0.5 0\n"
      "[sweep]\nepsilons = 0.4, 0.2\n[stability]\ndeltas = 1e-3, 1e-5\n[monitors]\nenabled = false\n");
  CHECK(c.params.nu == 0.02);
  CHECK(c.params.beta == 0.0);
  CHECK(c.params.K == 8);
  CHECK(c.t_end == 0.0);
  REQUIRE(c.initial.modes.size() == 2);
  CHECK(c.initial.modes[1].k2 == -1);
  CHECK(c.initial.modes[1].phase == 1.5);
  CHECK(c.mode == RunMode::frozen_phi);
  CHECK(c.seed == 9);
  CHECK(c.frozen.source == FrozenSource::modes);
  CHECK(c.sweep.epsilons == std::vector<double>{0.4, 0.2});
  CHECK(c.deltas == std::vector<double>{1e-3, 1e-5});
  CHECK_FALSE(c.monitors);
  const SpectralField2D phi = load_frozen_potential(c);
  CHECK(phi(1, 1) == Complex{0.25, 0.0});
}

TEST_CASE("config errors") {
  CHECK_THROWS_WITH(parse_config_text("[physics]\nnuu = 1\n"), ContainsSubstring("unknown key"));
  CHECK_THROWS_WITH(parse_config_text("[physic]\nnu = 1\n"), ContainsSubstring("unknown section"));
  CHECK_THROWS_AS(parse_config_text("nu = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[physics]\nnu = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[physics]\nT = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[time]\nt_end = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grid]\nN_u = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[initial]\nmodes = 1 0 0.3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[initial]\ntype = file\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\nmode = banana\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[monitors]\nenabled = maybe\n"), ConfigError);
  CHECK_THROWS_AS(load_config(scratch("nope.ini").string()), ConfigError);
}

TEST_CASE("initial data is checked for positivity and normalized") {
  RunConfig c = parse_config_text("[grid]\nK = 4\nN_u = 16\n[initial]\nmodes = 1 0 0.5 0\n");
  const LoadedInitial ok = load_initial(c);
  CHECK_THAT(ok.state.f.mass(), WithinAbs(1.0, 1e-14));
  CHECK(ok.normalization > 0.0);
  CHECK(ok.min_value > 0.0);

  c.initial.modes = {{1, 0, 1.5, 0.0}};
  CHECK_THROWS_WITH(load_initial(c), ContainsSubstring("negative"));

  c.initial.modes = {{7, 0, 0.1, 0.0}};
  CHECK_THROWS_AS(load_initial(c), ConfigError);
}

TEST_CASE("initial data from a snapshot file") {
  RunConfig c = parse_config_text("[grid]\nK = 3\nN_u = 7\nu_max = 5.5\n");
  const SolverState s = sample_state();
  const fs::path path = scratch("initial.gfp");
  write_snapshot(s, path.string());
  c.initial.kind = InitialKind::file;
  c.initial.path = path.string();
  const LoadedInitial li = load_initial(c);
  CHECK_THAT(li.state.f.mass(), WithinAbs(1.0, 1e-14));
  CHECK_THAT(li.normalization * s.f.mass(), WithinAbs(1.0, 1e-14));
  c.params.K = 4;
  CHECK_THROWS_AS(load_initial(c), FormatError);
}
