#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "egl/checkpoint.hpp"
#include "egl/commands.hpp"
#include "egl/config.hpp"
#include "egl/csv.hpp"

using namespace egl;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("egl_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string str() const { return path_.string(); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

RunConfig small_run(const std::string& out) {
  RunConfig c;
  apply_settings(c, {{"n", "128"},
                     {"delta", "0.2"},
                     {"delta1", "0.1"},
                     {"s", "0.04"},
                     {"snapshot_interval", "0.1"},
                     {"output", out}});
  return c;
}

Checkpoint sample_checkpoint() {
  Checkpoint c;
  c.n = 32;
  c.t = 0.125;
  c.spectrum.resize(15 * 15);
  for (std::size_t i = 0; i < c.spectrum.size(); ++i) c.spectrum[i] = std::sin(1.0 + i);
  c.step_count = 17;
  c.last_dt = 1e-3;
  c.int_grad_u = 0.4;
  c.grad_u = 3.0;
  c.speed = 1.5;
  c.initial_speed = 1.25;
  c.log_s = std::log(0.02);
  c.delta = 0.1;
  c.delta1 = 0.05;
  c.initial_kind = 1;
  c.tracers.push_back({{0.02, 0.02}, {0.015, 0.03}, {0.9, 0.1, -0.2, 1.1}});
  return c;
}

}  // namespace

TEST_CASE("config text parsing") {
  const auto kv = parse_config_text("# comment\n n = 512 \n\ndelta=0.05  # trailing\nmode = resolvable\n");
  CHECK(kv.at("n") == "512");
  CHECK(kv.at("delta") == "0.05");
  CHECK(kv.size() == 3u);
  CHECK_THROWS_AS(parse_config_text("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("n 512\n"), ConfigError);

  RunConfig c;
  apply_settings(c, kv);
  CHECK(c.n == 512);
  CHECK(c.delta == 0.05);
  CHECK(c.assigned.count("n") == 1u);
  CHECK(c.assigned.count("t_end") == 0u);
  CHECK_THROWS_AS(apply_setting(c, "n", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "dealias", "maybe"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "mode", "fast"), ConfigError);
  apply_setting(c, "initial", "eigenfunction");
  CHECK(c.initial == InitialKind::eigenfunction);
  CHECK(config_keys().count("acknowledge_unresolved") == 1u);
}

TEST_CASE("config loads from a file") {
  TempDir dir;
  spit(dir / "run.cfg", "n = 64\nt_end = 0.5\n");
  const auto c = load_config(dir / "run.cfg");
  CHECK(c.n == 64);
  CHECK(c.t_end == 0.5);
  CHECK_THROWS_AS(load_config(dir / "missing.cfg"), ConfigError);
}

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(validate_for_simulation(c));
  CHECK_NOTHROW(validate_for_constants(c));

  RunConfig theo;
  apply_setting(theo, "mode", "theoretical");
  CHECK_NOTHROW(validate_for_constants(theo));
  CHECK_THROWS_AS(validate_for_simulation(theo), ConfigError);
  apply_setting(theo, "n", "256");
  CHECK_THROWS_AS(validate_for_constants(theo), ConfigError);

  RunConfig low;
  apply_setting(low, "A", "1.9");
  CHECK_THROWS_AS(validate_for_constants(low), ConfigError);

  RunConfig coarse;
  apply_setting(coarse, "n", "32");
  CHECK_THROWS_AS(validate_for_simulation(coarse), ConfigError);

  RunConfig tiny_s;
  apply_setting(tiny_s, "s", "0.001");
  CHECK_THROWS_AS(validate_for_simulation(tiny_s), ConfigError);
  apply_setting(tiny_s, "acknowledge_unresolved", "true");
  CHECK_NOTHROW(validate_for_simulation(tiny_s));

  RunConfig wide_s;
  apply_setting(wide_s, "s", "0.03");
  CHECK_THROWS_AS(validate_for_simulation(wide_s), ConfigError);
}

TEST_CASE("checkpoint encoding round trip and corruption checks") {
  const auto c = sample_checkpoint();
  const auto bytes = encode_checkpoint(c);
  CHECK(bytes.size() == 4 + 4 + 4 + 8 + 225 * 8 + 8 + 8 * 8 + 4 + 4 + 8 * 8);
  CHECK(bytes[0] == 'E');
  CHECK(decode_checkpoint(bytes) == c);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_checkpoint(bad_magic), CheckpointError);
  auto bad_version = bytes;
  bad_version[4] = 2;
  CHECK_THROWS_AS(decode_checkpoint(bad_version), CheckpointError);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 3);
  CHECK_THROWS_AS(decode_checkpoint(truncated), CheckpointError);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_checkpoint(trailing), CheckpointError);

  TempDir dir;
  save_checkpoint(dir / "a.chk", c);
  CHECK(load_checkpoint(dir / "a.chk") == c);
  CHECK_FALSE(fs::exists(dir / "a.chk.tmp"));
  CHECK_THROWS_AS(load_checkpoint(dir / "none.chk"), CheckpointError);
}

TEST_CASE("checkpoint restores state and tracers") {
  const auto c = sample_checkpoint();
  const SimState s = state_from_checkpoint(c);
  CHECK(s.t == c.t);
  CHECK(s.step_count == c.step_count);
  CHECK(s.initial_speed == c.initial_speed);
  CHECK(s.omega.grid().n() == 32);
  const auto trs = tracers_from_checkpoint(c);
  REQUIRE(trs.size() == 1u);
  CHECK(trs[0].x == Point{0.015, 0.03});
  CHECK(trs[0].history.back().t == c.t);
  const auto again = make_checkpoint(s, trs);
  CHECK(again.spectrum == c.spectrum);
  CHECK(again.tracers[0].jacobian == c.tracers[0].jacobian);
}

TEST_CASE("csv formatting and parsing") {
  CHECK(format_number(std::nullopt).empty());
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(std::stod(format_number(std::numbers::pi)) == std::numbers::pi);

  DiagnosticsRecord r;
  r.t = 0.5;
  r.linf_omega = 1.0;
  r.X1 = 0.01;
  r.trusted = true;
  const auto text = diagnostics_csv({r, r});
  const auto table = parse_csv(text);
  CHECK(table.header == diagnostics_columns());
  REQUIRE(table.rows.size() == 2u);
  CHECK(*table.rows[0][table.column("t")] == 0.5);
  CHECK(*table.rows[0][table.column("X1")] == 0.01);
  CHECK_FALSE(table.rows[0][table.column("I")].has_value());
  CHECK(*table.rows[1][table.column("trusted")] == 1.0);
  CHECK_THROWS_AS(table.column("nope"), CsvError);

  const auto traj = parse_csv(trajectory_csv({{0.0, 0.1, 0.2, 1.0}}));
  CHECK(traj.header == trajectory_columns());
  CHECK(*traj.rows[0][3] == 1.0);

  CHECK_THROWS_AS(parse_csv(""), CsvError);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), CsvError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,x\n"), CsvError);
}

TEST_CASE("constants command") {
  std::ostringstream out, err;
  RunConfig c;
  apply_setting(c, "mode", "theoretical");
  CHECK(cmd_constants(c, out, err) == exit_ok);
  CHECK(out.str().find("status = ok") != std::string::npos);
  CHECK(out.str().find("delta1_branch = delta/2") != std::string::npos);
  CHECK(out.str().find("delta = 3.0154831774386639249") != std::string::npos);

  RunConfig low;
  apply_setting(low, "mode", "theoretical");
  apply_setting(low, "A", "1.5");
  CHECK(cmd_constants(low, out, err) == exit_usage);

  RunConfig imprecise;
  apply_setting(imprecise, "mode", "theoretical");
  apply_setting(imprecise, "precision", "30");
  CHECK(cmd_constants(imprecise, out, err) == exit_usage);

  // resolvable delta = 0.1 makes the key-integral bound vacuous
  std::ostringstream rerr;
  CHECK(cmd_constants(RunConfig{}, out, rerr) == exit_constraint);
  CHECK(rerr.str().find("vacuous") != std::string::npos);
}

TEST_CASE("delta shrinks as A grows") {
  auto delta_for = [](const char* a) {
    RunConfig c;
    apply_setting(c, "mode", "theoretical");
    apply_setting(c, "A", a);
    std::ostringstream out, err;
    REQUIRE(cmd_constants(c, out, err) == exit_ok);
    const std::string s = out.str();
    const auto pos = s.find("\ndelta = ") + 9;
    return std::stod(s.substr(pos, s.find('\n', pos) - pos));
  };
  CHECK(delta_for("3") < delta_for("2"));
}

TEST_CASE("init command") {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig c;
  apply_settings(c, {{"n", "512"}, {"delta", "0.1"}, {"output", dir.str()}});
  REQUIRE(cmd_init(c, out, err) == exit_ok);
  CHECK(out.str().find("status = ok") != std::string::npos);
  CHECK(fs::exists(dir / "initial.chk"));
  CHECK(fs::exists(dir / "init_report.txt"));
  const auto chk = load_checkpoint(dir / "initial.chk");
  CHECK(chk.n == 512);
  CHECK(chk.log_s == std::log(0.02));
  CHECK(chk.tracers.size() == 1u);
  const auto first = slurp(dir / "initial.chk");

  CHECK(cmd_init(c, out, err) == exit_usage);  // refuses to overwrite
  apply_setting(c, "force", "true");
  REQUIRE(cmd_init(c, out, err) == exit_ok);
  CHECK(slurp(dir / "initial.chk") == first);

  RunConfig coarse = c;
  apply_setting(coarse, "n", "32");
  CHECK(cmd_init(coarse, out, err) == exit_usage);
}

TEST_CASE("run command") {
  TempDir dir;
  std::ostringstream out, err;
  RunConfig c = small_run(dir.str());
  REQUIRE(cmd_init(c, out, err) == exit_ok);

  SUBCASE("zero-length run records one row") {
    apply_setting(c, "t_end", "0");
    REQUIRE(cmd_run(c, "", out, err) == exit_ok);
    const auto table = read_csv(dir / "diagnostics.csv");
    CHECK(table.rows.size() == 1u);
    CHECK(*table.rows[0][0] == 0.0);
    CHECK(cmd_run(c, "", out, err) == exit_usage);  // outputs exist
  }
  SUBCASE("resuming from a checkpoint matches an uninterrupted run") {
    RunConfig full = c;
    apply_setting(full, "t_end", "0.4");
    apply_setting(full, "output", dir / "full");
    REQUIRE(cmd_run(full, dir / "initial.chk", out, err) == exit_ok);

    RunConfig half = c;
    apply_setting(half, "t_end", "0.2");
    apply_setting(half, "output", dir / "half");
    REQUIRE(cmd_run(half, dir / "initial.chk", out, err) == exit_ok);
    RunConfig rest = c;
    apply_setting(rest, "t_end", "0.4");
    apply_setting(rest, "output", dir / "rest");
    REQUIRE(cmd_run(rest, dir / "half/checkpoint.chk", out, err) == exit_ok);

    CHECK(load_checkpoint(dir / "rest/checkpoint.chk") ==
          load_checkpoint(dir / "full/checkpoint.chk"));
    const auto a = read_csv(dir / "full/diagnostics.csv");
    const auto b = read_csv(dir / "rest/diagnostics.csv");
    CHECK(a.rows.size() == 5u);
    CHECK(b.rows.size() == 3u);
    CHECK(a.rows.back() == b.rows.back());
  }
  SUBCASE("abort keeps partial outputs") {
    auto chk = load_checkpoint(dir / "initial.chk");
    chk.initial_speed = 1e-6;
    save_checkpoint(dir / "fragile.chk", chk);
    apply_setting(c, "t_end", "0.3");
    std::ostringstream aerr;
    CHECK(cmd_run(c, dir / "fragile.chk", out, aerr) == exit_abort);
    CHECK(aerr.str().find("numerical abort") != std::string::npos);
    CHECK(read_csv(dir / "diagnostics.csv").rows.size() == 1u);
    CHECK(load_checkpoint(dir / "checkpoint.chk").t == 0.0);
  }
  SUBCASE("bad inputs") {
    CHECK(cmd_run(c, dir / "missing.chk", out, err) == exit_usage);
    RunConfig other = c;
    apply_setting(other, "n", "256");
    CHECK(cmd_run(other, "", out, err) == exit_usage);
  }
}

TEST_CASE("fit command") {
  TempDir dir;
  std::vector<DiagnosticsRecord> rows;
  for (int i = 0; i <= 10; ++i) {
    DiagnosticsRecord r;
    r.t = 0.1 * i;
    r.linf_grad_omega = 5.0 * std::exp(0.3 * r.t);
    r.int_grad_u = 0.5 * r.t;
    r.X1 = 0.02 * std::exp(-2.0 * r.t);
    r.trusted = true;
    rows.push_back(r);
  }
  spit(dir / "d.csv", diagnostics_csv(rows));

  std::ostringstream out, err;
  FitRequest req;
  req.csv = dir / "d.csv";
  CHECK(cmd_fit(req, out, err) == exit_ok);
  CHECK(out.str().find("rate = 0.3") != std::string::npos);
  CHECK(out.str().find("upper_bound_violations = 0") != std::string::npos);

  std::ostringstream xo;
  req.column = "X1";
  req.t_a = 0.2;
  req.t_b = 0.8;
  CHECK(cmd_fit(req, xo, err) == exit_ok);
  CHECK(xo.str().find("rate = -2") != std::string::npos);
  CHECK(xo.str().find("points = 7") != std::string::npos);

  // growth faster than the grad-u integral allows
  for (auto& r : rows) r.linf_grad_omega = 5.0 * std::exp(2.0 * r.t);
  spit(dir / "fast.csv", diagnostics_csv(rows));
  FitRequest fast;
  fast.csv = dir / "fast.csv";
  CHECK(cmd_fit(fast, out, err) == exit_constraint);

  FitRequest missing_col;
  missing_col.csv = dir / "d.csv";
  missing_col.column = "nope";
  CHECK(cmd_fit(missing_col, out, err) == exit_usage);
  FitRequest missing_file;
  missing_file.csv = dir / "none.csv";
  CHECK(cmd_fit(missing_file, out, err) == exit_usage);
  FitRequest empty_col;
  empty_col.csv = dir / "d.csv";
  empty_col.column = "I";
  CHECK(cmd_fit(empty_col, out, err) == exit_usage);
}

TEST_CASE("plot command") {
  TempDir dir;
  DiagnosticsRecord a, b;
  a.linf_grad_omega = 1.0;
  a.X1 = 0.02;
  b.t = 0.1;
  b.linf_grad_omega = 1.2;
  spit(dir / "d.csv", diagnostics_csv({a, b}));
  std::ostringstream out, err;
  REQUIRE(cmd_plot(dir / "d.csv", "", out, err) == exit_ok);
  const auto dat = slurp(dir / "plot.dat");
  CHECK(dat.find('?') != std::string::npos);
  CHECK(slurp(dir / "plot.gp").find("set datafile missing \"?\"") != std::string::npos);

  spit(dir / "bad.csv", "t,x\n0,1\n");
  CHECK(cmd_plot(dir / "bad.csv", "", out, err) == exit_usage);
  CHECK(cmd_plot(dir / "none.csv", "", out, err) == exit_usage);
}
