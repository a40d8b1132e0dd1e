#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "hazpot/io.hpp"

using namespace hazpot;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path(std::string("/tmp/hazpot_io_") + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  void write(const std::string& content) const {
    std::ofstream out(path);
    out << content;
  }
  std::string read() const {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in),
            std::istreambuf_iterator<char>()};
  }
};

}  // namespace

TEST_CASE("marker csv: happy path incl. CRLF") {
  TempFile f("markers.csv");
  f.write("time,value\r\n0.5,0.31\r\n1,0.62\n2.5,1.4\n");
  const MarkerSeries m = read_marker_csv(f.path);
  REQUIRE(m.k() == 3);
  REQUIRE(m.times() == std::vector<double>{0.5, 1.0, 2.5});
  REQUIRE(m.values() == std::vector<double>{0.31, 0.62, 1.4});
}

TEST_CASE("marker csv: rejects malformed inputs") {
  TempFile f("bad.csv");

  f.write("");
  REQUIRE_THROWS_AS(read_marker_csv(f.path), data_error);

  f.write("t,z\n1,2\n");
  REQUIRE_THROWS_AS(read_marker_csv(f.path), data_error);

  f.write("time,value\n");
  REQUIRE_THROWS_AS(read_marker_csv(f.path), data_error);

  f.write("time,value\n0,0.5\n");
  REQUIRE_THROWS_AS(read_marker_csv(f.path), data_error);

  f.write("time,value\n1,0.5\n0.5,0.7\n");
  try {
    read_marker_csv(f.path);
    FAIL("expected data_error");
  } catch (const data_error& e) {
    REQUIRE(std::string(e.what()).find("row 3") != std::string::npos);
  }

  f.write("time,value\n1,abc\n");
  REQUIRE_THROWS_AS(read_marker_csv(f.path), data_error);

  f.write("time,value\n1\n");
  REQUIRE_THROWS_AS(read_marker_csv(f.path), data_error);

  REQUIRE_THROWS_AS(read_marker_csv("/nonexistent/nowhere.csv"), data_error);
}

TEST_CASE("survival csv writer emits the documented schema") {
  TempFile f("curve.csv");
  SurvivalCurve c;
  c.t = {0.0, 1.0};
  c.survival = {1.0, 0.5};
  write_survival_csv(f.path, c);
  REQUIRE(f.read() == "t,survival\n0,1\n1,0.5\n");

  c.std_err = {0.0, 0.01};
  write_survival_csv(f.path, c);
  REQUIRE(f.read() == "t,survival,std_err\n0,1,0\n1,0.5,0.01\n");
}

TEST_CASE("floats round-trip through the csv rendering") {
  const double vals[] = {1.0 / 3.0, 0.66810200122317065, 1e-17, 12345.678901234567};
  for (double v : vals) {
    REQUIRE(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("posterior artifact round-trips bitwise") {
  const MarkerSeries m({0.5, 1.0, 1.5, 2.0}, {0.4, 1.1, 1.3, 2.2});
  PosteriorArtifact a;
  a.grid = posterior_grid(m, PriorConfig{}, 8, 9);
  a.t_k = m.t_last();
  a.z_k = m.z_last();
  a.shift = threshold_posterior(m).shift();

  TempFile f("posterior.txt");
  write_posterior_artifact(f.path, a);
  const PosteriorArtifact b = read_posterior_artifact(f.path);

  REQUIRE(b.t_k == a.t_k);
  REQUIRE(b.z_k == a.z_k);
  REQUIRE(b.shift == a.shift);
  REQUIRE(b.grid.eta_nodes == a.grid.eta_nodes);
  REQUIRE(b.grid.eta_edges == a.grid.eta_edges);
  REQUIRE(b.grid.sigma2_nodes == a.grid.sigma2_nodes);
  REQUIRE(b.grid.sigma2_edges == a.grid.sigma2_edges);
  REQUIRE(b.grid.log_weights == a.grid.log_weights);
  REQUIRE(b.grid.normalized);
}

TEST_CASE("posterior artifact rejects corruption") {
  TempFile f("corrupt.txt");

  f.write("not-a-posterior\n");
  REQUIRE_THROWS_AS(read_posterior_artifact(f.path), data_error);

  const MarkerSeries m({0.5, 1.0}, {0.4, 1.1});
  PosteriorArtifact a;
  GridOptions opt;
  opt.sigma2_bounds = {{0.01, 1.0}};
  a.grid = posterior_grid(m, PriorConfig{}, 4, 4, opt);
  a.t_k = 1.0;
  a.z_k = 1.1;
  a.shift = 1.1;
  write_posterior_artifact(f.path, a);

  // truncate after a few lines
  const std::string full = f.read();
  f.write(full.substr(0, full.size() / 2));
  REQUIRE_THROWS_AS(read_posterior_artifact(f.path), data_error);

  // break normalization
  std::string tampered = full;
  const auto pos = tampered.find("log_weights\n");
  REQUIRE(pos != std::string::npos);
  tampered.replace(pos + 12, 1, "9");
  f.write(tampered);
  REQUIRE_THROWS_AS(read_posterior_artifact(f.path), data_error);

  REQUIRE_THROWS_AS(read_posterior_artifact("/nonexistent/p.txt"), data_error);
}

TEST_CASE("manifest sidecar carries command, parameters, seed, version") {
  TempFile f("manifest.json");
  RunManifest m;
  m.command = "simulate";
  m.parameters["process"] = "trauma";
  m.parameters["dt"] = "0.001";
  m.seed = 42;
  write_manifest(f.path, m);

  const std::string text = f.read();
  REQUIRE(text.find("\"command\": \"simulate\"") != std::string::npos);
  REQUIRE(text.find("\"process\": \"trauma\"") != std::string::npos);
  REQUIRE(text.find("\"seed\": 42") != std::string::npos);
  REQUIRE(text.find("\"artifact_version\": \"0.1.0\"") != std::string::npos);
  REQUIRE(text.find("\"timestamp\"") != std::string::npos);
}
