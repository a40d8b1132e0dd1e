// End-to-end checks of the hazpot binary: schemas, exit codes, seeds,
// worker-count independence.  The binary path comes from the build system.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "hazpot/distcore.hpp"

namespace {

const std::string kCli = HAZPOT_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// parses a numeric CSV with a header row
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Csv parse_csv(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  Csv csv;
  std::string line;
  REQUIRE(std::getline(in, line));
  std::istringstream hs(line);
  std::string field;
  while (std::getline(hs, field, ',')) csv.header.push_back(field);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> row;
    while (std::getline(ls, field, ',')) row.push_back(std::stod(field));
    REQUIRE(row.size() == csv.header.size());
    csv.rows.push_back(row);
  }
  return csv;
}

struct Tmp {
  std::string path;
  explicit Tmp(const std::string& name) : path("/tmp/hazpot_cli_" + name) {
    std::remove(path.c_str());
    std::remove((path + ".manifest.json").c_str());
  }
  ~Tmp() {
    std::remove(path.c_str());
    std::remove((path + ".manifest.json").c_str());
  }
};

}  // namespace

TEST_CASE("survival trauma-closed matches the closed form") {
  Tmp out("trauma.csv");
  REQUIRE(run("survival --model trauma-closed --t-grid 0:2:1 --out " +
              out.path) == 0);
  const Csv csv = parse_csv(out.path);
  REQUIRE(csv.header == std::vector<std::string>{"t", "survival"});
  REQUIRE(csv.rows.size() == 3);
  REQUIRE(csv.rows[0][1] == 1.0);
  REQUIRE(std::fabs(csv.rows[1][1] - 0.679570) < 1e-6);
  REQUIRE(std::fabs(csv.rows[2][1] - 0.273669) < 1e-6);
  REQUIRE(slurp(out.path + ".manifest.json").find("\"command\": \"survival\"") !=
          std::string::npos);
}

TEST_CASE("survival ig emits the complement of the first-passage CDF") {
  Tmp out("ig.csv");
  REQUIRE(run("survival --model ig --x 1 --eta 1 --sigma2 1 --t-grid 1 --out " +
              out.path) == 0);
  const Csv csv = parse_csv(out.path);
  REQUIRE(csv.rows.size() == 1);
  REQUIRE(std::fabs(csv.rows[0][1] - 0.331890) < 1e-4);
}

TEST_CASE("survival additive and bounds schemas") {
  Tmp out("add.csv");
  REQUIRE(run("survival --model additive --hazard 1:1 --hazard 2:1 "
              "--t-grid 0:1:0.5 --out " + out.path) == 0);
  Csv csv = parse_csv(out.path);
  REQUIRE(std::fabs(csv.rows[2][1] - std::exp(-3.0)) < 1e-12);

  Tmp bout("bounds.csv");
  REQUIRE(run("survival --model bounds --hazard 1:1 --hazard 2:1 "
              "--t-grid 1 --out " + bout.path) == 0);
  csv = parse_csv(bout.path);
  REQUIRE(csv.header == std::vector<std::string>{"t", "lower", "upper"});
  REQUIRE(std::fabs(csv.rows[0][1] - std::exp(-3.0)) < 1e-12);
  REQUIRE(std::fabs(csv.rows[0][2] - std::exp(-2.0)) < 1e-12);
}

TEST_CASE("survival gumbel needs both curves and theta") {
  Tmp out("gum.csv");
  REQUIRE(run("survival --model gumbel --hazard 1:1 --hazard 1:1 --t-grid 1 "
              "--out " + out.path) == 2);
  REQUIRE(run("survival --model gumbel --hazard 1:1 --hazard 1:1 --theta 1 "
              "--t-grid 1 --out " + out.path) == 0);
  const Csv csv = parse_csv(out.path);
  REQUIRE(std::fabs(csv.rows[0][1] - std::exp(-3.0)) < 1e-12);
}

TEST_CASE("usage errors exit with status 2") {
  Tmp out("usage.csv");
  REQUIRE(run("survival --model nosuch --t-grid 1 --out " + out.path) == 2);
  REQUIRE(run("survival --t-grid 1 --out " + out.path) == 2);
  REQUIRE(run("nosuchcommand") == 2);
  REQUIRE(run("simulate --process wiener --t-grid 1 --out " + out.path) == 2);
  REQUIRE(run("simulate --process gamma --t-grid 1 --out " + out.path) == 2);
}

TEST_CASE("simulate estimators write t,survival,std_err and honor the seed") {
  Tmp a("sim_a.csv"), b("sim_b.csv"), c("sim_c.csv");
  const std::string flags =
      "simulate --process trauma --t-grid 0.5:1:0.5 --dt 0.01 --paths 2000 "
      "--seed 7 --quiet --out ";
  REQUIRE(run(flags + a.path) == 0);
  REQUIRE(run(flags + b.path) == 0);
  REQUIRE(slurp(a.path) == slurp(b.path));

  const Csv csv = parse_csv(a.path);
  REQUIRE(csv.header == std::vector<std::string>{"t", "survival", "std_err"});
  REQUIRE(csv.rows.size() == 2);
  REQUIRE(std::fabs(csv.rows[1][1] - 0.6796) < 0.05);

  // a different seed moves the estimate
  REQUIRE(run("simulate --process trauma --t-grid 0.5:1:0.5 --dt 0.01 "
              "--paths 2000 --seed 8 --quiet --out " + c.path) == 0);
  REQUIRE(slurp(a.path) != slurp(c.path));
}

TEST_CASE("simulate output is worker-count independent") {
  Tmp t1("w1.csv"), t8("w8.csv");
  const std::string base =
      "simulate --process competing --rho 0.5 --t-grid 0.5:1:0.25 --dt 0.005 "
      "--paths 4000 --seed 11 --quiet ";
  REQUIRE(run(base + "--threads 1 --out " + t1.path) == 0);
  REQUIRE(run(base + "--threads 8 --out " + t8.path) == 0);
  REQUIRE(slurp(t1.path) == slurp(t8.path));
}

TEST_CASE("simulate path dumps") {
  Tmp out("dump.csv");
  REQUIRE(run("simulate --process gamma --dump-paths --steps 5 --dt 0.2 "
              "--paths 3 --seed 3 --quiet --out " + out.path) == 0);
  const Csv csv = parse_csv(out.path);
  REQUIRE(csv.header ==
          std::vector<std::string>{"path_index", "time", "value"});
  REQUIRE(csv.rows.size() == 3 * 6);
  REQUIRE(csv.rows[0][1] == 0.0);
  REQUIRE(csv.rows[0][2] == 0.0);
  // nondecreasing within each path
  for (std::size_t r = 1; r < csv.rows.size(); ++r)
    if (csv.rows[r][0] == csv.rows[r - 1][0])
      REQUIRE(csv.rows[r][2] >= csv.rows[r - 1][2]);

  Tmp pair_out("dump_pair.csv");
  REQUIRE(run("simulate --process corr-bm --rho 1 --dump-paths --steps 4 "
              "--dt 0.25 --paths 2 --seed 5 --quiet --out " + pair_out.path) ==
          0);
  const Csv pcsv = parse_csv(pair_out.path);
  REQUIRE(pcsv.rows.size() == 4 * 5);
  // rho=1: paths 2i and 2i+1 coincide
  for (std::size_t r = 0; r < 5; ++r)
    REQUIRE(pcsv.rows[r][2] == pcsv.rows[r + 5][2]);
}

TEST_CASE("fit then predict round-trip") {
  // small synthetic series (hand-written, strictly increasing times)
  const std::string data = "/tmp/hazpot_cli_markers.csv";
  {
    std::ofstream out(data);
    out << "time,value\n";
    double z = 0.0;
    for (int i = 1; i <= 12; ++i) {
      z += 0.1 + 0.02 * ((i % 3) - 1);
      out << 0.25 * i << ',' << z << '\n';
    }
  }
  Tmp post("posterior.txt"), pred("resid.csv");
  REQUIRE(run("fit --data " + data + " --n-eta 24 --n-sigma2 24 --quiet --out " +
              post.path) == 0);
  const std::string artifact = slurp(post.path);
  REQUIRE(artifact.find("hazpot-posterior 1") == 0);
  REQUIRE(artifact.find("summary eta_mean ") != std::string::npos);

  // the shift echoes Z(t_k) from the last data row
  std::istringstream as(artifact);
  std::string line;
  double z_k = 0.0, shift = -1.0;
  while (std::getline(as, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "z_k") ls >> z_k;
    if (key == "shift") ls >> shift;
  }
  REQUIRE(z_k > 0.0);
  REQUIRE(shift == z_k);

  REQUIRE(run("predict --posterior " + post.path +
              " --u-grid 0:2:0.5 --quiet --out " + pred.path) == 0);
  const Csv csv = parse_csv(pred.path);
  REQUIRE(csv.header ==
          std::vector<std::string>{"u", "residual_survival"});
  REQUIRE(csv.rows[0][0] == 0.0);
  REQUIRE(csv.rows[0][1] == 1.0);
  for (std::size_t r = 1; r < csv.rows.size(); ++r)
    REQUIRE(csv.rows[r][1] <= csv.rows[r - 1][1] + 1e-12);

  std::remove(data.c_str());
}

TEST_CASE("fit maps data problems to exit 3 and k=1 to exit 2") {
  const std::string bad = "/tmp/hazpot_cli_bad.csv";
  Tmp out("fitbad.txt");
  {
    std::ofstream o(bad);
    o << "time,value\n1,0.5\n0.5,0.7\n";
  }
  REQUIRE(run("fit --data " + bad + " --quiet --out " + out.path) == 3);
  {
    std::ofstream o(bad);
    o << "time,value\n1,0.5\n";
  }
  REQUIRE(run("fit --data " + bad + " --quiet --out " + out.path) == 2);
  REQUIRE(run("fit --data /nonexistent.csv --quiet --out " + out.path) == 3);
  std::remove(bad.c_str());
}

TEST_CASE("predict on a hand-crafted single-cell posterior matches distcore") {
  // all mass at (eta=1, sigma2=1), zero shift: the residual curve must equal
  // the ratio of mixture survivals computed directly
  const std::string p = "/tmp/hazpot_cli_onecell.txt";
  {
    std::ofstream o(p);
    o << "hazpot-posterior 1\n"
      << "t_k 0.5\n"
      << "z_k 0\n"
      << "shift 0\n"
      << "n_eta 1\n"
      << "n_sigma2 1\n"
      << "eta_edges 0.99 1.01\n"
      << "sigma2_edges 0.99 1.01\n"
      << "eta_nodes 1\n"
      << "sigma2_nodes 1\n"
      << "log_weights\n"
      << "7.8240460108562919\n";  // -log(0.02 * 0.02)
  }
  Tmp out("onecell_resid.csv");
  REQUIRE(run("predict --posterior " + p + " --u-grid 0:1:0.5 --quiet --out " +
              out.path) == 0);
  const Csv csv = parse_csv(out.path);
  REQUIRE(csv.rows.size() == 3);
  const hazpot::WienerParams w(1.0, 1.0);
  const double denom = 1.0 - hazpot::mixture_lifetime_cdf(0.5, w);
  for (std::size_t r = 1; r < csv.rows.size(); ++r) {
    const double u = csv.rows[r][0];
    const double direct =
        (1.0 - hazpot::mixture_lifetime_cdf(0.5 + u, w)) / denom;
    REQUIRE(std::fabs(csv.rows[r][1] - direct) < 1e-6);
  }
  std::remove(p.c_str());
}

TEST_CASE("predict rejects corrupt artifacts with exit 3") {
  const std::string p = "/tmp/hazpot_cli_corrupt.txt";
  Tmp out("predbad.csv");
  {
    std::ofstream o(p);
    o << "hazpot-posterior 1\nt_k 1\nz_k 1\n";  // truncated
  }
  REQUIRE(run("predict --posterior " + p + " --quiet --out " + out.path) == 3);
  std::remove(p.c_str());
}

TEST_CASE("figure1 columns are ordered in the threshold") {
  Tmp out("fig1.csv");
  REQUIRE(run("figure1 --tmax 2 --tstep 0.5 --quiet --out " + out.path) == 0);
  const Csv csv = parse_csv(out.path);
  REQUIRE(csv.header ==
          std::vector<std::string>{"t", "F_x1", "F_x2", "F_x3", "F_x4", "F_x5",
                                   "F_mixture"});
  REQUIRE(csv.rows.size() == 4);
  // t = 1 row
  REQUIRE(std::fabs(csv.rows[1][0] - 1.0) < 1e-12);
  REQUIRE(std::fabs(csv.rows[1][1] - 0.668102) < 1e-4);
  REQUIRE(std::fabs(csv.rows[1][6] - 0.6827) < 0.005);
  for (const auto& row : csv.rows)
    for (int c = 1; c + 1 <= 5; ++c) REQUIRE(row[c] >= row[c + 1]);
}

TEST_CASE("quiet suppresses stdout") {
  Tmp out("quiet.csv");
  const std::string cmd = kCli +
      " survival --model trauma-closed --t-grid 1 --quiet --out " + out.path +
      " >/tmp/hazpot_cli_stdout.txt 2>/dev/null";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  REQUIRE(slurp("/tmp/hazpot_cli_stdout.txt").empty());
  std::remove("/tmp/hazpot_cli_stdout.txt");
}
