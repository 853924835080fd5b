#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dirichlet/error.hpp"
#include "dirichlet/scenario.hpp"

using namespace dirichlet;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir = fs::temp_directory_path() / ("dirichlet_cli_" + std::to_string(::getpid()));
  Workspace() { fs::create_directories(dir); }
  ~Workspace() { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  int run(const std::string& args) const {
    const std::string cmd = std::string(DIRICHLET_CLI_PATH) + " " + args + " > " + (dir / "stdout").string() +
                            " 2> " + (dir / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

const char* kCosine = R"(name: cosine
problem:
  domain: disk
  boundary: {builtin: cosine}
solver: {K: 64}
outputs: {grid: 33, probes: [[0.3, 0.4], [0, 0]]}
)";

std::string value_at(const std::string& csv, const std::string& xy) {
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (line.rfind(xy + ",", 0) == 0) return line.substr(xy.size() + 1);
  return "missing";
}

}  // namespace

TEST_CASE("scenario parsing") {
  Scenario s = parse_scenario(R"(
problem:
  domain: {map: mobius, a: [0.1, -0.2], phi: 0.5}
  boundary:
    expression: "t"
    annotations: [{position: 0, kind: jump}, {position: 1, kind: hard, degree: 2}]
solver: {K: 128, rel_tol: 1e-12}
chain: {levels: [-2, 3], count: 4}
)");
  CHECK(s.domain.kind == DomainSpec::Kind::Map);
  CHECK(s.domain.mobius_a == std::complex<double>(0.1, -0.2));
  CHECK(s.boundary.annotations.size() == 2);
  CHECK(s.boundary.annotations[1].degree == 2);
  CHECK(s.harmonics == 128);
  CHECK(s.quadrature.rel_tol == 1e-12);
  CHECK(s.chain_levels == std::vector<int>{-2, 3});

  Scenario poly = parse_scenario("problem: {domain: {polygon: [[0,0],[1,0],[0,1]]}, boundary: {builtin: cosine}}");
  CHECK(poly.domain.vertices.size() == 3);

  auto code = [](const char* text) {
    try {
      parse_scenario(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::BadParams;
  };
  CHECK(code("problem: [") == ErrorCode::ScenarioError);
  CHECK(code("problem: {boundary: {builtin: cosine}}\nsolvr: {}") == ErrorCode::ScenarioError);
  CHECK(code("problem: {boundary: {builtin: cosine, expression: t}}") == ErrorCode::ScenarioError);
  CHECK(code("problem: {boundary: {builtin: cosine}}\noutputs: {grid: 1}") == ErrorCode::ScenarioError);
  CHECK(code("problem: {domain: torus, boundary: {builtin: cosine}}") == ErrorCode::ScenarioError);
  CHECK(code("problem: {boundary: {expression: t, annotations: [{position: 0, kind: odd}]}}") ==
        ErrorCode::ScenarioError);
}

TEST_CASE("solve writes a grid with metadata") {
  Workspace w;
  const auto path = w.write("cos.yaml", kCosine);
  REQUIRE(w.run("solve " + path.string() + " --out " + (w.dir / "u.csv").string()) == 0);
  const std::string csv = w.read("u.csv");
  CHECK(csv.find("# theorem: T1") != std::string::npos);
  CHECK(csv.find("# harmonics: 64") != std::string::npos);
  CHECK(csv.find("x,y,u\n") != std::string::npos);
  CHECK(std::abs(std::stod(value_at(csv, "0,0"))) < 1e-14);
  CHECK(std::stod(value_at(csv, "0.29999999999999999,0.40000000000000002")) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(value_at(csv, "-1,-1").empty());  // outside the disk

  // deterministic output
  REQUIRE(w.run("solve " + path.string() + " --out " + (w.dir / "v.csv").string()) == 0);
  CHECK(w.read("v.csv") == csv);

  // flag overrides
  REQUIRE(w.run("solve " + path.string() + " --k 32 --grid 5") == 0);
  const std::string small = w.read("stdout");
  CHECK(small.find("# harmonics: 32") != std::string::npos);
  CHECK(small.find("# grid: 5x5") != std::string::npos);
}

TEST_CASE("verify, classify, chain, map-info") {
  Workspace w;
  const auto cos = w.write("cos.yaml", kCosine);
  CHECK(w.run("verify " + cos.string()) == 0);
  CHECK(w.read("stdout").find("overall          pass") != std::string::npos);

  const auto kv = w.write("kv.yaml", std::string(kCosine) + "verify: {seed: 5}\n");
  std::string text = kCosine;
  text.replace(text.find("probes"), 0, "format: key-values, ");
  const auto kvs = w.write("kvs.yaml", text);
  CHECK(w.run("verify " + kvs.string()) == 0);
  CHECK(w.read("stdout").find("overall=pass") != std::string::npos);
  CHECK(w.read("stdout").find("meta.theorem=T1") != std::string::npos);
  CHECK(w.run("verify " + kv.string() + " --seed 7") == 0);
  CHECK(w.read("stdout").find("seed 7") != std::string::npos);

  const auto hc = w.write("hc.yaml", "problem: {boundary: {builtin: half_cot}}\n");
  CHECK(w.run("classify " + hc.string()) == 0);
  CHECK(w.read("stdout").find("theta=0 verdict=hard degree=1 confidence=numerical") != std::string::npos);
  CHECK(w.run("chain " + hc.string() + " --levels -1 1") == 0);
  const std::string chain = w.read("stdout");
  CHECK(chain.find("level,k,re,im") != std::string::npos);
  CHECK(chain.find("-1,1,") != std::string::npos);
  CHECK(chain.find("\n0,") == std::string::npos);

  const auto card = w.write("card.yaml", "problem: {domain: cardioid, boundary: {expression: 'cos(2*pi*t/8)'}}\n");
  CHECK(w.run("map-info " + card.string()) == 0);
  const std::string info = w.read("stdout");
  CHECK(info.find("total_length: 7.99999999999") != std::string::npos);
  CHECK(info.find("corner: theta=0 lambda=0 point=0.5,0") != std::string::npos);
}

TEST_CASE("exit codes") {
  Workspace w;
  CHECK(w.run("solve " + (w.dir / "missing.yaml").string()) == 1);
  CHECK(w.run("solve " + w.write("bad.yaml", "problem: [").string()) == 1);
  CHECK(w.run("solve " + w.write("unk.yaml", "problem: {boundary: {builtin: nope}}").string()) == 1);
  CHECK(w.run("frobnicate") == 1);

  const auto cusp = w.write("cusp.yaml", "problem: {domain: cardioid, boundary: {builtin: half_cot}}\n");
  CHECK(w.run("solve " + cusp.string()) == 2);
  CHECK(w.read("stderr").find("corner-divergence") != std::string::npos);

  // too few harmonics to decide the classification
  const auto hc = w.write("hc.yaml", "problem: {boundary: {builtin: half_cot}}\n");
  CHECK(w.run("classify " + hc.string() + " --k 256") == 3);
  CHECK(w.read("stdout").find("inconclusive") != std::string::npos);
}
