/*
 * Copyright 2026 The spogasim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
  const std::string command = std::string(SPOGASIM_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  CliResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe)) {
    result.output.append(buffer.data(), n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "spogasim_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("verify passes on a short sweep and honors trials") {
  const CliResult r = run_cli("verify --trials 300 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("verify: PASS") != std::string::npos);
  CHECK(r.output.find("300 trials") != std::string::npos);
}

TEST_CASE("verify detects an injected capacitor fault") {
  const CliResult r = run_cli("verify --trials 50 --inject-fault");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("fault") != std::string::npos);
}

TEST_CASE("verify exhaustive grid runs the full 511x511 sweep") {
  const CliResult r = run_cli("verify --trials 1 --exhaustive-int8");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("261121 cases, 0 mismatches") != std::string::npos);
}

TEST_CASE("simulate writes a csv and is byte-stable across reruns") {
  const fs::path out1 = fresh_dir("sim1");
  const fs::path out2 = fresh_dir("sim2");
  const std::string base = "simulate -m shufflenet_v2 -a SPOGA_10 --cores 16 --seed 9 -o ";
  const CliResult r1 = run_cli(base + out1.string());
  CHECK(r1.exit_code == 0);
  const CliResult r2 = run_cli(base + out2.string());
  CHECK(r2.exit_code == 0);
  const fs::path csv1 = out1 / "shufflenet_v2_SPOGA_10.csv";
  const fs::path csv2 = out2 / "shufflenet_v2_SPOGA_10.csv";
  REQUIRE(fs::exists(csv1));
  REQUIRE(fs::exists(csv2));
  CHECK(slurp(csv1) == slurp(csv2));
  CHECK(fs::exists(out1 / "effective_config.txt"));
}

TEST_CASE("simulate rejects unknown architectures with the valid keys") {
  const CliResult r = run_cli("simulate -m resnet50 -a SPOGA_99 -o " +
                              fresh_dir("simbad").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("valid keys") != std::string::npos);
}

TEST_CASE("simulate rejects unknown models with the bundled list") {
  const CliResult r = run_cli("simulate -m not_a_model -a SPOGA_10 -o " +
                              fresh_dir("simbad2").string());
  CHECK(r.exit_code == 4);
  CHECK(r.output.find("resnet50") != std::string::npos);
}

TEST_CASE("scalability emits the bundled rows by default") {
  const fs::path out = fresh_dir("scal");
  const CliResult r = run_cli("scalability -o " + out.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out / "scalability.csv");
  CHECK(csv.find("MWA,1,10,249,16,paper") != std::string::npos);
  CHECK(csv.find("MAW,1,-,43,43,paper") != std::string::npos);
  int rows = -1;  // exclude header
  for (char c : csv) {
    if (c == '\n') ++rows;
  }
  CHECK(rows == 15);
}

TEST_CASE("scalability with an empty sweep and no paper rows is header-only") {
  const fs::path out = fresh_dir("scal_empty");
  const CliResult r =
      run_cli("scalability --no-paper --estimate --sweep-dbm 6:5 -o " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(slurp(out / "scalability.csv") ==
        "organization,data_rate_gsps,laser_power_dbm,n_vector,m_dot_products,source\n");
}

TEST_CASE("scalability estimate rows keep the power monotonicity") {
  const fs::path out = fresh_dir("scal_est");
  const CliResult r =
      run_cli("scalability --no-paper --estimate --sweep-dbm 1:10 -o " + out.string());
  CHECK(r.exit_code == 0);
  std::istringstream csv(slurp(out / "scalability.csv"));
  std::string line;
  std::getline(csv, line);  // header
  int prev_n = -1;
  std::string prev_key;
  while (std::getline(csv, line)) {
    std::istringstream fields(line);
    std::string org, rate, dbm, n, m, source;
    std::getline(fields, org, ',');
    std::getline(fields, rate, ',');
    std::getline(fields, dbm, ',');
    std::getline(fields, n, ',');
    std::getline(fields, m, ',');
    std::getline(fields, source, ',');
    CHECK(source == "estimate");
    const std::string key = org + "/" + rate;
    if (key != prev_key) prev_n = -1;
    CHECK(std::stoi(n) >= prev_n);
    prev_n = std::stoi(n);
    prev_key = key;
  }
}

TEST_CASE("scalability accepts link-param overrides") {
  const fs::path out = fresh_dir("scal_params");
  const fs::path params = out / "link.txt";
  {
    std::ofstream f(params);
    f << "detector_sensitivity_dbm = -40\n";
  }
  const CliResult r = run_cli("scalability --no-paper --estimate --sweep-dbm 5:5 "
                              "--link-params " + params.string() + " -o " + out.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out / "scalability.csv");
  CHECK(csv.find("estimate") != std::string::npos);

  // Unknown keys in the params file are a config error.
  const fs::path bad = out / "bad.txt";
  std::ofstream(bad) << "nope = 1\n";
  CHECK(run_cli("scalability --estimate --link-params " + bad.string() + " -o " +
                out.string()).exit_code == 2);
}

TEST_CASE("compare produces csv, svg charts, and sane ratios") {
  const fs::path out = fresh_dir("cmp");
  const CliResult r = run_cli(
      "compare -m shufflenet_v2,mobilenet_v2 -a SPOGA_10,DEAPCNN_10 --baseline DEAPCNN_10 "
      "--cores 8 -o " + out.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out / "comparison.csv");
  // 4 metric rows, 2 gmean rows, 1 ratio row.
  CHECK(csv.find("metric,shufflenet_v2,SPOGA_10") != std::string::npos);
  CHECK(csv.find("gmean,-,DEAPCNN_10") != std::string::npos);
  CHECK(csv.find("gmean_ratio_vs_DEAPCNN_10,-,SPOGA_10") != std::string::npos);
  CHECK(fs::exists(out / "fps.svg"));
  CHECK(fs::exists(out / "fps_per_w.svg"));
  CHECK(fs::exists(out / "fps_per_w_per_mm2.svg"));
  CHECK(fs::exists(out / "effective_config.txt"));

  // Determinism across reruns.
  const fs::path out2 = fresh_dir("cmp2");
  const CliResult r2 = run_cli(
      "compare -m shufflenet_v2,mobilenet_v2 -a SPOGA_10,DEAPCNN_10 --baseline DEAPCNN_10 "
      "--cores 8 -o " + out2.string());
  CHECK(r2.exit_code == 0);
  CHECK(slurp(out2 / "comparison.csv") == csv);
  CHECK(slurp(out2 / "fps.svg") == slurp(out / "fps.svg"));
}

TEST_CASE("counts and functional modes produce identical reports") {
  const fs::path dir = fresh_dir("modes");
  const fs::path manifest = dir / "toy.manifest";
  {
    std::ofstream f(manifest);
    f << "model toy\n"
      << "conv name=c in=10x10x6 out_c=8 kernel=3x3 stride=1 pad=1\n"
      << "fc name=f in_features=260 out_features=24\n";
  }
  const fs::path out_counts = fresh_dir("modes_counts");
  const fs::path out_func = fresh_dir("modes_func");
  CHECK(run_cli("simulate -m " + manifest.string() + " -a SPOGA_1 -o " +
                out_counts.string()).exit_code == 0);
  CHECK(run_cli("simulate -m " + manifest.string() + " -a SPOGA_1 --functional -o " +
                out_func.string()).exit_code == 0);
  CHECK(slurp(out_counts / "toy_SPOGA_1.csv") == slurp(out_func / "toy_SPOGA_1.csv"));
}

TEST_CASE("simulate supports finite adc, occupancy gating, and env out dir") {
  const fs::path out = fresh_dir("sim_flags");
  const CliResult r = run_cli("simulate -m shufflenet_v2 -a SPOGA_10 --adc 16 "
                              "--gate-occupancy -o " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "shufflenet_v2_SPOGA_10.csv"));

  const fs::path env_out = fresh_dir("sim_env");
  const std::string cmd = "SPOGASIM_OUT_DIR=" + env_out.string() + " " + SPOGASIM_CLI_PATH +
                          " simulate -m shufflenet_v2 -a DEAPCNN_1 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 1024> buf{};
  while (fread(buf.data(), 1, buf.size(), pipe) > 0) {
  }
  CHECK(WEXITSTATUS(pclose(pipe)) == 0);
  CHECK(fs::exists(env_out / "shufflenet_v2_DEAPCNN_1.csv"));
}

TEST_CASE("compare iso-area re-budgets core counts") {
  const fs::path out = fresh_dir("cmp_iso");
  const CliResult r = run_cli(
      "compare -m shufflenet_v2 -a SPOGA_10,HOLYLIGHT_10 --baseline HOLYLIGHT_10 --iso-area "
      "--cores 16 -o " + out.string());
  CHECK(r.exit_code == 0);
  const std::string echo = slurp(out / "effective_config.txt");
  CHECK(echo.find("iso_area = true") != std::string::npos);
  // SPOGA cores shrink below the baseline's 16 to fit the same area.
  CHECK(echo.find("cores = 16,16") == std::string::npos);
}

TEST_CASE("compare validates its inputs") {
  CHECK(run_cli("compare -m resnet50 -a SPOGA_10 -o " + fresh_dir("cmpbad").string())
            .exit_code == 2);
  const CliResult r = run_cli("compare -m resnet50 -a SPOGA_10,DEAPCNN_10 --baseline NOPE_1 -o " +
                              fresh_dir("cmpbad2").string());
  CHECK(r.exit_code == 2);
}

TEST_CASE("config file values are overridden by explicit flags") {
  const fs::path out = fresh_dir("cfg");
  const fs::path cfg = out / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "model=shufflenet_v2\narch=DEAPCNN_10\ncores=4\n";
  }
  // --arch on the command line wins; model and cores come from the file.
  const CliResult r = run_cli("simulate --config " + cfg.string() + " -a SPOGA_10 -o " +
                              out.string());
  CHECK(r.exit_code == 0);
  const std::string echo = slurp(out / "effective_config.txt");
  CHECK(echo.find("arch = SPOGA_10") != std::string::npos);
  CHECK(echo.find("model = shufflenet_v2") != std::string::npos);
  CHECK(echo.find("cores = 4") != std::string::npos);
}

TEST_CASE("bad usage exits with the config-error code") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("simulate").exit_code == 2);  // missing required flags
  CHECK(run_cli("--help").exit_code == 0);
}
